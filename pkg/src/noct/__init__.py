"""Exact positivity computations on explicitly presented smooth surfaces.

Newton-Okounkov polygons, Zariski decompositions, largest inverted simplex
constants, moving/extended Seshadri functions, base-locus certificates, and a
general-dimension polynomial-germ valuation engine with a brute-force
monomial oracle on projective space.  All arithmetic is exact rational.
"""

from .errors import (
    DomainError,
    InputError,
    InternalError,
    MissingConeData,
    NoctError,
    ResourceError,
)
from .germs import (
    GermPolynomial,
    ValuationVector,
    inverted_simplex_witnesses,
    monomial_oracle_body,
    oracle_polygon,
    parse_germ,
    valuation_vector,
)
from .infinitesimal import (
    BlowupSetup,
    InvertedSimplex,
    LargestSimplexResult,
    blowup_setup,
    check_origin,
    contains_inverted_simplex,
    infinitesimal_body,
    infinitesimal_width_bound,
    largest_simplex_constant,
)
from .lattice import (
    BlowupCones,
    DivisorClass,
    PointProfile,
    SurfaceModel,
    ValidationReport,
    blow_up,
    divisor,
    exceptional_index,
    intersection,
    pullback_class,
    validate_model,
)
from .modelio import ParsedModel, emit_json, emit_model_data, load_model, parse_model_data
from .models import builtin_model
from .polygon import (
    FlagSpec,
    PiecewiseRationalFunction,
    Polygon,
    boundary_functions,
    okounkov_polygon,
    slice_at,
)
from .positivity import (
    BaseLocusPosition,
    BaseLocusVerdict,
    JetCertificate,
    SeshadriProfile,
    asymptotic_multiplicity,
    base_locus_membership,
    extended_seshadri,
    jets_separated,
    moving_seshadri,
    seshadri_profile,
    seshadri_via_nef_cone,
)
from .zariski import (
    ConePosition,
    ZariskiDecomposition,
    bigness_threshold,
    classify,
    is_big,
    is_nef,
    is_pseudoeffective,
    volume,
    zariski_chambers,
    zariski_decompose,
)

__version__ = "0.1.0"
