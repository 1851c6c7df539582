"""Local positivity invariants: multiplicities, Seshadri values, base loci.

The moving Seshadri constant of a big class is computed as the largest
inverted simplex constant of its infinitesimal body; for nef classes an
independent route through the nef cone of the blow-up is provided as a cross
check.  The extended Seshadri function glues the moving Seshadri constant,
zero, and minus the asymptotic multiplicity into one continuous function of
the class, and seshadri_profile computes it exactly along rational segments.

Exact profiles work by collecting a finite superset of the possible
breakpoints.  Every quantity involved (negative-part coefficients, wall
pairings, ray exits, cone exits) is, chamber by chamber, an affine function
of the segment parameter t and the flag shift s; the kinks of the profile can
therefore only occur where two of these affine loci cross.  All crossings of
all candidate lines are collected, the function is evaluated exactly at each,
and affine interpolation in between is verified at piece midpoints.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import DomainError, InputError, InternalError
from .infinitesimal import (
    BlowupSetup,
    LargestSimplexResult,
    blowup_setup as _raw_blowup_setup,
    largest_simplex_constant,
)
from .lattice import DivisorClass, PointProfile, SurfaceModel
from .linalg import ZERO, is_negative_definite, simplex_max, solve_square
from .polygon import PiecewiseRationalFunction
from .zariski import is_big, is_nef, is_pseudoeffective, zariski_decompose

ONE = Fraction(1)


@lru_cache(maxsize=128)
def _setup(base: SurfaceModel, point: PointProfile) -> BlowupSetup:
    return _raw_blowup_setup(base, point)


def asymptotic_multiplicity(
    base: SurfaceModel, point: PointProfile, d: DivisorClass
) -> Fraction:
    """Exceptional coefficient of the negative part of the pullback.

    Nonnegative, and positive exactly when the point lies in the restricted
    base locus of the class; for big classes it is the smallest first
    coordinate of the infinitesimal body.
    """
    if not is_pseudoeffective(base, d):
        raise DomainError(f"class {d} is not pseudoeffective on {base.name!r}")
    setup = _setup(base, point)
    decomposition = zariski_decompose(setup.model, setup.pullback(d))
    return decomposition.coefficient(setup.e_index)


def seshadri_via_nef_cone(
    model_prime: SurfaceModel, d_prime: DivisorClass, e_index: int
) -> Fraction:
    """Largest shift of the exceptional curve keeping a nef class nef.

    For nef classes this is the classical Seshadri constant at the blown-up
    point, and serves as an independent cross check of the simplex route.
    """
    if not 0 <= e_index < len(model_prime.negative_curves):
        raise InputError(f"no negative curve with index {e_index}")
    if not is_nef(model_prime, d_prime):
        raise DomainError(f"class {d_prime} is not nef on {model_prime.name!r}")
    exceptional = model_prime.negative_curves[e_index]
    bound: Optional[Fraction] = None
    for gen in model_prime.effective_generators:
        denom = model_prime.pair(exceptional, gen)
        if denom > 0:
            ratio = model_prime.pair(d_prime, gen) / denom
            if bound is None or ratio < bound:
                bound = ratio
    if bound is None:
        raise DomainError(
            "exceptional curve pairs nonpositively with the whole effective cone"
        )
    return bound


def moving_seshadri(base: SurfaceModel, point: PointProfile, d: DivisorClass) -> Fraction:
    """Moving Seshadri constant of a big (or boundary nef) class at a point.

    Big classes go through the largest inverted simplex constant.  Nef classes
    on the boundary of the big cone keep their classical Seshadri constant,
    computed on the nef cone of the blow-up; this is the continuous extension
    and is what segment profiles need at their endpoints.
    """
    if is_big(base, d):
        return largest_simplex_constant(base, point, d).xi
    if is_pseudoeffective(base, d) and is_nef(base, d) and not d.is_zero():
        setup = _setup(base, point)
        return seshadri_via_nef_cone(setup.model, setup.pullback(d), setup.e_index)
    raise DomainError(f"class {d} is neither big nor nef on {base.name!r}")


def extended_seshadri(base: SurfaceModel, point: PointProfile, d: DivisorClass) -> Fraction:
    """The glued Seshadri function: simplex constant, zero, or minus multiplicity.

    Returns minus the asymptotic multiplicity when that is positive, the
    largest simplex constant when the class is big, and zero on the remaining
    boundary classes (where the value is forced by continuity).
    """
    if d.is_zero():
        raise DomainError("the zero class has no Seshadri value")
    mult = asymptotic_multiplicity(base, point, d)  # also checks pseudoeffectivity
    if mult > 0:
        return -mult
    if is_big(base, d):
        return largest_simplex_constant(base, point, d).xi
    return ZERO


class BaseLocusPosition(enum.Enum):
    OUTSIDE_BPLUS = "outside_Bplus"
    IN_BPLUS_NOT_BMINUS = "in_Bplus_not_Bminus"
    IN_BMINUS = "in_Bminus"


@dataclass(frozen=True)
class BaseLocusVerdict:
    """Membership of the point in the augmented/restricted base loci.

    The two certificates pin the verdict down: a positive simplex constant
    places the point outside the augmented locus, a positive asymptotic
    multiplicity places it inside the restricted one, and the zero/zero case
    is the wall in between.
    """

    verdict: BaseLocusPosition
    xi: Fraction
    asymptotic_mult: Fraction


def base_locus_membership(
    base: SurfaceModel, point: PointProfile, d: DivisorClass
) -> BaseLocusVerdict:
    if not is_big(base, d):
        raise DomainError(f"class {d} is not big on {base.name!r}")
    mult = asymptotic_multiplicity(base, point, d)
    xi = largest_simplex_constant(base, point, d).xi
    if xi > 0 and mult > 0:
        raise InternalError("contradictory base-locus certificates")
    if mult > 0:
        verdict = BaseLocusPosition.IN_BMINUS
    elif xi > 0:
        verdict = BaseLocusPosition.OUTSIDE_BPLUS
    else:
        verdict = BaseLocusPosition.IN_BPLUS_NOT_BMINUS
    return BaseLocusVerdict(verdict=verdict, xi=xi, asymptotic_mult=mult)


@dataclass(frozen=True)
class JetCertificate:
    """One-sided jet separation certificate.

    certified=True guarantees that the adjoint class (canonical plus the
    given integral class) separates k-jets at the point; certified=False only
    means this criterion produced no certificate, not a disproof.
    """

    certified: bool
    k: int
    xi: Fraction
    threshold: Fraction


def jets_separated(
    base: SurfaceModel, point: PointProfile, d: DivisorClass, k: int
) -> JetCertificate:
    """Certify k-jet separation of the adjoint class via the simplex constant.

    The hypothesis is strict: the simplex constant must exceed dim + k; the
    boundary case yields no certificate.
    """
    if base.canonical_class is None:
        raise InputError(f"model {base.name!r} has no canonical class")
    if not isinstance(k, int) or k < 0:
        raise InputError("the jet order k must be a nonnegative integer")
    if not d.is_integral():
        raise InputError(f"class {d} is not integral")
    if not is_big(base, d):
        raise DomainError(f"class {d} is not big on {base.name!r}")
    threshold = Fraction(base.dimension_of_variety + k)
    xi = largest_simplex_constant(base, point, d).xi
    return JetCertificate(certified=xi > threshold, k=k, xi=xi, threshold=threshold)


# ---------------------------------------------------------------------------
# segment profiles


@dataclass(frozen=True)
class SeshadriProfile:
    """Extended Seshadri function along a segment (1-t)*d0 + t*d1.

    pieces is the exact piecewise affine profile (collinear pieces merged);
    regime_breakpoints are the parameters where the base-locus verdict
    changes.  breakpoints() unions those with the kinks of the profile.
    """

    segment: tuple[DivisorClass, DivisorClass]
    pieces: PiecewiseRationalFunction
    regime_breakpoints: tuple[Fraction, ...]
    sampled: bool = False

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.pieces.domain

    def value(self, t) -> Fraction:
        return self.pieces.value(t)

    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(sorted(set(self.pieces.interior_kinks()) | set(self.regime_breakpoints)))


def _segment_class(d0: DivisorClass, d1: DivisorClass, t: Fraction) -> DivisorClass:
    return d0 + t * (d1 - d0)


def _pseff_range(
    model: SurfaceModel, d0: DivisorClass, d1: DivisorClass
) -> tuple[Fraction, Fraction]:
    """The sub-interval of [0, 1] on which the segment is pseudoeffective."""
    gens = [g.coords for g in model.effective_generators]
    direction = d1 - d0
    dim = model.rank
    k = len(gens)
    # variables: generator weights, t, slack for t <= 1
    rows = [[g[i] for g in gens] + [-direction.coords[i], ZERO] for i in range(dim)]
    rows.append([ZERO] * k + [ONE, ONE])
    rhs = list(d0.coords) + [ONE]
    bounds = []
    for sense in (ONE, -ONE):
        cost = [ZERO] * k + [sense, ZERO]
        result = simplex_max(rows, rhs, cost)
        if result.status == "infeasible":
            raise DomainError("segment lies entirely outside the pseudoeffective cone")
        if result.status != "optimal":
            raise InternalError("bounded segment range reported unbounded")
        bounds.append(sense * result.value)
    hi, lo = bounds
    return lo, hi


def _regime_label(base: SurfaceModel, point: PointProfile, d: DivisorClass) -> str:
    mult = asymptotic_multiplicity(base, point, d)
    if mult > 0:
        return BaseLocusPosition.IN_BMINUS.value
    if is_big(base, d) and largest_simplex_constant(base, point, d).xi > 0:
        return BaseLocusPosition.OUTSIDE_BPLUS.value
    return BaseLocusPosition.IN_BPLUS_NOT_BMINUS.value


def _normalize_line(line: tuple[Fraction, Fraction, Fraction]):
    for coefficient in line:
        if coefficient != 0:
            return tuple(x / coefficient for x in line)
    return None


def _candidate_lines(
    setup: BlowupSetup, base0: DivisorClass, direction: DivisorClass
) -> set[tuple[Fraction, Fraction, Fraction]]:
    """Affine loci c0 + ct*t + cs*s = 0 whose crossings bound every kink.

    The class walked is base0 + t*direction - s*E on the blow-up.  For every
    negative-definite support the coefficient functions and the positive part
    are jointly affine in (t, s); their zero loci, the incidence-weighted
    lower boundary, the diagonal-exit locus, the s-axis, and the cone-exit
    loci from generator subsets together catch every wall the profile can hit.
    """
    model = setup.model
    curves = model.negative_curves
    exceptional = setup.exceptional_class()
    incidence = setup.point.flag_incidence or (0,) * len(curves)
    lines: set[tuple[Fraction, Fraction, Fraction]] = set()

    def add(line):
        normal = _normalize_line(line)
        if normal is not None:
            lines.add(normal)

    add((ZERO, ZERO, ONE))  # the s-axis: mult and exit events live on s = 0

    indices = range(len(curves))
    for size in range(len(curves) + 1):
        for support in itertools.combinations(indices, size):
            gram = [[model.pair(curves[i], curves[j]) for j in support] for i in support]
            if support and not is_negative_definite(gram):
                continue
            if support:
                rhs0 = [model.pair(base0, curves[i]) for i in support]
                rhst = [model.pair(direction, curves[i]) for i in support]
                rhss = [-model.pair(exceptional, curves[i]) for i in support]
                solved = solve_square(gram, [rhs0, rhst, rhss])
                if solved is None:
                    continue
                a0, at, a_s = solved
            else:
                a0, at, a_s = [], [], []
            p0, pt, ps = base0, direction, -1 * exceptional
            for pos, idx in enumerate(support):
                p0 = p0 - a0[pos] * curves[idx]
                pt = pt - at[pos] * curves[idx]
                ps = ps - a_s[pos] * curves[idx]
            for pos in range(len(support)):
                add((a0[pos], at[pos], a_s[pos]))
            for k in indices:
                if k not in support:
                    add(
                        (
                            model.pair(p0, curves[k]),
                            model.pair(pt, curves[k]),
                            model.pair(ps, curves[k]),
                        )
                    )
            alpha = (ZERO, ZERO, ZERO)
            for pos, idx in enumerate(support):
                weight = incidence[idx]
                if weight:
                    alpha = (
                        alpha[0] + weight * a0[pos],
                        alpha[1] + weight * at[pos],
                        alpha[2] + weight * a_s[pos],
                    )
            if any(alpha):
                add(alpha)
            beta = (
                alpha[0] + model.pair(p0, exceptional),
                alpha[1] + model.pair(pt, exceptional),
                alpha[2] + model.pair(ps, exceptional),
            )
            add((-beta[0], -beta[1], ONE - beta[2]))  # diagonal s = beta(t, s)

    # cone-exit loci: square systems from generator subsets plus the
    # exceptional direction
    gens = model.effective_generators
    rank = model.rank
    for subset in itertools.combinations(range(len(gens)), rank - 1):
        columns = [gens[i].coords for i in subset] + [exceptional.coords]
        matrix = [[columns[j][i] for j in range(rank)] for i in range(rank)]
        solved = solve_square(matrix, [list(base0.coords), list(direction.coords)])
        if solved is None:
            continue
        y0, y1 = solved
        add((-y0[-1], -y1[-1], ONE))
    return lines


def _candidate_parameters(
    lines: set[tuple[Fraction, Fraction, Fraction]], lo: Fraction, hi: Fraction
) -> list[Fraction]:
    candidates = {lo, hi}

    def note(t: Fraction):
        if lo < t < hi:
            candidates.add(t)

    lines = list(lines)
    for line in lines:
        c0, ct, cs = line
        if cs == 0 and ct != 0:
            note(-c0 / ct)
    for (a0, at, a_s), (b0, bt, bs) in itertools.combinations(lines, 2):
        det = at * bs - a_s * bt
        if det == 0:
            continue
        t = (-a0 * bs + a_s * b0) / det
        note(t)
    return sorted(candidates)


def seshadri_profile(
    base: SurfaceModel,
    point: PointProfile,
    d0: DivisorClass,
    d1: DivisorClass,
    exact: bool = True,
    samples: Optional[Sequence[Fraction]] = None,
) -> SeshadriProfile:
    """Extended Seshadri function along the segment from d0 to d1.

    Exact mode walks every candidate breakpoint (see _candidate_lines) and
    certifies affineness between consecutive candidates at piece midpoints.
    Sampled mode trusts the caller's parameter list and linearly interpolates
    between consecutive samples.
    """
    base.check_dim(d0)
    base.check_dim(d1)
    setup = _setup(base, point)
    lo, hi = _pseff_range(base, d0, d1)
    if lo >= hi:
        raise DomainError("segment meets the pseudoeffective cone in at most one point")

    if exact and samples is not None:
        raise InputError("choose either exact mode or a sample list")
    if not exact:
        if not samples:
            raise InputError("sampled mode needs a list of parameters")
        ts = sorted(set(Fraction(t) for t in samples))
        if len(ts) < 2:
            raise InputError("sampled mode needs at least two distinct parameters")
        if ts[0] < lo or ts[-1] > hi:
            raise DomainError(
                f"samples must lie in the pseudoeffective range [{lo}, {hi}]"
            )
    else:
        direction = d1 - d0
        lines = _candidate_lines(setup, setup.pullback(_segment_class(d0, d1, ZERO)), setup.pullback(direction))
        ts = _candidate_parameters(lines, lo, hi)

    knots = []
    for t in ts:
        value = extended_seshadri(base, point, _segment_class(d0, d1, t))
        knots.append((t, value))
    pieces = PiecewiseRationalFunction.from_knots(knots)

    if exact:
        for t_lo, t_hi, slope, intercept in pieces.pieces():
            mid = (t_lo + t_hi) / 2
            expected = slope * mid + intercept
            actual = extended_seshadri(base, point, _segment_class(d0, d1, mid))
            if actual != expected:
                raise InternalError(
                    f"profile is not affine on [{t_lo}, {t_hi}]: {actual} != {expected} at {mid}"
                )

    labels = []
    for left, right in zip(ts, ts[1:]):
        mid = (left + right) / 2
        labels.append(_regime_label(base, point, _segment_class(d0, d1, mid)))
    regime_breakpoints = tuple(
        ts[i + 1] for i in range(len(labels) - 1) if labels[i] != labels[i + 1]
    )

    return SeshadriProfile(
        segment=(d0, d1),
        pieces=pieces,
        regime_breakpoints=regime_breakpoints,
        sampled=not exact,
    )


def profile_regime_at(
    base: SurfaceModel, point: PointProfile, profile: SeshadriProfile, t
) -> str:
    """Regime label for one parameter, "boundary" exactly at regime changes."""
    t = Fraction(t)
    if t in profile.regime_breakpoints:
        return "boundary"
    d = _segment_class(profile.segment[0], profile.segment[1], t)
    if not is_big(base, d) and asymptotic_multiplicity(base, point, d) == 0:
        return "boundary"
    return _regime_label(base, point, d)
