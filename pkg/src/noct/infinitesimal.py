"""Infinitesimal Newton-Okounkov bodies and the largest inverted simplex.

The infinitesimal body of a big class D at a point x is the polygon of the
pullback of D on the blow-up at x, taken with respect to a flag whose curve
is the exceptional one.  The operations here refuse to run when the blow-up's
nef and effective cones are not supplied: the Mori cone of a blow-up is
geometric input that the lattice alone cannot determine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, InputError, MissingConeData
from .lattice import (
    DivisorClass,
    PointProfile,
    SurfaceModel,
    blow_up,
    exceptional_index,
    pullback_class,
    validate_model,
)
from .polygon import FlagSpec, Polygon, okounkov_polygon
from .zariski import bigness_threshold, is_big, zariski_decompose

ZERO = Fraction(0)


@dataclass(frozen=True)
class InvertedSimplex:
    """Hull of 0, s*e1, s*(e1+e2), ..., s*(e1+en): the model infinitesimal shape."""

    size: Fraction
    ambient_dim: int = 2

    def __post_init__(self):
        object.__setattr__(self, "size", Fraction(self.size))
        if self.size < 0:
            raise InputError("simplex size must be nonnegative")
        if self.ambient_dim < 1:
            raise InputError("ambient dimension must be positive")

    def vertex_list(self) -> list[tuple[Fraction, ...]]:
        n = self.ambient_dim
        s = self.size
        vertices = [(ZERO,) * n, (s,) + (ZERO,) * (n - 1)]
        for i in range(1, n):
            vertices.append(tuple(s if k in (0, i) else ZERO for k in range(n)))
        return vertices

    def polygon(self) -> Polygon:
        if self.ambient_dim != 2:
            raise InputError("polygon view only exists in dimension two")
        return Polygon(self.vertex_list())


@dataclass(frozen=True)
class BlowupSetup:
    """Blow-up model of (base, point) with the exceptional flag prepared."""

    base: SurfaceModel
    point: PointProfile
    model: SurfaceModel
    e_index: int

    def pullback(self, d: DivisorClass) -> DivisorClass:
        self.base.check_dim(d)
        return pullback_class(d)

    def exceptional_class(self) -> DivisorClass:
        return self.model.negative_curves[self.e_index]

    def flag(self, z_incidence: Optional[tuple[int, ...]] = None) -> FlagSpec:
        incidence = z_incidence if z_incidence is not None else self.point.flag_incidence
        if incidence is not None and len(incidence) != len(self.model.negative_curves):
            raise InputError(
                "flag incidence data must cover every negative curve of the blow-up"
            )
        return FlagSpec(curve=self.e_index, incidence=incidence)


def blowup_setup(base: SurfaceModel, point: PointProfile) -> BlowupSetup:
    """Build and validate the blow-up at a point, requiring its cone data."""
    if point.blowup is None or not point.blowup.nef_generators:
        raise MissingConeData(
            f"point {point.label!r} of {base.name!r} carries no blow-up cone data; "
            "supply nef and effective generators for the blown-up surface"
        )
    model = blow_up(base, point, cones=point.blowup)
    report = validate_model(model)
    if not report.ok:
        raise InputError(
            f"blow-up of {base.name!r} at {point.label!r} fails validation:\n{report}"
        )
    return BlowupSetup(base=base, point=point, model=model, e_index=exceptional_index(model))


def infinitesimal_body(
    base: SurfaceModel,
    point: PointProfile,
    d: DivisorClass,
    z_incidence: Optional[tuple[int, ...]] = None,
) -> Polygon:
    """The polygon of the pullback of d on the blow-up at the point."""
    setup = blowup_setup(base, point)
    return okounkov_polygon(setup.model, setup.pullback(d), setup.flag(z_incidence))


def contains_inverted_simplex(body: Polygon, size) -> bool:
    """Whether the inverted simplex of the given size sits inside the body.

    By convexity it is enough to test the three vertices; size zero only asks
    for the origin.
    """
    s = Fraction(size)
    if s < 0:
        raise InputError("simplex size must be nonnegative")
    if s == 0:
        return body.contains((ZERO, ZERO))
    return all(body.contains(v) for v in InvertedSimplex(s).vertex_list())


@dataclass(frozen=True)
class LargestSimplexResult:
    """Largest inverted simplex inside an infinitesimal body.

    xi is zero exactly when the origin lies outside the body (the point is in
    the restricted base locus); otherwise it is the smaller of the exit
    parameters of the two boundary rays y = 0 and y = x.
    """

    xi: Fraction
    witness_flag: FlagSpec
    body: Polygon


def largest_simplex_constant(
    base: SurfaceModel, point: PointProfile, d: DivisorClass
) -> LargestSimplexResult:
    """Exact largest inverted simplex constant of a big class at a point."""
    setup = blowup_setup(base, point)
    if not is_big(base, d):
        raise DomainError(f"class {d} is not big on {base.name!r}")
    flag = setup.flag()
    body = okounkov_polygon(setup.model, setup.pullback(d), flag)
    bottom = body.ray_exit(1, 0)
    diagonal = body.ray_exit(1, 1)
    if bottom is None or diagonal is None:
        xi = ZERO
    else:
        xi = min(bottom, diagonal)
    return LargestSimplexResult(xi=xi, witness_flag=flag, body=body)


def check_origin(base: SurfaceModel, point: PointProfile, d: DivisorClass) -> bool:
    """Whether the origin lies in the infinitesimal body of a big class.

    Decided without building the polygon: the origin is in the body exactly
    when the exceptional coefficient of the negative part of the pullback is
    zero, i.e. the point is outside the restricted base locus.
    """
    setup = blowup_setup(base, point)
    if not is_big(base, d):
        raise DomainError(f"class {d} is not big on {base.name!r}")
    decomposition = zariski_decompose(setup.model, setup.pullback(d))
    return decomposition.coefficient(setup.e_index) == 0


def infinitesimal_width_bound(
    base: SurfaceModel, point: PointProfile, d: DivisorClass
) -> Fraction:
    """The size mu of the inverted simplex guaranteed to contain the body."""
    setup = blowup_setup(base, point)
    return bigness_threshold(setup.model, setup.pullback(d), setup.exceptional_class())
