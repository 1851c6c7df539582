"""Zariski decompositions, volumes, and cone positions of divisor classes.

The decomposition D = P + N is computed by the classical iteration: starting
from an empty support, every negative curve that pairs negatively with the
current candidate positive part is added (all violators at once, so the run
is order-independent) and the orthogonality system is re-solved, until P
pairs nonnegatively with every negative curve.  The final support has
negative-definite Gram matrix and nonnegative coefficients; both are checked
and a violation is reported as invalid model data.

zariski_chambers walks a segment of classes and returns the maximal intervals
on which the support is constant, with the coefficients and positive part as
exact affine functions of the segment parameter.  Supports immediately to the
right of a chamber wall are decided with first-order (dual-number) arithmetic
rather than a numeric nudge, so walls at rational points are resolved exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError, InputError, InternalError
from .lattice import DivisorClass, SurfaceModel
from .linalg import cone_contains, cone_max_shift, is_negative_definite, solve_square

ZERO = Fraction(0)


@dataclass(frozen=True)
class ZariskiDecomposition:
    """Positive part P and negative part N = sum of negative curves."""

    positive_part: DivisorClass
    negative_part: tuple[tuple[int, Fraction], ...]  # (curve index, coefficient > 0)
    support: frozenset[int]

    def coefficient(self, curve_index: int) -> Fraction:
        for idx, coeff in self.negative_part:
            if idx == curve_index:
                return coeff
        return ZERO

    def negative_class(self, model: SurfaceModel) -> DivisorClass:
        total = model.zero_class()
        for idx, coeff in self.negative_part:
            total = total + coeff * model.negative_curves[idx]
        return total


def is_pseudoeffective(model: SurfaceModel, d: DivisorClass) -> bool:
    model.check_dim(d)
    gens = [g.coords for g in model.effective_generators]
    return cone_contains(gens, d.coords)


def is_nef(model: SurfaceModel, d: DivisorClass) -> bool:
    """Nonnegative pairing with every negative curve and effective generator."""
    model.check_dim(d)
    return all(model.pair(d, c) >= 0 for c in model.negative_curves) and all(
        model.pair(d, g) >= 0 for g in model.effective_generators
    )


def is_ample(model: SurfaceModel, d: DivisorClass) -> bool:
    if not is_nef(model, d):
        return False
    if not model.effective_generators:
        return False
    return all(model.pair(d, g) > 0 for g in model.effective_generators)


def zariski_decompose(model: SurfaceModel, d: DivisorClass) -> ZariskiDecomposition:
    """Unique decomposition d = P + N with P nef on the support, P.N_i = 0."""
    model.check_dim(d)
    if not is_pseudoeffective(model, d):
        raise DomainError(f"class {d} is not pseudoeffective on {model.name!r}")

    curves = model.negative_curves
    support: list[int] = []
    cap = 2 ** len(curves) + 2
    coeffs: list[Fraction] = []
    positive = d
    for _ in range(cap):
        if support:
            gram = [[model.pair(curves[i], curves[j]) for j in support] for i in support]
            rhs = [model.pair(d, curves[i]) for i in support]
            solution = solve_square(gram, [rhs])
            if solution is None:
                raise InternalError(
                    f"singular Gram system for support {support} on {model.name!r}"
                )
            coeffs = solution[0]
            positive = d
            for idx, coeff in zip(support, coeffs):
                positive = positive - coeff * curves[idx]
        violators = [
            k for k in range(len(curves)) if k not in support and model.pair(positive, curves[k]) < 0
        ]
        if not violators:
            break
        support = sorted(support + violators)
    else:
        raise InternalError(f"Zariski iteration did not terminate on {model.name!r}")

    if any(c < 0 for c in coeffs):
        raise InternalError(
            f"negative Zariski coefficient on {model.name!r}; cone data is inconsistent"
        )
    if support:
        gram = [[model.pair(curves[i], curves[j]) for j in support] for i in support]
        if not is_negative_definite(gram):
            raise InternalError(
                f"support Gram matrix not negative definite on {model.name!r}"
            )
    entries = tuple((idx, coeff) for idx, coeff in zip(support, coeffs) if coeff != 0)
    return ZariskiDecomposition(
        positive_part=positive,
        negative_part=entries,
        support=frozenset(idx for idx, _ in entries),
    )


def volume(model: SurfaceModel, d: DivisorClass) -> Fraction:
    """P.P for the positive part; zero exactly when the class is not big."""
    decomposition = zariski_decompose(model, d)
    return model.self_intersection(decomposition.positive_part)


def is_big(model: SurfaceModel, d: DivisorClass) -> bool:
    return is_pseudoeffective(model, d) and volume(model, d) > 0


class ConePosition(enum.Enum):
    AMPLE = "ample"
    NEF_NOT_AMPLE = "nef-not-ample"
    BIG_NOT_NEF = "big-not-nef"
    PSEFF_NOT_BIG = "pseff-not-big"
    NOT_PSEFF = "not-pseff"


def classify(model: SurfaceModel, d: DivisorClass) -> ConePosition:
    model.check_dim(d)
    if d.is_zero():
        return ConePosition.NEF_NOT_AMPLE
    if is_nef(model, d):
        return ConePosition.AMPLE if is_ample(model, d) else ConePosition.NEF_NOT_AMPLE
    if not is_pseudoeffective(model, d):
        return ConePosition.NOT_PSEFF
    return ConePosition.BIG_NOT_NEF if volume(model, d) > 0 else ConePosition.PSEFF_NOT_BIG


def bigness_threshold(model: SurfaceModel, d: DivisorClass, f: DivisorClass) -> Fraction:
    """Largest t with d - t*f still pseudoeffective.

    For big d this equals sup{t : d - t*f big}: the segment leaves the big
    cone exactly where it crosses the effective boundary, because the big cone
    is the interior of the effective cone and a segment from an interior point
    stays interior until it exits.  Computed as an exact linear program over
    the effective generators; no root-finding on the volume polynomial.
    """
    model.check_dim(f)
    if f.is_zero():
        raise InputError("direction class must be nonzero")
    if not is_pseudoeffective(model, f):
        raise InputError(f"direction class {f} is not effective on {model.name!r}")
    if not is_big(model, d):
        raise DomainError(f"class {d} is not big on {model.name!r}")
    gens = [g.coords for g in model.effective_generators]
    result = cone_max_shift(gens, f.coords, d.coords)
    if result is None:
        raise InternalError("big class reported outside the effective cone")
    return result


# ---------------------------------------------------------------------------
# parametric decomposition along a segment


@dataclass(frozen=True)
class SegmentChamber:
    """Zariski data of base + t*direction on [t_lo, t_hi] with fixed support.

    coefficients[k] = (c0, c1) gives the chamber's k-th support coefficient as
    c0 + c1*t; the positive part is p_const + t*p_slope.
    """

    t_lo: Fraction
    t_hi: Fraction
    support: tuple[int, ...]
    coefficients: tuple[tuple[Fraction, Fraction], ...]
    p_const: DivisorClass
    p_slope: DivisorClass

    def coefficient_at(self, curve_index: int, t: Fraction) -> Fraction:
        for idx, (c0, c1) in zip(self.support, self.coefficients):
            if idx == curve_index:
                return c0 + c1 * t
        return ZERO

    def positive_at(self, t: Fraction) -> DivisorClass:
        return self.p_const + t * self.p_slope


def _support_beyond(
    model: SurfaceModel, base: DivisorClass, direction: DivisorClass, t0: Fraction
) -> tuple[int, ...]:
    """Support of N(base + t*direction) for t just beyond t0.

    Runs the decomposition iteration on coordinates of the form value + eps *
    slope with eps an infinitesimal; comparisons are lexicographic.  The Gram
    systems have rational matrices, so value and slope parts solve separately
    and the arithmetic stays exact.
    """
    curves = model.negative_curves
    val = (base + t0 * direction).coords
    slo = direction.coords
    support: list[int] = []
    cap = 2 ** len(curves) + 2
    coeff_val: list[Fraction] = []
    coeff_slo: list[Fraction] = []
    for _ in range(cap):
        p_val = list(val)
        p_slo = list(slo)
        if support:
            gram = [[model.pair(curves[i], curves[j]) for j in support] for i in support]
            rhs_val = [model.pair(DivisorClass(tuple(val)), curves[i]) for i in support]
            rhs_slo = [model.pair(DivisorClass(tuple(slo)), curves[i]) for i in support]
            solved = solve_square(gram, [rhs_val, rhs_slo])
            if solved is None:
                raise InternalError(f"singular Gram system for support {support}")
            coeff_val, coeff_slo = solved
            for idx, cv, cs in zip(support, coeff_val, coeff_slo):
                for j in range(len(p_val)):
                    p_val[j] -= cv * curves[idx].coords[j]
                    p_slo[j] -= cs * curves[idx].coords[j]
        pv = DivisorClass(tuple(p_val))
        ps = DivisorClass(tuple(p_slo))
        violators = []
        for k in range(len(curves)):
            if k in support:
                continue
            pairing = (model.pair(pv, curves[k]), model.pair(ps, curves[k]))
            if pairing[0] < 0 or (pairing[0] == 0 and pairing[1] < 0):
                violators.append(k)
        if not violators:
            for cv, cs in zip(coeff_val, coeff_slo):
                if cv < 0 or (cv == 0 and cs < 0):
                    raise InternalError("segment leaves the pseudoeffective cone mid-walk")
            return tuple(support)
        support = sorted(support + violators)
    raise InternalError("support iteration did not terminate")


def zariski_chambers(
    model: SurfaceModel,
    base: DivisorClass,
    direction: DivisorClass,
    t_lo: Fraction,
    t_hi: Fraction,
) -> list[SegmentChamber]:
    """Decompose [t_lo, t_hi] into maximal constant-support chambers.

    Inside a chamber the coefficients and the positive part are affine in t;
    the next wall is the smallest root of a decreasing affine constraint
    (a coefficient reaching zero, or an outside curve starting to pair
    negatively), exactly as located by rational root extraction.
    """
    if t_lo > t_hi:
        raise InputError("empty walk interval")
    curves = model.negative_curves
    chambers: list[SegmentChamber] = []
    t = t_lo
    guard = 4 ** max(len(curves), 1) + 8
    while t < t_hi:
        guard -= 1
        if guard < 0:
            raise InternalError("chamber walk did not terminate")
        support = _support_beyond(model, base, direction, t)
        if support:
            gram = [[model.pair(curves[i], curves[j]) for j in support] for i in support]
            rhs0 = [model.pair(base, curves[i]) for i in support]
            rhs1 = [model.pair(direction, curves[i]) for i in support]
            solved = solve_square(gram, [rhs0, rhs1])
            if solved is None:
                raise InternalError(f"singular Gram system for support {support}")
            a0, a1 = solved
        else:
            a0, a1 = [], []
        p_const = base
        p_slope = direction
        for idx, c0, c1 in zip(support, a0, a1):
            p_const = p_const - c0 * curves[idx]
            p_slope = p_slope - c1 * curves[idx]

        constraints: list[tuple[Fraction, Fraction]] = []
        constraints.extend(zip(a0, a1))
        for k in range(len(curves)):
            if k not in support:
                constraints.append((model.pair(p_const, curves[k]), model.pair(p_slope, curves[k])))
        t_next = t_hi
        for value, slope in constraints:
            if slope < 0:
                root = -value / slope
                if t < root < t_next:
                    t_next = root
        if t_next <= t:
            raise InternalError("chamber walk stalled at a wall")
        chambers.append(
            SegmentChamber(
                t_lo=t,
                t_hi=t_next,
                support=support,
                coefficients=tuple(zip(a0, a1)),
                p_const=p_const,
                p_slope=p_slope,
            )
        )
        t = t_next
    return chambers
