"""Exact divisor-lattice arithmetic on explicitly presented smooth surfaces.

A surface is presented by its rank-rho divisor lattice: an exact rational
intersection form, the classes of its irreducible negative curves, and
user-supplied generators of the pseudoeffective and nef cones.  Cone data is
model data, never inferred: finite generation of these cones is a fact about
each particular surface, not something computable from the pairing alone.
Built-in models ship with correct cones (see noct.models).

All types are immutable after construction and all operations are pure, so
everything here is safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import InputError
from .linalg import congruence_signature

ZERO = Fraction(0)


@dataclass(frozen=True)
class DivisorClass:
    """Exact rational coordinate vector in a model's chosen basis."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, scalar) -> "DivisorClass":
        s = Fraction(scalar)
        return DivisorClass(tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def divisor(*coords) -> DivisorClass:
    """Convenience constructor: divisor(1, "1/2", -2)."""
    return DivisorClass(tuple(Fraction(c) for c in coords))


def same_ray(a: DivisorClass, b: DivisorClass) -> Optional[Fraction]:
    """Return lam > 0 with a = lam*b, or None if a, b span different rays."""
    if a.is_zero() or b.is_zero():
        return None
    lam = None
    for x, y in zip(a.coords, b.coords):
        if y == 0:
            if x != 0:
                return None
            continue
        ratio = x / y
        if lam is None:
            lam = ratio
        elif lam != ratio:
            return None
    if lam is None or lam <= 0:
        return None
    # entries of b that are zero must match in a, checked above
    return lam


@dataclass(frozen=True)
class BlowupCones:
    """Cone data for the blow-up of a model at a point, in the blow-up basis.

    The blow-up basis is the source basis followed by the exceptional class,
    so the exceptional curve is (0, ..., 0, 1).  This data cannot be derived
    from the lattice: which curves through the centre become negative is
    geometric input.
    """

    negative_curves: tuple[DivisorClass, ...]
    effective_generators: tuple[DivisorClass, ...]
    nef_generators: tuple[DivisorClass, ...]


@dataclass(frozen=True)
class PointProfile:
    """A point of a model, described by incidence data only.

    multiplicities[i] is the multiplicity at the point of the model's i-th
    negative curve.  flag_incidence[j] is the local intersection multiplicity
    at the flag point z of the blow-up's j-th negative curve with the
    exceptional curve (None means z is generic: all zero).  blowup carries the
    cone data of the blown-up surface when known.
    """

    label: str
    multiplicities: tuple[int, ...]
    flag_incidence: Optional[tuple[int, ...]] = None
    blowup: Optional[BlowupCones] = None


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    rank: int
    basis_labels: tuple[str, ...]
    intersection_matrix: tuple[tuple[Fraction, ...], ...]
    negative_curves: tuple[DivisorClass, ...] = ()
    effective_generators: tuple[DivisorClass, ...] = ()
    nef_generators: tuple[DivisorClass, ...] = ()
    canonical_class: Optional[DivisorClass] = None
    dimension_of_variety: int = 2

    def __post_init__(self):
        matrix = tuple(tuple(Fraction(x) for x in row) for row in self.intersection_matrix)
        object.__setattr__(self, "intersection_matrix", matrix)
        if len(matrix) != self.rank or any(len(row) != self.rank for row in matrix):
            raise InputError(f"intersection matrix of {self.name!r} is not {self.rank}x{self.rank}")
        if len(self.basis_labels) != self.rank:
            raise InputError(f"model {self.name!r} needs {self.rank} basis labels")

    def check_dim(self, d: DivisorClass) -> None:
        if d.dim != self.rank:
            raise InputError(
                f"divisor class of dimension {d.dim} does not fit rank-{self.rank} model {self.name!r}"
            )

    def pair(self, a: DivisorClass, b: DivisorClass) -> Fraction:
        """The intersection number a.b, computed exactly as a^T Q b."""
        self.check_dim(a)
        self.check_dim(b)
        total = ZERO
        for i, ai in enumerate(a.coords):
            if ai == 0:
                continue
            row = self.intersection_matrix[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(b.coords) if bj != 0)
        return total

    def self_intersection(self, a: DivisorClass) -> Fraction:
        return self.pair(a, a)

    def gram(self, classes: Iterable[DivisorClass]) -> list[list[Fraction]]:
        classes = list(classes)
        return [[self.pair(a, b) for b in classes] for a in classes]

    def basis_class(self, index: int) -> DivisorClass:
        return DivisorClass(tuple(Fraction(int(i == index)) for i in range(self.rank)))

    def curve_label(self, index: int) -> str:
        """Human-readable name for a negative curve (basis label if it is one)."""
        curve = self.negative_curves[index]
        for j in range(self.rank):
            if curve == self.basis_class(j):
                return self.basis_labels[j]
        return f"C{index}"

    def zero_class(self) -> DivisorClass:
        return DivisorClass((ZERO,) * self.rank)


def intersection(model: SurfaceModel, a: DivisorClass, b: DivisorClass) -> Fraction:
    return model.pair(a, b)


@dataclass(frozen=True)
class ValidationEntry:
    check: str
    ok: bool
    witness: Optional[str] = None


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[ValidationEntry, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(entry.ok for entry in self.entries)

    def failures(self) -> tuple[ValidationEntry, ...]:
        return tuple(entry for entry in self.entries if not entry.ok)

    def __str__(self) -> str:
        lines = []
        for entry in self.entries:
            status = "pass" if entry.ok else "FAIL"
            suffix = f" ({entry.witness})" if entry.witness and not entry.ok else ""
            lines.append(f"{status}: {entry.check}{suffix}")
        return "\n".join(lines)


def validate_model(model: SurfaceModel) -> ValidationReport:
    """Check every structural invariant of a model; failures carry witnesses."""
    entries = []

    symmetric = True
    witness = None
    q = model.intersection_matrix
    for i in range(model.rank):
        for j in range(i + 1, model.rank):
            if q[i][j] != q[j][i]:
                symmetric = False
                witness = f"Q[{i}][{j}]={q[i][j]} != Q[{j}][{i}]={q[j][i]}"
                break
        if not symmetric:
            break
    entries.append(ValidationEntry("intersection matrix symmetric", symmetric, witness))

    if symmetric:
        signature = congruence_signature(q)
        expected = (1, model.rank - 1, 0)
        entries.append(
            ValidationEntry(
                f"signature equals (1, {model.rank - 1})",
                signature == expected,
                f"signature (pos, neg, zero) = {signature}",
            )
        )

    bad = None
    for i, curve in enumerate(model.negative_curves):
        if curve.dim != model.rank:
            bad = f"curve {i} has dimension {curve.dim}"
            break
        if model.self_intersection(curve) >= 0:
            bad = f"curve {i} = {curve} has self-intersection {model.self_intersection(curve)}"
            break
    entries.append(ValidationEntry("negative curves have C.C < 0", bad is None, bad))

    bad = None
    for i, nef in enumerate(model.nef_generators):
        for j, eff in enumerate(model.effective_generators):
            if model.pair(nef, eff) < 0:
                bad = f"nef[{i}].eff[{j}] = {model.pair(nef, eff)}"
                break
        if bad:
            break
    entries.append(ValidationEntry("nef generators pair >= 0 with effective cone", bad is None, bad))

    bad = None
    for i, curve in enumerate(model.negative_curves):
        if not any(same_ray(curve, gen) for gen in model.effective_generators):
            bad = f"curve {i} = {curve} spans no effective generator ray"
            break
    entries.append(ValidationEntry("negative curves appear among effective rays", bad is None, bad))

    return ValidationReport(tuple(entries))


def blow_up(
    model: SurfaceModel,
    profile: PointProfile,
    cones: Optional[BlowupCones] = None,
    exceptional_label: Optional[str] = None,
) -> SurfaceModel:
    """Blow up a model at a point described by a multiplicity profile.

    The new basis is the old one followed by the exceptional class E, paired
    by E.E = -1 and E orthogonal to every pullback.  Each source negative
    curve C is replaced by its strict transform (pullback minus mult*E), and E
    joins the negative curves and the effective generators.  Nef generators
    are never derived here; without supplied cone data the result carries an
    empty nef list and its effective generators are only the mechanical
    scaffold (strict transforms, pullbacks, E), which may be a strict
    subcone of the true effective cone.  Positivity computations on a blow-up
    therefore require explicit cone data (see BlowupCones).
    """
    if len(profile.multiplicities) != len(model.negative_curves):
        raise InputError(
            f"profile {profile.label!r} gives {len(profile.multiplicities)} multiplicities "
            f"for {len(model.negative_curves)} negative curves"
        )
    if any(m < 0 for m in profile.multiplicities):
        raise InputError("multiplicities must be nonnegative integers")

    rank = model.rank + 1
    label = exceptional_label or f"E_{profile.label}"
    if label in model.basis_labels:
        label = label + "'"
    labels = model.basis_labels + (label,)
    matrix = tuple(
        tuple(model.intersection_matrix[i]) + (ZERO,) for i in range(model.rank)
    ) + ((ZERO,) * model.rank + (Fraction(-1),),)

    def pullback(d: DivisorClass) -> DivisorClass:
        return DivisorClass(d.coords + (ZERO,))

    exceptional = DivisorClass((ZERO,) * model.rank + (Fraction(1),))
    strict = {
        i: pullback(curve) - profile.multiplicities[i] * exceptional
        for i, curve in enumerate(model.negative_curves)
    }

    if cones is not None:
        for cls in cones.negative_curves + cones.effective_generators + cones.nef_generators:
            if cls.dim != rank:
                raise InputError("blow-up cone data has classes of the wrong dimension")
        for i, transform in strict.items():
            if transform not in cones.negative_curves:
                raise InputError(
                    f"blow-up cone data omits the strict transform {transform} of negative curve {i}"
                )
        if exceptional not in cones.negative_curves:
            raise InputError("blow-up cone data omits the exceptional curve")
        negative = cones.negative_curves
        effective = cones.effective_generators
        nef = cones.nef_generators
    else:
        negative = tuple(strict[i] for i in range(len(model.negative_curves))) + (exceptional,)
        effective = []
        for gen in model.effective_generators:
            replaced = None
            for i, curve in enumerate(model.negative_curves):
                if same_ray(gen, curve):
                    replaced = strict[i]
                    break
            effective.append(replaced if replaced is not None else pullback(gen))
        effective.append(exceptional)
        effective = tuple(effective)
        nef = ()

    canonical = None
    if model.canonical_class is not None:
        canonical = pullback(model.canonical_class) + exceptional

    return SurfaceModel(
        name=f"{model.name}^{profile.label}",
        rank=rank,
        basis_labels=labels,
        intersection_matrix=matrix,
        negative_curves=negative,
        effective_generators=effective,
        nef_generators=nef,
        canonical_class=canonical,
        dimension_of_variety=model.dimension_of_variety,
    )


def pullback_class(d: DivisorClass) -> DivisorClass:
    """Pullback along a blow-up: same coordinates, zero on the exceptional."""
    return DivisorClass(d.coords + (ZERO,))


def exceptional_index(model: SurfaceModel) -> int:
    """Index of the exceptional curve (0,...,0,1) among the negative curves."""
    target = DivisorClass((ZERO,) * (model.rank - 1) + (Fraction(1),))
    for i, curve in enumerate(model.negative_curves):
        if curve == target:
            return i
    raise InputError(f"model {model.name!r} has no exceptional curve (0,...,0,1)")
