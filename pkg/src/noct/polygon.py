"""Newton-Okounkov polygons of big classes with respect to admissible flags.

For a flag (C, z) and a big class D the polygon is the region between two
piecewise affine boundary functions on [a, mu]: a is the coefficient of C in
the negative part of D, mu is the largest shift keeping D - t*C effective,
and for each t the fibre runs from alpha(t) (the multiplicity at z of the
negative part of D - t*C, read off through the supplied incidence data) to
alpha(t) + P_t.C.  Chamber walls are located exactly, so every vertex is an
exact rational point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DomainError, InputError, InternalError
from .lattice import DivisorClass, SurfaceModel, same_ray
from .zariski import (
    SegmentChamber,
    bigness_threshold,
    is_big,
    is_pseudoeffective,
    zariski_chambers,
    zariski_decompose,
)

ZERO = Fraction(0)
Point = tuple[Fraction, Fraction]


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points: Sequence[Point]) -> tuple[Point, ...]:
    """Andrew monotone chain; collinear points are dropped."""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return tuple(pts)
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return (hull[0],)
    return tuple(hull)


class Polygon:
    """Convex body in the nonnegative quadrant with exact rational vertices.

    Vertices are stored counterclockwise starting from the lexicographically
    smallest one; equality is equality of these canonical vertex lists.
    Degenerate bodies (a segment or a single point) are allowed.
    """

    __slots__ = ("vertices",)

    def __init__(self, points: Sequence[Point]):
        pts = [(Fraction(x), Fraction(y)) for x, y in points]
        if not pts:
            raise InputError("a polygon needs at least one point")
        if any(x < 0 or y < 0 for x, y in pts):
            raise InputError("polygon coordinates must be nonnegative")
        self.vertices: tuple[Point, ...] = _hull(pts)

    @classmethod
    def from_vertices(cls, *points) -> "Polygon":
        return cls([(Fraction(x), Fraction(y)) for x, y in points])

    def __eq__(self, other) -> bool:
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        body = ", ".join(f"({x}, {y})" for x, y in self.vertices)
        return f"Polygon[{body}]"

    def area2(self) -> Fraction:
        """Twice the euclidean area (exact)."""
        verts = self.vertices
        if len(verts) < 3:
            return ZERO
        total = ZERO
        for i, (x0, y0) in enumerate(verts):
            x1, y1 = verts[(i + 1) % len(verts)]
            total += x0 * y1 - x1 * y0
        return total

    def area(self) -> Fraction:
        return self.area2() / 2

    def contains(self, point: Point) -> bool:
        p = (Fraction(point[0]), Fraction(point[1]))
        verts = self.vertices
        if len(verts) == 1:
            return p == verts[0]
        if len(verts) == 2:
            u, w = verts
            if _cross(u, w, p) != 0:
                return False
            return min(u[0], w[0]) <= p[0] <= max(u[0], w[0]) and min(u[1], w[1]) <= p[1] <= max(
                u[1], w[1]
            )
        return all(
            _cross(verts[i], verts[(i + 1) % len(verts)], p) >= 0 for i in range(len(verts))
        )

    def contains_polygon(self, other: "Polygon") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def translate(self, dx, dy) -> "Polygon":
        dx, dy = Fraction(dx), Fraction(dy)
        return Polygon([(x + dx, y + dy) for x, y in self.vertices])

    def scale(self, factor) -> "Polygon":
        s = Fraction(factor)
        return Polygon([(s * x, s * y) for x, y in self.vertices])

    def clip_halfplane(self, a, b, c) -> Optional["Polygon"]:
        """Intersect with {a*x + b*y <= c}; None when the result is empty."""
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        verts = self.vertices
        if len(verts) == 1:
            x, y = verts[0]
            return self if a * x + b * y <= c else None
        if len(verts) == 2:
            ring = [verts[0], verts[1]]
        else:
            ring = list(verts)
        out: list[Point] = []
        n = len(ring)
        for i in range(n):
            p, q = ring[i], ring[(i + 1) % n]
            fp = a * p[0] + b * p[1] - c
            fq = a * q[0] + b * q[1] - c
            if fp <= 0:
                out.append(p)
            if (fp < 0 < fq) or (fq < 0 < fp):
                t = fp / (fp - fq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        if not out:
            return None
        return Polygon(out)

    def min_x(self) -> Fraction:
        return min(x for x, _ in self.vertices)

    def max_x(self) -> Fraction:
        return max(x for x, _ in self.vertices)

    def ray_exit(self, dx, dy) -> Optional[Fraction]:
        """Largest t >= 0 with t*(dx, dy) inside; None if the origin is outside."""
        d = (Fraction(dx), Fraction(dy))
        if not self.contains((ZERO, ZERO)):
            return None
        verts = self.vertices
        if len(verts) == 1:
            return ZERO
        if len(verts) == 2:
            # the ray stays in a segment only while parallel to it; the exit is
            # at an endpoint, so scanning endpoint parameters suffices
            best = ZERO
            candidates = []
            for vx, vy in verts:
                if d[0] != 0:
                    candidates.append(vx / d[0])
                elif d[1] != 0:
                    candidates.append(vy / d[1])
            for t in candidates:
                if t >= 0 and self.contains((t * d[0], t * d[1])):
                    best = max(best, t)
            return best
        best: Optional[Fraction] = None
        for i in range(len(verts)):
            u = verts[i]
            w = verts[(i + 1) % len(verts)]
            ex, ey = w[0] - u[0], w[1] - u[1]
            # inside means cross(e, p - u) >= 0; along the ray this is affine in t
            const = ey * u[0] - ex * u[1]
            slope = ex * d[1] - ey * d[0]
            if slope < 0:
                bound = -const / slope
                if best is None or bound < best:
                    best = bound
        if best is None:
            raise InternalError("ray does not exit a bounded polygon")
        return best

    def to_lists(self) -> list[list[Fraction]]:
        return [[x, y] for x, y in self.vertices]


@dataclass(frozen=True)
class PiecewiseRationalFunction:
    """Continuous piecewise affine function with exact rational breakpoints.

    value on segment i (between breakpoints i and i+1) is slopes[i]*t +
    intercepts[i]; continuity at interior breakpoints is enforced.
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    intercepts: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.breakpoints) < 2 and self.slopes:
            raise InputError("piecewise function needs k+1 breakpoints for k pieces")
        if len(self.slopes) != len(self.breakpoints) - 1 or len(self.slopes) != len(self.intercepts):
            raise InputError("inconsistent piecewise data")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise InputError("breakpoints must be strictly increasing")
        for i in range(len(self.slopes) - 1):
            t = self.breakpoints[i + 1]
            left = self.slopes[i] * t + self.intercepts[i]
            right = self.slopes[i + 1] * t + self.intercepts[i + 1]
            if left != right:
                raise InputError(f"discontinuity at breakpoint {t}: {left} vs {right}")

    @classmethod
    def from_knots(cls, knots: Sequence[tuple[Fraction, Fraction]]) -> "PiecewiseRationalFunction":
        """Interpolate (t, value) knots; adjacent collinear pieces are merged."""
        pts = sorted({(Fraction(t), Fraction(v)) for t, v in knots})
        if len(pts) < 2:
            raise InputError("need at least two knots")
        ts = [pts[0][0]]
        slopes: list[Fraction] = []
        intercepts: list[Fraction] = []
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t0 == t1:
                raise InputError(f"duplicate knot abscissa {t0}")
            slope = (v1 - v0) / (t1 - t0)
            intercept = v0 - slope * t0
            if slopes and slopes[-1] == slope and intercepts[-1] == intercept:
                ts[-1] = t1
                continue
            slopes.append(slope)
            intercepts.append(intercept)
            ts.append(t1)
        return cls(tuple(ts), tuple(slopes), tuple(intercepts))

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def value(self, t) -> Fraction:
        t = Fraction(t)
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise DomainError(f"{t} outside domain [{lo}, {hi}]")
        for i in range(len(self.slopes)):
            if t <= self.breakpoints[i + 1]:
                return self.slopes[i] * t + self.intercepts[i]
        return self.slopes[-1] * t + self.intercepts[-1]

    def pieces(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """(t_lo, t_hi, slope, intercept) per affine segment."""
        return [
            (self.breakpoints[i], self.breakpoints[i + 1], self.slopes[i], self.intercepts[i])
            for i in range(len(self.slopes))
        ]

    def interior_kinks(self) -> tuple[Fraction, ...]:
        return tuple(
            self.breakpoints[i + 1]
            for i in range(len(self.slopes) - 1)
            if (self.slopes[i], self.intercepts[i]) != (self.slopes[i + 1], self.intercepts[i + 1])
        )


@dataclass(frozen=True)
class FlagSpec:
    """An admissible flag (C, z) given by the curve and incidence data at z.

    curve is an index into the model's negative curves or an explicit class
    (assumed irreducible by the caller).  incidence[i] is the local
    intersection multiplicity at z of negative curve i with the flag curve;
    None means z is a general point of C.
    """

    curve: Union[int, DivisorClass]
    incidence: Optional[tuple[int, ...]] = None

    @classmethod
    def of(cls, model: SurfaceModel, curve, incidence: Optional[dict] = None) -> "FlagSpec":
        inc = None
        if incidence:
            inc = [0] * len(model.negative_curves)
            for idx, mult in incidence.items():
                inc[idx] = int(mult)
            inc = tuple(inc)
        return cls(curve=curve, incidence=inc)


def _resolve_flag(model: SurfaceModel, flag: FlagSpec):
    """Return (flag class, negative-curve index or None, scale, incidence)."""
    if isinstance(flag.curve, int):
        if not 0 <= flag.curve < len(model.negative_curves):
            raise InputError(f"no negative curve with index {flag.curve}")
        cls = model.negative_curves[flag.curve]
        index: Optional[int] = flag.curve
        scale = Fraction(1)
    else:
        cls = flag.curve
        model.check_dim(cls)
        index = None
        scale = Fraction(1)
        for i, curve in enumerate(model.negative_curves):
            lam = same_ray(cls, curve)
            if lam:
                index, scale = i, lam
                break
    if cls.is_zero():
        raise InputError("flag curve must be nonzero")
    if not is_pseudoeffective(model, cls):
        raise InputError(f"flag curve {cls} is not in the effective cone")
    incidence = flag.incidence or (0,) * len(model.negative_curves)
    if len(incidence) != len(model.negative_curves):
        raise InputError("incidence data must cover every negative curve")
    for i, inc in enumerate(incidence):
        if inc < 0:
            raise InputError("incidence multiplicities must be nonnegative")
        if inc == 0:
            continue
        if index is not None and i == index:
            raise InputError("the flag curve carries no incidence against itself")
        cap = model.pair(model.negative_curves[i], cls)
        if inc > cap:
            raise InputError(
                f"incidence {inc} of curve {i} exceeds its total intersection {cap} with the flag curve"
            )
    return cls, index, scale, incidence


def _boundary_chambers(model, d, flag) -> tuple[list[SegmentChamber], Fraction, Fraction, DivisorClass, tuple[int, ...], Optional[int]]:
    if not is_big(model, d):
        raise DomainError(f"class {d} is not big on {model.name!r}")
    cls, index, scale, incidence = _resolve_flag(model, flag)
    decomposition = zariski_decompose(model, d)
    start = decomposition.coefficient(index) / scale if index is not None else ZERO
    stop = bigness_threshold(model, d, cls)
    if not start < stop:
        raise InternalError("empty polygon domain for a big class")
    chambers = zariski_chambers(model, d, -1 * cls, start, stop)
    return chambers, start, stop, cls, incidence, index


def _alpha_beta_on(chamber: SegmentChamber, model, cls, incidence, flag_index):
    """Affine (const, slope) data for alpha and beta on one chamber."""
    if flag_index is not None and flag_index in chamber.support:
        raise InternalError("flag curve entered the negative part inside the walk")
    alpha0 = ZERO
    alpha1 = ZERO
    for idx, (c0, c1) in zip(chamber.support, chamber.coefficients):
        inc = incidence[idx]
        if inc:
            alpha0 += c0 * inc
            alpha1 += c1 * inc
    width0 = model.pair(chamber.p_const, cls)
    width1 = model.pair(chamber.p_slope, cls)
    return (alpha0, alpha1), (alpha0 + width0, alpha1 + width1)


def okounkov_polygon(model: SurfaceModel, d: DivisorClass, flag: FlagSpec) -> Polygon:
    """The polygon of a big class with respect to the given flag."""
    chambers, _, _, cls, incidence, index = _boundary_chambers(model, d, flag)
    points: list[Point] = []
    for chamber in chambers:
        (a0, a1), (b0, b1) = _alpha_beta_on(chamber, model, cls, incidence, index)
        for t in (chamber.t_lo, chamber.t_hi):
            points.append((t, a0 + a1 * t))
            points.append((t, b0 + b1 * t))
    return Polygon(points)


def boundary_functions(
    model: SurfaceModel, d: DivisorClass, flag: FlagSpec
) -> tuple[PiecewiseRationalFunction, PiecewiseRationalFunction]:
    """The lower and upper boundary functions (alpha, beta) of the polygon."""
    chambers, _, _, cls, incidence, index = _boundary_chambers(model, d, flag)
    alpha_knots = []
    beta_knots = []
    for chamber in chambers:
        (a0, a1), (b0, b1) = _alpha_beta_on(chamber, model, cls, incidence, index)
        for t in (chamber.t_lo, chamber.t_hi):
            alpha_knots.append((t, a0 + a1 * t))
            beta_knots.append((t, b0 + b1 * t))
    return (
        PiecewiseRationalFunction.from_knots(alpha_knots),
        PiecewiseRationalFunction.from_knots(beta_knots),
    )


def slice_at(model: SurfaceModel, d: DivisorClass, flag: FlagSpec, t) -> Polygon:
    """The part of the polygon with first coordinate >= t.

    Equals the polygon of d - t*C translated right by t; the equality with the
    half-plane cut of the full polygon is the slicing identity and is enforced
    by the test suite.  The fibre at the upper endpoint is included (the
    polygon is emitted closed).
    """
    t = Fraction(t)
    if t < 0:
        raise DomainError("slice parameter must be nonnegative")
    cls, _, _, _ = _resolve_flag(model, flag)
    stop = bigness_threshold(model, d, cls)
    if t >= stop:
        raise DomainError(f"slice parameter {t} is not below the threshold {stop}")
    shifted = okounkov_polygon(model, d - t * cls, flag)
    return shifted.translate(t, ZERO)
