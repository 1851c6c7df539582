"""Valuation vectors of polynomial germs and the monomial oracle on P^n.

The valuation is taken with respect to the standard infinitesimal flag over
the origin: the exceptional divisor of the blow-up, then the chain of
coordinate linear subspaces inside it.  In the chart where the last
homogeneous coordinate of the exceptional P^{n-1} is 1, a germ with lowest
degree m pulls back to u_n^m times a unit, so nu_1 = m, and the remaining
entries are read off the dehomogenized lowest form by successive
order-of-vanishing extraction.  Other linear flags are reached by
precomposing with an invertible linear coordinate change.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError, InputError, InternalError, ResourceError

Exponent = tuple[int, ...]

DEFAULT_ORACLE_CAP = 200_000


@dataclass(frozen=True)
class GermPolynomial:
    """Finite sum of monomials with rational coefficients in n local coordinates."""

    n: int
    terms: tuple[tuple[Exponent, Fraction], ...]

    def __post_init__(self):
        cleaned = {}
        for exponent, coeff in self.terms:
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != self.n:
                raise InputError(f"exponent {exponent} does not have {self.n} entries")
            if any(e < 0 for e in exponent):
                raise InputError(f"negative exponent in {exponent}")
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            cleaned[exponent] = cleaned.get(exponent, Fraction(0)) + coeff
        terms = tuple(sorted((e, c) for e, c in cleaned.items() if c != 0))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Exponent, Fraction]) -> "GermPolynomial":
        return cls(n, tuple(terms.items()))

    @classmethod
    def monomial(cls, n: int, exponent: Exponent, coeff=1) -> "GermPolynomial":
        return cls(n, ((tuple(exponent), Fraction(coeff)),))

    @classmethod
    def constant(cls, n: int, coeff=1) -> "GermPolynomial":
        return cls.monomial(n, (0,) * n, coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def min_degree(self) -> int:
        if self.is_zero():
            raise DomainError("the zero germ has no valuation")
        return min(sum(e) for e, _ in self.terms)

    def lowest_form(self) -> "GermPolynomial":
        m = self.min_degree()
        return GermPolynomial(self.n, tuple((e, c) for e, c in self.terms if sum(e) == m))

    def __add__(self, other: "GermPolynomial") -> "GermPolynomial":
        if self.n != other.n:
            raise InputError("germ arity mismatch")
        return GermPolynomial(self.n, self.terms + other.terms)

    def __mul__(self, other: "GermPolynomial") -> "GermPolynomial":
        if self.n != other.n:
            raise InputError("germ arity mismatch")
        acc: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = tuple(a + b for a, b in zip(e1, e2))
                acc[key] = acc.get(key, Fraction(0)) + c1 * c2
        return GermPolynomial.from_terms(self.n, acc)

    def substitute_linear(self, matrix: Sequence[Sequence[Fraction]]) -> "GermPolynomial":
        """Precompose with u_i -> sum_j matrix[i][j] * u_j (matrix invertible)."""
        n = self.n
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise InputError(f"coordinate change must be {n}x{n}")
        images = [
            GermPolynomial(
                n,
                tuple(
                    (tuple(int(k == j) for k in range(n)), Fraction(matrix[i][j]))
                    for j in range(n)
                ),
            )
            for i in range(n)
        ]
        result = GermPolynomial.constant(n, 0)
        for exponent, coeff in self.terms:
            term = GermPolynomial.constant(n, coeff)
            for i, e in enumerate(exponent):
                for _ in range(e):
                    term = term * images[i]
            result = result + term
        return result

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for exponent, coeff in self.terms:
            factors = [
                f"u{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exponent)
                if e > 0
            ]
            body = "*".join(factors) if factors else "1"
            if coeff == 1 and factors:
                parts.append(body)
            elif coeff == -1 and factors:
                parts.append(f"-{body}")
            elif factors:
                parts.append(f"{coeff}*{body}")
            else:
                parts.append(str(coeff))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


@dataclass(frozen=True)
class ValuationVector:
    """Vector (nu_1, ..., nu_n); the tail never exceeds the first entry."""

    nu: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(int(v) for v in self.nu))
        if any(v < 0 for v in self.nu):
            raise InternalError(f"negative valuation entry in {self.nu}")
        if sum(self.nu[1:]) > self.nu[0]:
            raise InternalError(f"valuation {self.nu} violates the tail bound")

    def __add__(self, other: "ValuationVector") -> "ValuationVector":
        return ValuationVector(tuple(a + b for a, b in zip(self.nu, other.nu)))

    def scaled(self, factor) -> tuple[Fraction, ...]:
        f = Fraction(factor)
        return tuple(f * v for v in self.nu)


# a one-variable slot eliminated at each step of the extraction
def _order_in(terms: dict[Exponent, Fraction], var: int) -> int:
    return min(e[var] for e in terms)


def valuation_vector(s: GermPolynomial) -> ValuationVector:
    """Valuation of a germ along the standard infinitesimal flag.

    nu_1 is the lowest total degree m.  The lowest form is dehomogenized in
    the chart where the last exceptional coordinate is 1 (u_i = u_n * y_i), and
    then for i = 2..n: nu_i is the order of vanishing of the current
    polynomial in y_{i-1}, after which that power is divided out and y_{i-1}
    is set to zero.  A lowest form c*u_n^m dehomogenizes to the constant c, so
    all later entries vanish.
    """
    if s.is_zero():
        raise DomainError("the zero germ has no valuation")
    n = s.n
    m = s.min_degree()
    if n == 1:
        return ValuationVector((m,))
    # dehomogenize the lowest form: exponent (e_1..e_n) -> y^(e_1..e_{n-1})
    chart: dict[Exponent, Fraction] = {}
    for exponent, coeff in s.lowest_form().terms:
        key = exponent[: n - 1]
        chart[key] = chart.get(key, Fraction(0)) + coeff
    chart = {e: c for e, c in chart.items() if c != 0}
    if not chart:
        raise InternalError("dehomogenized lowest form vanished")
    nu = [m]
    for i in range(n - 1):
        order = _order_in(chart, i)
        nu.append(order)
        restricted: dict[Exponent, Fraction] = {}
        for exponent, coeff in chart.items():
            if exponent[i] == order:
                key = exponent[:i] + (0,) + exponent[i + 1 :]
                restricted[key] = restricted.get(key, Fraction(0)) + coeff
        chart = {e: c for e, c in restricted.items() if c != 0}
        if not chart:
            raise InternalError("flag restriction vanished")
    return ValuationVector(tuple(nu))


def inverted_simplex_witnesses(
    n: int, d: int
) -> list[tuple[GermPolynomial, ValuationVector]]:
    """Germs of degree-d sections realizing the vertex valuations 0, e1, e1+ei.

    The witnesses are a unit germ, a germ cut by a hyperplane through the
    centre transverse to the distinguished flag directions, and for i >= 2 the
    coordinate germ u_{i-1}, which picks up the i-th flag step after the chart
    convention.  These exist as sections of O(d) for every d >= 1; the vectors
    do not depend on d.
    """
    if n < 2:
        raise InputError("need at least two local coordinates")
    if d < 1:
        raise InputError("the line bundle degree must be positive")
    witnesses = [(GermPolynomial.constant(n, 1), ValuationVector((0,) * n))]
    e1 = [1] + [0] * (n - 1)
    last = tuple(int(j == n - 1) for j in range(n))
    witnesses.append((GermPolynomial.monomial(n, last), ValuationVector(tuple(e1))))
    for i in range(2, n + 1):
        exponent = tuple(int(j == i - 2) for j in range(n))
        vector = tuple(e1[k] + int(k == i - 1) for k in range(n))
        witnesses.append((GermPolynomial.monomial(n, exponent), ValuationVector(vector)))
    return witnesses


def _monomial_exponents(n: int, max_degree: int) -> Iterable[Exponent]:
    def rec(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            for e in range(remaining + 1):
                yield tuple(prefix + [e])
            return
        for e in range(remaining + 1):
            yield from rec(prefix + [e], remaining - e, slots - 1)

    yield from rec([], max_degree, n)


def _extreme_points(points: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    """Vertices of the convex hull of a finite point set, any dimension.

    A point is dropped iff it is a convex combination of the others, decided
    by exact linear programming; for the planar case this matches the hull.
    """
    from .linalg import simplex_max

    unique = sorted(set(points))
    if len(unique) <= 2:
        return unique
    dim = len(unique[0])
    keep = []
    for i, p in enumerate(unique):
        others = [q for j, q in enumerate(unique) if j != i]
        rows = [[q[k] for q in others] for k in range(dim)]
        rows.append([Fraction(1)] * len(others))
        rhs = list(p) + [Fraction(1)]
        result = simplex_max(rows, rhs, [Fraction(0)] * len(others))
        if result.status != "optimal":
            keep.append(p)
    return keep


def monomial_oracle_body(
    n: int, d: int, m: int, cap: int = DEFAULT_ORACLE_CAP
) -> list[tuple[Fraction, ...]]:
    """Inner approximation of the infinitesimal body of O(d) on P^n at level m.

    Enumerates the monomial germs spanning the sections of O(m*d) locally at
    the centre (all exponents of total degree <= m*d), takes the valuation of
    each, scales by 1/m, and returns the extreme points of the hull, sorted.
    For projective space the approximation is already exact at m = 1.
    """
    if n < 2 or d < 1 or m < 1:
        raise InputError("need n >= 2, d >= 1, m >= 1")
    count = math.comb(m * d + n, n)
    if count > cap:
        raise ResourceError(
            f"oracle would enumerate {count} germs, above the cap of {cap}"
        )
    scale = Fraction(1, m)
    vectors = set()
    for exponent in _monomial_exponents(n, m * d):
        vector = valuation_vector(GermPolynomial.monomial(n, exponent))
        vectors.add(vector.scaled(scale))
    return _extreme_points(list(vectors))


def oracle_polygon(d: int, m: int = 1):
    """Planar oracle body as a Polygon (surface case n = 2)."""
    from .polygon import Polygon

    return Polygon(monomial_oracle_body(2, d, m))


# ---------------------------------------------------------------------------
# germ expression parsing (CLI input format)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<var>u(?P<index>\d+)(?:\^(?P<power>\d+))?)|(?P<coef>\d+(?:/\d+)?)|(?P<op>[+*-]))"
)


def parse_germ(text: str, n: int) -> GermPolynomial:
    """Parse expressions like "u1^2*u2 + 3*u1^4 - 1/2" into a germ."""
    pos = 0
    terms: dict[Exponent, Fraction] = {}
    sign = Fraction(1)
    coeff: Optional[Fraction] = None
    exponent = [0] * n
    started = False

    def flush():
        nonlocal coeff, exponent, started, sign
        if not started:
            raise InputError(f"empty term in germ expression {text!r}")
        value = sign * (coeff if coeff is not None else Fraction(1))
        key = tuple(exponent)
        terms[key] = terms.get(key, Fraction(0)) + value
        sign = Fraction(1)
        coeff = None
        exponent = [0] * n
        started = False

    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise InputError(f"cannot parse germ expression near {text[pos:]!r}")
        pos = match.end()
        if match.group("var"):
            index = int(match.group("index"))
            if not 1 <= index <= n:
                raise InputError(f"variable u{index} outside u1..u{n}")
            power = int(match.group("power") or 1)
            exponent[index - 1] += power
            started = True
        elif match.group("coef"):
            value = Fraction(match.group("coef"))
            coeff = value if coeff is None else coeff * value
            started = True
        else:
            op = match.group("op")
            if op == "*":
                if not started:
                    raise InputError(f"misplaced '*' in germ expression {text!r}")
            elif op == "+":
                flush()
            else:  # '-'
                if started:
                    flush()
                sign = -sign
    flush()
    germ = GermPolynomial.from_terms(n, terms)
    return germ
