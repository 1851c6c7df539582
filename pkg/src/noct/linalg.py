"""Exact linear algebra over the rationals.

Provides Gaussian elimination, congruence diagonalization for signatures of
symmetric matrices, matrix rank, and a small two-phase simplex with Bland's
rule used for cone membership and support-function maximization.  Everything
works on fractions.Fraction; there is no floating point in this module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import InternalError

Vector = Sequence[Fraction]
Matrix = Sequence[Sequence[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_square(matrix: Matrix, rhs_list: Sequence[Vector]) -> Optional[list[list[Fraction]]]:
    """Solve matrix @ x = rhs for each rhs; None if the matrix is singular."""
    n = len(matrix)
    if n == 0:
        return [[] for _ in rhs_list]
    k = len(rhs_list)
    aug = [list(matrix[i]) + [rhs[i] for rhs in rhs_list] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [entry / pivot for entry in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [[aug[i][n + j] for i in range(n)] for j in range(k)]


def rank(matrix: Matrix) -> int:
    rows = [list(row) for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(rk, len(rows)) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rk], rows[pivot_row] = rows[pivot_row], rows[rk]
        pivot = rows[rk][col]
        rows[rk] = [entry / pivot for entry in rows[rk]]
        for r in range(len(rows)):
            if r != rk and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rk])]
        rk += 1
    return rk


def congruence_signature(matrix: Matrix) -> tuple[int, int, int]:
    """Signature (positive, negative, zero) of a symmetric matrix.

    Computed by symmetric Gaussian congruence over the rationals, so the
    result is exact; no eigenvalue numerics are involved.
    """
    n = len(matrix)
    a = [list(row) for row in matrix]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]

    def add_into(i, j, factor):
        # row_i += factor*row_j, then the mirrored column operation
        a[i] = [x + factor * y for x, y in zip(a[i], a[j])]
        for row in a:
            row[i] = row[i] + factor * row[j]

    pos = neg = zero = 0
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                add_into(i, j, ONE)  # makes a[i][i] = 2*a[i][j] != 0
        pivot = a[i][i]
        for j in range(i + 1, n):
            if a[j][i] != 0:
                add_into(j, i, -a[j][i] / pivot)
        if pivot > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg, zero


def is_negative_definite(matrix: Matrix) -> bool:
    n = len(matrix)
    return congruence_signature(matrix) == (0, n, 0)


class LPResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status: str, x=None, value=None):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.value = value


def _pivot(tableau, basis, row, col):
    pivot = tableau[row][col]
    tableau[row] = [entry / pivot for entry in tableau[row]]
    for r in range(len(tableau)):
        if r != row and tableau[r][col] != 0:
            factor = tableau[r][col]
            tableau[r] = [a - factor * b for a, b in zip(tableau[r], tableau[row])]
    basis[row] = col


def _optimize(tableau, basis, cost):
    """Run primal simplex with Bland's rule; returns False on unboundedness."""
    m = len(tableau)
    ncols = len(tableau[0]) - 1
    while True:
        # reduced costs c_j - z_j, recomputed each round (problems are tiny)
        entering = None
        for j in range(ncols):
            zj = sum(cost[basis[r]] * tableau[r][j] for r in range(m))
            if cost[j] - zj > 0:
                entering = j
                break
        if entering is None:
            return True
        leaving = None
        best = None
        for r in range(m):
            if tableau[r][entering] > 0:
                ratio = tableau[r][-1] / tableau[r][entering]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leaving]):
                    best = ratio
                    leaving = r
        if leaving is None:
            return False
        _pivot(tableau, basis, leaving, entering)


def simplex_max(a: Matrix, b: Vector, c: Vector) -> LPResult:
    """Maximize c.x subject to a @ x = b, x >= 0 (two-phase, Bland's rule)."""
    m = len(a)
    n = len(c)
    rows = []
    rhs = []
    for i in range(m):
        row = list(a[i])
        bi = b[i]
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
        rows.append(row)
        rhs.append(bi)

    # phase 1: artificial variables n..n+m-1
    tableau = [rows[i] + [ONE if j == i else ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost1 = [ZERO] * n + [Fraction(-1)] * m
    if not _optimize(tableau, basis, cost1):
        raise InternalError("phase-1 simplex reported unbounded")
    phase1 = sum(cost1[basis[r]] * tableau[r][-1] for r in range(m))
    if phase1 != 0:
        return LPResult("infeasible")

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if tableau[r][j] != 0), None)
            if col is None:
                continue  # redundant constraint
            _pivot(tableau, basis, r, col)
        keep.append(r)
    tableau = [[tableau[r][j] for j in range(n)] + [tableau[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]

    if not _optimize(tableau, basis, list(c)):
        return LPResult("unbounded")
    x = [ZERO] * n
    for r, var in enumerate(basis):
        x[var] = tableau[r][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult("optimal", x, value)


def cone_contains(generators: Sequence[Vector], target: Vector) -> bool:
    """Exact membership of target in the cone spanned by the generators."""
    if all(t == 0 for t in target):
        return True
    if not generators:
        return False
    dim = len(target)
    a = [[g[i] for g in generators] for i in range(dim)]
    result = simplex_max(a, list(target), [ZERO] * len(generators))
    return result.status == "optimal"


def cone_max_shift(generators: Sequence[Vector], direction: Vector, target: Vector):
    """Largest t >= 0 with target - t*direction in the generated cone.

    Returns None when the target itself is outside the cone, and raises on an
    unbounded ray (which indicates degenerate cone data).
    """
    dim = len(target)
    ngen = len(generators)
    a = [[g[i] for g in generators] + [direction[i]] for i in range(dim)]
    c = [ZERO] * ngen + [ONE]
    result = simplex_max(a, list(target), c)
    if result.status == "infeasible":
        return None
    if result.status == "unbounded":
        raise InternalError("support function unbounded; cone data is degenerate")
    return result.value
