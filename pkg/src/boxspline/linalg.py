"""Exact linear algebra over Z and Q.

Matrices are plain lists of rows. Integer matrices hold ``int`` entries,
rational ones hold :class:`fractions.Fraction`. Nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

IntMat = list[list[int]]
RatMat = list[list[Fraction]]


def identity(n: int) -> IntMat:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss fraction-free elimination)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("det needs a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(m: Sequence[Sequence], ncols: int | None = None) -> tuple[RatMat, list[int], int]:
    """Reduced row echelon form over Q.

    Returns ``(reduced, pivot_columns, rank)``; zero rows are dropped from
    ``reduced`` so it has exactly ``rank`` rows.
    """
    a = [[Fraction(x) for x in row] for row in m]
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots, r


def rank(m: Sequence[Sequence], ncols: int | None = None) -> int:
    return rref(m, ncols)[2]


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space ``{x : m x = 0}``."""
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    red, pivots, _ = rref(m, cols)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * cols
        x[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(x)
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``m x = b`` over Q, or None when inconsistent."""
    cols = len(m[0]) if m else 0
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots, _ = rref(aug, cols + 1)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, pc in zip(red, pivots):
        x[pc] = row[cols]
    return x


def inverse(m: Sequence[Sequence]) -> RatMat:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots, r = rref(aug, 2 * n)
    if r < n or pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to a primitive integer vector, first nonzero entry positive."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    return [-x for x in ints] if lead < 0 else ints


def primitive_normal(vectors: Sequence[Sequence[int]], n: int) -> list[int]:
    """Primitive integer covector vanishing on a hyperplane spanned by ``vectors``.

    Sign normalised so the first nonzero entry is positive.  In dimension 1
    the empty list spans the hyperplane {0} and the normal is ``(1)``.
    """
    if rank(vectors, n) != n - 1:
        raise ValueError("vectors do not span a hyperplane")
    ker = kernel_basis(vectors, n) if vectors else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    (eta,) = ker
    return primitive(eta)


@dataclass(frozen=True)
class SnfDecomposition:
    left: IntMat
    diag: list[int]
    right: IntMat

    def diagonal_matrix(self, rows: int, cols: int) -> IntMat:
        d = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.diag):
            d[i][i] = x
        return d


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> SnfDecomposition:
    """Smith normal form ``left @ m @ right == diag`` with unimodular factors."""
    rows = len(m)
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    a = [list(row) for row in m]
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1
    diag = [a[i][i] for i in range(min(rows, cols))]
    return SnfDecomposition(left, diag, right)


@dataclass(frozen=True)
class QuotientMap:
    """Projection Z^n -> Z^k (k = n - dim s) with kernel the saturation of s.

    ``matrix`` is k x n.  Its rows form a Z-basis of the dual lattice
    intersected with the annihilator of s, so covectors on the quotient pull
    back to V by ``c @ matrix``.
    """

    n: int
    matrix: IntMat

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def project(self, v: Sequence) -> list:
        return matvec(self.matrix, v)

    def pullback(self, covector: Sequence) -> list:
        return [sum(covector[i] * self.matrix[i][j] for i in range(self.dim)) for j in range(self.n)]


def lattice_quotient(s_basis: Sequence[Sequence[int]], n: int) -> QuotientMap:
    d = len(s_basis)
    if d and rank(s_basis, n) != d:
        raise ValueError("subspace basis is linearly dependent")
    if d == 0:
        return QuotientMap(n, identity(n))
    cols = transpose(s_basis)  # n x d
    snf = smith_normal_form(cols, d)
    # left @ cols has zero rows below d, so those rows of left annihilate s
    return QuotientMap(n, [list(row) for row in snf.left[d:]])
