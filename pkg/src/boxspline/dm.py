"""Dahmen-Micchelli polynomial spaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .arrangement import Configuration, cocircuits
from .poly import Poly, derivative_along, monomials


@dataclass(frozen=True)
class DMBasis:
    config: Configuration
    degree_bound: int
    basis: tuple[Poly, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _constraint_matrix(c: Configuration, degree: int) -> tuple[list[list[Fraction]], list[tuple[int, ...]]]:
    cols = sorted(monomials(c.n, degree), key=lambda e: (-sum(e), [-x for x in e]))
    rows: list[list[Fraction]] = []
    for Y in cocircuits(c):
        vecs = c.vectors(Y)
        images = [derivative_along(Poly.monomial(e), vecs) for e in cols]
        for target in cols:
            row = [img.terms.get(target, Fraction(0)) for img in images]
            if any(row):
                rows.append(row)
    return rows, cols


def dm_kernel(c: Configuration, degree: int) -> list[Poly]:
    rows, cols = _constraint_matrix(c, degree)
    ker = linalg.kernel_basis(rows, len(cols))
    if not ker:
        return []
    # echelonise so each element has a distinct leading graded-lex monomial
    red, _, _ = linalg.rref(ker, len(cols))
    basis = [Poly(c.n, {e: x for e, x in zip(cols, row)}) for row in red]
    return sorted(basis, key=lambda p: (p.degree, str(p)))


def dm_basis(c: Configuration) -> DMBasis:
    bound = c.N - c.n
    return DMBasis(c, bound, tuple(dm_kernel(c, bound)))


def is_in_dm(c: Configuration, p: Poly) -> bool:
    if p.n != c.n:
        raise ValueError("polynomial dimension mismatch")
    return all(not derivative_along(p, c.vectors(Y)) for Y in cocircuits(c))
