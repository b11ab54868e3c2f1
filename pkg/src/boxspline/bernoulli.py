"""Multiple Bernoulli series as exact piecewise-polynomial closed forms.

For a list of lattice vectors the oscillatory sum

    W(v) = sum over gamma in the dual lattice, <a, gamma> != 0 for all a,
           of exp(2 i pi <v, gamma>) / prod_a (2 i pi <a, gamma>)

is rewritten as a finite combination of products of periodic Bernoulli
functions ``B(k, {l(v) + c})`` of rational affine forms.  The reduction has
three moves:

* partial fractions turn a dependent set of denominator forms into terms
  whose forms are independent (a removed form becomes a "nonzero" side
  condition on the summation);
* inclusion-exclusion removes side conditions by passing to sublattices;
* independent forms on a rank-r lattice are diagonalised with a character
  sum over the finite group ``M^{-T} Z^r / Z^r``, each coordinate giving the
  classical one-variable series ``-B(k, {x}) / k!``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial, floor
from typing import Iterable, Sequence

from . import linalg
from .arrangement import AdmissibleSubspace, Configuration
from .cyclo import Cyclo
from .errors import FormHitsInteger, IntegerTwist, NonAdmissibleSubspace
from .poly import Poly, Poly1D


@lru_cache(maxsize=None)
def bernoulli_poly(k: int) -> Poly1D:
    """Bernoulli polynomial B(k, t): B(0)=1, B(k)' = k B(k-1), mean zero on [0,1]."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    if k == 0:
        return Poly1D([1])
    prev = bernoulli_poly(k - 1)
    anti = (prev * k).antiderivative()
    mean = anti.antiderivative()(1)
    return anti + Poly1D([-mean])


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_affine(form: Sequence[Fraction], offset: Fraction = Fraction(0)) -> str:
    parts = []
    for i, c in enumerate(form):
        if not c:
            continue
        mag = abs(c)
        body = f"v{i + 1}" if mag == 1 else f"{_fmt(mag)}*v{i + 1}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    if offset or not parts:
        if not parts:
            parts.append(_fmt(offset))
        else:
            parts.append(("- " if offset < 0 else "+ ") + _fmt(abs(offset)))
    return " ".join(parts)


@dataclass(frozen=True, order=True)
class PeriodicBernoulliFactor:
    """``B(order, {<form, v> + offset})`` with ``{x} = x - floor(x)``."""

    order: int
    form: tuple[Fraction, ...]
    offset: Fraction = Fraction(0)

    def argument(self, v: Sequence) -> Fraction:
        return sum((c * Fraction(x) for c, x in zip(self.form, v)), self.offset)

    def __call__(self, v: Sequence) -> Fraction:
        x = self.argument(v)
        if x.denominator == 1:
            raise FormHitsInteger(f"form {format_affine(self.form, self.offset)} is integral at the point")
        return bernoulli_poly(self.order)(x - floor(x))

    def on_cell(self, v: Sequence) -> Poly:
        """The polynomial this factor agrees with near the regular point v."""
        x = self.argument(v)
        if x.denominator == 1:
            raise FormHitsInteger("cell of a point on a break of the factor")
        return bernoulli_poly(self.order).to_poly(self.form, self.offset - floor(x))

    def on_line(self, v: Sequence, a: Sequence, t_mid: Fraction) -> Poly1D:
        """``t -> factor(v - t a)`` on the piece of the line containing ``t_mid``."""
        x0 = self.argument(v)
        slope = sum((c * x for c, x in zip(self.form, a)), Fraction(0))
        x = x0 - t_mid * slope
        if x.denominator == 1:
            raise FormHitsInteger("piece midpoint lies on a break of the factor")
        return bernoulli_poly(self.order).compose_affine(-slope, x0 - floor(x))

    def __str__(self) -> str:
        return f"B{self.order}({format_affine(self.form, self.offset)})"


Signature = tuple[PeriodicBernoulliFactor, ...]


class BernoulliExpr:
    """Finite sum of rational multiples of products of periodic Bernoulli factors."""

    def __init__(self, n: int, terms: dict[Signature, Fraction] | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def constant(cls, n: int, c=1) -> BernoulliExpr:
        return cls(n, {(): Fraction(c)})

    @property
    def degree(self) -> int:
        """Largest total order of a term; pieces are polynomials of this degree at most."""
        return max((sum(f.order for f in sig) for sig in self.terms), default=0)

    @property
    def forms(self) -> list[tuple[Fraction, ...]]:
        out = []
        for sig in self.terms:
            for f in sig:
                if f.form not in out:
                    out.append(f.form)
        return out

    def eval(self, v: Sequence) -> Fraction:
        if len(v) != self.n:
            raise ValueError("point dimension mismatch")
        total = Fraction(0)
        for sig, c in self.terms.items():
            term = c
            for f in sig:
                term *= f(v)
            total += term
        return total

    __call__ = eval

    def on_cell(self, v: Sequence) -> Poly:
        """Polynomial equal to the expression on the tope containing the regular point v."""
        out = Poly.zero(self.n)
        for sig, c in self.terms.items():
            term = Poly.const(self.n, c)
            for f in sig:
                term = term * f.on_cell(v)
            out = out + term
        return out

    def on_line(self, v: Sequence, a: Sequence, t_mid: Fraction) -> Poly1D:
        """``t -> W(v - t a)`` on the piece of the line containing ``t_mid``."""
        out = Poly1D()
        for sig, c in self.terms.items():
            term = Poly1D([c])
            for f in sig:
                term = term * f.on_line(v, a, t_mid)
            out = out + term
        return out

    def pullback(self, matrix: Sequence[Sequence[int]], n: int) -> BernoulliExpr:
        """Compose every form with the linear map ``v -> matrix v`` from R^n."""
        out: dict[Signature, Fraction] = {}
        for sig, c in self.terms.items():
            new = tuple(
                sorted(
                    PeriodicBernoulliFactor(
                        f.order,
                        tuple(
                            sum((f.form[i] * matrix[i][j] for i in range(len(matrix))), Fraction(0))
                            for j in range(n)
                        ),
                        f.offset,
                    )
                    for f in sig
                )
            )
            out[new] = out.get(new, 0) + c
        return BernoulliExpr(n, out)

    def format(self) -> str:
        if not self.terms:
            return "0"
        lines = []
        for sig in sorted(self.terms, key=lambda s: (-sum(f.order for f in s), s)):
            c = self.terms[sig]
            lines.append(f"{_fmt(c)} * " + " * ".join(str(f) for f in sig) if sig else _fmt(c))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.format().replace("\n", " + ")


# -- construction -------------------------------------------------------------


def _proportion(f: Sequence[int], g: Sequence[int]) -> Fraction | None:
    """lambda with f = lambda * g, or None if not proportional."""
    lam = None
    for x, y in zip(f, g):
        if y == 0:
            if x != 0:
                return None
            continue
        r = Fraction(x, y)
        if lam is None:
            lam = r
        elif r != lam:
            return None
    return lam


class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.out: dict[Signature, Fraction] = {}
        self._quotients: dict[tuple, linalg.QuotientMap] = {}

    def quotient(self, killed: tuple[tuple[int, ...], ...]) -> linalg.QuotientMap:
        key = killed
        if key not in self._quotients:
            basis: list[tuple[int, ...]] = []
            for a in killed:
                if linalg.rank(basis + [a], self.n) > len(basis):
                    basis.append(a)
            self._quotients[key] = linalg.lattice_quotient(basis, self.n)
        return self._quotients[key]

    def emit(self, sig: Signature, c: Fraction) -> None:
        self.out[sig] = self.out.get(sig, 0) + c

    def run(
        self,
        killed: tuple[tuple[int, ...], ...],
        denoms: list[tuple[tuple[int, ...], int]],
        conds: list[tuple[int, ...]],
        coeff: Fraction,
    ) -> None:
        """Accumulate ``coeff * sum`` over gamma in the dual lattice orthogonal to ``killed``.

        The summand is exp(2 i pi <v, gamma>) / prod (2 i pi <a, gamma>)^m over
        ``denoms``; every denominator and every vector in ``conds`` must pair
        nonzero with gamma.
        """
        q = self.quotient(killed)
        r = q.dim
        restrict = lambda a: tuple(q.project(a))  # noqa: E731

        # merge parallel denominators; drop conditions implied by denominators
        merged: list[list] = []  # [vector, restricted, multiplicity]
        for a, m in denoms:
            fa = restrict(a)
            if not any(fa):
                return
            for entry in merged:
                lam = _proportion(fa, entry[1])
                if lam is not None:
                    coeff = coeff / lam**m
                    entry[2] += m
                    break
            else:
                merged.append([a, fa, m])
        kept_conds: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        for a in conds:
            fa = restrict(a)
            if not any(fa):
                return
            if any(_proportion(fa, e[1]) is not None for e in merged):
                continue
            if any(_proportion(fa, k[1]) is not None for k in kept_conds):
                continue
            kept_conds.append((a, fa))

        forms = [e[1] for e in merged]
        # first dependency among the forms, in list order
        for k in range(1, len(forms)):
            if linalg.rank(forms[: k + 1], r) <= k:
                rows = linalg.transpose(forms[:k])
                alpha = linalg.solve(rows, list(forms[k]))
                assert alpha is not None
                for i, ai in enumerate(alpha):
                    if not ai:
                        continue
                    new_denoms = []
                    new_conds = [a for a, _ in kept_conds]
                    for j, (a, _, m) in enumerate(merged):
                        if j == k:
                            new_denoms.append((a, m + 1))
                        elif j == i:
                            if m > 1:
                                new_denoms.append((a, m - 1))
                            else:
                                new_conds.append(a)
                        else:
                            new_denoms.append((a, m))
                    self.run(killed, new_denoms, new_conds, coeff * ai)
                return

        if len(forms) != r:
            raise AssertionError("denominator forms fail to span the dual of the sublattice")

        if kept_conds:
            for size in range(len(kept_conds) + 1):
                for subset in combinations(kept_conds, size):
                    sign = -1 if size % 2 else 1
                    if size == 0:
                        self.base(q, merged, coeff)
                    else:
                        new_killed = killed + tuple(a for a, _ in subset)
                        self.run(new_killed, [(a, m) for a, _, m in merged], [], coeff * sign)
            return
        self.base(q, merged, coeff)

    def base(self, q: linalg.QuotientMap, merged: list[list], coeff: Fraction) -> None:
        r = q.dim
        if r == 0:
            self.emit((), coeff)
            return
        M = [list(e[1]) for e in merged]
        mults = [e[2] for e in merged]
        d = abs(linalg.det(M))
        Mt_inv = linalg.inverse(linalg.transpose(M))  # M^{-T}
        forms = linalg.matmul(Mt_inv, q.matrix)  # rows: covectors on V
        snf = linalg.smith_normal_form(linalg.transpose(M))
        left_inv = [[int(x) for x in row] for row in linalg.inverse(snf.left)]
        scale = coeff / d
        for m in mults:
            scale *= Fraction(-1, factorial(m))
        for e in product(*(range(di) for di in snf.diag)):
            c = linalg.matvec(left_inv, e)
            rho = linalg.matvec(Mt_inv, c)
            sig = tuple(
                sorted(
                    PeriodicBernoulliFactor(m, tuple(forms[i]), rho[i] - floor(rho[i]))
                    for i, m in enumerate(mults)
                )
            )
            self.emit(sig, scale)


def bernoulli_sum(
    n: int,
    vectors: Iterable[Sequence[int]],
    killed: Iterable[Sequence[int]] = (),
) -> BernoulliExpr:
    """Closed form of the series over the dual lattice orthogonal to ``killed``."""
    b = _Builder(n)
    denoms = [(tuple(a), 1) for a in vectors]
    b.run(tuple(tuple(a) for a in killed), denoms, [], Fraction(1))
    return BernoulliExpr(n, b.out)


def w_series(c: Configuration) -> BernoulliExpr:
    """W(X) for a spanning configuration."""
    return bernoulli_sum(c.n, c.X)


def w_quotient(c: Configuration, s: AdmissibleSubspace) -> BernoulliExpr:
    """W(X/s) as a function on V, constant along s and periodic under the lattice."""
    if not any(s.key == t.key for t in c.subspaces):
        raise NonAdmissibleSubspace("subspace is not spanned by elements of X")
    if s.dim == c.n:
        return BernoulliExpr.constant(c.n, 1)
    if s.dim == 0:
        return w_series(c)
    projected = Configuration(c.n - s.dim, s.projected)
    return w_series(projected).pullback(s.quotient.matrix, c.n)


def w_eval(e: BernoulliExpr, v: Sequence) -> Fraction:
    return e.eval(v)


# -- twisted, one variable ----------------------------------------------------


@dataclass(frozen=True)
class TwistedBernoulli1D:
    """``sum_n exp(2 i pi (n+z) t) / prod_j (2 i pi c_j (n+z))`` for rational non-integer z.

    On (0,1) the series is the polynomial ``scale * sum_i coeffs[i] x^i``; off
    it, the covariance ``W(t + 1) = exp(2 i pi z) W(t)`` applies.
    """

    order: int
    z: Fraction
    scale: Fraction
    coeffs: tuple[Cyclo, ...]

    @property
    def character(self) -> Cyclo:
        return Cyclo.root_of_unity(self.z)

    def __call__(self, t) -> Cyclo:
        t = Fraction(t)
        if t.denominator == 1:
            raise FormHitsInteger("twisted Bernoulli series evaluated at an integer")
        k = floor(t)
        x = t - k
        acc = Cyclo.rational(0, self.character.m)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * self.scale * Cyclo.root_of_unity(self.z * k)

    def on_cell(self, t) -> tuple[Cyclo, list[Cyclo]]:
        """``(prefactor, coefficients in t)`` valid on the unit interval containing t."""
        t = Fraction(t)
        k = floor(t)
        shifted = [Cyclo.rational(0, self.character.m) for _ in self.coeffs]
        # sum_i c_i (t - k)^i expanded in powers of t
        for i, c in enumerate(self.coeffs):
            for j in range(i + 1):

                shifted[j] = shifted[j] + c * (comb(i, j) * Fraction(-k) ** (i - j))
        return Cyclo.root_of_unity(self.z * k) * self.scale, shifted


def w_twisted_1d(k: int, z, c_list: Sequence[int] | None = None) -> TwistedBernoulli1D:
    """Closed form of the twisted one-variable series of order k.

    On 0 < x < 1 it equals ``[s^(k-1)] exp(s x) / (1 - q exp(s))`` with
    ``q = exp(-2 i pi z)``.
    """
    z = Fraction(z)
    if z.denominator == 1:
        raise IntegerTwist("integral twist: use the untwisted series")
    if k < 1:
        raise ValueError("order must be positive")
    c_list = list(c_list) if c_list is not None else [1] * k
    if len(c_list) != k or any(c == 0 for c in c_list):
        raise ValueError("need k nonzero integer multipliers")
    q = Cyclo.root_of_unity(-z)
    # power series 1 - q e^s, inverted up to order k-1
    den = [Cyclo.rational(1, q.m) - q] + [q * Fraction(-1, factorial(i)) for i in range(1, k)]
    inv0 = den[0].inverse()
    a = [inv0]
    for j in range(1, k):
        acc = Cyclo.rational(0, q.m)
        for i in range(1, j + 1):
            acc = acc + den[i] * a[j - i]
        a.append(-acc * inv0)
    coeffs = tuple(a[k - 1 - i] * Fraction(1, factorial(i)) for i in range(k))
    scale = Fraction(1)
    for c in c_list:
        scale /= c
    return TwistedBernoulli1D(k, z, scale, coeffs)
