"""Pointwise exact box splines and box-spline convolutions.

Every integral here is one-dimensional: ``B(Y)(v) = int_0^1 B(Y - a)(v - t a) dt``
and ``(B(Y) * F)(v)`` is the iterated operator ``I_a F(v) = int_0^1 F(v - t a) dt``.
Each segment ``v - t a`` is cut where it meets the affine arrangement; on a
piece the integrand is a polynomial in ``t`` of known degree, so it is
rebuilt from a few rational interpolation nodes and integrated exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .arrangement import Configuration, as_point, is_regular, segment_breakpoints
from .bernoulli import BernoulliExpr
from .errors import NodeSelectionError, NonRegularPoint, NonSpanningList
from .poly import Poly, Poly1D, integral_operator, integrate_1d, lagrange_1d

_NUDGE = Fraction(1, 1000003)
_MAX_RETRIES = 8


# -- piecewise polynomial functions ------------------------------------------


class EvaluableFn:
    """A function on V that is polynomial between integer level sets of ``normals``.

    Subclasses provide ``__call__``.  ``restrict_line`` may return the exact
    polynomial ``t -> F(v - t a)`` on a piece that crosses no break; ``absorb``
    may return ``I_a F`` directly when that is cheap and exact.
    """

    def __init__(self, n: int, degree_bound: int, normals: Sequence[Sequence[int]]):
        self.n = n
        self.degree_bound = degree_bound
        self.normals = tuple(tuple(e) for e in normals)

    def __call__(self, v: Sequence) -> Fraction:
        raise NotImplementedError

    def restrict_line(self, v, a, lo, hi) -> Poly1D | None:
        return None

    def absorb(self, a: Sequence[int]) -> EvaluableFn | None:
        return None


class CallableFn(EvaluableFn):
    def __init__(self, n, degree_bound, normals, fn: Callable[[Sequence], Fraction]):
        super().__init__(n, degree_bound, normals)
        self.fn = fn

    def __call__(self, v):
        return self.fn(v)


class PolyFn(EvaluableFn):
    def __init__(self, p: Poly):
        super().__init__(p.n, max(p.degree, 0), ())
        self.p = p

    def __call__(self, v):
        return self.p(v)

    def restrict_line(self, v, a, lo, hi):
        return self.p.restrict_line(v, a)

    def absorb(self, a):
        return PolyFn(integral_operator(self.p, a))


class BernoulliTimesPoly(EvaluableFn):
    """``W(v) * q(v)`` where W is constant along the span of ``invariant``."""

    def __init__(self, w: BernoulliExpr, q: Poly, normals, invariant: Sequence[Sequence[int]] = ()):
        super().__init__(q.n, w.degree + max(q.degree, 0), normals)
        self.w = w
        self.q = q
        self.invariant = [tuple(a) for a in invariant]
        self._inv_rank = linalg.rank(self.invariant, q.n) if self.invariant else 0

    def __call__(self, v):
        qv = self.q(v)
        return self.w(v) * qv if qv else Fraction(0)

    def restrict_line(self, v, a, lo, hi):
        return self.w.on_line(v, a, (lo + hi) / 2) * self.q.restrict_line(v, a)

    def absorb(self, a):
        # W(v - t a) = W(v) when a lies in the invariant span
        if not self.invariant or linalg.rank(self.invariant + [tuple(a)], self.n) > self._inv_rank:
            return None
        return BernoulliTimesPoly(self.w, integral_operator(self.q, a), self.normals, self.invariant)


# -- breakpoints --------------------------------------------------------------


def convolution_normals(normals: Sequence[Sequence[int]], directions: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Normals whose integer level sets can carry breaks of ``I_directions F``.

    Integrating along b can only create breaks where two crossings along b
    coincide: normals ``<e2,b> e1 - <e1,b> e2`` for e1, e2 already present.
    """
    out = [tuple(e) for e in normals]
    for b in directions:
        current = list(out)
        for i, e1 in enumerate(current):
            for e2 in current[i + 1 :]:
                nb = [linalg.dot(e2, b) * x - linalg.dot(e1, b) * y for x, y in zip(e1, e2)]
                if any(nb):
                    p = tuple(linalg.primitive(nb))
                    if p not in out:
                        out.append(p)
    return out


def _pieces(c: Configuration, v, a, normals) -> list[tuple[Fraction, Fraction]]:
    cuts = [Fraction(0)] + segment_breakpoints(c, v, a, 0, 1, normals) + [Fraction(1)]
    return list(zip(cuts, cuts[1:]))


def _nodes(lo: Fraction, hi: Fraction, count: int, v, a, normals, depth: int) -> list[Fraction]:
    """Equally spaced interior nodes whose points ``v - t a`` are regular."""
    step = (hi - lo) / (count + 1)
    out = []
    for j in range(1, count + 1):
        t = lo + step * j
        for attempt in range(_MAX_RETRIES + 1):
            pt = [x - t * y for x, y in zip(v, a)]
            if all(sum(Fraction(e) * x for e, x in zip(eta, pt)).denominator != 1 for eta in normals):
                break
            t += step * _NUDGE / (depth + 1)
        else:
            raise NodeSelectionError("no regular interpolation node found")
        out.append(t)
    return out


def _integrate_piece(lo, hi, nodes, values) -> Fraction:
    return integrate_1d(lagrange_1d(nodes, values), lo, hi)


# -- box spline ---------------------------------------------------------------


def _greedy_basis(c: Configuration, Y: Sequence[int]) -> list[int]:
    basis: list[int] = []
    for i in Y:
        if c.rank_of(basis + [i]) > len(basis):
            basis.append(i)
    return basis


class BoxEvaluator:
    """Memoised exact evaluation of B(Y) for sublists Y of a configuration."""

    def __init__(self, c: Configuration, use_cache: bool = True):
        self.c = c
        self.use_cache = use_cache
        self.cache: dict[tuple, Fraction] = {}
        self._plans: dict[tuple, tuple[list[int], list[int]]] = {}
        self._inverse: dict[tuple, tuple[list[list[Fraction]], Fraction]] = {}

    def plan(self, Y: tuple[int, ...]) -> tuple[list[int], list[int]]:
        if Y not in self._plans:
            sigma = _greedy_basis(self.c, Y)
            if len(sigma) < self.c.n:
                raise NonSpanningList("box spline of a non-spanning list is not a function")
            peel = list(Y)
            for i in sigma:
                peel.remove(i)
            self._plans[Y] = (sigma, peel)
        return self._plans[Y]

    def _parallelepiped(self, sigma: tuple[int, ...], v) -> Fraction:
        if sigma not in self._inverse:
            mat = linalg.transpose(self.c.vectors(sigma))
            self._inverse[sigma] = (linalg.inverse(mat), Fraction(1, abs(linalg.det(mat))))
        inv, dens = self._inverse[sigma]
        t = linalg.matvec(inv, v)
        return dens if all(0 < x < 1 for x in t) else Fraction(0)

    def __call__(self, Y: Sequence[int], v: Sequence) -> Fraction:
        Y = tuple(sorted(Y))
        v = as_point(v)
        if not is_regular(self.c, v):
            raise NonRegularPoint("box spline evaluated off the regular set")
        return self._eval(Y, v, 0)

    def _eval(self, Y: tuple[int, ...], v, depth: int) -> Fraction:
        key = (Y, v)
        if self.use_cache and key in self.cache:
            return self.cache[key]
        sigma, peel = self.plan(Y)
        if not peel:
            val = self._parallelepiped(tuple(sigma), v)
        else:
            ai = peel[0]
            a = self.c.X[ai]
            rest = list(Y)
            rest.remove(ai)
            rest = tuple(rest)
            deg = len(rest) - self.c.n
            val = Fraction(0)
            for lo, hi in _pieces(self.c, v, a, self.c.normals):
                nodes = _nodes(lo, hi, deg + 1, v, a, self.c.normals, depth)
                vals = [self._eval(rest, tuple(x - t * y for x, y in zip(v, a)), depth + 1) for t in nodes]
                if any(vals):
                    val += _integrate_piece(lo, hi, nodes, vals)
        if self.use_cache:
            self.cache[key] = val
        return val


def box_eval(c: Configuration, Y: Sequence[int], v: Sequence, evaluator: BoxEvaluator | None = None) -> Fraction:
    """Exact value of the box-spline density B(Y) at a regular point."""
    ev = evaluator or BoxEvaluator(c)
    return ev(Y, v)


# -- convolution with a piecewise polynomial ---------------------------------


def box_convolve_eval(c: Configuration, Y: Sequence[int], F: EvaluableFn, v: Sequence) -> Fraction:
    """``(B(Y) * F)(v)`` for a sublist Y of X (possibly empty or non-spanning)."""
    v = as_point(v)
    dirs = []
    for i in Y:
        a = c.X[i]
        G = F.absorb(a)
        if G is None:
            dirs.append(a)
        else:
            F = G
    if not dirs:
        return F(v)
    base_normals = list(dict.fromkeys(list(c.normals) + list(F.normals)))
    levels = [convolution_normals(base_normals, dirs[k + 1 :]) for k in range(len(dirs))]
    top = levels[0] if levels else base_normals
    if not all(sum(Fraction(e) * x for e, x in zip(eta, v)).denominator != 1 for eta in top):
        raise NonRegularPoint("convolution evaluated off the regular set")
    return _nested(c, dirs, F, v, levels, 0)


def _nested(c, dirs, F: EvaluableFn, v, levels, depth):
    if not dirs:
        return F(v)
    a, rest = dirs[0], dirs[1:]
    normals = levels[depth]
    total = Fraction(0)
    for lo, hi in _pieces(c, v, a, normals):
        if not rest:
            exact = F.restrict_line(v, a, lo, hi)
            if exact is not None:
                total += integrate_1d(exact, lo, hi)
                continue
        deg = F.degree_bound + len(rest)
        inner_normals = levels[depth + 1] if rest else normals
        nodes = _nodes(lo, hi, deg + 1, v, a, inner_normals, depth)
        vals = [_nested(c, rest, F, tuple(x - t * y for x, y in zip(v, a)), levels, depth + 1) for t in nodes]
        total += _integrate_piece(lo, hi, nodes, vals)
    return total


# -- independent numerical oracle --------------------------------------------


def box_quadrature_oracle(c: Configuration, Y: Sequence[int], test: Poly, samples: int) -> float:
    """Midpoint tensor-grid estimate of ``int_[0,1]^|Y| test(sum t_i a_i) dt``."""
    k = len(Y)
    if k == 0:
        return float(test([0] * c.n))
    per_axis = max(1, round(samples ** (1.0 / k)))
    mids = (np.arange(per_axis) + 0.5) / per_axis
    vecs = np.array([c.X[i] for i in Y], dtype=float)  # k x n
    grids = np.meshgrid(*([mids] * k), indexing="ij")
    ts = np.stack([g.ravel() for g in grids], axis=1)  # S x k
    pts = ts @ vecs  # S x n
    total = np.zeros(len(pts))
    for e, coef in test.terms.items():
        term = np.full(len(pts), float(coef))
        for i, p in enumerate(e):
            if p:
                term *= pts[:, i] ** p
        total += term
    return float(total.mean())


def box_pairing(c: Configuration, test: Poly, evaluator: BoxEvaluator | None = None) -> Fraction:
    """Exact ``int B(X)(v) test(v) dv`` from pointwise box-spline values.

    The integrand is integrated over a box around Z(X) one axis at a time,
    cutting at the arrangement, so only regular values of B(X) are used.
    """
    from .arrangement import zonotope_bounds

    ev = evaluator or BoxEvaluator(c)
    full = tuple(range(c.N))
    # distinct prime denominators keep the corner off every derived normal
    shifts = [Fraction(1, p) for p in (1009, 1013, 1019)]
    bounds = zonotope_bounds(c)
    lengths = [hi - lo + 1 for lo, hi in bounds]
    corner = tuple(hi + d for (_, hi), d in zip(bounds, shifts))
    axes = [tuple(L * int(i == j) for j in range(c.n)) for i, L in enumerate(lengths)]
    # the axis directions live in an enlarged configuration so they can be indexed
    aux = Configuration(c.n, c.X + tuple(axes))
    F = CallableFn(c.n, c.N - c.n + max(test.degree, 0), c.normals, lambda v: ev(full, v) * test(v))
    scale = Fraction(1)
    for L in lengths:
        scale *= L
    return scale * box_convolve_eval(aux, range(c.N, aux.N), F, corner)


def lattice_translates(c: Configuration, v: Sequence) -> list[tuple[int, ...]]:
    """Lattice points lambda with ``v - lambda`` in the zonotope Z(X)."""
    from .arrangement import zonotope_bounds, zonotope_contains
    from math import ceil, floor

    bounds = zonotope_bounds(c)
    ranges = [range(ceil(x - hi), floor(x - lo) + 1) for x, (lo, hi) in zip(v, bounds)]
    out = []
    for lam in product(*ranges):
        if zonotope_contains(c, [x - l for x, l in zip(v, lam)]):
            out.append(lam)
    return out
