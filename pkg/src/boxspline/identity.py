"""Semi-discrete convolutions and exact checks of the convolution identities.

Each check evaluates two independently computed sides at rational regular
points: the lattice sum ``sum_lambda f(lambda) B(X)(v - lambda)`` on one side,
and a sum of box-spline convolutions of Bernoulli series on the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import lcm
from typing import Sequence

from . import linalg
from .arrangement import AdmissibleSubspace, Configuration, admissible_subspaces, as_point, is_regular
from .bernoulli import BernoulliExpr, bernoulli_sum, w_quotient, w_twisted_1d
from .boxspline import BernoulliTimesPoly, BoxEvaluator, CallableFn, box_convolve_eval, lattice_translates
from .cyclo import Cyclo
from .dm import dm_basis, is_in_dm
from .errors import BoxSplineError, NonRegularPoint, NotAToricVertex, NotInDMSpace, UnsupportedDimension
from .poly import Poly, derivative_along, format_poly, integral_operator, nabla_along, todd_apply

Value = Fraction | Cyclo


# -- characters ---------------------------------------------------------------


@dataclass(frozen=True)
class CharacterG:
    """The character ``lambda -> exp(2 i pi <G, lambda>)`` of the lattice."""

    G: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "G", tuple(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator) for x in self.G))

    @property
    def m(self) -> int:
        return lcm(*(x.denominator for x in self.G)) if self.G else 1

    @property
    def n(self) -> int:
        return len(self.G)

    def is_zero(self) -> bool:
        return self.m == 1

    def __call__(self, lam: Sequence[int]) -> Cyclo:
        return Cyclo.root_of_unity(sum(g * x for g, x in zip(self.G, lam))).lift(self.m)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.G)


def parse_character(text: str) -> CharacterG:
    try:
        return CharacterG(tuple(Fraction(part.strip()) for part in text.split(",")))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad character {text!r}: expected comma-separated rationals like 1/2,0") from exc


def _pairing_is_integer(g: CharacterG, a: Sequence[int]) -> bool:
    return sum(x * y for x, y in zip(g.G, a)).denominator == 1


def x_of_g(c: Configuration, g: CharacterG) -> tuple[int, ...]:
    """Indices of the vectors a with ``g^a = 1``."""
    if g.n != c.n:
        raise ValueError("character dimension mismatch")
    return tuple(i for i, a in enumerate(c.X) if _pairing_is_integer(g, a))


def toric_vertices(c: Configuration) -> list[CharacterG]:
    """Characters g (mod the dual lattice) for which X(g) spans, zero first."""
    found: set[tuple[Fraction, ...]] = set()
    for sigma in c.bases:
        A = c.vectors(sigma)  # rows a in sigma; want A G in Z^n
        snf = linalg.smith_normal_form(A, c.n)
        # A = L^-1 D R^-1, so A^-1 Z^n = R D^-1 Z^n
        ranges = [range(d) for d in snf.diag]
        for ks in product(*ranges):
            y = [Fraction(k, d) for k, d in zip(ks, snf.diag)]
            G = linalg.matvec(snf.right, y)
            found.add(CharacterG(tuple(G)).G)
    return [CharacterG(G) for G in sorted(found, key=lambda G: (any(G), G))]


def sub_configuration(c: Configuration, idx: Sequence[int]) -> Configuration:
    return Configuration(c.n, tuple(c.X[i] for i in idx))


def _require_vertex(c: Configuration, g: CharacterG) -> None:
    if g.is_zero():
        raise NotAToricVertex("g = 0 is the untwisted case; use the theorem1 check")
    if c.rank_of(x_of_g(c, g)) < c.n:
        raise NotAToricVertex(f"X(g) does not span for g = {g}")


# -- the two convolutions -----------------------------------------------------


def semidiscrete_eval(c: Configuration, f: Poly, v: Sequence, evaluator: BoxEvaluator | None = None) -> Fraction:
    """``sum_lambda f(lambda) B(X)(v - lambda)``."""
    v = as_point(v)
    if not is_regular(c, v):
        raise NonRegularPoint("semi-discrete convolution evaluated off the regular set")
    ev = evaluator or BoxEvaluator(c)
    full = tuple(range(c.N))
    total = Fraction(0)
    for lam in lattice_translates(c, v):
        fl = f(lam)
        if fl:
            total += fl * ev(full, [x - y for x, y in zip(v, lam)])
    return total


def twisted_semidiscrete_eval(
    c: Configuration, g: CharacterG, f: Poly, v: Sequence, evaluator: BoxEvaluator | None = None
) -> Cyclo:
    """``sum_lambda g^lambda f(lambda) B(X)(v - lambda)`` in Q(zeta_m)."""
    v = as_point(v)
    if not is_regular(c, v):
        raise NonRegularPoint("semi-discrete convolution evaluated off the regular set")
    ev = evaluator or BoxEvaluator(c)
    full = tuple(range(c.N))
    total = Cyclo.rational(0, g.m)
    for lam in lattice_translates(c, v):
        fl = f(lam)
        if fl:
            total = total + g(lam) * (fl * ev(full, [x - y for x, y in zip(v, lam)]))
    return total


def continuous_conv_poly(c: Configuration, f: Poly) -> Poly:
    """``B(X) *_c f`` for a polynomial f."""
    return todd_apply(c.X, f)


# -- reports ------------------------------------------------------------------


@dataclass
class TheoremTerm:
    s: AdmissibleSubspace | None
    I: tuple[int, ...]
    J: tuple[int, ...]
    sign: int
    value: Value

    def to_dict(self, c: Configuration) -> dict:
        out: dict = {}
        if self.s is not None:
            out["s"] = {"dim": self.s.dim, "basis": [list(c.X[i]) for i in self.s.basis]}
        out.update({"I": list(self.I), "J": list(self.J), "sign": self.sign, "value": str(self.value)})
        return out


@dataclass
class PointResult:
    point: tuple[Fraction, ...]
    lhs_discrete: Value | None = None
    lhs_continuous: Value | None = None
    difference: Value | None = None
    rhs_total: Value | None = None
    terms: list[TheoremTerm] = field(default_factory=list)
    passed: bool = False
    label: str | None = None
    error: str | None = None


@dataclass
class VerificationReport:
    kind: str
    config: Configuration
    results: list[PointResult]
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        points = []
        for r in self.results:
            d = {"point": [str(x) for x in r.point]}
            if r.label is not None:
                d["poly"] = r.label
            d.update(
                {
                    "lhs_discrete": s(r.lhs_discrete),
                    "lhs_continuous": s(r.lhs_continuous),
                    "difference": s(r.difference),
                    "rhs_total": s(r.rhs_total),
                    "terms": [t.to_dict(self.config) for t in r.terms],
                    "pass": r.passed,
                }
            )
            if r.error is not None:
                d["error"] = r.error
            points.append(d)
        return {
            "kind": self.kind,
            "config": {"dim": self.config.n, "X": [list(a) for a in self.config.X]},
            **self.meta,
            "pass": self.passed,
            "points": points,
        }


# -- untwisted identity -------------------------------------------------------


@lru_cache(maxsize=256)
def _w_for(c: Configuration, key: tuple) -> BernoulliExpr:
    s = next(t for t in c.subspaces if t.key == key)
    return w_quotient(c, s)


@lru_cache(maxsize=4096)
def _w_extended(c: Configuration, key: tuple, extra: tuple[int, ...]) -> BernoulliExpr:
    """W(X/s) with the extra denominators ``<a_i, xi>`` for i in ``extra``."""
    s = next(t for t in c.subspaces if t.key == key)
    if not extra:
        return _w_for(c, key)
    return bernoulli_sum(c.n, c.vectors(s.minus_s) + c.vectors(extra), killed=c.vectors(s.basis))


def series_convolution(c: Configuration, s: AdmissibleSubspace, Y: Sequence[int], q: Poly) -> dict[tuple[int, ...], Poly]:
    """``B(Y) *_c (W(X/s) q)`` as ``sum_D W_D * q_D`` over extended denominator lists D.

    A direction a in s only sees q.  For a outside s every character in the
    series has ``exp(<a, xi>) = 1``, so
    ``I_a(W_D q) = sum_j (-1)^j W_(D + a^(j+1)) d_a^j nabla_a q``.
    """
    state: dict[tuple[int, ...], Poly] = {(): q}
    for i in Y:
        a = c.X[i]
        if i in s.in_s:
            state = {k: integral_operator(p, a) for k, p in state.items()}
            continue
        new: dict[tuple[int, ...], Poly] = {}
        for k, p in state.items():
            d = p.nabla(a)
            j = 0
            while d:
                key = tuple(sorted(k + (i,) * (j + 1)))
                new[key] = new.get(key, Poly.zero(c.n)) + d * (-1) ** j
                d = d.dir_derivative(a)
                j += 1
        state = {k: p for k, p in new.items() if p}
    return state


@dataclass
class _TermPlan:
    s: AdmissibleSubspace
    I: tuple[int, ...]
    J: tuple[int, ...]
    sign: int
    Y: tuple[int, ...]
    q: Poly


def _theorem1_plan(c: Configuration, f: Poly) -> list[_TermPlan]:
    plans = []
    for s in admissible_subspaces(c)[1]:
        rest = s.minus_s
        for k in range(len(rest) + 1):
            for I in combinations(rest, k):
                J = tuple(i for i in rest if i not in I)
                q = derivative_along(nabla_along(f, c.vectors(J)), c.vectors(I))
                plans.append(_TermPlan(s, I, J, (-1) ** k, tuple(s.in_s) + I, q))
    return plans


def _term_value(c: Configuration, p: _TermPlan, v, method: str) -> Fraction:
    if not p.q:
        return Fraction(0)
    if method == "series":
        parts = series_convolution(c, p.s, p.Y, p.q)
        return p.sign * sum((_w_extended(c, p.s.key, D)(v) * q(v) for D, q in parts.items()), Fraction(0))
    if method == "quadrature":
        fn = BernoulliTimesPoly(_w_for(c, p.s.key), p.q, c.normals, invariant=c.vectors(p.s.in_s))
        return p.sign * box_convolve_eval(c, p.Y, fn, v)
    raise ValueError(f"unknown method {method!r}")


def theorem1_rhs(
    c: Configuration, f: Poly, v: Sequence, plan: list[_TermPlan] | None = None, method: str = "series"
) -> tuple[Fraction, list[TheoremTerm]]:
    """Signed sum over admissible s != V and splittings I + J of X minus s.

    ``method="series"`` convolves symbolically; ``"quadrature"`` integrates
    segment by segment with exact interpolation.  They are independent.
    """
    v = as_point(v)
    if not is_regular(c, v):
        raise NonRegularPoint("identity evaluated off the regular set")
    terms = []
    total = Fraction(0)
    for p in plan if plan is not None else _theorem1_plan(c, f):
        val = _term_value(c, p, v, method)
        total += val
        terms.append(TheoremTerm(p.s, p.I, p.J, p.sign, val))
    return total, terms


def theorem1_check(c: Configuration, f: Poly, points: Sequence[Sequence], method: str = "series") -> VerificationReport:
    cont = continuous_conv_poly(c, f)
    plan = _theorem1_plan(c, f)
    ev = BoxEvaluator(c)
    results = []
    for v in points:
        v = as_point(v)
        r = PointResult(v)
        try:
            r.lhs_discrete = semidiscrete_eval(c, f, v, ev)
            r.lhs_continuous = cont(v)
            r.difference = r.lhs_discrete - r.lhs_continuous
            r.rhs_total, r.terms = theorem1_rhs(c, f, v, plan, method)
            r.passed = r.difference == r.rhs_total
        except BoxSplineError as exc:
            r.error = f"{type(exc).__name__}: {exc}"
        results.append(r)
    return VerificationReport("theorem1", c, results, {"poly": format_poly(f)})


def dm_corollary_check(c: Configuration, points: Sequence[Sequence]) -> VerificationReport:
    """Semi-discrete convolution reproduces Todd(p) for every basis element of D(X)."""
    ev = BoxEvaluator(c)
    results = []
    basis = dm_basis(c).basis
    for p in basis:
        cont = continuous_conv_poly(c, p)
        for v in points:
            v = as_point(v)
            r = PointResult(v, label=format_poly(p), rhs_total=Fraction(0))
            try:
                r.lhs_discrete = semidiscrete_eval(c, p, v, ev)
                r.lhs_continuous = cont(v)
                r.difference = r.lhs_discrete - r.lhs_continuous
                r.passed = r.difference == 0
            except BoxSplineError as exc:
                r.error = f"{type(exc).__name__}: {exc}"
            results.append(r)
    return VerificationReport("dm-corollary", c, results, {"basis": [format_poly(p) for p in basis]})


# -- twisted ------------------------------------------------------------------


def twisted_corollary_check(c: Configuration, g: CharacterG, p: Poly, points: Sequence[Sequence]) -> VerificationReport:
    """The twisted lattice sum of ``g^lambda p(lambda)`` vanishes identically."""
    _require_vertex(c, g)
    sub = sub_configuration(c, x_of_g(c, g))
    if not is_in_dm(sub, p):
        raise NotInDMSpace(f"{format_poly(p)} is not in D(X(g))")
    ev = BoxEvaluator(c)
    zero = Cyclo.rational(0, g.m)
    results = []
    for v in points:
        v = as_point(v)
        r = PointResult(v, lhs_continuous=zero, rhs_total=zero)
        try:
            r.lhs_discrete = twisted_semidiscrete_eval(c, g, p, v, ev)
            r.difference = r.lhs_discrete
            r.passed = r.difference.is_zero()
        except BoxSplineError as exc:
            r.error = f"{type(exc).__name__}: {exc}"
        results.append(r)
    return VerificationReport("twisted-corollary", c, results, {"g": str(g), "poly": format_poly(p)})


class CycloPoly:
    """``sum_j zeta_M^j p_j(v)`` with rational polynomials p_j."""

    def __init__(self, M: int, parts: dict[int, Poly]):
        self.M = M
        self.parts = {j % M: p for j, p in parts.items() if p}

    def is_zero(self) -> bool:
        """Zero as a polynomial with coefficients in Q(zeta_M)."""
        exps = {e for p in self.parts.values() for e in p.terms}
        for e in exps:
            acc = Cyclo.rational(0, self.M)
            for j, p in self.parts.items():
                acc = acc + Cyclo.zeta(self.M, j) * p.terms.get(e, Fraction(0))
            if not acc.is_zero():
                return False
        return True

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.parts.values()), default=-1)

    def __call__(self, v) -> Cyclo:
        acc = Cyclo.rational(0, self.M)
        for j, p in self.parts.items():
            x = p(v)
            if x:
                acc = acc + Cyclo.zeta(self.M, j) * x
        return acc

    def twisted_nabla(self, a: Sequence[int], g: CharacterG) -> CycloPoly:
        """``f(v) - g^{-a} f(v - a)``."""
        r = -sum(x * y for x, y in zip(g.G, a)) * self.M
        assert r.denominator == 1
        out: dict[int, Poly] = dict(self.parts)
        for j, p in self.parts.items():
            k = (j + int(r)) % self.M
            out[k] = out.get(k, Poly.zero(p.n)) - p.shift(a)
        return CycloPoly(self.M, out)

    def derivative(self, a: Sequence[int]) -> CycloPoly:
        return CycloPoly(self.M, {j: p.dir_derivative(a) for j, p in self.parts.items()})


def theorem2_rhs_1d(c: Configuration, g: CharacterG, h: Poly, v: Sequence) -> tuple[Cyclo, list[TheoremTerm]]:
    """Right side of the twisted identity on the line, where only s = 0 contributes."""
    if c.n != 1:
        raise UnsupportedDimension("the twisted identity is implemented on the line only")
    if g.is_zero():
        raise NotAToricVertex("g = 0 is the untwisted case; use the theorem1 check")
    v = as_point(v)
    if not is_regular(c, v):
        raise NonRegularPoint("identity evaluated off the regular set")
    M = g.m
    W = w_twisted_1d(c.N, g.G[0], [a[0] for a in c.X])
    base = CycloPoly(M, {0: h})
    total = Cyclo.rational(0, M)
    terms = []
    for k in range(c.N + 1):
        for I in combinations(range(c.N), k):
            J = tuple(i for i in range(c.N) if i not in I)
            q = base
            for i in J:
                q = q.twisted_nabla(c.X[i], g)
            for i in I:
                q = q.derivative(c.X[i])
            val = Cyclo.rational(0, M)
            if not q.is_zero():
                val = _convolve_cyclo(c, I, W, q, v, M) * (-1) ** k
            total = total + val
            terms.append(TheoremTerm(None, I, J, (-1) ** k, val))
    return total, terms


def _convolve_cyclo(c: Configuration, I, W, q: CycloPoly, v, M: int) -> Cyclo:
    """``(B(I) *_c (W q))(v)``, computed one power-basis coordinate at a time."""

    def F(u):
        return (W(u[0]) * q(u)).lift(M)

    width = len(Cyclo.rational(0, M).c)
    deg = W.order + max(q.degree, 0)
    out = []
    for j in range(width):
        fn = CallableFn(1, deg, c.normals, lambda u, j=j: F(u).c[j])
        out.append(box_convolve_eval(c, I, fn, v))
    return Cyclo(M, out)


def theorem2_check_1d(c: Configuration, g: CharacterG, h: Poly, points: Sequence[Sequence]) -> VerificationReport:
    if c.n != 1:
        raise UnsupportedDimension("the twisted identity is implemented on the line only")
    if g.is_zero():
        raise NotAToricVertex("g = 0 is the untwisted case; use the theorem1 check")
    ev = BoxEvaluator(c)
    zero = Cyclo.rational(0, g.m)
    results = []
    for v in points:
        v = as_point(v)
        r = PointResult(v, lhs_continuous=zero)
        try:
            r.lhs_discrete = twisted_semidiscrete_eval(c, g, h, v, ev)
            r.difference = r.lhs_discrete
            r.rhs_total, r.terms = theorem2_rhs_1d(c, g, h, v)
            r.passed = (r.difference - r.rhs_total).is_zero()
        except BoxSplineError as exc:
            r.error = f"{type(exc).__name__}: {exc}"
        results.append(r)
    return VerificationReport("theorem2-1d", c, results, {"g": str(g), "poly": format_poly(h)})
