"""Exact multivariate polynomials and the difference/derivative calculus.

Polynomials live on ``R^n`` with variables named ``v1 .. vn``.  Coefficients
are :class:`~fractions.Fraction` and zero coefficients are never stored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Mapping, Sequence

Exp = tuple[int, ...]


class Poly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exp, object] | None = None):
        self.n = n
        clean: dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match dimension {n}")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, n: int, c) -> Poly:
        return cls(n, {(0,) * n: c})

    @classmethod
    def zero(cls, n: int) -> Poly:
        return cls(n)

    @classmethod
    def var(cls, n: int, i: int) -> Poly:
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> Poly:
        n = len(coeffs)
        p = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            p[tuple(e)] = c
        return cls(n, p)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> Poly:
        return cls(len(exp), {tuple(exp): c})

    # -- basic protocol -------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Poly({self.n}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return self.degree <= 0

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        return Poly.const(self.n, other)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(self.n, {e: c * x for e, x in self.terms.items()})
        other = self._coerce(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- evaluation and calculus ---------------------------------------
    def __call__(self, v: Sequence) -> Fraction:
        return self.eval(v)

    def eval(self, v: Sequence) -> Fraction:
        if len(v) != self.n:
            raise ValueError(f"point of length {len(v)} for a polynomial in {self.n} variables")
        v = [Fraction(x) for x in v]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(v, e):
                if k:
                    term *= x**k
            total += term
        return total

    def partial(self, i: int) -> Poly:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.n, out)

    def dir_derivative(self, a: Sequence) -> Poly:
        """``d/de p(v + e a)`` at ``e = 0``."""
        if len(a) != self.n:
            raise ValueError("direction dimension mismatch")
        out = Poly.zero(self.n)
        for i, ai in enumerate(a):
            if ai:
                out = out + self.partial(i) * ai
        return out

    def compose_affine(self, rows: Sequence[Sequence], offset: Sequence) -> Poly:
        """Substitute ``v_i -> sum_j rows[i][j] w_j + offset[i]`` (result in ``len(rows[0])`` variables)."""
        m = len(rows[0]) if rows else 0
        subs = [Poly.linear(r, o) for r, o in zip(rows, offset)]
        powers: list[dict[int, Poly]] = [{0: Poly.const(m, 1)} for _ in range(self.n)]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * subs[i]
            return cache[k]

        out = Poly.zero(m)
        for e, c in self.terms.items():
            term = Poly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def shift(self, a: Sequence) -> Poly:
        """The polynomial ``v -> p(v - a)``."""
        if len(a) != self.n:
            raise ValueError("shift dimension mismatch")
        ident = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
        return self.compose_affine(ident, [-Fraction(x) for x in a])

    def nabla(self, a: Sequence) -> Poly:
        """Backward difference ``p(v) - p(v - a)``."""
        return self - self.shift(a)

    def restrict_line(self, v: Sequence, a: Sequence) -> Poly1D:
        """Univariate polynomial ``t -> p(v - t a)``."""
        sub = self.compose_affine([[-Fraction(x)] for x in a], list(v))
        coeffs = [Fraction(0)] * (max((e[0] for e in sub.terms), default=0) + 1)
        for e, c in sub.terms.items():
            coeffs[e[0]] = c
        return Poly1D(coeffs)


def integral_operator(p: Poly, a: Sequence) -> Poly:
    """``v -> int_0^1 p(v - t a) dt`` written as ``sum_j (-1)^j d_a^j p / (j+1)!``."""
    out = Poly.zero(p.n)
    term = p
    j = 0
    while term:
        out = out + term * Fraction((-1) ** j, factorial(j + 1))
        term = term.dir_derivative(a)
        j += 1
    return out


def todd_apply(vectors: Iterable[Sequence], p: Poly) -> Poly:
    """Apply ``prod_a (1 - exp(-d_a)) / d_a`` factor by factor."""
    for a in vectors:
        p = integral_operator(p, a)
    return p


def derivative_along(p: Poly, vectors: Iterable[Sequence]) -> Poly:
    for a in vectors:
        p = p.dir_derivative(a)
    return p


def nabla_along(p: Poly, vectors: Iterable[Sequence]) -> Poly:
    for a in vectors:
        p = p.nabla(a)
    return p


def monomials(n: int, max_degree: int) -> list[Exp]:
    """All exponents of total degree <= max_degree, graded then lexicographically descending."""
    exps = [e for e in product(range(max_degree + 1), repeat=n) if sum(e) <= max_degree]
    return sorted(exps, key=lambda e: (sum(e), [-x for x in e]))


# -- univariate -------------------------------------------------------------


class Poly1D:
    """Polynomial in one variable ``t`` stored as ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    def __repr__(self):
        return f"Poly1D({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if isinstance(other, Poly1D):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: Poly1D) -> Poly1D:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (n - len(other.coeffs))
        return Poly1D(x + y for x, y in zip(a, b))

    def __mul__(self, other) -> Poly1D:
        if not isinstance(other, Poly1D):
            return Poly1D(c * Fraction(other) for c in self.coeffs)
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly1D(out)

    __rmul__ = __mul__

    def derivative(self) -> Poly1D:
        return Poly1D(c * k for k, c in enumerate(self.coeffs) if k)

    def antiderivative(self) -> Poly1D:
        return Poly1D([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def compose_affine(self, scale, offset) -> Poly1D:
        """``t -> p(scale * t + offset)``."""
        scale, offset = Fraction(scale), Fraction(offset)
        out = Poly1D()
        for c in reversed(self.coeffs):
            out = out * Poly1D([offset, scale]) + Poly1D([c])
        return out

    def to_poly(self, covector: Sequence, offset=0) -> Poly:
        """The multivariate polynomial ``v -> p(<covector, v> + offset)``."""
        base = Poly.linear(list(covector), offset)
        n = len(covector)
        out = Poly.zero(n)
        for c in reversed(self.coeffs):
            out = out * base + c
        return out


def integrate_1d(p: Poly1D, lo, hi) -> Fraction:
    anti = p.antiderivative()
    return anti(Fraction(hi)) - anti(Fraction(lo))


def lagrange_1d(nodes: Sequence, values: Sequence) -> Poly1D:
    """Interpolating polynomial of degree < len(nodes) (Newton divided differences)."""
    if len(nodes) != len(values):
        raise ValueError("nodes and values differ in length")
    xs = [Fraction(x) for x in nodes]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate interpolation nodes")
    dd = [Fraction(y) for y in values]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    out = Poly1D()
    for i in range(n - 1, -1, -1):
        out = out * Poly1D([-xs[i], 1]) + Poly1D([dd[i]])
    return out


# -- text syntax ------------------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text: graded-lex descending monomials, reduced coefficients."""
    if not p.terms:
        return "0"
    names = [f"v{i + 1}" for i in range(p.n)]
    order = sorted(p.terms, key=lambda e: (-sum(e), [-x for x in e]))
    parts = []
    for k, e in enumerate(order):
        c = p.terms[e]
        mono = "*".join(
            names[i] if x == 1 else f"{names[i]}^{x}" for i, x in enumerate(e) if x
        )
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(v\d+|t)|(.))")


class PolySyntaxError(ValueError):
    pass


def parse_poly(text: str, n: int) -> Poly:
    """Parse ``+ - * ^``, parentheses, integers, ``p/q`` literals and ``v1..vn``.

    In dimension 1 the variable may also be written ``t``.
    """
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("var", name))
        elif op.strip():
            if op not in "+-*/^()":
                raise PolySyntaxError(f"unexpected character {op!r}")
            tokens.append(("op", op))
        pos = m.end()
    tokens.append(("end", ""))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expect(val):
        tok = take()
        if tok != ("op", val):
            raise PolySyntaxError(f"expected {val!r}, got {tok[1]!r}")

    def variable(name):
        if name == "t":
            if n != 1:
                raise PolySyntaxError("'t' is only allowed in dimension 1")
            return Poly.var(1, 0)
        idx = int(name[1:]) - 1
        if not 0 <= idx < n:
            raise PolySyntaxError(f"variable {name} out of range for dimension {n}")
        return Poly.var(n, idx)

    def expr():
        sign = 1
        if peek() in (("op", "+"), ("op", "-")):
            sign = -1 if take()[1] == "-" else 1
        acc = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = power()
        while True:
            if peek() == ("op", "*"):
                take()
                acc = acc * power()
            elif peek() == ("op", "/"):
                take()
                den = take()
                if den[0] != "num" or int(den[1]) == 0:
                    raise PolySyntaxError("division only by a nonzero integer literal")
                acc = acc * Fraction(1, int(den[1]))
            else:
                return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            tok = take()
            if tok[0] != "num":
                raise PolySyntaxError("exponent must be a nonnegative integer")
            base = base ** int(tok[1])
        return base

    def atom():
        tok = take()
        if tok[0] == "num":
            return Poly.const(n, int(tok[1]))
        if tok[0] == "var":
            return variable(tok[1])
        if tok == ("op", "("):
            inner = expr()
            expect(")")
            return inner
        if tok == ("op", "-"):
            return -power()
        raise PolySyntaxError(f"unexpected token {tok[1]!r}")

    result = expr()
    if peek()[0] != "end":
        raise PolySyntaxError(f"trailing input at {peek()[1]!r}")
    return result
