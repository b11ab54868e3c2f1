"""Exact arithmetic in cyclotomic fields Q(zeta_m)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import linalg


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # ascending coefficients, den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the m-th cyclotomic polynomial."""
    p = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            p = _polydiv_exact(p, list(cyclotomic_poly(d)))
    return tuple(p)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Cyclo:
    """Element of Q(zeta_m) as a vector in the power basis modulo Phi_m."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs):
        self.m = m
        phi = cyclotomic_poly(m)
        deg = len(phi) - 1
        c = [Fraction(x) for x in coeffs]
        # reduce modulo the monic Phi_m
        for i in range(len(c) - 1, deg - 1, -1):
            lead = c[i]
            if lead:
                for j, p in enumerate(phi):
                    c[i - deg + j] -= lead * p
        c = c[:deg] + [Fraction(0)] * (deg - len(c))
        self.c = tuple(c)

    @classmethod
    def rational(cls, x, m: int = 1) -> Cyclo:
        return cls(m, [x])

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> Cyclo:
        """``zeta_m ** k`` with ``zeta_m = exp(2 i pi / m)``."""
        k %= m
        return cls(m, [0] * k + [1])

    @classmethod
    def root_of_unity(cls, x: Fraction) -> Cyclo:
        """``exp(2 i pi x)`` for rational x."""
        x = Fraction(x)
        m = x.denominator
        return cls.zeta(m, x.numerator % m)

    def lift(self, M: int) -> Cyclo:
        if M == self.m:
            return self
        if M % self.m:
            raise ValueError("can only lift into a multiple of the conductor")
        step = M // self.m
        coeffs = [Fraction(0)] * (step * (len(self.c) - 1) + 1 if self.c else 1)
        for i, x in enumerate(self.c):
            coeffs[i * step] += x
        return Cyclo(M, coeffs)

    def _common(self, other) -> tuple[Cyclo, Cyclo]:
        if not isinstance(other, Cyclo):
            other = Cyclo(self.m, [other])
        M = _lcm(self.m, other.m)
        return self.lift(M), other.lift(M)

    def __add__(self, other) -> Cyclo:
        a, b = self._common(other)
        return Cyclo(a.m, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self) -> Cyclo:
        return Cyclo(self.m, [-x for x in self.c])

    def __sub__(self, other) -> Cyclo:
        a, b = self._common(other)
        return a + (-b)

    def __rsub__(self, other) -> Cyclo:
        return (-self) + other

    def __mul__(self, other) -> Cyclo:
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.m, [x * other for x in self.c])
        a, b = self._common(other)
        out = [Fraction(0)] * max(len(a.c) + len(b.c) - 1, 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    out[i + j] += x * y
        return Cyclo(a.m, out)

    __rmul__ = __mul__

    def inverse(self) -> Cyclo:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        deg = len(self.c)
        # columns: self * zeta^j
        cols = [(self * Cyclo.zeta(self.m, j)).c for j in range(deg)]
        mat = linalg.transpose(cols)
        x = linalg.solve(mat, [Fraction(int(i == 0)) for i in range(deg)])
        return Cyclo(self.m, x)

    def __truediv__(self, other) -> Cyclo:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        a, b = self._common(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> Cyclo:
        return Cyclo(self.m, [other]) * self.inverse()

    def __pow__(self, k: int) -> Cyclo:
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclo(self.m, [1])
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0] if self.c else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Cyclo)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self.c))

    def __complex__(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(complex(float(x)) * z**i for i, x in enumerate(self.c))

    def __repr__(self) -> str:
        return f"Cyclo({self.m}, {self})"

    def __str__(self) -> str:
        parts = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            base = str(x) if i == 0 else f"{x}*z{self.m}^{i}" if i > 1 else f"{x}*z{self.m}"
            parts.append(base)
        return " + ".join(parts) if parts else "0"
