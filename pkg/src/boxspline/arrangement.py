"""Configurations of lattice vectors and their hyperplane arrangements."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, floor
from typing import Sequence

from . import linalg
from .errors import NonRegularPoint, NonSpanningList, SegmentInsideArrangement, UnsupportedSize

MAX_DIM = 3
MAX_VECTORS = 8

RatVec = tuple[Fraction, ...]


def as_point(v: Sequence) -> RatVec:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple[int, ...]
    generators: tuple[int, ...]


@dataclass(frozen=True)
class AdmissibleSubspace:
    basis: tuple[int, ...]
    dim: int
    in_s: tuple[int, ...]
    minus_s: tuple[int, ...]
    quotient: linalg.QuotientMap = field(compare=False, repr=False)
    projected: tuple[tuple[int, ...], ...] = field(compare=False, repr=False)
    key: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class Configuration:
    """A finite list ``X`` of nonzero vectors of ``Z^n`` that spans ``R^n``."""

    n: int
    X: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        X = tuple(tuple(int(x) for x in a) for a in self.X)
        object.__setattr__(self, "X", X)
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if any(len(a) != self.n for a in X):
            raise ValueError(f"every vector must have {self.n} coordinates")
        if any(not any(a) for a in X):
            raise ValueError("configuration vectors must be nonzero")
        if self.n > MAX_DIM or len(X) > MAX_VECTORS:
            raise UnsupportedSize(f"supported envelope is n <= {MAX_DIM}, N <= {MAX_VECTORS}")
        if linalg.rank(X, self.n) < self.n:
            raise NonSpanningList("X does not span V")

    @classmethod
    def from_lists(cls, X: Sequence[Sequence[int]], n: int | None = None) -> Configuration:
        n = n if n is not None else len(X[0])
        return cls(n, tuple(tuple(a) for a in X))

    @property
    def N(self) -> int:
        return len(self.X)

    def vectors(self, idx: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.X[i] for i in idx]

    def rank_of(self, idx: Sequence[int]) -> int:
        return linalg.rank(self.vectors(idx), self.n) if idx else 0

    # -- arrangement data ---------------------------------------------------
    @cached_property
    def hyperplanes(self) -> tuple[Hyperplane, ...]:
        return tuple(admissible_hyperplanes(self))

    @cached_property
    def normals(self) -> tuple[tuple[int, ...], ...]:
        return tuple(h.normal for h in self.hyperplanes)

    @cached_property
    def subspaces(self) -> tuple[AdmissibleSubspace, ...]:
        return tuple(_enumerate_subspaces(self))

    @cached_property
    def bases(self) -> tuple[tuple[int, ...], ...]:
        """Index sets of the n-subsets of X that form a basis of V."""
        return tuple(
            sigma
            for sigma in combinations(range(self.N), self.n)
            if linalg.det(self.vectors(sigma)) != 0
        )


def admissible_hyperplanes(c: Configuration) -> list[Hyperplane]:
    if c.n == 1:
        return [Hyperplane((1,), ())]
    seen: dict[tuple[int, ...], Hyperplane] = {}
    for combo in combinations(range(c.N), c.n - 1):
        vecs = c.vectors(combo)
        if linalg.rank(vecs, c.n) != c.n - 1:
            continue
        eta = tuple(linalg.primitive_normal(vecs, c.n))
        if eta not in seen:
            gens = tuple(i for i, a in enumerate(c.X) if linalg.dot(eta, a) == 0)
            seen[eta] = Hyperplane(eta, gens)
    return list(seen.values())


def _span_key(vectors: Sequence[Sequence[int]], n: int) -> tuple:
    red, _, _ = linalg.rref(vectors, n) if vectors else ([], [], 0)
    return tuple(tuple(row) for row in red)


def _enumerate_subspaces(c: Configuration) -> list[AdmissibleSubspace]:
    found: dict[tuple, tuple[int, ...]] = {}
    for k in range(c.N + 1):
        for combo in combinations(range(c.N), k):
            key = _span_key(c.vectors(combo), c.n)
            if key not in found:
                found[key] = combo
    out = []
    for key, combo in found.items():
        basis: list[int] = []
        for i in combo:
            if c.rank_of(basis + [i]) > len(basis):
                basis.append(i)
        dim = len(basis)
        in_s = tuple(i for i in range(c.N) if c.rank_of(basis + [i]) == dim)
        minus_s = tuple(i for i in range(c.N) if i not in in_s)
        q = linalg.lattice_quotient(c.vectors(basis), c.n)
        projected = tuple(tuple(q.project(c.X[i])) for i in minus_s)
        out.append(AdmissibleSubspace(tuple(basis), dim, in_s, minus_s, q, projected, key))
    out.sort(key=lambda s: (s.dim, s.basis))
    return out


def admissible_subspaces(c: Configuration) -> tuple[list[AdmissibleSubspace], list[AdmissibleSubspace]]:
    """``(R, R')``: all admissible subspaces, and those other than V."""
    R = list(c.subspaces)
    return R, [s for s in R if s.dim < c.n]


def subspace_spanned(c: Configuration, idx: Sequence[int]) -> AdmissibleSubspace:
    key = _span_key(c.vectors(idx), c.n)
    for s in c.subspaces:
        if s.key == key:
            return s
    raise AssertionError("span of X-elements missing from the subspace list")


def cocircuits(c: Configuration) -> list[tuple[int, ...]]:
    return [tuple(i for i in range(c.N) if i not in h.generators) for h in c.hyperplanes]


def is_long(c: Configuration, Y: Sequence[int]) -> bool:
    rest = [i for i in range(c.N) if i not in set(Y)]
    return c.rank_of(rest) < c.n


def pairings(normals: Sequence[Sequence[int]], v: Sequence) -> list[Fraction]:
    return [sum(Fraction(e) * x for e, x in zip(eta, v)) for eta in normals]


def is_regular(c: Configuration, v: Sequence, normals: Sequence[Sequence[int]] | None = None) -> bool:
    if len(v) != c.n:
        raise ValueError("point dimension mismatch")
    return all(p.denominator != 1 for p in pairings(normals or c.normals, v))


def tope_key(c: Configuration, v: Sequence, normals: Sequence[Sequence[int]] | None = None) -> tuple[int, ...]:
    ps = pairings(normals or c.normals, v)
    if any(p.denominator == 1 for p in ps):
        raise NonRegularPoint(f"{[str(x) for x in v]} is not affine-regular")
    return tuple(floor(p) for p in ps)


def zonotope_contains(c: Configuration, v: Sequence) -> bool:
    v = as_point(v)
    for eta in c.normals:
        x = linalg.dot(eta, v)
        pr = [linalg.dot(eta, a) for a in c.X]
        if x > sum(p for p in pr if p > 0) or x < sum(p for p in pr if p < 0):
            return False
    return True


def zonotope_bounds(c: Configuration) -> list[tuple[int, int]]:
    """Coordinate-wise bounding box of Z(X)."""
    return [
        (sum(min(0, a[i]) for a in c.X), sum(max(0, a[i]) for a in c.X)) for i in range(c.n)
    ]


def zonotope_volume(c: Configuration) -> Fraction:
    return Fraction(sum(abs(linalg.det(c.vectors(s))) for s in c.bases))


def segment_breakpoints(
    c: Configuration,
    v: Sequence,
    a: Sequence,
    lo=0,
    hi=1,
    normals: Sequence[Sequence[int]] | None = None,
) -> list[Fraction]:
    """Parameters t in (lo, hi) where ``v - t a`` meets the affine arrangement."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    out = set()
    for eta in normals or c.normals:
        x0 = sum(Fraction(e) * x for e, x in zip(eta, v))
        s = sum(e * x for e, x in zip(eta, a))
        if s == 0:
            if x0.denominator == 1:
                raise SegmentInsideArrangement("segment lies inside an affine hyperplane")
            continue
        # x0 - t s = j  <=>  t = (x0 - j) / s
        ends = sorted((x0 - s * lo, x0 - s * hi))
        for j in range(ceil(ends[0]), floor(ends[1]) + 1):
            t = (x0 - j) / s
            if lo < t < hi:
                out.add(t)
    return sorted(out)


def random_regular_points(
    c: Configuration,
    count: int,
    seed: int = 0,
    lo: int = -1,
    hi: int = 2,
    denominator: int = 1009,
    normals: Sequence[Sequence[int]] | None = None,
) -> list[RatVec]:
    """Seeded rational points with a fixed prime denominator, non-regular draws rejected."""
    rng = random.Random(seed)
    pts: list[RatVec] = []
    while len(pts) < count:
        v = tuple(Fraction(rng.randint(lo * denominator, hi * denominator), denominator) for _ in range(c.n))
        if is_regular(c, v, normals):
            pts.append(v)
    return pts
