"""Bounded chain complexes of finite-rank free modules.

Conventions: ``d_i`` maps degree ``i`` to degree ``i - 1`` and is stored
as a ``rank(i-1) x rank(i)`` matrix acting on column vectors.  The shift
``(S^n X)_i = X_{i-n}`` multiplies every differential by ``(-1)^n``.  The
cone of ``f: K -> L`` is ``L_i + K_{i-1}`` with differential
``[[d_L, f], [0, -d_K]]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .linalg import Matrix, Solver
from .modules import FPModule, ModuleMap, subquotient
from .rings import RingSpec


class ComplexError(ValueError):
    """Invalid complex or chain map; ``degree`` locates the failing square."""

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


def _as_matrix(ring, m, rows, cols) -> Matrix:
    if isinstance(m, Matrix):
        mat = m
    else:
        mat = Matrix.from_rows(ring, m, ncols=cols if not m else None)
    if (mat.rows, mat.cols) != (rows, cols):
        raise ComplexError(f"expected a {rows}x{cols} matrix, got {mat.rows}x{mat.cols}")
    return mat


@dataclass(frozen=True)
class ChainComplex:
    ring: RingSpec
    min_degree: int
    ranks: tuple[int, ...]
    diffs: tuple[Matrix, ...]  # diffs[k] is d_{min_degree + k}

    def __post_init__(self):
        if len(self.diffs) != len(self.ranks):
            raise ComplexError("need one differential slot per degree")
        for k, d in enumerate(self.diffs):
            i = self.min_degree + k
            if (d.rows, d.cols) != (self.rank(i - 1), self.rank(i)):
                raise ComplexError(f"d_{i} has shape {d.rows}x{d.cols}", degree=i)
        for i in self.degrees():
            if i - 1 >= self.min_degree:
                if not (self.d(i - 1) @ self.d(i)).is_zero():
                    raise ComplexError(f"d_{i - 1} d_{i} != 0", degree=i)

    @classmethod
    def build(cls, ring: RingSpec, min_degree: int, ranks: Sequence[int],
              differentials: Mapping[int, object] | None = None) -> ChainComplex:
        """Complex from ranks and a ``{source degree: matrix}`` mapping."""
        ranks = tuple(int(r) for r in ranks)
        differentials = dict(differentials or {})
        for i in differentials:
            if not (min_degree < i <= min_degree + len(ranks) - 1):
                if _shape_is_empty(differentials[i]):
                    continue
                raise ComplexError(f"differential d_{i} outside the support", degree=i)

        def rank(i):
            k = i - min_degree
            return ranks[k] if 0 <= k < len(ranks) else 0

        diffs = []
        for k in range(len(ranks)):
            i = min_degree + k
            if i in differentials:
                diffs.append(_as_matrix(ring, differentials[i], rank(i - 1), rank(i)))
            else:
                diffs.append(Matrix.zeros(ring, rank(i - 1), rank(i)))
        return cls(ring, min_degree, ranks, tuple(diffs))

    @classmethod
    def zero(cls, ring: RingSpec) -> ChainComplex:
        return cls(ring, 0, (), ())

    @classmethod
    def basic(cls, ring: RingSpec, degree: int = 0, rank: int = 1) -> ChainComplex:
        """``R^rank`` concentrated in one degree (a shift of the ring)."""
        return cls.build(ring, degree, [rank])

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.ranks) - 1

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def rank(self, i: int) -> int:
        k = i - self.min_degree
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def d(self, i: int) -> Matrix:
        k = i - self.min_degree
        if 0 <= k < len(self.ranks):
            return self.diffs[k]
        return Matrix.zeros(self.ring, self.rank(i - 1), self.rank(i))

    def is_zero(self) -> bool:
        return not any(self.ranks)

    def shift(self, n: int) -> ChainComplex:
        return shift(self, n)

    def to_record(self) -> dict:
        return {
            "min_degree": self.min_degree,
            "ranks": list(self.ranks),
            "differentials": {str(i): _entries_to_json(self.d(i)) for i in self.degrees()
                              if i > self.min_degree and self.rank(i) and self.rank(i - 1)},
        }

    @classmethod
    def from_record(cls, ring: RingSpec, rec: Mapping) -> ChainComplex:
        diffs = {int(k): v for k, v in rec.get("differentials", {}).items()}
        return cls.build(ring, int(rec.get("min_degree", 0)), rec["ranks"], diffs)

    def __repr__(self):
        return f"ChainComplex({self.ring}, min_degree={self.min_degree}, ranks={list(self.ranks)})"


def _shape_is_empty(m) -> bool:
    if isinstance(m, Matrix):
        return m.rows == 0 or m.cols == 0
    return not m or not m[0]


def _entries_to_json(m: Matrix) -> list:
    if m.ring.is_product:
        return [[list(x) for x in r] for r in m.data]
    return m.tolist()


def shift(X: ChainComplex, n: int) -> ChainComplex:
    """``S^n X`` with ``(S^n X)_i = X_{i-n}`` and differential ``(-1)^n d``."""
    if n % 2:
        diffs = tuple(-d for d in X.diffs)
    else:
        diffs = X.diffs
    return ChainComplex(X.ring, X.min_degree + n, X.ranks, diffs)


# --------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """Components ``f_i: source_i -> target_{i + degree_shift}``.

    Validity: ``f_{i-1} d^source_i = d^target_{i+n} f_i`` for all ``i``.
    """

    source: ChainComplex
    target: ChainComplex
    components: tuple[Matrix, ...]  # one per source degree
    degree_shift: int = 0

    def __post_init__(self):
        src, tgt, n = self.source, self.target, self.degree_shift
        if src.ring != tgt.ring:
            raise ComplexError("chain map between complexes over different rings")
        if len(self.components) != len(src.ranks):
            raise ComplexError("need one component per source degree")
        for i, f in zip(src.degrees(), self.components):
            if (f.rows, f.cols) != (tgt.rank(i + n), src.rank(i)):
                raise ComplexError(f"component f_{i} has shape {f.rows}x{f.cols}", degree=i)
        for i in range(src.min_degree, src.max_degree + 2):
            lhs = self.component(i - 1) @ src.d(i)
            rhs = tgt.d(i + n) @ self.component(i)
            if lhs != rhs:
                raise ComplexError(f"chain map square at degree {i} does not commute", degree=i)

    @classmethod
    def build(cls, source: ChainComplex, target: ChainComplex,
              components: Mapping[int, object] | None = None, degree_shift: int = 0) -> ChainMap:
        components = dict(components or {})
        ring = source.ring
        out = []
        for i in components:
            if source.rank(i) == 0 or target.rank(i + degree_shift) == 0:
                if not _shape_is_empty(components[i]) and i not in source.degrees():
                    raise ComplexError(f"component f_{i} outside the support", degree=i)
        for i in source.degrees():
            rows, cols = target.rank(i + degree_shift), source.rank(i)
            if i in components:
                out.append(_as_matrix(ring, components[i], rows, cols))
            else:
                out.append(Matrix.zeros(ring, rows, cols))
        return cls(source, target, tuple(out), degree_shift)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> ChainMap:
        return cls.build(source, target)

    @classmethod
    def identity(cls, X: ChainComplex) -> ChainMap:
        return cls(X, X, tuple(Matrix.identity(X.ring, r) for r in X.ranks))

    def component(self, i: int) -> Matrix:
        k = i - self.source.min_degree
        if 0 <= k < len(self.components):
            return self.components[k]
        return Matrix.zeros(self.source.ring, self.target.rank(i + self.degree_shift), self.source.rank(i))

    def compose(self, other: ChainMap) -> ChainMap:
        """``self`` after ``other``."""
        n = other.degree_shift
        comps = tuple(self.component(i + n) @ other.component(i) for i in other.source.degrees())
        return ChainMap(other.source, self.target, comps, n + self.degree_shift)

    def __add__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        tuple(a + b for a, b in zip(self.components, other.components)), self.degree_shift)

    def __sub__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        tuple(a - b for a, b in zip(self.components, other.components)), self.degree_shift)

    def scale(self, r) -> ChainMap:
        return ChainMap(self.source, self.target, tuple(a.scale(r) for a in self.components), self.degree_shift)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def component_record(self) -> dict:
        return {str(i): _entries_to_json(self.component(i)) for i in self.source.degrees()
                if self.source.rank(i) and self.target.rank(i + self.degree_shift)}


def shift_map(f: ChainMap, n: int) -> ChainMap:
    """``S^n f: S^n source -> S^n target``."""
    return ChainMap(shift(f.source, n), shift(f.target, n), f.components, f.degree_shift)


@dataclass(frozen=True)
class Triangle:
    """``K --f--> L --g--> M --h--> S K``."""

    K: ChainComplex
    L: ChainComplex
    M: ChainComplex
    f: ChainMap
    g: ChainMap
    h: ChainMap


def mapping_cone(f: ChainMap) -> tuple[ChainComplex, Triangle]:
    if f.degree_shift:
        raise ComplexError("mapping cone needs a degree-0 chain map")
    K, L = f.source, f.target
    ring = K.ring
    if K.is_zero() and L.is_zero():
        lo, hi = 0, -1
    elif K.is_zero():
        lo, hi = L.min_degree, L.max_degree
    elif L.is_zero():
        lo, hi = K.min_degree + 1, K.max_degree + 1
    else:
        lo = min(L.min_degree, K.min_degree + 1)
        hi = max(L.max_degree, K.max_degree + 1)
    ranks = [L.rank(i) + K.rank(i - 1) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi + 1):
        top = Matrix.hstack(ring, L.rank(i - 1), [L.d(i), f.component(i - 1)])
        bottom = Matrix.hstack(ring, K.rank(i - 2), [Matrix.zeros(ring, K.rank(i - 2), L.rank(i)), -K.d(i - 1)])
        diffs.append(Matrix.vstack(ring, L.rank(i) + K.rank(i - 1), [top, bottom]))
    C = ChainComplex(ring, lo, tuple(ranks), tuple(diffs))

    inc = {}
    proj = {}
    for i in range(lo, hi + 1):
        lr, kr = L.rank(i), K.rank(i - 1)
        inc[i] = Matrix.vstack(ring, lr, [Matrix.identity(ring, lr), Matrix.zeros(ring, kr, lr)])
        proj[i] = Matrix.hstack(ring, kr, [Matrix.zeros(ring, kr, lr), Matrix.identity(ring, kr)])
    g = ChainMap.build(L, C, {i: inc[i] for i in L.degrees()})
    h = ChainMap.build(C, shift(K, 1), proj)
    return C, Triangle(K, L, C, f, g, h)


# --------------------------------------------------------------------------
# (co)homology


@lru_cache(maxsize=4096)
def homology(X: ChainComplex, i: int) -> FPModule:
    """``H_i(X)``; the embedding columns are the generating cycles in ``X_i``."""
    ring = X.ring
    cycles = Solver(X.d(i)).kernel() if X.rank(i - 1) else Matrix.identity(ring, X.rank(i))
    return subquotient(cycles, X.d(i + 1))


@lru_cache(maxsize=4096)
def cohomology_vs_R(K: ChainComplex, i: int) -> FPModule:
    """``H^i(K) = [K, S^i R]`` from the dual complex.

    Embedding columns are the generating cocycles ``phi`` (as column vectors
    of length ``rank K_i``), with ``phi^T d_{i+1} = 0``.
    """
    ring = K.ring
    dT = K.d(i + 1).T
    cocycles = Solver(dT).kernel() if K.rank(i + 1) else Matrix.identity(ring, K.rank(i))
    return subquotient(cocycles, K.d(i).T)


cohomology = cohomology_vs_R


def induced_homology_map(f: ChainMap, i: int) -> ModuleMap:
    if f.degree_shift:
        raise ComplexError("induced maps need a degree-0 chain map")
    src = homology(f.source, i)
    tgt = homology(f.target, i)
    fi = f.component(i)
    images = []
    for z in src.embedding.columns():
        x = tgt.express(fi.apply(z))
        images.append(x.coords)
    return ModuleMap.from_images(src, tgt, images)


def induced_cohomology_map(u: ChainMap, i: int) -> ModuleMap:
    """``H^i(target) -> H^i(source)``, ``phi |-> phi u_i``."""
    if u.degree_shift:
        raise ComplexError("induced maps need a degree-0 chain map")
    src = cohomology_vs_R(u.target, i)
    tgt = cohomology_vs_R(u.source, i)
    uT = u.component(i).T
    images = [tgt.express(uT.apply(phi)).coords for phi in src.embedding.columns()]
    return ModuleMap.from_images(src, tgt, images)


def support_window(*complexes: ChainComplex) -> range:
    """Degrees ``[min - 1, max + 1]`` over the given complexes."""
    nonzero = [X for X in complexes if X.ranks]
    if not nonzero:
        return range(0)
    lo = min(X.min_degree for X in nonzero) - 1
    hi = max(X.max_degree for X in nonzero) + 1
    return range(lo, hi + 1)


# --------------------------------------------------------------------------
# random generation


def random_complex(ring: RingSpec, seed, max_length: int, max_rank: int,
                   entry_bound: int = 2, nonunit_bias: float = 0.5, spread: int = 1) -> ChainComplex:
    """Deterministic random complex built as an iterated mapping cone.

    Starting from a free module in the bottom degree, each step cones off a
    random map from a shifted free module into the current cycles, which
    adds one new top degree.
    """
    if max_length < 1 or max_rank < 1:
        raise ValueError("max_length and max_rank must be >= 1")
    rng = random.Random(f"complex:{seed}")
    length = rng.randint(1, max_length)
    base = rng.randint(-spread, spread)
    X = ChainComplex.basic(ring, base, rng.randint(1, max_rank))
    for top in range(base + 1, base + length):
        r = rng.randint(0, max_rank)
        below = top - 1
        cycles = Solver(X.d(below)).kernel() if X.rank(below - 1) else Matrix.identity(ring, X.rank(below))
        coeffs = Matrix.from_rows(
            ring, [[ring.random_element(rng, entry_bound, nonunit_bias) for _ in range(r)] for _ in range(cycles.cols)], ncols=r)
        attach = cycles @ coeffs
        sphere = ChainComplex.basic(ring, below, r)
        X, _ = mapping_cone(ChainMap.build(sphere, X, {below: attach}))
    return X
