"""Hom-sets in the derived category, null-homotopies and ghost maps.

For complexes of free modules, ``[K, X]`` is the group of chain maps modulo
null-homotopic ones.  Both are solutions of linear systems in the entries
of the component matrices, so ``[K, X]`` comes out as a subquotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .complexes import ChainComplex, ChainMap, homology, induced_homology_map, shift, support_window
from .linalg import Matrix, Solver
from .modules import FPModule, ModuleElement, ModuleError, ModuleMap, direct_sum, subquotient


class _HomSystem:
    """Vectorised chain maps ``K -> Y`` (row-major blocks, ascending degree)."""

    def __init__(self, K: ChainComplex, Y: ChainComplex):
        if K.ring != Y.ring:
            raise ModuleError(f"ring mismatch: {K.ring} vs {Y.ring}")
        self.K, self.Y = K, Y
        ring = K.ring
        self.degrees = [i for i in K.degrees() if K.rank(i) and Y.rank(i)]
        self.offset = {}
        pos = 0
        for i in self.degrees:
            self.offset[i] = pos
            pos += Y.rank(i) * K.rank(i)
        self.size = pos

        # commutation: f_{i-1} dK_i - dY_i f_i = 0
        z = ring.zero
        eq_blocks = []
        for i in range(K.min_degree, K.max_degree + 2):
            rows = Y.rank(i - 1) * K.rank(i)
            if not rows:
                continue
            block = [[z] * self.size for _ in range(rows)]
            if i - 1 in self.offset:
                self._place(block, i - 1, Matrix.identity(ring, Y.rank(i - 1)).kron(K.d(i).T), 1)
            if i in self.offset:
                self._place(block, i, Y.d(i).kron(Matrix.identity(ring, K.rank(i))), -1)
            eq_blocks.extend(block)
        self.commutation = Matrix.from_rows(ring, eq_blocks, ncols=self.size)

        # homotopies h_i: K_i -> Y_{i+1};  f_i = dY_{i+1} h_i + h_{i-1} dK_i
        cols = []
        for i in K.degrees():
            hr, hc = Y.rank(i + 1), K.rank(i)
            if not hr * hc:
                continue
            block = [[z] * (hr * hc) for _ in range(self.size)]
            if i in self.offset:
                self._place_rows(block, i, Y.d(i + 1).kron(Matrix.identity(ring, hc)))
            if i + 1 in self.offset:
                self._place_rows(block, i + 1, Matrix.identity(ring, hr).kron(K.d(i + 1).T))
            for j in range(hr * hc):
                cols.append([row[j] for row in block])
        self.homotopy = Matrix.from_columns(ring, cols, self.size)

    def _place(self, block, i, mat, sign):
        off = self.offset[i]
        for r, row in enumerate(mat.data):
            target = block[r]
            for c, v in enumerate(row):
                if v:
                    target[off + c] = v if sign > 0 else self.K.ring.neg(v)

    def _place_rows(self, block, i, mat):
        off = self.offset[i]
        for r, row in enumerate(mat.data):
            block[off + r] = [self.K.ring.add(a, b) for a, b in zip(block[off + r], row)]

    def vectorize(self, f: ChainMap) -> tuple:
        out = []
        for i in self.degrees:
            for row in f.component(i).data:
                out.extend(row)
        return tuple(out)

    def unvectorize(self, v) -> ChainMap:
        comps = {}
        for i in self.degrees:
            r, c = self.Y.rank(i), self.K.rank(i)
            off = self.offset[i]
            comps[i] = Matrix.from_rows(self.K.ring, [v[off + a * c: off + (a + 1) * c] for a in range(r)], ncols=c)
        return ChainMap.build(self.K, self.Y, comps)


@lru_cache(maxsize=1024)
def _hom_system(K: ChainComplex, Y: ChainComplex) -> _HomSystem:
    return _HomSystem(K, Y)


@dataclass(frozen=True, eq=False)
class HomGroup:
    """``[K, S^n X]``; generator ``j`` is represented by ``representative(j)``."""

    source: ChainComplex
    target: ChainComplex
    degree: int
    module: FPModule
    _system: _HomSystem

    @property
    def shifted_target(self) -> ChainComplex:
        return self._system.Y

    def representative(self, j: int) -> ChainMap:
        return self._system.unvectorize(self.module.embedding.column(j))

    @cached_property
    def representatives(self) -> list[ChainMap]:
        return [self.representative(j) for j in range(self.module.ngens)]

    def class_of(self, f: ChainMap) -> HomotopyClass:
        if f.source != self.source or f.target != self.shifted_target or f.degree_shift:
            raise ModuleError("chain map does not belong to this hom-set")
        return HomotopyClass(self, self.module.express(self._system.vectorize(f)))

    def to_map(self, x: ModuleElement) -> ChainMap:
        return self._system.unvectorize(self.module.lift(x))

    @property
    def invariants(self):
        return self.module.invariants


@dataclass(frozen=True, eq=False)
class HomotopyClass:
    hom_group: HomGroup
    coords: ModuleElement

    def __eq__(self, other):
        if not isinstance(other, HomotopyClass):
            return NotImplemented
        return self.hom_group is other.hom_group and self.coords == other.coords

    __hash__ = None

    def is_zero(self) -> bool:
        return self.coords.is_zero()

    def representative(self) -> ChainMap:
        return self.hom_group.to_map(self.coords)


@lru_cache(maxsize=1024)
def derived_hom(K: ChainComplex, X: ChainComplex, n: int = 0) -> HomGroup:
    """``[K, S^n X]_0`` as a module of homotopy classes."""
    Y = shift(X, n)
    system = _hom_system(K, Y)
    cycles = Solver(system.commutation).kernel()
    module = subquotient(cycles, system.homotopy)
    return HomGroup(K, X, n, module, system)


def is_nullhomotopic(f: ChainMap) -> bool:
    if f.degree_shift:
        raise ModuleError("null-homotopy test needs a degree-0 chain map")
    system = _hom_system(f.source, f.target)
    if not system.size:
        return True
    return _homotopy_solver(f.source, f.target).contains(system.vectorize(f))


@lru_cache(maxsize=1024)
def _homotopy_solver(K, Y) -> Solver:
    return Solver(_hom_system(K, Y).homotopy)


def induces_zero_on_homology(f: ChainMap) -> bool:
    """``F f = 0``: every induced map ``H_i(f)`` vanishes."""
    window = support_window(f.source, f.target)
    return all(induced_homology_map(f, i).is_zero() for i in window)


def is_ghost(f: ChainMap) -> bool:
    """Nonzero in the derived category yet zero on all homology."""
    return induces_zero_on_homology(f) and not is_nullhomotopic(f)


def homology_evaluation(K: ChainComplex, X: ChainComplex) -> ModuleMap:
    """``[K, X] -> (+)_i Hom(H_i K, H_i X)``.

    A homomorphism out of ``H_i K`` is recorded by its values on the
    generators of ``H_i K``, so the target is a sum of copies of ``H_i X``.
    """
    hom = derived_hom(K, X, 0)
    ring = K.ring
    pieces = []
    blocks = []
    for i in support_window(K, X):
        HK, HX = homology(K, i), homology(X, i)
        if not HK.ngens or not HX.ngens:
            continue
        pieces.extend([HX] * HK.ngens)
        blocks.append((i, HK, HX))
    target = direct_sum(ring, pieces)
    images = []
    for f in hom.representatives:
        col = []
        for i, HK, HX in blocks:
            fi = f.component(i)
            for z in HK.embedding.columns():
                col.extend(HX.express(fi.apply(z)).coords)
        images.append(col)
    return ModuleMap.from_images(hom.module, target, images)


def ghost_group(K: ChainComplex, X: ChainComplex) -> FPModule:
    """Ghost classes ``K -> X`` as a submodule of ``[K, X]``.

    The embedding columns give the generators in ``derived_hom(K, X)``
    coordinates.
    """
    return homology_evaluation(K, X).kernel()


def ghost_witnesses(K: ChainComplex, X: ChainComplex) -> list[ChainMap]:
    """Representatives of the ghost-group generators that are themselves ghosts."""
    hom = derived_hom(K, X, 0)
    G = ghost_group(K, X)
    out = []
    for col in G.embedding.columns():
        x = ModuleElement(hom.module, col)
        if not x.is_zero():
            out.append(hom.to_map(x))
    return out
