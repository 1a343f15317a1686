"""Finitely presented modules ``R^m / (column span of a relation matrix)``."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .linalg import DimensionError, Matrix, Solver, invariant_factors
from .rings import RingSpec, factorize


class ModuleError(ValueError):
    pass


class ContainmentError(ModuleError):
    pass


@dataclass(frozen=True)
class ModuleInvariants:
    """Canonical isomorphism type of a finitely presented module.

    Over Z: free rank and torsion coefficients (a divisibility chain).
    Over Z/n: the cyclic factor orders, as an invariant-factor chain.
    Over a prime field: ``(dim,)``; over a product of prime fields, the
    dimension of each factor.
    """

    ring: RingSpec
    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    factors: tuple[int, ...] = ()

    @property
    def order(self) -> int | None:
        """Number of elements, or ``None`` when infinite."""
        kind = self.ring.kind
        if kind == "Z":
            if self.free_rank:
                return None
            out = 1
            for d in self.torsion:
                out *= d
            return out
        if kind == "Zmod":
            out = 1
            for d in self.factors:
                out *= d
            return out
        if kind == "Fp":
            return self.ring.modulus ** self.factors[0]
        out = 1
        for p, d in zip(self.ring.primes, self.factors):
            out *= p**d
        return out

    @property
    def is_zero(self) -> bool:
        return self.order == 1

    def to_record(self) -> dict:
        if self.ring.kind == "Z":
            return {"free_rank": self.free_rank, "torsion": list(self.torsion)}
        return {"factors": list(self.factors)}


@dataclass(frozen=True)
class FPModule:
    """``R^ngens`` modulo the column span of ``relations``.

    ``embedding``, when present, records generator provenance: column ``j`` is
    the ambient vector that generator ``j`` stands for.
    """

    ring: RingSpec
    ngens: int
    relations: Matrix
    embedding: Matrix | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.relations.rows != self.ngens:
            raise ModuleError(f"relation matrix has {self.relations.rows} rows for {self.ngens} generators")
        if self.relations.ring != self.ring:
            raise ModuleError("relation matrix over the wrong ring")
        if self.embedding is not None and self.embedding.cols != self.ngens:
            raise ModuleError("embedding must have one column per generator")

    # constructors -------------------------------------------------------

    @classmethod
    def free(cls, ring: RingSpec, rank: int) -> FPModule:
        return cls(ring, rank, Matrix.zeros(ring, rank, 0))

    @classmethod
    def zero(cls, ring: RingSpec) -> FPModule:
        return cls.free(ring, 0)

    @classmethod
    def cokernel(cls, A: Matrix) -> FPModule:
        return cls(A.ring, A.rows, A)

    @classmethod
    def cyclic(cls, ring: RingSpec, d) -> FPModule:
        """``R / dR``."""
        return cls(ring, 1, Matrix.from_rows(ring, [[d]]))

    # elements -----------------------------------------------------------

    @cached_property
    def _rel_solver(self) -> Solver:
        return Solver(self.relations)

    @cached_property
    def _embedding_solver(self) -> Solver:
        if self.embedding is None:
            raise ModuleError("module has no generator provenance")
        return Solver(self.embedding)

    def element(self, coords: Sequence) -> ModuleElement:
        if len(coords) != self.ngens:
            raise DimensionError(f"{len(coords)} coordinates for {self.ngens} generators")
        return ModuleElement(self, tuple(self.ring(c) for c in coords))

    def zero_element(self) -> ModuleElement:
        return ModuleElement(self, (self.ring.zero,) * self.ngens)

    def gen(self, j: int) -> ModuleElement:
        z, o = self.ring.zero, self.ring.one
        return ModuleElement(self, tuple(o if i == j else z for i in range(self.ngens)))

    def gens(self) -> list[ModuleElement]:
        return [self.gen(j) for j in range(self.ngens)]

    def is_zero_vector(self, v: Sequence) -> bool:
        """Whether the coordinate vector ``v`` represents zero."""
        if not self.ngens:
            return True
        return self._rel_solver.contains(v)

    def express(self, v: Sequence) -> ModuleElement:
        """Element whose lift is the ambient vector ``v`` (which must lie in the span)."""
        x = self._embedding_solver.solve(v)
        if x is None:
            raise ContainmentError("vector is not in the span of the generators")
        return ModuleElement(self, x)

    def lift(self, x: ModuleElement) -> tuple:
        if self.embedding is None:
            raise ModuleError("module has no generator provenance")
        return self.embedding.apply(x.coords)

    # structure ----------------------------------------------------------

    @cached_property
    def invariants(self) -> ModuleInvariants:
        return invariants(self)

    @property
    def order(self) -> int | None:
        return self.invariants.order

    def is_zero(self) -> bool:
        return self.invariants.is_zero

    def is_flat(self) -> bool:
        return is_flat(self)

    def additive_presentation(self) -> FPModule:
        """This module as an abelian group, presented over Z.

        Generator ``k * g + c`` is ``a_c * x_k`` where ``a_c`` runs over the
        ring's additive generators.
        """
        ring = self.ring
        Z = RingSpec.integers()
        adds = ring.additive_generators
        g = len(adds)
        orders = ring.additive_orders()
        size = self.ngens * g
        cols = []
        for k in range(self.ngens):
            for c, o in enumerate(orders):
                if o:
                    v = [0] * size
                    v[k * g + c] = o
                    cols.append(v)
        for v in self.relations.columns():
            for a in adds:
                col = [0] * size
                for k, vk in enumerate(v):
                    for c, n in enumerate(ring.additive_coords(ring.mul(a, vk))):
                        col[k * g + c] += n
                cols.append(col)
        return FPModule(Z, size, Matrix.from_columns(Z, cols, size))

    def additive_coords(self, coords: Sequence) -> tuple[int, ...]:
        """Integer coordinates in :meth:`additive_presentation` of an element."""
        ring = self.ring
        out = []
        for vk in coords:
            out.extend(ring.additive_coords(ring(vk)))
        return tuple(out)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    module: FPModule
    coords: tuple

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        if self.module != other.module:
            return False
        return self.module.is_zero_vector(tuple(map(self.module.ring.sub, self.coords, other.coords)))

    __hash__ = None

    def is_zero(self) -> bool:
        return self.module.is_zero_vector(self.coords)

    def __add__(self, other: ModuleElement) -> ModuleElement:
        return ModuleElement(self.module, tuple(map(self.module.ring.add, self.coords, other.coords)))

    def __sub__(self, other: ModuleElement) -> ModuleElement:
        return ModuleElement(self.module, tuple(map(self.module.ring.sub, self.coords, other.coords)))

    def __neg__(self) -> ModuleElement:
        return ModuleElement(self.module, tuple(map(self.module.ring.neg, self.coords)))

    def __rmul__(self, r) -> ModuleElement:
        ring = self.module.ring
        r = ring(r)
        return ModuleElement(self.module, tuple(ring.mul(r, c) for c in self.coords))

    def __repr__(self):
        return f"ModuleElement({list(self.coords)})"


@dataclass(frozen=True)
class ModuleMap:
    """R-linear map given on generators: column ``j`` is the image of generator ``j``."""

    source: FPModule
    target: FPModule
    matrix: Matrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.ngens, self.source.ngens):
            raise DimensionError(
                f"map matrix is {self.matrix.rows}x{self.matrix.cols}, "
                f"expected {self.target.ngens}x{self.source.ngens}"
            )

    @classmethod
    def from_images(cls, source: FPModule, target: FPModule, images: Sequence[Sequence]) -> ModuleMap:
        return cls(source, target, Matrix.from_columns(target.ring, images, target.ngens))

    @classmethod
    def identity(cls, M: FPModule) -> ModuleMap:
        return cls(M, M, Matrix.identity(M.ring, M.ngens))

    @classmethod
    def zero(cls, source: FPModule, target: FPModule) -> ModuleMap:
        return cls(source, target, Matrix.zeros(source.ring, target.ngens, source.ngens))

    def __call__(self, x: ModuleElement) -> ModuleElement:
        return ModuleElement(self.target, self.matrix.apply(x.coords))

    def compose(self, other: ModuleMap) -> ModuleMap:
        """``self`` after ``other``."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def is_well_defined(self) -> bool:
        image = self.matrix @ self.source.relations
        return all(self.target.is_zero_vector(c) for c in image.columns())

    def is_zero(self) -> bool:
        return all(self.target.is_zero_vector(c) for c in self.matrix.columns())

    @cached_property
    def _image_solver(self) -> Solver:
        return Solver(Matrix.hstack(self.target.ring, self.target.ngens, [self.matrix, self.target.relations]))

    def image_contains(self, v: Sequence) -> bool:
        """Whether the target coordinate vector ``v`` lies in the image."""
        if not self.target.ngens:
            return True
        return self._image_solver.contains(v)

    def preimage(self, v: Sequence) -> ModuleElement | None:
        if not self.target.ngens:
            return self.source.zero_element()
        x = self._image_solver.solve(v)
        if x is None:
            return None
        return ModuleElement(self.source, x[: self.source.ngens])

    def kernel_generators(self) -> Matrix:
        """Source coordinate vectors generating the kernel (modulo source relations)."""
        m = self.source.ngens
        ring = self.source.ring
        if not self.target.ngens:
            return Matrix.identity(ring, m)
        ker = self._image_solver.kernel_columns
        return Matrix.from_columns(ring, [c[:m] for c in ker], m)

    def kernel(self) -> FPModule:
        """The kernel as a module; its embedding gives generators in source coordinates."""
        ring = self.source.ring
        m = self.source.ngens
        xs = self.kernel_generators()
        span = Matrix.hstack(ring, m, [xs, self.source.relations])
        return subquotient(span, self.source.relations)

    def image(self) -> FPModule:
        """The image as a submodule of the target (embedding in target coordinates)."""
        ring = self.target.ring
        n = self.target.ngens
        span = Matrix.hstack(ring, n, [self.matrix, self.target.relations])
        return subquotient(span, self.target.relations)

    def cokernel(self) -> FPModule:
        ring = self.target.ring
        return FPModule(ring, self.target.ngens,
                        Matrix.hstack(ring, self.target.ngens, [self.matrix, self.target.relations]))

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def is_surjective(self) -> bool:
        n = self.target.ngens
        return all(self.image_contains(self.target.gen(j).coords) for j in range(n))

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()


def is_exact(alpha: ModuleMap, beta: ModuleMap) -> bool:
    """Exactness of ``A --alpha--> B --beta--> C`` at ``B``."""
    if alpha.target != beta.source:
        raise ModuleError("maps are not composable")
    if not beta.compose(alpha).is_zero():
        return False
    return all(alpha.image_contains(c) for c in beta.kernel_generators().columns())


# --------------------------------------------------------------------------
# constructions


def subquotient(Z: Matrix, B: Matrix) -> FPModule:
    """``span(Z) / span(B)``, generated by the columns of ``Z``."""
    if Z.rows != B.rows:
        raise DimensionError("Z and B live in different ambient modules")
    ring = Z.ring
    S = Solver(Z)
    cols = []
    for j, b in enumerate(B.columns()):
        y = S.solve(b)
        if y is None:
            raise ContainmentError(f"column {j} of B is not in the span of Z")
        cols.append(y)
    cols.extend(S.kernel_columns)
    mod = FPModule(ring, Z.cols, Matrix.from_columns(ring, cols, Z.cols), embedding=Z)
    mod.__dict__["_embedding_solver"] = S
    return mod


def direct_sum(ring: RingSpec, modules: Sequence[FPModule]) -> FPModule:
    modules = list(modules)
    rel = Matrix.block_diag(ring, [M.relations for M in modules])
    emb = None
    if modules and all(M.embedding is not None for M in modules):
        emb = Matrix.block_diag(ring, [M.embedding for M in modules])
    return FPModule(ring, sum(M.ngens for M in modules), rel, embedding=emb)


def _same_ring(M: FPModule, N: FPModule):
    if M.ring != N.ring:
        raise ModuleError(f"ring mismatch: {M.ring} vs {N.ring}")


def tensor_product(M: FPModule, N: FPModule) -> FPModule:
    """``M (x)_R N``; generator ``i * N.ngens + k`` is ``x_i (x) y_k``."""
    _same_ring(M, N)
    ring = M.ring
    m, n = M.ngens, N.ngens
    left = M.relations.kron(Matrix.identity(ring, n))
    right = Matrix.identity(ring, m).kron(N.relations)
    return FPModule(ring, m * n, Matrix.hstack(ring, m * n, [left, right]))


def tensor_pair(T: FPModule, x: ModuleElement, y: ModuleElement) -> ModuleElement:
    """The element ``x (x) y`` of ``T = tensor_product(x.module, y.module)``."""
    ring = T.ring
    coords = tuple(ring.mul(a, b) for a in x.coords for b in y.coords)
    return ModuleElement(T, coords)


@dataclass(frozen=True)
class HomModule:
    """``Hom_R(M, N)`` with the map each element stands for."""

    source: FPModule
    target: FPModule
    module: FPModule

    def to_map(self, x: ModuleElement) -> ModuleMap:
        n, m = self.target.ngens, self.source.ngens
        phi = self.module.lift(x)
        rows = [phi[r * m:(r + 1) * m] for r in range(n)]
        return ModuleMap(self.source, self.target, Matrix.from_rows(self.source.ring, rows, ncols=m))

    def element_of(self, f: ModuleMap) -> ModuleElement:
        vec = tuple(x for row in f.matrix.data for x in row)
        return self.module.express(vec)


def hom_module(M: FPModule, N: FPModule) -> HomModule:
    """Maps ``Phi`` with ``Phi A = B Lambda`` solvable, modulo ``Phi = B Psi``."""
    _same_ring(M, N)
    ring = M.ring
    m, n = M.ngens, N.ngens
    A, B = M.relations, N.relations
    a = A.cols
    lhs = Matrix.identity(ring, n).kron(A.T)
    rhs = -B.kron(Matrix.identity(ring, a))
    system = Matrix.hstack(ring, n * a, [lhs, rhs])
    ker = Solver(system).kernel_columns
    Zphi = Matrix.from_columns(ring, [c[: n * m] for c in ker], n * m)
    Bimg = B.kron(Matrix.identity(ring, m))
    return HomModule(M, N, subquotient(Zphi, Bimg))


# --------------------------------------------------------------------------
# invariants


def invariants(M: FPModule) -> ModuleInvariants:
    ring = M.ring
    m = M.ngens
    kind = ring.kind
    if kind == "Z":
        ds = [abs(d) for d in invariant_factors(M.relations)]
        return ModuleInvariants(ring, free_rank=m - len(ds), torsion=tuple(d for d in ds if d != 1))
    if kind == "Zmod":
        n = ring.modulus
        Z = RingSpec.integers()
        scaled = Matrix.identity(Z, m).scale(n)
        ds = invariant_factors(Matrix.hstack(Z, m, [M.relations.lift(), scaled]))
        return ModuleInvariants(ring, factors=tuple(d for d in ds if d != 1))
    if kind == "Fp":
        return ModuleInvariants(ring, factors=(m - Solver(M.relations).rank,))
    from .linalg import component

    dims = tuple(m - Solver(component(M.relations, c)).rank for c in range(len(ring.primes)))
    return ModuleInvariants(ring, factors=dims)


def is_isomorphic(M: FPModule, N: FPModule) -> bool:
    return M.ring == N.ring and M.invariants == N.invariants


def is_flat(M: FPModule) -> bool:
    """Flatness of a finitely generated module, decided per ring kind.

    Over fields and products of fields every module is flat.  Over Z a
    finitely generated module is flat iff it is free.  Over Z/n it is flat iff
    it is projective, i.e. each p-primary cyclic factor is all of Z/p^k where
    p^k exactly divides n.
    """
    ring = M.ring
    if ring.kind in ("Fp", "Prod"):
        return True
    inv = M.invariants
    if ring.kind == "Z":
        return not inv.torsion
    full = factorize(ring.modulus)
    for d in inv.factors:
        for p, k in factorize(d).items():
            if k != full[p]:
                return False
    return True
