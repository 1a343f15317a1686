"""Freyd presheaves, their prolongation, and the counit.

On ``B = {S^i R}`` the presheaf ``F X = [-, X]`` is the graded homology
module of ``X``.  Its prolongation evaluated at ``K`` is computed two ways:
``(+)_i H_i(X) (x)_R H^i(K)`` and the coequalizer of the composition
arrows over ``B``.  The counit sends ``x (x) phi`` to the composite
``K --phi--> S^i R --x--> X`` in ``[K, X]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .complexes import (
    ChainComplex, ChainMap, Triangle, cohomology_vs_R, homology, induced_cohomology_map,
    mapping_cone, random_complex, shift, shift_map, support_window,
)
from .derived import HomGroup, derived_hom, ghost_group
from .linalg import Matrix
from .modules import FPModule, ModuleInvariants, ModuleMap, direct_sum, is_exact, tensor_product
from .rings import RingSpec


class CounitError(RuntimeError):
    """The counit failed its well-definedness check."""


@dataclass(frozen=True)
class GradedModule:
    ring: RingSpec
    components: dict[int, FPModule]

    def __getitem__(self, i: int) -> FPModule:
        return self.components.get(i, FPModule.zero(self.ring))

    def support(self) -> list[int]:
        return sorted(i for i, M in self.components.items() if not M.is_zero())

    def is_flat(self) -> bool:
        return all(M.is_flat() for M in self.components.values())


def freyd_image(X: ChainComplex) -> GradedModule:
    """``F X``: degree ``i`` holds ``H_i(X) = [S^i R, X]``."""
    return GradedModule(X.ring, {i: homology(X, i) for i in support_window(X)})


@dataclass(frozen=True)
class Provenance:
    """A generator ``x (x) phi``: cycle ``x`` of ``X_i`` and cocycle ``phi`` on ``K_i``."""

    degree: int
    cycle: tuple
    cocycle: tuple


@dataclass(frozen=True)
class _Block:
    degree: int
    offset: int
    homology: FPModule
    cohomology: FPModule


@dataclass(frozen=True, eq=False)
class PFValue:
    X: ChainComplex
    K: ChainComplex
    module: FPModule
    provenance: tuple[Provenance, ...]
    construction: str  # "tensor" or "coequalizer"
    blocks: tuple[_Block, ...] = ()

    @property
    def invariants(self) -> ModuleInvariants:
        return self.module.invariants


def elementary_map(X: ChainComplex, K: ChainComplex, p: Provenance) -> ChainMap:
    """The composite ``K -> S^i R -> X`` with single component ``x phi^T``."""
    ring = X.ring
    col = Matrix.from_columns(ring, [p.cycle], X.rank(p.degree))
    row = Matrix.from_rows(ring, [p.cocycle], ncols=K.rank(p.degree))
    return ChainMap.build(K, X, {p.degree: col @ row})


def pf_tensor(X: ChainComplex, K: ChainComplex) -> PFValue:
    """``(+)_i H_i(X) (x)_R H^i(K)`` with one generator per (cycle, cocycle) pair."""
    if X.ring != K.ring:
        raise ValueError(f"ring mismatch: {X.ring} vs {K.ring}")
    ring = X.ring
    blocks, pieces, prov = [], [], []
    offset = 0
    for i in support_window(X, K):
        HX, HK = homology(X, i), cohomology_vs_R(K, i)
        if not HX.ngens or not HK.ngens:
            continue
        cycles, cocycles = HX.embedding.columns(), HK.embedding.columns()
        for z in cycles:
            for phi in cocycles:
                prov.append(Provenance(i, z, phi))
        blocks.append(_Block(i, offset, HX, HK))
        pieces.append(tensor_product(HX, HK))
        offset += HX.ngens * HK.ngens
    return PFValue(X, K, direct_sum(ring, pieces), tuple(prov), "tensor", tuple(blocks))


def pf_coequalizer(X: ChainComplex, K: ChainComplex, dual: bool = False) -> PFValue:
    """The prolongation as a coequalizer of composition arrows.

    The middle term is ``(+)_j [S^j R, X] (x)_Z [K, S^j R]`` and the top term
    ``(+)_{i,j} [S^j R, X] (x) B(S^i R, S^j R) (x) [K, S^i R]``, both over Z
    with hom-sets from :func:`derived_hom`.  The quotient abelian group is
    turned back into an R-module through the action on the ``X`` factor.
    With ``dual`` the two hom factors trade places.
    """
    if X.ring != K.ring:
        raise ValueError(f"ring mismatch: {X.ring} vs {K.ring}")
    ring = X.ring
    adds = ring.additive_generators
    g = len(adds)
    window = list(support_window(X, K))
    spheres = {j: ChainComplex.basic(ring, j) for j in window}
    left = {j: derived_hom(spheres[j], X, 0) for j in window}   # C(S^j R, X)
    right = {j: derived_hom(K, spheres[j], 0) for j in window}  # C(K, S^j R)

    def zgen_map(hom: HomGroup, u: int) -> ChainMap:
        k, c = divmod(u, g)
        return hom.representative(k).scale(adds[c])

    def zcoords(hom: HomGroup, f: ChainMap) -> tuple:
        return hom.module.additive_coords(hom.class_of(f).coords.coords)

    az = {j: left[j].module.additive_presentation() for j in window}
    bz = {j: right[j].module.additive_presentation() for j in window}

    offsets, blocks = {}, []
    total = 0
    for j in window:
        a, b = az[j].ngens, bz[j].ngens
        if not a or not b:
            continue
        offsets[j] = total
        blocks.append(tensor_product(bz[j], az[j]) if dual else tensor_product(az[j], bz[j]))
        total += a * b

    def middle_index(j, xu, pu):
        # generator of block j for the x-generator xu and phi-generator pu
        if dual:
            return offsets[j] + pu * az[j].ngens + xu
        return offsets[j] + xu * bz[j].ngens + pu

    def pair_vector(j, xvec, pvec):
        v = [0] * total
        if j not in offsets:
            return v
        for xu, xa in enumerate(xvec):
            if not xa:
                continue
            for pu, pa in enumerate(pvec):
                if pa:
                    v[middle_index(j, xu, pu)] += xa * pa
        return v

    relations = []
    for blk, j in zip(blocks, offsets):
        off = offsets[j]
        for col in blk.relations.columns():
            v = [0] * total
            v[off:off + blk.ngens] = col
            relations.append(v)

    for i in window:
        for j in window:
            endo = derived_hom(spheres[i], spheres[j], 0)  # B(S^i R, S^j R)
            if not endo.module.ngens or j not in offsets:
                continue
            for ru in range(endo.module.ngens * g):
                r = zgen_map(endo, ru)
                for xu in range(az[j].ngens):
                    x = zgen_map(left[j], xu)
                    xr = zcoords(left[i], x.compose(r))
                    for pu in range(bz[i].ngens):
                        phi = zgen_map(right[i], pu)
                        rphi = zcoords(right[j], r.compose(phi))
                        lhs = pair_vector(i, xr, _unit(bz[i].ngens, pu))
                        rhs = pair_vector(j, _unit(az[j].ngens, xu), rphi)
                        relations.append([p - q for p, q in zip(lhs, rhs)])

    # back to R-modules: integer relations, plus r e_u = (r acting on x) (x) phi
    rcols = [[ring.from_int(v) for v in col] for col in relations]
    prov = []
    for j in offsets:
        a, b = az[j].ngens, bz[j].ngens
        for first in range(b if dual else a):
            for second in range(a if dual else b):
                xu, pu = (second, first) if dual else (first, second)
                x = zgen_map(left[j], xu).component(j).column(0)
                phi = zgen_map(right[j], pu).component(j).data[0]
                prov.append(Provenance(j, x, phi))
    if adds != (ring.one,):
        for j in offsets:
            for xu in range(az[j].ngens):
                k, c = divmod(xu, g)
                for pu in range(bz[j].ngens):
                    u = middle_index(j, xu, pu)
                    for r in adds:
                        acted = [0] * az[j].ngens
                        for cc, n in enumerate(ring.additive_coords(ring.mul(r, adds[c]))):
                            acted[k * g + cc] += n
                        w = pair_vector(j, acted, _unit(bz[j].ngens, pu))
                        col = [ring.neg(ring.from_int(v)) for v in w]
                        col[u] = ring.add(col[u], r)
                        rcols.append(col)
    module = FPModule(ring, total, Matrix.from_columns(ring, rcols, total))
    return PFValue(X, K, module, tuple(prov), "coequalizer")


def _unit(n, k):
    v = [0] * n
    v[k] = 1
    return v


# --------------------------------------------------------------------------
# the counit


@dataclass(frozen=True, eq=False)
class CounitMap:
    source: PFValue
    target: HomGroup
    matrix: ModuleMap

    def is_isomorphism(self) -> bool:
        return self.matrix.is_isomorphism()

    def image(self) -> FPModule:
        return self.matrix.image()

    def image_order(self) -> int | None:
        return self.image().order


def counit(X: ChainComplex, K: ChainComplex, source: PFValue | None = None) -> CounitMap:
    """``epsilon: PF X(K) -> [K, X]`` on provenance generators."""
    if source is None:
        source = pf_tensor(X, K)
    if source.X != X or source.K != K:
        raise ValueError("PFValue was built from a different pair")
    hom = derived_hom(K, X, 0)
    images = [hom.class_of(elementary_map(X, K, p)).coords.coords for p in source.provenance]
    m = ModuleMap.from_images(source.module, hom.module, images)
    if not m.is_well_defined():
        raise CounitError(f"counit is not well defined on {source.construction} presentation")
    return CounitMap(source, hom, m)


def counit_is_iso(X: ChainComplex, K: ChainComplex) -> bool:
    return counit(X, K).is_isomorphism()


def identity_in_counit_image(X: ChainComplex) -> bool:
    eps = counit(X, X)
    ident = eps.target.class_of(ChainMap.identity(X))
    return eps.matrix.image_contains(ident.coords.coords)


# --------------------------------------------------------------------------
# the exactness ladder


def pf_pullback(X: ChainComplex, u: ChainMap) -> ModuleMap:
    """``PF X(B) -> PF X(A)`` induced by ``u: A -> B`` (tensor presentations)."""
    src = pf_tensor(X, u.target)
    tgt = pf_tensor(X, u.source)
    ring = X.ring
    rows = [[ring.zero] * src.module.ngens for _ in range(tgt.module.ngens)]
    tblocks = {b.degree: b for b in tgt.blocks}
    for b in src.blocks:
        t = tblocks.get(b.degree)
        if t is None:
            continue
        hu = induced_cohomology_map(u, b.degree).matrix
        piece = Matrix.identity(ring, b.homology.ngens).kron(hu)
        for r, row in enumerate(piece.data):
            rows[t.offset + r][b.offset:b.offset + piece.cols] = row
    return ModuleMap(src.module, tgt.module, Matrix.from_rows(ring, rows, ncols=src.module.ngens))


def hom_pullback(X: ChainComplex, u: ChainMap) -> ModuleMap:
    """``[B, X] -> [A, X]``, ``g |-> g u``."""
    hb = derived_hom(u.target, X, 0)
    ha = derived_hom(u.source, X, 0)
    images = [ha.class_of(g.compose(u)).coords.coords for g in hb.representatives]
    return ModuleMap.from_images(hb.module, ha.module, images)


@dataclass
class LadderReport:
    positions: list[str]
    top_exact: dict[str, bool]
    bottom_exact: dict[str, bool]
    commutes: dict[str, bool]
    objects: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(self.top_exact.values())

    @property
    def failures(self) -> list[str]:
        return [p for p in self.positions if not self.top_exact[p]]

    def to_record(self) -> dict:
        return {
            "top_exact": self.top_exact,
            "bottom_exact": self.bottom_exact,
            "commutes": self.commutes,
            "exact": self.exact,
        }


def ladder_check(t: Triangle, X: ChainComplex) -> LadderReport:
    """Exactness of both rows of the counit ladder for ``t`` tested against ``X``.

    The rows are taken along ``S L, S K, M, L, K, S^-1 M`` so that the four
    middle terms are interior positions.
    """
    maps = [
        ("S L -> S K", shift_map(t.f, 1)),
        ("S K -> M", t.h),
        ("M -> L", t.g),
        ("L -> K", t.f),
        ("K -> S^-1 M", shift_map(t.h, -1)),
    ]
    names = ["S L", "S K", "M", "L", "K", "S^-1 M"]
    top = [pf_pullback(X, u) for _, u in maps]
    bottom = [hom_pullback(X, u) for _, u in maps]
    positions = names[1:-1]
    top_exact = {names[k + 1]: is_exact(top[k], top[k + 1]) for k in range(len(maps) - 1)}
    bottom_exact = {names[k + 1]: is_exact(bottom[k], bottom[k + 1]) for k in range(len(maps) - 1)}
    commutes = {}
    for name, (_, u), pt, hb in zip(names, maps, top, bottom):
        eps_b = counit(X, u.target).matrix
        eps_a = counit(X, u.source).matrix
        diff = ModuleMap(pt.source, eps_a.target, (eps_a.compose(pt)).matrix - (hb.compose(eps_b)).matrix)
        commutes[name] = diff.is_zero()
    return LadderReport(positions, top_exact, bottom_exact, commutes, objects=names)


# --------------------------------------------------------------------------
# probes


@dataclass
class ProbeReport:
    ring: str
    pairs: int = 0
    premise_holds: int = 0
    counit_iso: int = 0
    ghost_free: int = 0
    counterexamples: list[int] = field(default_factory=list)

    def to_record(self) -> dict:
        return dict(self.__dict__)


Sampler = Callable[[int], tuple[ChainComplex, ChainComplex]]


def random_pair_sampler(ring: RingSpec, seed, max_length: int = 4, max_rank: int = 3) -> Sampler:
    def sample(k: int):
        X = random_complex(ring, f"{seed}:X:{k}", max_length, max_rank)
        K = random_complex(ring, f"{seed}:K:{k}", max_length, max_rank)
        return X, K

    return sample


def has_flat_homology(X: ChainComplex) -> bool:
    return freyd_image(X).is_flat()


def flat_homology_implies_iso_probe(ring: RingSpec, sampler: Sampler | None = None,
                                    trials: int = 200, seed=0) -> ProbeReport:
    """Check iso counit and no ghosts on every sampled pair with flat ``H_*(X)``."""
    if sampler is None:
        sampler = random_pair_sampler(ring, seed)
    report = ProbeReport(str(ring))
    for k in range(trials):
        X, K = sampler(k)
        report.pairs += 1
        if not has_flat_homology(X):
            continue
        report.premise_holds += 1
        iso = counit_is_iso(X, K)
        no_ghost = ghost_group(K, X).is_zero()
        report.counit_iso += iso
        report.ghost_free += no_ghost
        if not (iso and no_ghost):
            report.counterexamples.append(k)
    return report


def random_endomorphism(K: ChainComplex, rng: random.Random) -> ChainMap:
    hom = derived_hom(K, K, 0)
    ring = K.ring
    f = ChainMap.zero(K, K)
    for rep in hom.representatives:
        f = f + rep.scale(ring.random_element(rng, 1))
    return f


def pair_report(X: ChainComplex, K: ChainComplex, pair_id=0, triangle_map: ChainMap | None = None) -> dict:
    """Per-pair summary record; ``ladder_exact`` uses the cone of ``triangle_map``."""
    pf = pf_tensor(X, K)
    eps = counit(X, K, pf)
    ghosts = ghost_group(K, X)
    ladder = None
    if triangle_map is not None:
        _, tri = mapping_cone(triangle_map)
        ladder = ladder_check(tri, X).exact
    return {
        "pair_id": pair_id,
        "pf_invariants": pf.invariants.to_record(),
        "hom_invariants": eps.target.invariants.to_record(),
        "counit_iso": eps.is_isomorphism(),
        "ghost_order": ghosts.order,
        "identity_in_image": identity_in_counit_image(X),
        "ladder_exact": ladder,
    }


def counit_iso_on_spheres(X: ChainComplex, degrees: Iterable[int] | None = None) -> bool:
    """Counit at every ``S^i R`` is an isomorphism onto ``[S^i R, X] = H_i X``."""
    if degrees is None:
        degrees = support_window(X)
    for i in degrees:
        S = ChainComplex.basic(X.ring, i)
        if not counit(X, S).is_isomorphism():
            return False
    return True


__all__ = [
    "GradedModule", "PFValue", "Provenance", "CounitMap", "CounitError", "LadderReport", "ProbeReport",
    "freyd_image", "pf_tensor", "pf_coequalizer", "counit", "counit_is_iso", "identity_in_counit_image",
    "ladder_check", "pf_pullback", "hom_pullback", "flat_homology_implies_iso_probe", "pair_report",
    "random_pair_sampler", "has_flat_homology", "counit_iso_on_spheres", "random_endomorphism",
    "elementary_map", "shift",
]
