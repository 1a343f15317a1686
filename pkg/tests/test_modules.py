import random

import pytest
from hypothesis import given, settings, strategies as st

from freydlab.linalg import Matrix
from freydlab.modules import (
    FPModule, ModuleMap, hom_module, invariants, is_exact, is_flat, is_isomorphic, subquotient,
    tensor_product,
)
from freydlab.rings import RingSpec

from conftest import F2, Z, Z4
import oracles


def cyc(R, n):
    return FPModule.cyclic(R, n)


def test_subquotient_examples():
    M = subquotient(Matrix.identity(Z, 1), Matrix.from_rows(Z, [[2]]))
    assert invariants(M).to_record() == {"free_rank": 0, "torsion": [2]}
    M = subquotient(Matrix.identity(Z, 1), Matrix.zeros(Z, 1, 0))
    assert invariants(M).to_record() == {"free_rank": 1, "torsion": []}
    M = subquotient(Matrix.from_columns(Z, [[2, -1]], 2), Matrix.zeros(Z, 2, 0))
    assert invariants(M).to_record() == {"free_rank": 1, "torsion": []}


def test_tensor_examples():
    assert tensor_product(cyc(Z, 2), cyc(Z, 3)).is_zero()
    assert invariants(tensor_product(cyc(Z, 2), cyc(Z, 4))).torsion == (2,)
    M = FPModule.cokernel(Matrix.from_rows(Z, [[2, 4], [0, 6]]))
    assert is_isomorphic(tensor_product(M, FPModule.free(Z, 1)), M)


def test_hom_examples():
    M = FPModule.cokernel(Matrix.from_rows(Z, [[2, 4], [0, 6]]))
    assert is_isomorphic(hom_module(FPModule.free(Z, 1), M).module, M)
    assert hom_module(cyc(Z, 2), FPModule.free(Z, 1)).module.is_zero()
    H = hom_module(cyc(Z, 2), cyc(Z, 4))
    assert invariants(H.module).torsion == (2,)
    f = H.to_map(H.module.gen(0))
    assert f.is_well_defined() and not f.is_zero()


def test_invariants_examples():
    M = FPModule.cokernel(Matrix.from_rows(Z, [[2, 4], [0, 6]]))
    assert invariants(M).to_record() == {"free_rank": 0, "torsion": [2, 6]}
    assert invariants(FPModule.zero(Z)).is_zero
    assert invariants(FPModule.free(RingSpec.parse("Fp:5"), 2)).factors == (2,)


def test_flatness_examples():
    prod = RingSpec.parse("Prod:2x3")
    assert is_flat(FPModule.cyclic(prod, (0, 1)))
    assert not is_flat(cyc(Z, 2))
    assert is_flat(FPModule.free(Z, 3))
    assert not is_flat(cyc(Z4, 2))
    assert is_flat(FPModule.free(Z4, 1))
    z12 = RingSpec.parse("Zmod:12")
    assert is_flat(cyc(z12, 4))  # Z/12 = Z/4 x Z/3, and Z/12 / 4 is the Z/4 factor
    assert not is_flat(cyc(z12, 2))


def random_presentation(R, rng, max_gens=3, max_rels=3):
    m = rng.randint(0, max_gens)
    k = rng.randint(0, max_rels)
    cols = [[R.random_element(rng, 3, 0.6) for _ in range(m)] for _ in range(k)]
    return m, cols


def module_of(R, m, cols):
    return FPModule(R, m, Matrix.from_columns(R, cols, m))


@pytest.mark.parametrize("R", [Z4, F2], ids=str)
def test_order_matches_enumeration(R):
    rng = random.Random(f"order:{R}")
    for _ in range(40):
        m, cols = random_presentation(R, rng)
        assert module_of(R, m, cols).order == oracles.module_order(R, m, cols)


@pytest.mark.parametrize("R", [Z4, F2], ids=str)
def test_hom_cardinality_matches_enumeration(R):
    rng = random.Random(f"hom:{R}")
    for _ in range(25):
        m, rm = random_presentation(R, rng)
        n, rn = random_presentation(R, rng)
        H = hom_module(module_of(R, m, rm), module_of(R, n, rn))
        assert H.module.order == oracles.hom_count(R, m, rm, n, rn)


@pytest.mark.parametrize("R", [Z4, F2], ids=str)
def test_tensor_cardinality_matches_enumeration(R):
    rng = random.Random(f"tensor:{R}")
    for _ in range(25):
        m, rm = random_presentation(R, rng)
        n, rn = random_presentation(R, rng)
        T = tensor_product(module_of(R, m, rm), module_of(R, n, rn))
        assert T.order == oracles.tensor_order(R, m, rm, n, rn)


def test_hom_representatives_are_module_maps():
    rng = random.Random(3)
    for _ in range(20):
        m, rm = random_presentation(Z4, rng)
        n, rn = random_presentation(Z4, rng)
        H = hom_module(module_of(Z4, m, rm), module_of(Z4, n, rn))
        for g in H.module.gens():
            assert H.to_map(g).is_well_defined()


@settings(max_examples=60)
@given(st.lists(st.integers(-12, 12), min_size=1, max_size=3), st.lists(st.integers(-12, 12), min_size=1, max_size=3))
def test_tensor_of_cyclic_groups(a, b):
    from math import gcd
    M = FPModule.cokernel(Matrix.from_rows(Z, [a]))
    N = FPModule.cokernel(Matrix.from_rows(Z, [b]))
    # Z/g1 (x) Z/g2 = Z/gcd(g1, g2), with g = 0 meaning Z
    g1 = 0
    for x in a:
        g1 = gcd(g1, x)
    g2 = 0
    for x in b:
        g2 = gcd(g2, x)
    expect = gcd(g1, g2)
    inv = tensor_product(M, N).invariants
    if expect == 0:
        assert inv.free_rank == 1 and inv.torsion == ()
    elif expect == 1:
        assert inv.is_zero
    else:
        assert inv.free_rank == 0 and inv.torsion == (expect,)


def test_kernel_image_cokernel_exactness():
    rng = random.Random(11)
    for R in (Z, Z4, RingSpec.parse("Prod:2x3")):
        for _ in range(15):
            m, rm = random_presentation(R, rng)
            n, rn = random_presentation(R, rng)
            M, N = module_of(R, m, rm), module_of(R, n, rn)
            H = hom_module(M, N)
            if not H.module.ngens:
                continue
            x = H.module.zero_element()
            for g in H.module.gens():
                x = x + R.random_element(rng, 2) * g
            f = H.to_map(x)
            K = f.kernel()
            inc = ModuleMap.from_images(K, M, [K.embedding.column(j) for j in range(K.ngens)])
            assert inc.is_well_defined()
            assert is_exact(inc, f)
            C = f.cokernel()
            proj = ModuleMap.from_images(N, C, Matrix.identity(R, n).columns())
            assert is_exact(f, proj)


def test_elements_compare_modulo_relations():
    M = cyc(Z4, 2)
    assert M.element([2]) == M.zero_element()
    assert M.element([1]) + M.element([1]) == M.element([0])
    assert M.element([1]) != M.element([0])


def test_is_exact_detects_failures():
    R1 = FPModule.free(Z, 1)
    zero = ModuleMap.zero(R1, R1)
    ident = ModuleMap.identity(R1)
    assert not is_exact(zero, zero)
    assert not is_exact(ident, ident)
    assert is_exact(zero, ident) and is_exact(ident, zero)
    two = ModuleMap.from_images(R1, R1, [[2]])
    proj = ModuleMap.from_images(R1, cyc(Z, 2), [[1]])
    assert is_exact(two, proj)
    four = ModuleMap.from_images(R1, R1, [[4]])
    assert not is_exact(four, proj)
