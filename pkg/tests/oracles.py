"""Brute-force enumeration oracles, independent of the linear algebra under test.

Everything here works over finite rings only and enumerates elements
directly, so it is slow and only meant for tiny inputs.
"""

import itertools

from freydlab.complexes import ChainComplex
from freydlab.rings import RingSpec


def vectors(ring: RingSpec, n: int):
    return itertools.product(list(ring.elements()), repeat=n)


def add(ring, u, v):
    return tuple(ring.add(a, b) for a, b in zip(u, v))


def scal(ring, r, u):
    return tuple(ring.mul(r, a) for a in u)


def zero(ring, n):
    return tuple(ring.zero for _ in range(n))


def span(ring: RingSpec, columns, n: int) -> frozenset:
    """All R-linear combinations of the given columns, by closure."""
    seen = {zero(ring, n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for c in columns:
                for r in ring.elements():
                    w = add(ring, v, scal(ring, r, c))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
        frontier = nxt
    return frozenset(seen)


class Quotient:
    """``R^n / span(relations)`` as an explicit finite set of cosets."""

    def __init__(self, ring, n, relations):
        self.ring, self.n = ring, n
        self.sub = span(ring, relations, n)
        self.canon = {}
        for v in vectors(ring, n):
            if v in self.canon:
                continue
            for s in self.sub:
                self.canon[add(ring, v, s)] = v
        self.reps = sorted(set(self.canon.values()), key=str)

    def __len__(self):
        return len(self.reps)

    def is_zero(self, v):
        return v in self.sub


def module_order(ring, n, relations) -> int:
    return len(Quotient(ring, n, relations))


def hom_count(ring, m, rel_m, n, rel_n) -> int:
    """Tuples of images of the ``m`` generators that respect every relation of M."""
    N = Quotient(ring, n, rel_n)
    count = 0
    for images in itertools.product(N.reps, repeat=m):
        ok = True
        for a in rel_m:
            acc = zero(ring, n)
            for coeff, y in zip(a, images):
                acc = add(ring, acc, scal(ring, coeff, y))
            if not N.is_zero(acc):
                ok = False
                break
        count += ok
    return count


def tensor_order(ring, m, rel_m, n, rel_n) -> int:
    """``|M (x) N|`` as the number of bilinear maps into the ring itself.

    Valid for ``Z/p^k`` and prime fields, where the ring is an injective
    cogenerator, so ``|Hom(T, R)| = |T|`` for finite ``T``.
    """
    cols = [v for v in vectors(ring, m)
            if all(ring.is_zero(sum_dot(ring, a, v)) for a in rel_m)]
    count = 0
    for choice in itertools.product(cols, repeat=n):
        ok = True
        for b in rel_n:
            for i in range(m):
                if not ring.is_zero(sum_dot(ring, b, [choice[k][i] for k in range(n)])):
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


def sum_dot(ring, a, v):
    acc = ring.zero
    for x, y in zip(a, v):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def matmul(ring, A, B):
    """Plain list-of-lists product (A is r x k, B is k x c)."""
    k = len(B)
    c = len(B[0]) if B else 0
    return [[sum_dot(ring, row, [B[t][j] for t in range(k)]) for j in range(c)] for row in A]


def _blocks(ring, shapes):
    """All assignments of matrices of the given shapes."""
    sizes = [r * c for r, c in shapes]
    for flat in vectors(ring, sum(sizes)):
        mats, pos = [], 0
        for (r, c), s in zip(shapes, sizes):
            chunk = flat[pos:pos + s]
            mats.append([list(chunk[i * c:(i + 1) * c]) for i in range(r)])
            pos += s
        yield mats


def _d(X: ChainComplex, i):
    return [list(row) for row in X.d(i).data] if X.rank(i) and X.rank(i - 1) else [[0] * X.rank(i) for _ in range(X.rank(i - 1))]


def _eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def chain_maps(K: ChainComplex, X: ChainComplex):
    """All degree-0 chain maps ``K -> X`` as ``{degree: matrix}`` dicts."""
    ring = K.ring
    degs = [i for i in range(min(K.min_degree, X.min_degree) - 1, max(K.max_degree, X.max_degree) + 2)
            if K.rank(i) and X.rank(i)]
    shapes = [(X.rank(i), K.rank(i)) for i in degs]
    out = []
    for mats in _blocks(ring, shapes):
        f = dict(zip(degs, mats))
        ok = True
        for i in degs + [i + 1 for i in degs]:
            fi = f.get(i)
            fim = f.get(i - 1)
            left = matmul(ring, fim, _d(K, i)) if fim is not None and K.rank(i) else None
            right = matmul(ring, _d(X, i), fi) if fi is not None and X.rank(i - 1) else None
            if left is None and right is None:
                continue
            if left is None:
                left = [[ring.zero] * K.rank(i) for _ in range(X.rank(i - 1))]
            if right is None:
                right = [[ring.zero] * K.rank(i) for _ in range(X.rank(i - 1))]
            if not _eq(left, right):
                ok = False
                break
        if ok:
            out.append(f)
    return out


def _key(f):
    return tuple(sorted((i, tuple(map(tuple, m))) for i, m in f.items()))


def nullhomotopic_maps(K: ChainComplex, X: ChainComplex) -> set:
    """Keys of every ``d h + h d`` over all homotopies ``h_i: K_i -> X_{i+1}``."""
    ring = K.ring
    degs = [i for i in range(min(K.min_degree, X.min_degree) - 1, max(K.max_degree, X.max_degree) + 2)
            if K.rank(i) and X.rank(i + 1)]
    shapes = [(X.rank(i + 1), K.rank(i)) for i in degs]
    targets = [i for i in range(min(K.min_degree, X.min_degree) - 1, max(K.max_degree, X.max_degree) + 2)
               if K.rank(i) and X.rank(i)]
    found = set()
    for mats in _blocks(ring, shapes):
        h = dict(zip(degs, mats))
        f = {}
        for i in targets:
            acc = [[ring.zero] * K.rank(i) for _ in range(X.rank(i))]
            if i in h and X.rank(i + 1):
                acc = madd(ring, acc, matmul(ring, _d(X, i + 1), h[i]))
            if (i - 1) in h and K.rank(i - 1):
                acc = madd(ring, acc, matmul(ring, h[i - 1], _d(K, i)))
            f[i] = acc
        found.add(_key(f))
    return found


def madd(ring, A, B):
    return [[ring.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def derived_hom_order(K, X) -> int:
    maps = chain_maps(K, X)
    return len(maps) // len(nullhomotopic_maps(K, X))


def map_key(f) -> tuple:
    return _key(f)
