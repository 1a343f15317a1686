"""Exact matrices over the supported rings.

Over Z everything goes through a Smith-style diagonalization with tracked
unimodular transforms.  Over Z/n the matrix is lifted to Z with ``n * I``
appended as extra columns.  Prime fields use row reduction, and products of
prime fields are handled one factor at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .rings import RingSpec


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    ring: RingSpec
    rows: int
    cols: int
    data: tuple[tuple, ...]

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, ring: RingSpec, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        rows = [tuple(ring(x) for x in r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("ragged matrix rows")
        return cls(ring, len(rows), ncols, tuple(rows))

    @classmethod
    def from_columns(cls, ring: RingSpec, columns: Sequence[Sequence], nrows: int) -> Matrix:
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise DimensionError("column has the wrong length")
        data = tuple(tuple(ring(c[i]) for c in columns) for i in range(nrows))
        return cls(ring, nrows, len(columns), data)

    @classmethod
    def _raw(cls, ring, rows, cols, data) -> Matrix:
        # data already canonical
        return cls(ring, rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def zeros(cls, ring: RingSpec, rows: int, cols: int) -> Matrix:
        z = ring.zero
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> Matrix:
        z, o = ring.zero, ring.one
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column_vector(cls, ring: RingSpec, v: Sequence) -> Matrix:
        return cls.from_rows(ring, [[x] for x in v], ncols=1)

    @staticmethod
    def hstack(ring: RingSpec, rows: int, blocks: Iterable[Matrix]) -> Matrix:
        blocks = list(blocks)
        for b in blocks:
            if b.rows != rows:
                raise DimensionError(f"hstack: {b.rows} rows, expected {rows}")
        data = [sum((b.data[i] for b in blocks), ()) for i in range(rows)]
        return Matrix._raw(ring, rows, sum(b.cols for b in blocks), data)

    @staticmethod
    def vstack(ring: RingSpec, cols: int, blocks: Iterable[Matrix]) -> Matrix:
        blocks = list(blocks)
        for b in blocks:
            if b.cols != cols:
                raise DimensionError(f"vstack: {b.cols} cols, expected {cols}")
        data = [r for b in blocks for r in b.data]
        return Matrix._raw(ring, len(data), cols, data)

    @staticmethod
    def block_diag(ring: RingSpec, blocks: Iterable[Matrix]) -> Matrix:
        blocks = list(blocks)
        cols = sum(b.cols for b in blocks)
        z = ring.zero
        data = []
        offset = 0
        for b in blocks:
            left = (z,) * offset
            right = (z,) * (cols - offset - b.cols)
            data.extend(left + r + right for r in b.data)
            offset += b.cols
        return Matrix._raw(ring, len(data), cols, data)

    # access -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.ring, self.cols, self.rows, zip(*self.data) if self.rows else [() for _ in range(self.cols)])

    def is_zero(self) -> bool:
        isz = self.ring.is_zero
        return all(isz(x) for r in self.data for x in r)

    def select_columns(self, idx: Sequence[int]) -> Matrix:
        return Matrix._raw(self.ring, self.rows, len(idx), [tuple(r[j] for j in idx) for r in self.data])

    def select_rows(self, idx: Sequence[int]) -> Matrix:
        return Matrix._raw(self.ring, len(idx), self.cols, [self.data[i] for i in idx])

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.rows}x{self.cols}, {self.tolist()})"

    # arithmetic ---------------------------------------------------------

    def _check_same(self, other: Matrix):
        if self.ring != other.ring:
            raise DimensionError(f"ring mismatch {self.ring} vs {other.ring}")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        add = self.ring.add
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [tuple(map(add, a, b)) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        sub = self.ring.sub
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [tuple(map(sub, a, b)) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> Matrix:
        neg = self.ring.neg
        return Matrix._raw(self.ring, self.rows, self.cols, [tuple(map(neg, r)) for r in self.data])

    def scale(self, c) -> Matrix:
        ring = self.ring
        c = ring(c)
        return Matrix._raw(ring, self.rows, self.cols, [tuple(ring.mul(c, x) for x in r) for r in self.data])

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ring != other.ring:
            raise DimensionError(f"ring mismatch {self.ring} vs {other.ring}")
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ring = self.ring
        if ring.is_product:
            comps = [component(self, c)._int_mul(component(other, c)) for c in range(len(ring.primes))]
            return combine_components(ring, comps)
        return self._int_mul(other)

    def _int_mul(self, other: Matrix) -> Matrix:
        n = self.ring.modulus
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            if n:
                out.append(tuple(sum(a * b for a, b in zip(r, c)) % n for c in ocols))
            else:
                out.append(tuple(sum(a * b for a, b in zip(r, c)) for c in ocols))
        return Matrix._raw(self.ring, self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        return (self @ Matrix._raw(self.ring, self.cols, 1, [(x,) for x in v])).column(0)

    def kron(self, other: Matrix) -> Matrix:
        """Kronecker product; index ``(i, k)`` maps to ``i * other.rows + k``."""
        ring = self.ring
        mul = ring.mul
        out = []
        for ra in self.data:
            for rb in other.data:
                out.append(tuple(mul(a, b) for a in ra for b in rb))
        return Matrix._raw(ring, self.rows * other.rows, self.cols * other.cols, out)

    def lift(self) -> Matrix:
        """The same entries viewed as integers."""
        if self.ring.is_product:
            raise DimensionError("product-ring matrices have no integer lift")
        return Matrix._raw(RingSpec.integers(), self.rows, self.cols, self.data)


def component(a: Matrix, c: int) -> Matrix:
    """Projection of a product-ring matrix onto its ``c``-th prime field."""
    ring = a.ring.factors[c]
    return Matrix._raw(ring, a.rows, a.cols, [tuple(x[c] for x in r) for r in a.data])


def combine_components(ring: RingSpec, comps: Sequence[Matrix]) -> Matrix:
    rows, cols = comps[0].rows, comps[0].cols
    data = [tuple(tuple(m.data[i][j] for m in comps) for j in range(cols)) for i in range(rows)]
    return Matrix._raw(ring, rows, cols, data)


# --------------------------------------------------------------------------
# Smith normal form over Z


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _identity_lists(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _diagonalize(a: list[list[int]], m: int, k: int, full: bool):
    """Reduce ``a`` in place to diagonal form; returns ``(U, diag, V)``.

    ``U * A * V`` equals the diagonal result.  With ``full`` the divisibility
    chain of the Smith normal form is enforced and diagonal entries are >= 0.
    """
    U = _identity_lists(m)
    V = _identity_lists(k)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def row_axpy(dst, src, q):  # row dst -= q * row src
        rd, rs = a[dst], a[src]
        for c in range(k):
            if rs[c]:
                rd[c] -= q * rs[c]
        ud, us = U[dst], U[src]
        for c in range(m):
            if us[c]:
                ud[c] -= q * us[c]

    def col_axpy(dst, src, q):  # col dst -= q * col src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        for row in V:
            if row[src]:
                row[dst] -= q * row[src]

    t = 0
    n = min(m, k)
    while t < n:
        best = None
        bestval = 0
        for i in range(t, m):
            row = a[i]
            for j in range(t, k):
                v = row[j]
                if v and (best is None or abs(v) < bestval):
                    best, bestval = (i, j), abs(v)
                    if bestval == 1:
                        break
            if bestval == 1:
                break
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    row_axpy(i, t, v // p)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, k):
                v = a[t][j]
                if v:
                    col_axpy(j, t, v // p)
                    if a[t][j]:
                        clean = False
            if clean and full:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, k):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    row_axpy(t, bad, -1)
                    clean = False
            if clean:
                break
            # move the smallest nonzero entry of row/column t to the pivot
            bi, bj, bv = t, t, abs(a[t][t])
            for i in range(t + 1, m):
                v = a[i][t]
                if v and abs(v) < bv:
                    bi, bj, bv = i, t, abs(v)
            for j in range(t + 1, k):
                v = a[t][j]
                if v and abs(v) < bv:
                    bi, bj, bv = t, j, abs(v)
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
        if full and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [a[i][i] for i in range(n)]
    return U, diag, V


def snf(A: Matrix) -> SmithDecomposition:
    """Smith normal form ``U * A * V = D`` of an integer matrix."""
    if A.ring.kind != "Z":
        raise DimensionError(f"snf needs an integer matrix, got {A.ring}")
    m, k = A.rows, A.cols
    work = [list(r) for r in A.data]
    U, diag, V = _diagonalize(work, m, k, full=True)
    Z = RingSpec.integers()
    D = [[0] * k for _ in range(m)]
    for i, d in enumerate(diag):
        D[i][i] = d
    return SmithDecomposition(Matrix._raw(Z, m, m, U), Matrix._raw(Z, m, k, D), Matrix._raw(Z, k, k, V))


def invariant_factors(A: Matrix) -> list[int]:
    """Nonzero Smith diagonal entries of an integer matrix."""
    m, k = A.rows, A.cols
    _, diag, _ = _diagonalize([list(r) for r in A.data], m, k, full=True)
    return [d for d in diag if d]


def determinant(A: Matrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    n = A.rows
    if n != A.cols:
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A.data]
    sign, prev = 1, 1
    for c in range(n - 1):
        if M[c][c] == 0:
            for r in range(c + 1, n):
                if M[r][c]:
                    M[c], M[r] = M[r], M[c]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                M[r][j] = (M[r][j] * M[c][c] - M[r][c] * M[c][j]) // prev
        prev = M[c][c]
    return sign * M[n - 1][n - 1]


# --------------------------------------------------------------------------
# solving and kernels


class Solver:
    """Precomputed factorization of a fixed matrix ``A`` for repeated solves."""

    def __init__(self, A: Matrix):
        self.A = A
        self.ring = A.ring
        kind = A.ring.kind
        if kind == "Prod":
            self._parts = [Solver(component(A, c)) for c in range(len(A.ring.primes))]
        elif kind == "Fp":
            self._init_field()
        else:
            self._init_integer()

    # Z and Z/n ----------------------------------------------------------

    def _init_integer(self):
        A = self.A
        m, k = A.rows, A.cols
        n = self.ring.modulus
        work = [list(r) for r in A.data]
        if n:
            for i in range(m):
                work[i].extend(n if j == i else 0 for j in range(m))
        width = k + (m if n else 0)
        U, diag, V = _diagonalize(work, m, width, full=False)
        self._U, self._diag, self._V, self._width = U, diag, V, width
        self._rank = sum(1 for d in diag if d)

    def _solve_integer(self, b):
        m = self.A.rows
        n = self.ring.modulus
        c = [sum(u * x for u, x in zip(row, b)) for row in self._U]
        y = [0] * self._width
        for i in range(m):
            d = self._diag[i] if i < len(self._diag) else 0
            if d:
                q, r = divmod(c[i], d)
                if r:
                    return None
                y[i] = q
            elif c[i] if not n else c[i] % n:
                return None
        k = self.A.cols
        x = [sum(self._V[i][j] * y[j] for j in range(self._width) if y[j]) for i in range(k)]
        if n:
            x = [v % n for v in x]
        return tuple(x)

    def _kernel_integer(self) -> list[tuple]:
        k = self.A.cols
        n = self.ring.modulus
        out = []
        for j in range(self._rank, self._width):
            col = tuple(self._V[i][j] for i in range(k))
            if n:
                col = tuple(v % n for v in col)
                if not any(col):
                    continue
            out.append(col)
        return out

    # prime fields -------------------------------------------------------

    def _init_field(self):
        A = self.A
        p = self.ring.modulus
        m, k = A.rows, A.cols
        rows = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(A.data)]
        pivots = []
        r = 0
        for c in range(k):
            piv = next((i for i in range(r, m) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], -1, p)
            rows[r] = [x * inv % p for x in rows[r]]
            pr = rows[r]
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
            pivots.append(c)
            r += 1
            if r == m:
                break
        self._rref = [row[:k] for row in rows]
        self._E = [row[k:] for row in rows]
        self._pivots = pivots

    def _solve_field(self, b):
        p = self.ring.modulus
        c = [sum(e * x for e, x in zip(row, b)) % p for row in self._E]
        r = len(self._pivots)
        if any(c[r:]):
            return None
        x = [0] * self.A.cols
        for i, col in enumerate(self._pivots):
            x[col] = c[i]
        return tuple(x)

    def _kernel_field(self) -> list[tuple]:
        p = self.ring.modulus
        k = self.A.cols
        piv = set(self._pivots)
        out = []
        for f in range(k):
            if f in piv:
                continue
            v = [0] * k
            v[f] = 1
            for i, col in enumerate(self._pivots):
                v[col] = -self._rref[i][f] % p
            out.append(tuple(v))
        return out

    # public -------------------------------------------------------------

    def solve(self, b: Sequence):
        """Some ``x`` with ``A x = b``, or ``None``."""
        if len(b) != self.A.rows:
            raise DimensionError(f"right-hand side of length {len(b)} for {self.A.rows} rows")
        kind = self.ring.kind
        if kind == "Prod":
            parts = []
            for c, s in enumerate(self._parts):
                x = s.solve(tuple(v[c] for v in b))
                if x is None:
                    return None
                parts.append(x)
            return tuple(zip(*parts)) if self.A.cols else ()
        b = tuple(self.ring(v) for v in b)
        if kind == "Fp":
            return self._solve_field(b)
        return self._solve_integer(b)

    def contains(self, b: Sequence) -> bool:
        return self.solve(b) is not None

    @property
    def rank(self) -> int:
        """Rank of ``A`` (fields and Z only; for a product, per-factor ranks)."""
        kind = self.ring.kind
        if kind == "Fp":
            return len(self._pivots)
        if kind == "Z":
            return self._rank
        raise DimensionError(f"rank is not defined over {self.ring}")

    @cached_property
    def kernel_columns(self) -> list[tuple]:
        kind = self.ring.kind
        if kind == "Prod":
            k = self.A.cols
            nf = len(self._parts)
            out = []
            for c, s in enumerate(self._parts):
                for v in s.kernel_columns:
                    out.append(tuple(tuple(v[i] if cc == c else 0 for cc in range(nf)) for i in range(k)))
            return out
        if kind == "Fp":
            return self._kernel_field()
        return self._kernel_integer()

    def kernel(self) -> Matrix:
        return Matrix.from_columns(self.ring, self.kernel_columns, self.A.cols)


def solve(A: Matrix, b: Sequence):
    """Some ``x`` with ``A x = b`` over ``A.ring``, or ``None`` if unsolvable."""
    return Solver(A).solve(b)


def kernel(A: Matrix) -> Matrix:
    """Columns generating ``{x : A x = 0}`` (a basis over Z and over fields)."""
    return Solver(A).kernel()
