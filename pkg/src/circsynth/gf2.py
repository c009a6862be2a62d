"""Square GF(2) matrices stored as bit-packed rows.

Row ``i`` is a Python int whose bit ``j`` holds entry ``a_ij``. All operations
return new matrices; a :class:`BitMatrix` is never mutated after construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import NotPowerOfTwo, SingularMatrix

Permutation = tuple[int, ...]


class OpKind(enum.Enum):
    ROW_ADD = "row"
    COL_ADD = "col"
    SWAP = "swap"


class ElemOp(NamedTuple):
    """Elementary operation. ``ROW_ADD``: row dst ^= row src. ``COL_ADD``:
    column dst ^= column src. ``SWAP``: exchange rows src and dst."""

    kind: OpKind
    src: int
    dst: int

    @classmethod
    def row(cls, src: int, dst: int) -> "ElemOp":
        return cls(OpKind.ROW_ADD, src, dst)

    @classmethod
    def col(cls, src: int, dst: int) -> "ElemOp":
        return cls(OpKind.COL_ADD, src, dst)

    @classmethod
    def swap(cls, a: int, b: int) -> "ElemOp":
        return cls(OpKind.SWAP, a, b)


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BitMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("dimension must be positive")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        limit = 1 << self.n
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the matrix width")

    # -- construction ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "BitMatrix":
        return cls(n, (0,) * n)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        n = len(entries)
        rows = []
        for row in entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            v = 0
            for j, a in enumerate(row):
                if a not in (0, 1, True, False):
                    raise ValueError(f"entry {a!r} is not a bit")
                if a:
                    v |= 1 << j
            rows.append(v)
        return cls(n, tuple(rows))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        return cls.from_lists((arr & 1).astype(int).tolist())

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "BitMatrix":
        """Matrix whose row ``i`` is the unit vector ``e_perm[i]``."""
        check_permutation(perm, len(perm))
        return cls(len(perm), tuple(1 << p for p in perm))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitMatrix":
        return cls.from_array(rng.integers(0, 2, size=(n, n)))

    @classmethod
    def random_invertible(cls, n: int, rng: np.random.Generator) -> "BitMatrix":
        while True:
            m = cls.random(n, rng)
            if m.is_invertible():
                return m

    # -- views ----------------------------------------------------------

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())

    def row_weights(self) -> list[int]:
        return [_popcount(r) for r in self.rows]

    def col_weights(self) -> list[int]:
        return self.transpose().row_weights()

    def weight(self) -> int:
        return sum(self.row_weights())

    def transpose(self) -> "BitMatrix":
        n = self.n
        cols = [0] * n
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                j = low.bit_length() - 1
                cols[j] |= 1 << i
                r ^= low
        return BitMatrix(n, tuple(cols))

    def block(self, bi: int, bj: int, size: int) -> tuple[int, ...]:
        """Rows of the ``size x size`` block at block coordinates (bi, bj)."""
        mask = (1 << size) - 1
        shift = bj * size
        return tuple((self.rows[bi * size + k] >> shift) & mask for k in range(size))

    def submatrix(self, r0: int, c0: int, size: int) -> "BitMatrix":
        mask = (1 << size) - 1
        return BitMatrix(size, tuple((self.rows[r0 + k] >> c0) & mask for k in range(size)))

    # -- arithmetic -----------------------------------------------------

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            k = 0
            while r:
                if r & 1:
                    acc ^= other.rows[k]
                r >>= 1
                k += 1
            out.append(acc)
        return BitMatrix(self.n, tuple(out))

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def _check_pair(self, src: int, dst: int) -> None:
        if not (0 <= src < self.n and 0 <= dst < self.n):
            raise IndexError(f"index out of range for n={self.n}: ({src}, {dst})")
        if src == dst:
            raise ValueError("src and dst must differ")

    def row_add(self, src: int, dst: int) -> "BitMatrix":
        """Return the matrix with row ``dst`` replaced by row dst XOR row src."""
        self._check_pair(src, dst)
        rows = list(self.rows)
        rows[dst] ^= rows[src]
        return BitMatrix(self.n, tuple(rows))

    def col_add(self, src: int, dst: int) -> "BitMatrix":
        """Return the matrix with column ``dst`` replaced by column dst XOR column src."""
        self._check_pair(src, dst)
        bit = 1 << dst
        rows = tuple(r ^ bit if (r >> src) & 1 else r for r in self.rows)
        return BitMatrix(self.n, rows)

    def swap_rows(self, a: int, b: int) -> "BitMatrix":
        self._check_pair(a, b)
        rows = list(self.rows)
        rows[a], rows[b] = rows[b], rows[a]
        return BitMatrix(self.n, tuple(rows))

    def permute_rows(self, perm: Sequence[int]) -> "BitMatrix":
        """Row ``i`` of the result is row ``perm[i]`` of this matrix."""
        check_permutation(perm, self.n)
        return BitMatrix(self.n, tuple(self.rows[p] for p in perm))

    # -- structure ------------------------------------------------------

    def rank(self) -> int:
        work = list(self.rows)
        rank = 0
        for col in range(self.n):
            bit = 1 << col
            pivot = next((r for r in range(rank, self.n) if work[r] & bit), None)
            if pivot is None:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            for r in range(self.n):
                if r != rank and work[r] & bit:
                    work[r] ^= work[rank]
            rank += 1
        return rank

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def inverse(self) -> "BitMatrix":
        """Gauss-Jordan inverse over GF(2).

        Raises:
            SingularMatrix: if some column has no pivot.
        """
        n = self.n
        work = list(self.rows)
        inv = [1 << i for i in range(n)]
        for col in range(n):
            bit = 1 << col
            pivot = next((r for r in range(col, n) if work[r] & bit), None)
            if pivot is None:
                raise SingularMatrix(f"no pivot in column {col}")
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                inv[col], inv[pivot] = inv[pivot], inv[col]
            for r in range(n):
                if r != col and work[r] & bit:
                    work[r] ^= work[col]
                    inv[r] ^= inv[col]
        return BitMatrix(n, tuple(inv))

    def is_permutation(self) -> Optional[Permutation]:
        """Return ``perm`` with row ``i`` equal to ``e_perm[i]``, or None."""
        perm = []
        seen = 0
        for r in self.rows:
            if r == 0 or r & (r - 1):
                return None
            if seen & r:
                return None
            seen |= r
            perm.append(r.bit_length() - 1)
        return tuple(perm)

    def is_unit_upper_triangular(self) -> bool:
        for i, r in enumerate(self.rows):
            if not (r >> i) & 1 or r & ((1 << i) - 1):
                return False
        return True

    def is_block_circulant(self, size: int) -> bool:
        """True when every ``size``-block (i, j) equals block (i-1, j-1) cyclically."""
        if size <= 0 or self.n % size:
            return False
        t = self.n // size
        first = [self.block(0, j, size) for j in range(t)]
        for bi in range(1, t):
            for bj in range(t):
                if self.block(bi, bj, size) != first[(bj - bi) % t]:
                    return False
        return True


def log2_exact(n: int) -> int:
    """Return m with ``n == 2**m``.

    Raises:
        NotPowerOfTwo: otherwise.
    """
    if n <= 0 or n & (n - 1):
        raise NotPowerOfTwo(f"{n} is not a power of two")
    return n.bit_length() - 1


def min_circulant_block_exponent(m: BitMatrix) -> Optional[int]:
    """Smallest ``b < log2(n)`` at which ``m`` is block-circulant with ``2**b`` blocks.

    Returns None when only the trivial single-block view (b = log2(n)) works.
    """
    k = log2_exact(m.n)
    for b in range(k):
        if m.is_block_circulant(1 << b):
            return b
    return None


def check_permutation(perm: Sequence[int], n: int) -> None:
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of range({n}): {list(perm)}")


def identity_permutation(n: int) -> Permutation:
    return tuple(range(n))


def invert_permutation(perm: Sequence[int]) -> Permutation:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def apply_elem_sequence(m: BitMatrix, ops: Iterable[ElemOp]) -> BitMatrix:
    """Apply ``ops`` to ``m`` in list order."""
    for op in ops:
        if op.kind is OpKind.ROW_ADD:
            m = m.row_add(op.src, op.dst)
        elif op.kind is OpKind.COL_ADD:
            m = m.col_add(op.src, op.dst)
        elif op.kind is OpKind.SWAP:
            m = m.swap_rows(op.src, op.dst)
        else:
            raise ValueError(f"unknown op kind {op.kind!r}")
    return m


def gaussian_elimination_ops(m: BitMatrix) -> list[ElemOp]:
    """Row adds and swaps that reduce ``m`` to the identity, in application order."""
    n = m.n
    work = list(m.rows)
    ops: list[ElemOp] = []
    for col in range(n):
        bit = 1 << col
        pivot = next((r for r in range(col, n) if work[r] & bit), None)
        if pivot is None:
            raise SingularMatrix(f"no pivot in column {col}")
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            ops.append(ElemOp.swap(col, pivot))
        for r in range(n):
            if r != col and work[r] & bit:
                work[r] ^= work[col]
                ops.append(ElemOp.row(col, r))
    return ops


def random_block_circulant(n: int, block_size: int, rng: np.random.Generator, invertible: bool = True) -> BitMatrix:
    """Random block-circulant matrix: block ``(i, j)`` is ``B[(j - i) mod t]``.

    With ``invertible`` the draw is repeated until the result is invertible.
    """
    if block_size <= 0 or n % block_size:
        raise ValueError(f"block size {block_size} does not tile {n}")
    t = n // block_size
    while True:
        blocks = [rng.integers(0, 2, size=(block_size, block_size), dtype=np.uint8) for _ in range(t)]
        arr = np.zeros((n, n), dtype=np.uint8)
        for bi in range(t):
            for bj in range(t):
                arr[bi * block_size:(bi + 1) * block_size, bj * block_size:(bj + 1) * block_size] = blocks[(bj - bi) % t]
        m = BitMatrix.from_array(arr)
        if not invertible or m.is_invertible():
            return m
