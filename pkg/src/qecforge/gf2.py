"""Dense linear algebra over GF(2).

Two layers live here.  The public :class:`BitMatrix` wraps a ``uint8`` numpy
array and is what the rest of the library passes around.  Underneath, the
elimination routines work on rows packed into Python integers (bit ``j`` of a
row is column ``j``), which keeps Gaussian elimination to a handful of XORs per
row regardless of width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np


# ---------------------------------------------------------------------------
# packed-row helpers
# ---------------------------------------------------------------------------

def pack_row(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence into an int (element ``j`` -> bit ``j``)."""
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def unpack_row(value: int, width: int) -> np.ndarray:
    """Inverse of :func:`pack_row`."""
    out = np.zeros(width, dtype=np.uint8)
    j = 0
    while value:
        if value & 1:
            out[j] = 1
        value >>= 1
        j += 1
    if j > width:
        raise ValueError("packed row wider than requested width")
    return out


def popcount(value: int) -> int:
    return bin(value).count("1")


def parity(value: int) -> int:
    return bin(value).count("1") & 1


def _rref_rows(rows: Sequence[int], ncols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form of packed rows; returns (nonzero rows, pivots)."""
    work = [r for r in rows]
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = None
        for r in range(rank, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        for r in range(len(work)):
            if r != rank and work[r] & bit:
                work[r] ^= prow
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


def rank_rows(rows: Sequence[int]) -> int:
    """Rank of packed rows (column order is irrelevant for rank)."""
    basis: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                rank += 1
                break
    return rank


class RowSpace:
    """Incremental basis of a subspace of GF(2)^N with membership tests.

    Vectors are packed ints.  Each stored basis vector is tagged with the
    combination (as a packed int over insertion indices) of inserted vectors
    that produces it, so :meth:`express` can write any member as a sum of the
    originals.
    """

    def __init__(self) -> None:
        self._basis: dict[int, Tuple[int, int]] = {}
        self._count = 0

    @property
    def dim(self) -> int:
        return len(self._basis)

    def add(self, v: int) -> bool:
        """Insert ``v``; returns True when it was independent."""
        tag = 1 << self._count
        self._count += 1
        combo = tag
        while v:
            top = v.bit_length() - 1
            entry = self._basis.get(top)
            if entry is None:
                self._basis[top] = (v, combo)
                return True
            v ^= entry[0]
            combo ^= entry[1]
        return False

    def contains(self, v: int) -> bool:
        while v:
            top = v.bit_length() - 1
            entry = self._basis.get(top)
            if entry is None:
                return False
            v ^= entry[0]
        return True

    def express(self, v: int) -> Optional[int]:
        """Combination of inserted vectors summing to ``v``, or None."""
        combo = 0
        while v:
            top = v.bit_length() - 1
            entry = self._basis.get(top)
            if entry is None:
                return None
            v ^= entry[0]
            combo ^= entry[1]
        return combo


def kernel_rows(rows: Sequence[int], ncols: int) -> List[int]:
    """Packed basis of {x : row . x = 0 for every row}."""
    reduced, pivots = _rref_rows(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, pc in zip(reduced, pivots):
            if (row >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def solve_rows(rows: Sequence[int], ncols: int, rhs: Sequence[int]) -> Optional[int]:
    """Solve ``M x = rhs`` with ``M`` given by packed rows; returns packed x."""
    if len(rhs) != len(rows):
        raise ValueError(f"rhs has length {len(rhs)}, expected {len(rows)}")
    aug = [r | ((int(b) & 1) << ncols) for r, b in zip(rows, rhs)]
    reduced, pivots = _rref_rows(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = 0
    for row, pc in zip(reduced, pivots):
        if (row >> ncols) & 1:
            x |= 1 << pc
    return x


# ---------------------------------------------------------------------------
# BitMatrix
# ---------------------------------------------------------------------------

class BitMatrix:
    """Immutable dense matrix over GF(2)."""

    __slots__ = ("_a",)

    def __init__(self, data, cols: Optional[int] = None):
        if isinstance(data, BitMatrix):
            arr = data._a
        else:
            arr = np.asarray(data, dtype=np.int64)
            if arr.ndim == 1 and arr.size == 0:
                arr = np.zeros((0, cols or 0), dtype=np.int64)
            if arr.ndim != 2:
                raise ValueError("BitMatrix needs a 2-D array")
            arr = (arr & 1).astype(np.uint8)
        if cols is not None and arr.shape[1] != cols:
            raise ValueError(f"expected {cols} columns, got {arr.shape[1]}")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        self._a = arr

    # construction ---------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Sequence[int], cols: int) -> "BitMatrix":
        nbytes = (cols + 7) // 8
        arr = np.zeros((len(rows), cols), dtype=np.uint8)
        for i, r in enumerate(rows):
            if r >> cols:
                raise ValueError("packed row wider than requested width")
            raw = np.frombuffer(int(r).to_bytes(nbytes, "little"), dtype=np.uint8)
            arr[i] = np.unpackbits(raw, bitorder="little")[:cols]
        return cls(arr)

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "BitMatrix":
        rows = [[int(ch) for ch in line if ch in "01"] for line in lines]
        if not rows:
            return cls.zeros(0, 0)
        return cls(np.array(rows, dtype=np.uint8))

    # views ----------------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self._a.T)

    def packed_rows(self) -> List[int]:
        if self.cols == 0:
            return [0] * self.rows
        packed = np.packbits(self._a, axis=1, bitorder="little")
        return [int.from_bytes(r.tobytes(), "little") for r in packed]

    def row(self, i: int) -> np.ndarray:
        return self._a[i]

    def column(self, j: int) -> np.ndarray:
        return self._a[:, j]

    # algebra --------------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            return BitMatrix((self._a.astype(np.int64) @ other._a.astype(np.int64)) & 1)
        vec = np.asarray(other, dtype=np.int64)
        if vec.shape[0] != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ {vec.shape}")
        return ((self._a.astype(np.int64) @ vec) & 1).astype(np.uint8)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(self._a ^ other._a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def __str__(self) -> str:
        return "\n".join("".join(str(int(b)) for b in row) for row in self._a)

    def is_zero(self) -> bool:
        return not self._a.any()

    def rank(self) -> int:
        return rank_rows(self.packed_rows())

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(np.hstack([self._a, other._a]))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(np.vstack([self._a, other._a]))

    def kron(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(np.kron(self._a, other._a))

    def row_weights(self) -> np.ndarray:
        return self._a.sum(axis=1)

    def col_weights(self) -> np.ndarray:
        return self._a.sum(axis=0)


def hstack(*mats: BitMatrix) -> BitMatrix:
    return BitMatrix(np.hstack([m.array for m in mats]))


def vstack(*mats: BitMatrix) -> BitMatrix:
    return BitMatrix(np.vstack([m.array for m in mats]))


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RrefResult:
    reduced: BitMatrix
    pivots: Tuple[int, ...]
    rank: int

    def __iter__(self):
        return iter((self.reduced, self.pivots, self.rank))


def rref(M: BitMatrix) -> RrefResult:
    """Reduced row echelon form; zero rows are kept at the bottom."""
    rows = M.packed_rows()
    reduced, pivots = _rref_rows(rows, M.cols)
    full = reduced + [0] * (M.rows - len(reduced))
    return RrefResult(BitMatrix.from_rows(full, M.cols), tuple(pivots), len(pivots))


def rank(M: BitMatrix) -> int:
    return M.rank()


def kernel_basis(M: BitMatrix) -> BitMatrix:
    """Null-space basis, one vector per row (``cols - rank`` rows)."""
    return BitMatrix.from_rows(kernel_rows(M.packed_rows(), M.cols), M.cols)


def solve(M: BitMatrix, s) -> Optional[np.ndarray]:
    """A solution ``x`` of ``M x = s`` or None when the system is inconsistent."""
    s = np.asarray(s, dtype=np.int64).ravel()
    if s.shape[0] != M.rows:
        raise ValueError(f"syndrome has length {s.shape[0]}, expected {M.rows}")
    x = solve_rows(M.packed_rows(), M.cols, s.tolist())
    if x is None:
        return None
    return unpack_row(x, M.cols)


def rowspace_contains(M: BitMatrix, v) -> bool:
    space = RowSpace()
    for r in M.packed_rows():
        space.add(r)
    return space.contains(pack_row(np.asarray(v).tolist()))


__all__ = [
    "BitMatrix",
    "RowSpace",
    "RrefResult",
    "hstack",
    "vstack",
    "kernel_basis",
    "kernel_rows",
    "pack_row",
    "parity",
    "popcount",
    "rank",
    "rank_rows",
    "rowspace_contains",
    "rref",
    "solve",
    "solve_rows",
    "unpack_row",
]
