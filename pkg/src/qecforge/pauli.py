"""Pauli operators in binary symplectic form.

An ``n``-qubit Pauli is stored as two ``n``-bit masks ``x`` and ``z`` plus a
phase exponent ``phase`` (the operator is ``i**phase`` times the tensor product
of the single-qubit factors).  Bit ``q`` of a mask refers to qubit ``q``
(0-based); in text form qubit 0 is the leftmost character.  A qubit with both
bits set carries a genuine ``Y`` factor, so a phase of 0 always denotes a
Hermitian operator such as ``XZZXI`` or ``YY``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

_CHAR_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of ``i`` picked up when multiplying the per-qubit factors.

    Cyclic products XY=iZ, YZ=iX, ZX=iY contribute +1, the reversed orders -1.
    """
    y1 = x1 & z1
    X1 = x1 & ~z1
    Z1 = z1 & ~x1
    y2 = x2 & z2
    X2 = x2 & ~z2
    Z2 = z2 & ~x2
    pos = (X1 & y2) | (y1 & Z2) | (Z1 & X2)
    neg = (y1 & X2) | (Z1 & y2) | (X1 & Z2)
    return _popcount(pos) - _popcount(neg)


@dataclass(frozen=True)
class PauliOperator:
    """``i**phase * P_0 (x) P_1 (x) ... (x) P_{n-1}``."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        limit = 1 << self.n
        if self.x < 0 or self.z < 0 or self.x >= limit or self.z >= limit:
            raise ValueError(f"masks must fit in {self.n} bits")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction ---------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_str(cls, text: str) -> "PauliOperator":
        """Parse e.g. ``"XZZXI"``, ``"-ZZ"``, ``"+iXY"`` or ``"XX;II"``.

        Semicolons, spaces and underscores are ignored so lattice-style
        strings such as ``"IZ;ZI"`` read naturally.
        """
        s = text.strip()
        phase = 0
        if s.startswith("+"):
            s = s[1:]
        elif s.startswith("-"):
            phase = 2
            s = s[1:]
        if s.startswith("i"):
            phase += 1
            s = s[1:]
        x = z = 0
        q = 0
        for ch in s:
            if ch in "; _":
                continue
            try:
                bx, bz = _CHAR_BITS[ch.upper()]
            except KeyError:
                raise ValueError(f"bad Pauli character {ch!r} in {text!r}") from None
            x |= bx << q
            z |= bz << q
            q += 1
        return cls(q, x, z, phase)

    @classmethod
    def from_sparse(cls, n: int, factors: Mapping[int, str], phase: int = 0) -> "PauliOperator":
        """Build from ``{qubit: 'X'|'Y'|'Z'}``."""
        x = z = 0
        for q, ch in factors.items():
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for n={n}")
            bx, bz = _CHAR_BITS[ch.upper()]
            x |= bx << q
            z |= bz << q
        return cls(n, x, z, phase)

    @classmethod
    def from_bits(cls, xbits: Sequence[int], zbits: Sequence[int], phase: int = 0) -> "PauliOperator":
        xb = np.asarray(xbits, dtype=np.int64).ravel()
        zb = np.asarray(zbits, dtype=np.int64).ravel()
        if xb.shape != zb.shape:
            raise ValueError("x and z bit vectors differ in length")
        x = sum(1 << i for i, b in enumerate(xb.tolist()) if b & 1)
        z = sum(1 << i for i, b in enumerate(zb.tolist()) if b & 1)
        return cls(len(xb), x, z, phase)

    @classmethod
    def from_symplectic(cls, n: int, v: int, phase: int = 0) -> "PauliOperator":
        """Inverse of :attr:`vec` (``x`` in the low ``n`` bits, ``z`` above)."""
        mask = (1 << n) - 1
        return cls(n, v & mask, (v >> n) & mask, phase)

    # views ----------------------------------------------------------------
    @property
    def vec(self) -> int:
        """Packed symplectic vector ``x | z << n``."""
        return self.x | (self.z << self.n)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> tuple:
        s = self.x | self.z
        return tuple(q for q in range(self.n) if (s >> q) & 1)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        if self.phase == 0:
            return 1
        if self.phase == 2:
            return -1
        raise ValueError(f"{self} is not Hermitian")

    def xbits(self) -> np.ndarray:
        return np.array([(self.x >> q) & 1 for q in range(self.n)], dtype=np.uint8)

    def zbits(self) -> np.ndarray:
        return np.array([(self.z >> q) & 1 for q in range(self.n)], dtype=np.uint8)

    def char(self, q: int) -> str:
        return "IXZY"[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)]

    def body(self) -> str:
        """Text form without the phase prefix."""
        return "".join(self.char(q) for q in range(self.n))

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.body()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    # algebra --------------------------------------------------------------
    def _check(self, other: "PauliOperator") -> None:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return pauli_mul(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, self.phase + 2)

    def commutes(self, other: "PauliOperator") -> bool:
        return symplectic_product(self, other) == 0

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, 0)

    def with_phase(self, phase: int) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, phase)

    def equal_up_to_phase(self, other: "PauliOperator") -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    def restricted(self, qubits: Iterable[int]) -> "PauliOperator":
        """Keep only the factors on ``qubits`` (same ``n``, phase kept)."""
        m = 0
        for q in qubits:
            m |= 1 << q
        return PauliOperator(self.n, self.x & m, self.z & m, self.phase)

    def tensor(self, other: "PauliOperator") -> "PauliOperator":
        """``self (x) other`` with ``other`` on the higher qubit indices."""
        return PauliOperator(
            self.n + other.n,
            self.x | (other.x << self.n),
            self.z | (other.z << self.n),
            self.phase + other.phase,
        )

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix; qubit 0 is the most significant factor."""
        mats = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
        }
        out = np.array([[1.0 + 0j]])
        for q in range(self.n):
            out = np.kron(out, mats[self.char(q)])
        return (1j ** self.phase) * out


def symplectic_product(P: PauliOperator, Q: PauliOperator) -> int:
    """0 when ``P`` and ``Q`` commute, 1 when they anticommute."""
    if P.n != Q.n:
        raise ValueError(f"qubit count mismatch: {P.n} vs {Q.n}")
    return (_popcount(P.x & Q.z) + _popcount(P.z & Q.x)) & 1


def symplectic_vec_product(u: int, v: int, n: int) -> int:
    """Symplectic form on packed vectors ``x | z << n``."""
    mask = (1 << n) - 1
    return (_popcount(u & (v >> n) & mask) + _popcount((u >> n) & v & mask)) & 1


def pauli_mul(P: PauliOperator, Q: PauliOperator) -> PauliOperator:
    """Exact product ``P Q`` including the phase."""
    if P.n != Q.n:
        raise ValueError(f"qubit count mismatch: {P.n} vs {Q.n}")
    ph = P.phase + Q.phase + _product_phase(P.x, P.z, Q.x, Q.z)
    return PauliOperator(P.n, P.x ^ Q.x, P.z ^ Q.z, ph)


def product(ops: Iterable[PauliOperator], n: int | None = None) -> PauliOperator:
    """Ordered product of a sequence of Paulis."""
    acc = None
    for op in ops:
        acc = op if acc is None else pauli_mul(acc, op)
    if acc is None:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliOperator.identity(n)
    return acc


def single(n: int, q: int, kind: str) -> PauliOperator:
    return PauliOperator.from_sparse(n, {q: kind})


def weight_one_paulis(n: int):
    """All ``3n`` single-qubit Paulis ordered (X_q, Z_q, Y_q) per qubit."""
    for q in range(n):
        for kind in "XZY":
            yield single(n, q, kind)


def paulis(strings: Sequence[str]) -> list:
    return [PauliOperator.from_str(s) for s in strings]


def symplectic_matrix(ops: Sequence[PauliOperator]) -> np.ndarray:
    """Rows ``[x | z]`` as a uint8 array."""
    if not ops:
        return np.zeros((0, 0), dtype=np.uint8)
    n = ops[0].n
    out = np.zeros((len(ops), 2 * n), dtype=np.uint8)
    for i, op in enumerate(ops):
        out[i, :n] = op.xbits()
        out[i, n:] = op.zbits()
    return out


__all__ = [
    "PauliOperator",
    "pauli_mul",
    "paulis",
    "product",
    "single",
    "symplectic_matrix",
    "symplectic_product",
    "symplectic_vec_product",
    "weight_one_paulis",
]
