"""Shared pieces: weights, GF(2) helpers on numpy bit arrays, the decoder base class."""

from __future__ import annotations

from typing import Dict, Optional, Sequence

import numpy as np

from ..gf2 import BitMatrix, RowSpace, kernel_basis
from ..stabilizer import InstanceTooLarge


class DecoderError(RuntimeError):
    pass


class InfeasibleSyndrome(DecoderError):
    """The syndrome is outside the column space of the check matrix."""


class IncompatibleDecoder(ValueError):
    """The decoder cannot handle this code / noise combination."""


def llr_weights(priors) -> np.ndarray:
    """``w_i = ln((1 - p_i) / p_i)``; infinite for ``p_i = 0``."""
    p = np.asarray(priors, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log1p(-p) - np.log(p)


def column_ints(H) -> list:
    """Columns of ``H`` packed as Python ints (bit ``r`` = row ``r``)."""
    A = np.asarray(H.array if isinstance(H, BitMatrix) else H, dtype=np.uint8)
    weights = [1 << r for r in range(A.shape[0])]
    return [sum(w for w, b in zip(weights, A[:, j]) if b) for j in range(A.shape[1])]


def bits_to_int(bits) -> int:
    out = 0
    for i, b in enumerate(np.asarray(bits, dtype=np.uint8)):
        if b:
            out |= 1 << i
    return out


def int_to_bits(v: int, n: int) -> np.ndarray:
    return np.array([(v >> i) & 1 for i in range(n)], dtype=np.uint8)


def solve_columns(cols: Sequence[int], s: int, order: Optional[Sequence[int]] = None) -> Optional[list]:
    """Indices ``J`` (taken greedily in ``order``) with XOR of ``cols[J]`` equal to ``s``.

    Only columns that are independent of earlier ones in ``order`` can be
    used, so with a reliability order this is order-0 OSD.  None when ``s``
    is not in the span.
    """
    if order is None:
        order = range(len(cols))
    sp = RowSpace()
    used = []
    for j in order:
        if sp.add(cols[j]):
            used.append(j)
        else:
            used.append(None)
    combo = sp.express(s)
    if combo is None:
        return None
    return [j for t, j in enumerate(used) if j is not None and (combo >> t) & 1]


def kernel_basis_bits(H: np.ndarray) -> np.ndarray:
    """Rows spanning ``ker H`` as a uint8 array."""
    K = kernel_basis(BitMatrix(np.asarray(H, dtype=np.uint8)))
    return np.asarray(K.array, dtype=np.uint8).reshape(-1, H.shape[1])


def particular_solution(H: np.ndarray, s) -> np.ndarray:
    cols = column_ints(H)
    J = solve_columns(cols, bits_to_int(s))
    if J is None:
        raise InfeasibleSyndrome("syndrome is not reachable from the fault set")
    e = np.zeros(H.shape[1], dtype=np.uint8)
    e[J] = 1
    return e


def coset_iter(e0: np.ndarray, K: np.ndarray, max_dim: int = 22, chunk: int = 1 << 14):
    """Yield blocks of the affine space ``e0 + span(K)`` as uint8 arrays."""
    r = K.shape[0]
    if r > max_dim:
        raise InstanceTooLarge(f"kernel dimension {r} exceeds the exhaustive limit {max_dim}")
    total = 1 << r
    Ki = K.astype(np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coeffs = ((idx[:, None] >> np.arange(r, dtype=np.int64)) & 1) if r else np.zeros((len(idx), 0), np.int64)
        block = (coeffs @ Ki) & 1 if r else np.zeros((len(idx), len(e0)), np.int64)
        yield (block.astype(np.uint8) ^ e0[None, :])


def lexicographic_argmin(costs: np.ndarray, candidates: np.ndarray, rtol: float = 1e-12) -> int:
    """Index of the minimum cost, ties broken by the lexicographically smallest row."""
    best = costs.min()
    tol = rtol * max(1.0, abs(best)) if np.isfinite(best) else 0.0
    tied = np.flatnonzero(costs <= best + tol)
    if len(tied) == 1:
        return int(tied[0])
    rows = [tuple(candidates[i]) for i in tied]
    return int(tied[min(range(len(rows)), key=rows.__getitem__)])


class Decoder:
    """Decode detection-event vectors of a :class:`DetectorModel` into fault vectors."""

    name = "decoder"

    def __init__(self, model, options: Optional[Dict] = None, code=None):
        self.model = model
        self.options = dict(options or {})
        self.code = code
        self.H = np.asarray(model.check_matrix().array, dtype=np.uint8)
        self.priors = model.priors()
        self._memo: Dict[bytes, np.ndarray] = {}
        self.flagged = 0

    def decode(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.uint8)
        key = s.tobytes()
        hit = self._memo.get(key)
        if hit is None:
            hit = self._decode(s)
            self._memo[key] = hit
        return hit

    def _decode(self, s: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError
