"""Exact most-likely-error and degenerate maximum-likelihood decoding by coset enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..pauli import PauliOperator
from ..stabilizer import InstanceTooLarge
from .common import (
    Decoder,
    coset_iter,
    kernel_basis_bits,
    lexicographic_argmin,
    llr_weights,
    particular_solution,
)

MAX_KERNEL_DIM = 22


# ---------------------------------------------------------------------------
# Pauli-level helpers
# ---------------------------------------------------------------------------

def _syndrome_matrix(code) -> np.ndarray:
    """``M`` with ``M [x|z] = syndrome`` for generators of ``code``."""
    n = code.n
    rows = []
    for g in code.stabilizers:
        rows.append(np.concatenate([g.zbits(), g.xbits()]))
    return np.array(rows, dtype=np.uint8).reshape(len(rows), 2 * n)


def _logical_matrix(code) -> np.ndarray:
    """Rows detect the logical class: commutation with X-bar's then Z-bar's."""
    ops = list(code.logical_x) + list(code.logical_z)
    n = code.n
    return np.array([np.concatenate([L.zbits(), L.xbits()]) for L in ops], dtype=np.uint8).reshape(len(ops), 2 * n)


def _cost_table(channel, n: int) -> np.ndarray:
    """``-ln P`` per qubit for I, X, Y, Z (columns indexed by ``x + 2 z``)."""
    chans = channel if isinstance(channel, (list, tuple)) else [channel] * n
    out = np.zeros((n, 4))
    for q, ch in enumerate(chans):
        probs = {0: ch.p_identity, 1: ch.px, 3: ch.py, 2: ch.pz}
        for idx, p in probs.items():
            out[q, idx] = -np.log(p) if p > 0 else np.inf
    return out


def _coset_costs(block: np.ndarray, table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    idx = block[:, :n].astype(np.int64) + 2 * block[:, n:].astype(np.int64)
    with np.errstate(invalid="ignore"):
        return table[np.arange(n)[None, :], idx].sum(axis=1)


def _to_pauli(v: np.ndarray, n: int) -> PauliOperator:
    return PauliOperator.from_bits(v[:n], v[n:])


@dataclass
class _Coset:
    e0: np.ndarray
    K: np.ndarray


def _pauli_coset(code, s) -> _Coset:
    M = _syndrome_matrix(code)
    s = np.asarray(s, dtype=np.uint8) if not isinstance(s, (int, np.integer)) else np.array(
        [(int(s) >> j) & 1 for j in range(code.m)], dtype=np.uint8)
    e0 = particular_solution(M, s) if M.shape[0] else np.zeros(2 * code.n, dtype=np.uint8)
    K = kernel_basis_bits(M) if M.shape[0] else np.eye(2 * code.n, dtype=np.uint8)
    return _Coset(e0, K)


# ---------------------------------------------------------------------------
# MLE
# ---------------------------------------------------------------------------

def mle_decode(target, s, priors=None, max_dim: int = MAX_KERNEL_DIM):
    """Most likely error consistent with ``s``; ties go to the lexicographically smallest.

    ``target`` is either a stabilizer code (``priors`` a :class:`PauliChannel`
    or one channel per qubit; the result is a :class:`PauliOperator`, ordered
    lexicographically by its ``[x|z]`` bits) or a detector model / binary
    check matrix (``priors`` per-mechanism probabilities, default the model's).
    """
    if hasattr(target, "stabilizers"):
        if priors is None:
            raise ValueError("Pauli-level MLE needs a channel")
        cos = _pauli_coset(target, s)
        table = _cost_table(priors, target.n)
        best_cost, best_vec = np.inf, None
        for block in coset_iter(cos.e0, cos.K, max_dim):
            c = _coset_costs(block, table)
            i = lexicographic_argmin(c, block)
            if best_vec is None or c[i] < best_cost - 1e-12 * max(1, abs(best_cost)) or (
                    abs(c[i] - best_cost) <= 1e-12 * max(1, abs(best_cost)) and tuple(block[i]) < tuple(best_vec)):
                best_cost, best_vec = c[i], block[i].copy()
        return _to_pauli(best_vec, target.n)
    H, p = _binary_problem(target, priors)
    return _binary_mle(H, np.asarray(s, dtype=np.uint8), llr_weights(p), max_dim)


def _binary_problem(target, priors):
    if hasattr(target, "check_matrix") and callable(target.check_matrix):
        H = np.asarray(target.check_matrix().array, dtype=np.uint8)
        p = target.priors() if priors is None else np.asarray(priors, dtype=float)
    else:
        H = np.asarray(getattr(target, "array", target), dtype=np.uint8)
        if priors is None:
            raise ValueError("binary MLE needs priors")
        p = np.broadcast_to(np.asarray(priors, dtype=float), (H.shape[1],)).copy()
    return H, p


def _binary_mle(H: np.ndarray, s: np.ndarray, w: np.ndarray, max_dim: int) -> np.ndarray:
    e0 = particular_solution(H, s) if H.shape[0] else np.zeros(H.shape[1], dtype=np.uint8)
    K = kernel_basis_bits(H) if H.shape[0] else np.eye(H.shape[1], dtype=np.uint8)
    best_cost, best = np.inf, None
    for block in coset_iter(e0, K, max_dim):
        with np.errstate(invalid="ignore"):
            c = np.where(block == 1, w[None, :], 0.0).sum(axis=1)
        i = lexicographic_argmin(c, block)
        tol = 1e-12 * max(1, abs(best_cost)) if np.isfinite(best_cost) else 0
        if best is None or c[i] < best_cost - tol or (abs(c[i] - best_cost) <= tol and tuple(block[i]) < tuple(best)):
            best_cost, best = c[i], block[i].copy()
    return best


class MleDecoder(Decoder):
    name = "mle"

    def __init__(self, model, options=None, code=None):
        super().__init__(model, options, code)
        self.max_dim = int(self.options.get("max_dim", MAX_KERNEL_DIM))
        dim = self.H.shape[1] - _gf2_rank(self.H)
        if dim > self.max_dim:
            raise InstanceTooLarge(f"MLE would enumerate 2^{dim} configurations")
        self.w = llr_weights(self.priors)

    def _decode(self, s):
        return _binary_mle(self.H, s, self.w, self.max_dim)


def _gf2_rank(H: np.ndarray) -> int:
    from ..gf2 import BitMatrix

    return BitMatrix(H).rank() if H.shape[0] else 0


# ---------------------------------------------------------------------------
# degenerate decoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DmldResult:
    label: Tuple[int, ...]  # logical class bits (anticommutation with X-bar's, then Z-bar's)
    class_probabilities: Dict[Tuple[int, ...], float]  # joint P(s, class)
    correction: object  # most likely element of the chosen class

    @property
    def syndrome_probability(self) -> float:
        return float(sum(self.class_probabilities.values()))


def dmld_decode(target, s, priors=None, max_dim: int = MAX_KERNEL_DIM) -> DmldResult:
    """Pick the logical class with the largest total probability given ``s``.

    For a stabilizer code every element of ``T(s) N(S)`` is enumerated; for a
    CSS code whose coset is too large, set ``target`` to a side detector
    model instead (X and Z classes are then handled independently).
    """
    if hasattr(target, "stabilizers"):
        if priors is None:
            raise ValueError("Pauli-level DMLD needs a channel")
        cos = _pauli_coset(target, s)
        table = _cost_table(priors, target.n)
        Lm = _logical_matrix(target).astype(np.int64)
        n = target.n
        return _dmld_enumerate(cos.e0, cos.K, lambda b: _coset_costs(b, table), Lm, max_dim,
                               lambda v: _to_pauli(v, n))
    H, p = _binary_problem(target, priors)
    L = np.asarray(target.logical_matrix().array, dtype=np.int64) if hasattr(target, "logical_matrix") else None
    if L is None:
        raise ValueError("binary DMLD needs a model with observables")
    s = np.asarray(s, dtype=np.uint8)
    e0 = particular_solution(H, s) if H.shape[0] else np.zeros(H.shape[1], dtype=np.uint8)
    K = kernel_basis_bits(H) if H.shape[0] else np.eye(H.shape[1], dtype=np.uint8)
    w = llr_weights(p)
    const = -np.log1p(-p).sum()

    def cost(block):
        with np.errstate(invalid="ignore"):
            return np.where(block == 1, w[None, :], 0.0).sum(axis=1) + const

    return _dmld_enumerate(e0, K, cost, L, max_dim, lambda v: v)


def _dmld_enumerate(e0, K, cost_fn, Lm, max_dim, wrap) -> DmldResult:
    probs: Dict[Tuple[int, ...], float] = {}
    best: Dict[Tuple[int, ...], Tuple[float, np.ndarray]] = {}
    for block in coset_iter(e0, K, max_dim):
        c = cost_fn(block)
        labels = (block.astype(np.int64) @ Lm.T) & 1 if Lm.shape[0] else np.zeros((len(block), 0), np.int64)
        pr = np.exp(-c)
        keys, inverse = np.unique(labels, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).ravel()
        for u, key in enumerate(keys):
            sel = np.flatnonzero(inverse == u)
            lab = tuple(int(b) for b in key)
            probs[lab] = probs.get(lab, 0.0) + float(pr[sel].sum())
            i = sel[lexicographic_argmin(c[sel], block[sel])]
            cur = best.get(lab)
            if cur is None or c[i] < cur[0] - 1e-12 * max(1, abs(cur[0])) or (
                    abs(c[i] - cur[0]) <= 1e-12 * max(1, abs(cur[0])) and tuple(block[i]) < tuple(cur[1])):
                best[lab] = (float(c[i]), block[i].copy())
    # largest total probability; ties go to the class holding the most likely error
    label = max(probs, key=lambda k: (probs[k], -best[k][0], tuple(-int(b) for b in best[k][1])))
    return DmldResult(label, probs, wrap(best[label][1]))


class DmldDecoder(Decoder):
    name = "dmld"

    def __init__(self, model, options=None, code=None):
        super().__init__(model, options, code)
        self.max_dim = int(self.options.get("max_dim", MAX_KERNEL_DIM))
        if self.H.shape[1] - _gf2_rank(self.H) > self.max_dim:
            raise InstanceTooLarge("DMLD coset enumeration too large for this model")

    def _decode(self, s):
        return np.asarray(dmld_decode(self.model, s, max_dim=self.max_dim).correction, dtype=np.uint8)


# ---------------------------------------------------------------------------
# exact figures of merit
# ---------------------------------------------------------------------------

def exact_success_probability(code, channel, decode, max_dim: int = MAX_KERNEL_DIM) -> float:
    """``sum_s P(class of decode(s) | s) P(s)`` by enumerating every syndrome.

    ``decode`` maps a syndrome bit array to a Pauli correction.
    """
    total = 0.0
    Lm = _logical_matrix(code).astype(np.int64)
    for sint in range(1 << code.m):
        s = np.array([(sint >> j) & 1 for j in range(code.m)], dtype=np.uint8)
        res = dmld_decode(code, s, channel, max_dim)
        C = decode(s)
        v = np.concatenate([C.xbits(), C.zbits()]).astype(np.int64)
        lab = tuple(int(b) for b in (Lm @ v) & 1)
        total += res.class_probabilities.get(lab, 0.0)
    return total
