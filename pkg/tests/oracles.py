"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools

import numpy as np


def dense_rank_gf2(M) -> int:
    """Gaussian elimination on a numpy copy with full pivot search."""
    A = np.array(M, dtype=np.uint8) % 2
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = [i for i in range(r, rows) if A[i, c]]
        if not piv:
            continue
        A[[r, piv[0]]] = A[[piv[0], r]]
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
        if r == rows:
            break
    return r


def is_rref(M) -> bool:
    A = np.asarray(M)
    last = -1
    seen_zero = False
    for row in A:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last or A[:, p].sum() != 1:
            return False
        last = p
    return True


_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(s: str) -> np.ndarray:
    """Dense matrix of a Pauli string with an optional +/-/i/-i prefix."""
    coeff = 1
    if s.startswith("-"):
        coeff, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if s.startswith("i"):
        coeff, s = coeff * 1j, s[1:]
    out = np.array([[1.0 + 0j]])
    for ch in s:
        out = np.kron(out, _MATS[ch])
    return coeff * out


def brute_min_weight(n, in_normalizer, in_group, kinds="XYZ", w_max=None):
    """Smallest-weight Pauli string in N(S) minus the group, by plain enumeration."""
    from qecforge.pauli import PauliOperator

    w_max = n if w_max is None else w_max
    for w in range(1, w_max + 1):
        for qs in itertools.combinations(range(n), w):
            for ks in itertools.product(kinds, repeat=w):
                P = PauliOperator.from_sparse(n, dict(zip(qs, ks)))
                if in_normalizer(P) and not in_group(P):
                    return w
    return None


# --- dense state-vector simulator ---------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_ONE_QUBIT = {"H": _H, "S": _S, "S_DAG": _S.conj().T, "X": _MATS["X"], "Y": _MATS["Y"], "Z": _MATS["Z"]}


def _single(n, q, U):
    out = np.array([[1.0 + 0j]])
    for j in range(n):
        out = np.kron(out, U if j == q else np.eye(2))
    return out


def dense_gate(n, name, qubits):
    """Unitary of a named gate; qubit 0 is the most significant tensor factor."""
    if name in _ONE_QUBIT:
        return _single(n, qubits[0], _ONE_QUBIT[name])
    dim = 1 << n
    U = np.zeros((dim, dim), dtype=complex)
    a, b = qubits
    for idx in range(dim):
        bits = [(idx >> (n - 1 - j)) & 1 for j in range(n)]
        phase = 1
        if name == "CNOT":
            if bits[a]:
                bits[b] ^= 1
        elif name == "SWAP":
            bits[a], bits[b] = bits[b], bits[a]
        elif name == "CZ":
            if bits[a] and bits[b]:
                phase = -1
        else:
            raise ValueError(name)
        out = sum(bit << (n - 1 - j) for j, bit in enumerate(bits))
        U[out, idx] = phase
    return U


def dense_measure_probs(state, P_matrix):
    """Probabilities and post-measurement states for outcomes +1 and -1."""
    dim = state.shape[0]
    out = {}
    for o in (1, -1):
        proj = (np.eye(dim) + o * P_matrix) / 2
        v = proj @ state
        p = float(np.real(np.vdot(v, v)))
        out[o] = (p, v / np.sqrt(p) if p > 1e-12 else None)
    return out
