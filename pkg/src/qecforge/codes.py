"""Constructors for the supported code families.

Every builder returns a validated :class:`~qecforge.stabilizer.StabilizerCode`
or :class:`~qecforge.stabilizer.SubsystemCode`.  Qubit numbering conventions
are documented per family so that generator listings are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import BitMatrix, kernel_rows, rank
from .pauli import PauliOperator
from .stabilizer import (
    CodeError,
    StabilizerCode,
    SubsystemCode,
    build_stabilizer_group,
    subsystem_analyze,
    trivial_code,
)


class CssConditionViolated(CodeError):
    def __init__(self, i: int, j: int):
        super().__init__(f"X check {i} and Z check {j} overlap on an odd number of qubits")
        self.i = i
        self.j = j


class DuplicateTerm(CodeError):
    pass


# ---------------------------------------------------------------------------
# small families
# ---------------------------------------------------------------------------

def repetition_parity_check(n: int, periodic: bool = False) -> BitMatrix:
    """Classical repetition checks ``e_i + e_{i+1}``; the periodic form is circulant."""
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    rows = n if periodic else n - 1
    H = np.zeros((rows, n), dtype=np.uint8)
    for i in range(rows):
        H[i, i] = 1
        H[i, (i + 1) % n] = 1
    return BitMatrix(H)


def build_repetition(n: int, basis: str = "Z") -> StabilizerCode:
    """``n``-qubit repetition code with weight-2 checks on neighbouring qubits.

    ``basis="Z"`` protects against bit flips (checks ``Z_i Z_{i+1}``);
    ``basis="X"`` is the Hadamard-conjugate phase-flip code.
    """
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    basis = basis.upper()
    if basis not in ("Z", "X"):
        raise ValueError("basis must be 'Z' or 'X'")
    full = (1 << n) - 1
    if basis == "Z":
        gens = [PauliOperator(n, 0, 0b11 << i) for i in range(n - 1)]
        lx = [PauliOperator(n, full, 0)]
        lz = [PauliOperator(n, 0, 1)]
    else:
        gens = [PauliOperator(n, 0b11 << i, 0) for i in range(n - 1)]
        lx = [PauliOperator(n, 1, 0)]
        lz = [PauliOperator(n, 0, full)]
    return build_stabilizer_group(gens, name=f"repetition_{basis.lower()}{n}", logical_x=lx,
                                  logical_z=lz, known_distance=1)


def build_shor9() -> StabilizerCode:
    """Nine-qubit code: three blocks of three, Z pairs inside blocks, X across block pairs."""
    n = 9
    gens = []
    for b in range(3):
        for i in range(2):
            q = 3 * b + i
            gens.append(PauliOperator(n, 0, 0b11 << q))
    gens.append(PauliOperator(n, 0b000111111, 0))
    gens.append(PauliOperator(n, 0b111111000, 0))
    return build_stabilizer_group(gens, name="shor9", known_distance=3)


STEANE_H = ("0001111", "0110011", "1010101")
# Same Hamming code, columns permuted so that column 3 reads (1, 0, 1).
STEANE_H_SYSTEMATIC = ("1110100", "1101010", "1011001")


def build_steane(H: Optional[BitMatrix] = None) -> StabilizerCode:
    """Seven-qubit code from two copies of the [7,4,3] Hamming checks."""
    if H is None:
        H = BitMatrix.from_strings(STEANE_H)
    code = build_css(H, H, name="steane")
    return code.with_distance(3)


FIVE_QUBIT_GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")


def build_five_qubit() -> StabilizerCode:
    gens = [PauliOperator.from_str(s) for s in FIVE_QUBIT_GENERATORS]
    return build_stabilizer_group(gens, name="five_qubit", logical_x=["XXXXX"], logical_z=["ZZZZZ"],
                                  known_distance=3)


def build_css(H_X: BitMatrix, H_Z: BitMatrix, name: str = "css", known_distance: Optional[int] = None) -> StabilizerCode:
    """CSS code with X checks from the rows of ``H_X`` and Z checks from ``H_Z``."""
    H_X = BitMatrix(H_X)
    H_Z = BitMatrix(H_Z)
    n = max(H_X.cols, H_Z.cols)
    if H_X.rows == 0:
        H_X = BitMatrix.zeros(0, n)
    if H_Z.rows == 0:
        H_Z = BitMatrix.zeros(0, n)
    if H_X.cols != H_Z.cols:
        raise CodeError(f"H_X has {H_X.cols} columns but H_Z has {H_Z.cols}")
    overlap = (H_X @ H_Z.T).array
    if overlap.any():
        i, j = map(int, np.argwhere(overlap)[0])
        raise CssConditionViolated(i, j)
    gens = [PauliOperator(n, r, 0) for r in H_X.packed_rows() if r]
    gens += [PauliOperator(n, 0, r) for r in H_Z.packed_rows() if r]
    if not gens:
        return trivial_code(n, name)
    return build_stabilizer_group(gens, name=name, known_distance=known_distance)


# ---------------------------------------------------------------------------
# topological codes
# ---------------------------------------------------------------------------

def toric_edge(L: int, r: int, c: int, orientation: str) -> int:
    """Edge index on the L x L torus: horizontal edges first, row-major.

    Horizontal edge ``(r, c)`` joins vertices ``(r, c)`` and ``(r, c+1)``;
    vertical edge ``(r, c)`` joins ``(r, c)`` and ``(r+1, c)``.
    """
    r %= L
    c %= L
    if orientation == "h":
        return r * L + c
    if orientation == "v":
        return L * L + r * L + c
    raise ValueError("orientation must be 'h' or 'v'")


def toric_checks(L: int) -> Tuple[List[PauliOperator], List[PauliOperator]]:
    """All ``L^2`` plaquette (Z) and ``L^2`` vertex (X) operators."""
    n = 2 * L * L
    e = lambda r, c, o: 1 << toric_edge(L, r, c, o)  # noqa: E731
    plaquettes = []
    vertices = []
    for r in range(L):
        for c in range(L):
            pz = e(r, c, "h") | e(r + 1, c, "h") | e(r, c, "v") | e(r, c + 1, "v")
            plaquettes.append(PauliOperator(n, 0, pz))
            vx = e(r, c, "h") | e(r, c - 1, "h") | e(r, c, "v") | e(r - 1, c, "v")
            vertices.append(PauliOperator(n, vx, 0))
    return plaquettes, vertices


def build_toric(L: int) -> StabilizerCode:
    if L < 2:
        raise ValueError("toric code needs L >= 2")
    n = 2 * L * L
    plaq, vert = toric_checks(L)
    e = lambda r, c, o: 1 << toric_edge(L, r, c, o)  # noqa: E731
    z1 = sum(e(0, c, "h") for c in range(L))
    z2 = sum(e(r, 0, "v") for r in range(L))
    x1 = sum(e(r, 0, "h") for r in range(L))
    x2 = sum(e(0, c, "v") for c in range(L))
    lx = [PauliOperator(n, x1, 0), PauliOperator(n, x2, 0)]
    lz = [PauliOperator(n, 0, z1), PauliOperator(n, 0, z2)]
    return build_stabilizer_group(vert + plaq, name=f"toric_{L}", logical_x=lx, logical_z=lz,
                                  known_distance=L)


def build_surface_unrotated(L: int) -> StabilizerCode:
    """Planar surface code on ``L^2 + (L-1)^2`` qubits (product of open repetition codes)."""
    if L < 2:
        raise ValueError("surface code needs L >= 2")
    H = repetition_parity_check(L, periodic=False)
    code = build_hgp(H, H, name=f"surface_{L}")
    return code.with_distance(L)


def rotated_surface_qubit(d: int, i: int, j: int) -> int:
    return i * d + j


def build_surface_rotated(d: int) -> StabilizerCode:
    """Rotated surface code on a ``d x d`` grid of data qubits (row-major).

    The face with top-left qubit ``(i, j)`` carries a Z check when ``i + j``
    is even and an X check otherwise.  Weight-2 checks sit on the boundary:
    Z-type on the top and bottom edges, X-type on the left and right edges,
    kept only where the parity rule assigns that type.
    """
    if d < 2:
        raise ValueError("rotated surface code needs d >= 2")
    n = d * d
    q = lambda i, j: 1 << rotated_surface_qubit(d, i, j)  # noqa: E731
    xs: List[int] = []
    zs: List[int] = []
    for i in range(d - 1):
        for j in range(d - 1):
            s = q(i, j) | q(i, j + 1) | q(i + 1, j) | q(i + 1, j + 1)
            (zs if (i + j) % 2 == 0 else xs).append(s)
    for j in range(d - 1):
        if (-1 + j) % 2 == 0:
            zs.append(q(0, j) | q(0, j + 1))
        if (d - 1 + j) % 2 == 0:
            zs.append(q(d - 1, j) | q(d - 1, j + 1))
    for i in range(d - 1):
        if (i - 1) % 2 == 1:
            xs.append(q(i, 0) | q(i + 1, 0))
        if (i + d - 1) % 2 == 1:
            xs.append(q(i, d - 1) | q(i + 1, d - 1))
    xs.sort(key=lambda v: [b for b in range(n) if (v >> b) & 1])
    zs.sort(key=lambda v: [b for b in range(n) if (v >> b) & 1])
    gens = [PauliOperator(n, s, 0) for s in xs] + [PauliOperator(n, 0, s) for s in zs]
    lx = [PauliOperator(n, sum(q(0, j) for j in range(d)), 0)]
    lz = [PauliOperator(n, 0, sum(q(i, 0) for i in range(d)))]
    return build_stabilizer_group(gens, name=f"rotated_surface_{d}", logical_x=lx, logical_z=lz,
                                  known_distance=d)


# ---------------------------------------------------------------------------
# subsystem families
# ---------------------------------------------------------------------------

def build_bacon_shor(M: int, N: int) -> SubsystemCode:
    """Bacon-Shor code on an ``M x N`` grid; qubit ``(i, j)`` has index ``i*N + j``.

    Gauge generators: ``X_{i,j} X_{i+1,j}`` and ``Z_{i,j} Z_{i,j+1}``.
    """
    if M < 2 or N < 2:
        raise ValueError("Bacon-Shor needs M, N >= 2")
    n = M * N
    q = lambda i, j: 1 << (i * N + j)  # noqa: E731
    gauge = []
    for j in range(N):
        for i in range(M - 1):
            gauge.append(PauliOperator(n, q(i, j) | q(i + 1, j), 0))
    for i in range(M):
        for j in range(N - 1):
            gauge.append(PauliOperator(n, 0, q(i, j) | q(i, j + 1)))
    return subsystem_analyze(gauge, name=f"bacon_shor_{M}x{N}", known_distance=min(M, N))


def _subsystem_lattice_index(M: int, periodic: bool):
    """Index maps for vertices and edge midpoints of an M x M square lattice."""
    idx: Dict[Tuple[str, int, int], int] = {}
    for y in range(M):
        for x in range(M):
            idx[("v", x, y)] = len(idx)
    hx = M if periodic else M - 1
    for y in range(M):
        for x in range(hx):
            idx[("h", x, y)] = len(idx)
    vy = M if periodic else M - 1
    for y in range(vy):
        for x in range(M):
            idx[("e", x, y)] = len(idx)
    return idx


def _triangles(M: int, x: int, y: int, idx, wrap) -> List[Tuple[str, List[int]]]:
    V = lambda a, b: idx[("v",) + wrap(a, b)]  # noqa: E731
    Hm = lambda a, b: idx[("h",) + wrap(a, b)]  # noqa: E731
    Vm = lambda a, b: idx[("e",) + wrap(a, b)]  # noqa: E731
    top, bottom = Hm(x, y + 1), Hm(x, y)
    left, right = Vm(x, y), Vm(x + 1, y)
    return [
        ("Z", [V(x, y + 1), top, left]),
        ("X", [V(x + 1, y + 1), top, right]),
        ("X", [V(x, y), left, bottom]),
        ("Z", [V(x + 1, y), bottom, right]),
    ]


def _ops_from(n: int, items: Iterable[Tuple[str, List[int]]]) -> List[PauliOperator]:
    out = []
    for kind, qs in items:
        out.append(PauliOperator.from_sparse(n, {q: kind for q in qs}))
    return out


def subsystem_toric_gauge(M: int) -> List[PauliOperator]:
    """Weight-3 triangle gauge operators on the periodic M x M lattice.

    Qubits: ``M^2`` vertices, then ``M^2`` horizontal-edge midpoints, then
    ``M^2`` vertical-edge midpoints, each block row-major in ``(y, x)``.
    """
    idx = _subsystem_lattice_index(M, periodic=True)
    n = len(idx)
    wrap = lambda a, b: (a % M, b % M)  # noqa: E731
    items = []
    for y in range(M):
        for x in range(M):
            items += _triangles(M, x, y, idx, wrap)
    return _ops_from(n, items)


def build_subsystem_toric(M: int) -> SubsystemCode:
    if M < 2:
        raise ValueError("subsystem toric code needs M >= 2")
    return subsystem_analyze(subsystem_toric_gauge(M), name=f"subsystem_toric_{M}", known_distance=M)


def subsystem_surface_gauge(M: int) -> List[PauliOperator]:
    """Triangle gauge operators plus weight-2 boundary operators, open boundaries."""
    idx = _subsystem_lattice_index(M, periodic=False)
    n = len(idx)
    wrap = lambda a, b: (a, b)  # noqa: E731
    items = []
    for y in range(M - 1):
        for x in range(M - 1):
            items += _triangles(M, x, y, idx, wrap)
    for y in range(1, M):
        items.append(("X", [idx[("v", 0, y)], idx[("e", 0, y - 1)]]))
    for y in range(M - 1):
        items.append(("X", [idx[("v", M - 1, y)], idx[("e", M - 1, y)]]))
    for x in range(M - 1):
        items.append(("Z", [idx[("v", x + 1, M - 1)], idx[("h", x, M - 1)]]))
    for x in range(M - 1):
        items.append(("Z", [idx[("v", x, 0)], idx[("h", x, 0)]]))
    return _ops_from(n, items)


def build_subsystem_surface(M: int) -> SubsystemCode:
    if M < 2:
        raise ValueError("subsystem surface code needs M >= 2")
    return subsystem_analyze(subsystem_surface_gauge(M), name=f"subsystem_surface_{M}", known_distance=M)


# ---------------------------------------------------------------------------
# product constructions
# ---------------------------------------------------------------------------

def hgp_matrices(H1: BitMatrix, H2: BitMatrix) -> Tuple[BitMatrix, BitMatrix]:
    H1 = BitMatrix(H1)
    H2 = BitMatrix(H2)
    r1, n1 = H1.shape
    r2, n2 = H2.shape
    HX = BitMatrix(np.hstack([np.kron(H1.array, np.eye(n2, dtype=np.uint8)),
                              np.kron(np.eye(r1, dtype=np.uint8), H2.array.T)]))
    HZ = BitMatrix(np.hstack([np.kron(np.eye(n1, dtype=np.uint8), H2.array),
                              np.kron(H1.array.T, np.eye(r2, dtype=np.uint8))]))
    return HX, HZ


def build_hgp(H1: BitMatrix, H2: BitMatrix, name: str = "hgp") -> StabilizerCode:
    """Hypergraph product: ``n = n1 n2 + r1 r2``."""
    HX, HZ = hgp_matrices(H1, H2)
    return build_css(HX, HZ, name=name)


def hgp_k_formula(H1: BitMatrix, H2: BitMatrix) -> int:
    """``k1 k2 + k1^T k2^T`` from the ranks of the seed matrices."""
    H1 = BitMatrix(H1)
    H2 = BitMatrix(H2)
    r1, n1 = H1.shape
    r2, n2 = H2.shape
    rk1, rk2 = rank(H1), rank(H2)
    return (n1 - rk1) * (n2 - rk2) + (r1 - rk1) * (r2 - rk2)


def cyclic_shift(size: int) -> np.ndarray:
    """``S`` with ``S[i, (i+1) % size] = 1``."""
    S = np.zeros((size, size), dtype=np.uint8)
    for i in range(size):
        S[i, (i + 1) % size] = 1
    return S


def bb_monomial(l: int, m: int, i: int, j: int) -> np.ndarray:
    """``x^i y^j`` with ``x = S_l (x) I_m`` and ``y = I_l (x) S_m``."""
    x = np.kron(cyclic_shift(l), np.eye(m, dtype=np.uint8))
    y = np.kron(np.eye(l, dtype=np.uint8), cyclic_shift(m))
    return (np.linalg.matrix_power(x.astype(np.int64), i) @ np.linalg.matrix_power(y.astype(np.int64), j) % 2).astype(np.uint8)


def bb_polynomial(l: int, m: int, terms: Sequence[Tuple[int, int]], strict: bool = True) -> np.ndarray:
    terms = [tuple(int(v) for v in t) for t in terms]
    for i, j in terms:
        if not (0 <= i < l and 0 <= j < m):
            raise ValueError(f"term x^{i} y^{j} outside 0<=i<{l}, 0<=j<{m}")
    if strict and len(set(terms)) != len(terms):
        raise DuplicateTerm(f"repeated monomial in {terms}")
    acc = np.zeros((l * m, l * m), dtype=np.uint8)
    for i, j in terms:
        acc ^= bb_monomial(l, m, i, j)
    return acc


def build_bb(l: int, m: int, A_terms, B_terms, strict: bool = True, name: Optional[str] = None) -> StabilizerCode:
    """Bivariate bicycle code ``H_X = [A | B]``, ``H_Z = [B^T | A^T]``.

    ``strict=False`` tolerates repeated monomials (they cancel in pairs).
    """
    A = bb_polynomial(l, m, A_terms, strict)
    B = bb_polynomial(l, m, B_terms, strict)
    HX = BitMatrix(np.hstack([A, B]))
    HZ = BitMatrix(np.hstack([B.T, A.T]))
    return build_css(HX, HZ, name=name or f"bb_{l}x{m}")


def bb_k_formula(l: int, m: int, A_terms, B_terms, strict: bool = True) -> int:
    """``2 dim(ker A  cap  ker B)`` computed as the kernel of the stacked matrix."""
    A = bb_polynomial(l, m, A_terms, strict)
    B = bb_polynomial(l, m, B_terms, strict)
    stacked = BitMatrix(np.vstack([A, B]))
    return 2 * len(kernel_rows(stacked.packed_rows(), stacked.cols))


# ---------------------------------------------------------------------------
# abelian lifted product over F2[x]/(x^l - 1)
# ---------------------------------------------------------------------------

RingMatrix = List[List[Iterable[int]]]


def _ring_array(M: RingMatrix, l: int) -> np.ndarray:
    """Coefficient array of shape (rows, cols, l)."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    out = np.zeros((rows, cols, l), dtype=np.uint8)
    for i, row in enumerate(M):
        if len(row) != cols:
            raise ValueError("ragged ring matrix")
        for j, entry in enumerate(row):
            for s in entry:
                out[i, j, int(s) % l] ^= 1
    return out


def _ring_conj_transpose(A: np.ndarray) -> np.ndarray:
    """Transpose and send ``x^s`` to ``x^{-s}``."""
    l = A.shape[2]
    idx = (-np.arange(l)) % l
    return A.transpose(1, 0, 2)[:, :, idx]


def _ring_kron_left_identity(A: np.ndarray, size: int) -> np.ndarray:
    """``A (x) I_size``."""
    r, c, l = A.shape
    out = np.zeros((r * size, c * size, l), dtype=np.uint8)
    for a in range(size):
        out[a::size, a::size, :] = A
    return out


def _ring_kron_right_identity(size: int, B: np.ndarray) -> np.ndarray:
    """``I_size (x) B``."""
    r, c, l = B.shape
    out = np.zeros((size * r, size * c, l), dtype=np.uint8)
    for a in range(size):
        out[a * r:(a + 1) * r, a * c:(a + 1) * c, :] = B
    return out


def lift_permutation(l: int) -> np.ndarray:
    """Cyclic permutation ``P`` with ``P e_j = e_{j+1}``."""
    P = np.zeros((l, l), dtype=np.uint8)
    for j in range(l):
        P[(j + 1) % l, j] = 1
    return P


def lift(M, l: int) -> BitMatrix:
    """Replace each ring entry ``sum_s x^s`` by the binary block ``sum_s P^s``."""
    A = M if isinstance(M, np.ndarray) else _ring_array(M, l)
    r, c, _ = A.shape
    P = lift_permutation(l).astype(np.int64)
    powers = [np.linalg.matrix_power(P, s) % 2 for s in range(l)]
    out = np.zeros((r * l, c * l), dtype=np.uint8)
    for i in range(r):
        for j in range(c):
            block = np.zeros((l, l), dtype=np.int64)
            for s in range(l):
                if A[i, j, s]:
                    block ^= powers[s]
            out[i * l:(i + 1) * l, j * l:(j + 1) * l] = block
    return BitMatrix(out)


def lifted_product_matrices(l: int, H1: RingMatrix, H2: RingMatrix) -> Tuple[BitMatrix, BitMatrix]:
    A = _ring_array(H1, l)
    B = _ring_array(H2, l)
    r1, n1, _ = A.shape
    r2, n2, _ = B.shape
    HX = np.concatenate([_ring_kron_left_identity(A, n2), _ring_kron_right_identity(r1, _ring_conj_transpose(B))], axis=1)
    HZ = np.concatenate([_ring_kron_right_identity(n1, B), _ring_kron_left_identity(_ring_conj_transpose(A), r2)], axis=1)
    return lift(HX, l), lift(HZ, l)


def build_lifted_product(l: int, H1: RingMatrix, H2: RingMatrix, name: Optional[str] = None) -> StabilizerCode:
    HX, HZ = lifted_product_matrices(l, H1, H2)
    return build_css(HX, HZ, name=name or f"lifted_product_{l}")


# ---------------------------------------------------------------------------
# Euler characteristic
# ---------------------------------------------------------------------------

def euler_check(V: int, E: int, F: int) -> Tuple[int, int]:
    """(chi, 2 - chi) for a cellulated closed surface."""
    chi = V - E + F
    return chi, 2 - chi


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _pcm_or_matrix(value) -> BitMatrix:
    from .formats import read_pcm

    if isinstance(value, BitMatrix):
        return value
    if isinstance(value, str):
        return read_pcm(value)
    return BitMatrix(np.asarray(value, dtype=np.uint8))


def _terms(value) -> List[Tuple[int, int]]:
    if isinstance(value, str):
        out = []
        for part in value.replace(" ", "").split(";"):
            if part:
                i, j = part.split(",")
                out.append((int(i), int(j)))
        return out
    return [tuple(t) for t in value]


FAMILIES: Dict[str, Callable[..., Any]] = {
    "repetition": lambda n=3, basis="Z", **_: build_repetition(int(n), basis),
    "shor9": lambda **_: build_shor9(),
    "steane": lambda **_: build_steane(),
    "five_qubit": lambda **_: build_five_qubit(),
    "toric": lambda L=3, **_: build_toric(int(L)),
    "surface": lambda L=3, **_: build_surface_unrotated(int(L)),
    "rotated_surface": lambda d=3, **_: build_surface_rotated(int(d)),
    "bacon_shor": lambda M=3, N=3, **_: build_bacon_shor(int(M), int(N)),
    "subsystem_toric": lambda M=2, **_: build_subsystem_toric(int(M)),
    "subsystem_surface": lambda M=2, **_: build_subsystem_surface(int(M)),
    "hgp": lambda h1, h2=None, **_: build_hgp(_pcm_or_matrix(h1), _pcm_or_matrix(h2 if h2 is not None else h1)),
    "bb": lambda l, m, a, b, strict=True, **_: build_bb(int(l), int(m), _terms(a), _terms(b), bool(strict)),
    "lifted_product": lambda l, h1, h2=None, **_: build_lifted_product(int(l), h1, h2 if h2 is not None else h1),
}


@dataclass(frozen=True)
class CodeSpec:
    """Family tag plus parameters; ``build()`` is deterministic."""

    family: str
    params: Dict[str, Any] = field(default_factory=dict)

    def build(self):
        try:
            builder = FAMILIES[self.family]
        except KeyError:
            raise KeyError(f"unknown code family {self.family!r}; known: {sorted(FAMILIES)}") from None
        return builder(**self.params)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "CodeSpec":
        d = dict(d)
        fam = d.pop("family")
        return cls(fam, d)

    def label(self) -> str:
        if not self.params:
            return self.family
        bits = [f"{k}={v}" for k, v in sorted(self.params.items()) if not isinstance(v, (list, dict))]
        return self.family + ("(" + ",".join(bits) + ")" if bits else "")


def build_code(family: str, **params):
    return CodeSpec(family, params).build()


__all__ = [
    "CodeSpec",
    "CssConditionViolated",
    "DuplicateTerm",
    "FAMILIES",
    "FIVE_QUBIT_GENERATORS",
    "STEANE_H",
    "bb_k_formula",
    "bb_monomial",
    "bb_polynomial",
    "build_bacon_shor",
    "build_bb",
    "build_code",
    "build_css",
    "build_five_qubit",
    "build_hgp",
    "build_lifted_product",
    "build_repetition",
    "build_shor9",
    "build_steane",
    "build_subsystem_surface",
    "build_subsystem_toric",
    "build_surface_rotated",
    "build_surface_unrotated",
    "build_toric",
    "cyclic_shift",
    "euler_check",
    "hgp_k_formula",
    "hgp_matrices",
    "lift",
    "lift_permutation",
    "lifted_product_matrices",
    "repetition_parity_check",
    "subsystem_surface_gauge",
    "subsystem_toric_gauge",
    "toric_checks",
    "toric_edge",
]
