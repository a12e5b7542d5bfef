"""Stabilizer, subsystem and classical code objects.

Everything here is exact GF(2) bookkeeping on top of :mod:`qecforge.gf2` and
:mod:`qecforge.pauli`.  A code keeps its generators plus one representative
per logical operator; distances, Knill-Laflamme checks and logical-class
labels are all computed from the same per-qubit signature table (the
commutation bits of single-qubit X and Z against checks and logicals).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import BitMatrix, RowSpace, kernel_rows, popcount, rank_rows
from .pauli import PauliOperator, product, symplectic_vec_product


class CodeError(ValueError):
    """Base class for invalid code definitions."""


class NonCommuting(CodeError):
    def __init__(self, i: int, j: int):
        super().__init__(f"generators {i} and {j} anticommute")
        self.i = i
        self.j = j


class MinusIdentityGenerated(CodeError):
    def __init__(self, index: int):
        super().__init__(f"generator {index} is minus a product of earlier generators; -I would be in the group")
        self.index = index


class NotCSS(CodeError):
    pass


class InstanceTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# small symplectic helpers
# ---------------------------------------------------------------------------

def _swap_halves(v: int, n: int) -> int:
    mask = (1 << n) - 1
    return ((v >> n) & mask) | ((v & mask) << n)


def symplectic_gram_schmidt(vectors: Sequence[int], n: int) -> List[Tuple[int, int]]:
    """Pair up vectors spanning a symplectic space into hyperbolic pairs.

    The input must span a space on which the symplectic form is
    non-degenerate; a ValueError is raised otherwise.
    """
    rem = list(vectors)
    pairs: List[Tuple[int, int]] = []
    while rem:
        a = rem.pop(0)
        j = next((i for i, b in enumerate(rem) if symplectic_vec_product(a, b, n)), None)
        if j is None:
            raise ValueError("symplectic form is degenerate on the given vectors")
        b = rem.pop(j)
        nxt = []
        for u in rem:
            if symplectic_vec_product(u, b, n):
                u ^= a
            if symplectic_vec_product(u, a, n):
                u ^= b
            nxt.append(u)
        rem = nxt
        pairs.append((a, b))
    return pairs


def _css_pairing(xs: Sequence[int], zs: Sequence[int]) -> List[Tuple[int, int]]:
    """Pair pure-X supports with pure-Z supports so that overlaps are diagonal."""
    xs = list(xs)
    zs = list(zs)
    pairs = []
    while xs:
        a = xs.pop(0)
        j = next((i for i, b in enumerate(zs) if popcount(a & b) & 1), None)
        if j is None:
            raise ValueError("X and Z logical candidates are not dual")
        b = zs.pop(j)
        xs = [u ^ a if popcount(u & b) & 1 else u for u in xs]
        zs = [u ^ b if popcount(u & a) & 1 else u for u in zs]
        pairs.append((a, b))
    return pairs


def _independent(vecs: Iterable[int], seed: Iterable[int] = ()) -> List[int]:
    space = RowSpace()
    for v in seed:
        space.add(v)
    out = []
    for v in vecs:
        if space.add(v):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# signature table shared by stabilizer and subsystem codes
# ---------------------------------------------------------------------------

class _SignatureTable:
    """Commutation bits of every single-qubit X/Z against checks and logicals.

    Bits ``0..m-1`` are the syndrome, bits ``m..m+L-1`` the commutation with
    the logical representatives.  A Pauli is a nontrivial logical exactly when
    its syndrome bits vanish and some logical bit is set.
    """

    def __init__(self, n: int, checks: Sequence[PauliOperator], logicals: Sequence[PauliOperator]):
        self.n = n
        self.m = len(checks)
        self.L = len(logicals)
        rows = list(checks) + list(logicals)
        self.sx = [0] * n
        self.sz = [0] * n
        for j, P in enumerate(rows):
            for q in range(n):
                if (P.z >> q) & 1:
                    self.sx[q] |= 1 << j
                if (P.x >> q) & 1:
                    self.sz[q] |= 1 << j
        self.syn_mask = (1 << self.m) - 1

    def signature(self, x: int, z: int) -> int:
        s = 0
        q = 0
        while x or z:
            if x & 1:
                s ^= self.sx[q]
            if z & 1:
                s ^= self.sz[q]
            x >>= 1
            z >>= 1
            q += 1
        return s

    def is_nontrivial_logical(self, x: int, z: int) -> bool:
        s = self.signature(x, z)
        return (s & self.syn_mask) == 0 and (s >> self.m) != 0

    def min_weight_logical(self, w_max: int, kinds: str) -> Optional[Tuple[int, int, int]]:
        """Lightest nontrivial logical using per-qubit factors from ``kinds``.

        ``kinds`` is a subset of "XYZ".  Returns (weight, x, z) or None.
        """
        n = self.n
        opts = []
        for q in range(n):
            o = []
            for kind in kinds:
                if kind == "X":
                    o.append((self.sx[q], 1 << q, 0))
                elif kind == "Z":
                    o.append((self.sz[q], 0, 1 << q))
                else:
                    o.append((self.sx[q] ^ self.sz[q], 1 << q, 1 << q))
            opts.append(o)
        m = self.m
        syn = self.syn_mask
        for w in range(1, min(w_max, n) + 1):
            for combo in itertools.combinations(range(n), w):
                for choice in itertools.product(*(opts[q] for q in combo)):
                    s = 0
                    for c in choice:
                        s ^= c[0]
                    if (s & syn) == 0 and (s >> m):
                        x = 0
                        z = 0
                        for c in choice:
                            x |= c[1]
                            z |= c[2]
                        return w, x, z
        return None


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceResult:
    """Outcome of an exhaustive distance search.

    ``d`` is exact when ``exact`` is true, otherwise the true distance is at
    least ``d`` (which then equals ``w_max + 1``).  ``d`` is None for codes
    without logical qubits.
    """

    d: Optional[int]
    witness: Optional[PauliOperator]
    exact: bool

    @property
    def lower_bound(self) -> bool:
        return not self.exact


def _is_css_ops(ops: Sequence[PauliOperator]) -> bool:
    return all(P.x == 0 or P.z == 0 for P in ops)


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """Independent commuting stabilizer generators plus logical pairs."""

    n: int
    generators: Tuple[PauliOperator, ...]
    logical_x: Tuple[PauliOperator, ...]
    logical_z: Tuple[PauliOperator, ...]
    name: str = ""
    known_distance: Optional[int] = None
    checks: Tuple[PauliOperator, ...] = ()

    # shape ----------------------------------------------------------------
    @property
    def stabilizers(self) -> Tuple[PauliOperator, ...]:
        return self.generators

    @property
    def measured_checks(self) -> Tuple[PauliOperator, ...]:
        """The check operators as supplied, dependent ones included.

        Decoding graphs and detector models use this list so that, e.g.,
        every toric-code edge touches exactly two plaquettes.
        """
        return self.checks or self.generators

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.m

    @property
    def is_css(self) -> bool:
        return _is_css_ops(self.generators)

    @cached_property
    def x_check_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.z == 0 and g.x != 0)

    @cached_property
    def z_check_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.x == 0 and g.z != 0)

    @cached_property
    def hx(self) -> BitMatrix:
        """Rows = X-type checks (supports)."""
        if not self.is_css:
            raise NotCSS(f"{self.name or 'code'} is not CSS")
        rows = [self.generators[i].x for i in self.x_check_indices]
        return BitMatrix.from_rows(rows, self.n)

    @cached_property
    def hz(self) -> BitMatrix:
        """Rows = Z-type checks (supports)."""
        if not self.is_css:
            raise NotCSS(f"{self.name or 'code'} is not CSS")
        rows = [self.generators[i].z for i in self.z_check_indices]
        return BitMatrix.from_rows(rows, self.n)

    @cached_property
    def check_matrix(self) -> BitMatrix:
        """Symplectic check matrix ``[X | Z]``."""
        rows = [g.vec for g in self.generators]
        return BitMatrix.from_rows(rows, 2 * self.n)

    @cached_property
    def _table(self) -> _SignatureTable:
        return _SignatureTable(self.n, self.generators, tuple(self.logical_x) + tuple(self.logical_z))

    @cached_property
    def _space(self) -> RowSpace:
        sp = RowSpace()
        for g in self.generators:
            sp.add(g.vec)
        return sp

    # queries --------------------------------------------------------------
    def syndrome(self, E: PauliOperator) -> np.ndarray:
        """Bit ``j`` is 1 when ``E`` anticommutes with generator ``j``."""
        if E.n != self.n:
            raise ValueError(f"error acts on {E.n} qubits, code has {self.n}")
        s = self._table.signature(E.x, E.z) & self._table.syn_mask
        return np.array([(s >> j) & 1 for j in range(self.m)], dtype=np.uint8)

    def syndrome_int(self, E: PauliOperator) -> int:
        return self._table.signature(E.x, E.z) & self._table.syn_mask

    def logical_action(self, E: PauliOperator) -> Tuple[np.ndarray, np.ndarray]:
        """(a, b) with ``E ~ prod X_i^a_i Z_i^b_i`` modulo stabilizers."""
        s = self._table.signature(E.x, E.z) >> self.m
        k = self.k
        b = np.array([(s >> i) & 1 for i in range(k)], dtype=np.uint8)
        a = np.array([(s >> (k + i)) & 1 for i in range(k)], dtype=np.uint8)
        return a, b

    def in_stabilizer_group(self, P: PauliOperator) -> bool:
        """Phaseless membership in the stabilizer group."""
        return self._space.contains(P.vec)

    def group_element_sign(self, P: PauliOperator) -> Optional[int]:
        """Sign ``s`` with ``s*P`` in the group, or None if ``+-P`` is not in it."""
        combo = self._space.express(P.vec)
        if combo is None:
            return None
        prod = product([g for i, g in enumerate(self.generators) if (combo >> i) & 1], n=self.n)
        rel = (prod.phase - P.phase) % 4
        return 1 if rel == 0 else -1

    def is_nontrivial_logical(self, P: PauliOperator) -> bool:
        return self._table.is_nontrivial_logical(P.x, P.z)

    def in_normalizer(self, P: PauliOperator) -> bool:
        return self.syndrome_int(P) == 0

    @property
    def parameters(self) -> Tuple[int, int, Optional[int]]:
        return (self.n, self.k, self.known_distance)

    def with_distance(self, d: Optional[int]) -> "StabilizerCode":
        return StabilizerCode(self.n, self.generators, self.logical_x, self.logical_z, self.name, d, self.checks)

    def renamed(self, name: str) -> "StabilizerCode":
        return StabilizerCode(self.n, self.generators, self.logical_x, self.logical_z, name, self.known_distance,
                              self.checks)

    def __repr__(self) -> str:
        d = self.known_distance if self.known_distance is not None else "?"
        return f"StabilizerCode({self.name!r}, [[{self.n},{self.k},{d}]])"


def build_stabilizer_group(
    gens: Sequence[PauliOperator],
    *,
    name: str = "",
    logical_x: Optional[Sequence[PauliOperator]] = None,
    logical_z: Optional[Sequence[PauliOperator]] = None,
    known_distance: Optional[int] = None,
) -> StabilizerCode:
    """Validate generators, drop dependent ones and attach logical pairs."""
    gens = [PauliOperator.from_str(g) if isinstance(g, str) else g for g in gens]
    if not gens:
        raise CodeError("need at least one generator (or use trivial_code)")
    n = gens[0].n
    for i, g in enumerate(gens):
        if g.n != n:
            raise CodeError(f"generator {i} acts on {g.n} qubits, expected {n}")
        if not g.is_hermitian:
            raise CodeError(f"generator {i} ({g}) is not Hermitian")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not gens[i].commutes(gens[j]):
                raise NonCommuting(i, j)
    kept: List[PauliOperator] = []
    space = RowSpace()
    kept_index: List[int] = []
    for i, g in enumerate(gens):
        if g.is_identity:
            if g.phase == 2:
                raise MinusIdentityGenerated(i)
            continue
        combo = space.express(g.vec)
        if combo is None:
            space.add(g.vec)
            kept.append(g)
            kept_index.append(i)
            continue
        prod = product([kept[t] for t in range(len(kept)) if (combo >> t) & 1], n=n)
        if prod.phase != g.phase:
            raise MinusIdentityGenerated(i)
    code = _finish_code(n, tuple(kept), name, logical_x, logical_z, known_distance)
    if len(kept) < len(gens):
        checks = tuple(g for g in gens if not g.is_identity)
        code = StabilizerCode(code.n, code.generators, code.logical_x, code.logical_z, name, known_distance, checks)
    return code


def trivial_code(n: int, name: str = "trivial") -> StabilizerCode:
    """``k = n`` code without stabilizers (logicals are the single-qubit X, Z)."""
    lx = tuple(PauliOperator(n, 1 << q, 0) for q in range(n))
    lz = tuple(PauliOperator(n, 0, 1 << q) for q in range(n))
    return StabilizerCode(n, (), lx, lz, name, 1 if n else None)


def _finish_code(n, gens, name, logical_x, logical_z, known_distance) -> StabilizerCode:
    if logical_x is None or logical_z is None:
        pairs = _compute_logicals(n, gens)
        lx = tuple(PauliOperator.from_symplectic(n, a) for a, _ in pairs)
        lz = tuple(PauliOperator.from_symplectic(n, b) for _, b in pairs)
    else:
        lx = tuple(PauliOperator.from_str(p) if isinstance(p, str) else p for p in logical_x)
        lz = tuple(PauliOperator.from_str(p) if isinstance(p, str) else p for p in logical_z)
        _validate_logicals(n, gens, lx, lz)
    return StabilizerCode(n, gens, lx, lz, name, known_distance)


def _validate_logicals(n, gens, lx, lz) -> None:
    k = n - len(gens)
    if len(lx) != k or len(lz) != k:
        raise CodeError(f"expected {k} logical pairs, got {len(lx)} X and {len(lz)} Z")
    space = RowSpace()
    for g in gens:
        space.add(g.vec)
    for L in tuple(lx) + tuple(lz):
        if L.n != n:
            raise CodeError("logical acts on the wrong number of qubits")
        for g in gens:
            if not L.commutes(g):
                raise CodeError(f"logical {L} anticommutes with generator {g}")
    for i, a in enumerate(lx):
        for j, b in enumerate(lz):
            want = 1 if i == j else 0
            if symplectic_vec_product(a.vec, b.vec, n) != want:
                raise CodeError("logical pairs are not in standard symplectic form")
        for j, b in enumerate(lx):
            if j != i and symplectic_vec_product(a.vec, b.vec, n):
                raise CodeError("X logicals must commute with each other")
    for i, a in enumerate(lz):
        for j, b in enumerate(lz):
            if j != i and symplectic_vec_product(a.vec, b.vec, n):
                raise CodeError("Z logicals must commute with each other")
    for L in tuple(lx) + tuple(lz):
        if space.contains(L.vec):
            raise CodeError(f"logical {L} lies in the stabilizer group")


def _compute_logicals(n: int, gens: Sequence[PauliOperator]) -> List[Tuple[int, int]]:
    if gens and _is_css_ops(gens):
        hx = [g.x for g in gens if g.z == 0]
        hz = [g.z for g in gens if g.x == 0]
        xs = _independent(kernel_rows(hz, n), seed=hx)
        zs = _independent(kernel_rows(hx, n), seed=hz)
        pairs = _css_pairing(xs, zs)
        return [(a, b << n) for a, b in pairs]
    constraint = [_swap_halves(g.vec, n) for g in gens]
    normalizer = kernel_rows(constraint, 2 * n)
    cands = _independent(normalizer, seed=[g.vec for g in gens])
    return symplectic_gram_schmidt(cands, n)


def logical_operators(code) -> List[Tuple[PauliOperator, PauliOperator]]:
    """Logical pairs ``(X_i, Z_i)`` recomputed from the generators."""
    if isinstance(code, SubsystemCode):
        return list(zip(code.logical_x, code.logical_z))
    pairs = _compute_logicals(code.n, code.generators)
    n = code.n
    return [(PauliOperator.from_symplectic(n, a), PauliOperator.from_symplectic(n, b)) for a, b in pairs]


def distance_bruteforce(code, w_max: int = 6) -> DistanceResult:
    """Minimum weight of a nontrivial (dressed, for subsystem codes) logical.

    CSS codes are searched over pure-X and pure-Z words only, which is enough
    because both halves of a logical are themselves in the normalizer.
    """
    if code.k == 0:
        return DistanceResult(None, None, True)
    n = code.n
    w_max = min(w_max, n)
    table = code._table
    css = code.is_css if isinstance(code, StabilizerCode) else code.gauge_is_css
    best = None
    if css:
        for kinds in ("X", "Z"):
            hit = table.min_weight_logical(w_max if best is None else best[0] - 1, kinds)
            if hit is not None and (best is None or hit[0] < best[0]):
                best = hit
    else:
        best = table.min_weight_logical(w_max, "XYZ")
    if best is None:
        return DistanceResult(w_max + 1, None, False)
    w, x, z = best
    return DistanceResult(w, PauliOperator(n, x, z), True)


def css_distances(code, w_max: Optional[int] = None) -> Tuple[Optional[int], Optional[int]]:
    """(d_X, d_Z): lightest X-type and Z-type logicals (None if above ``w_max``)."""
    css = code.is_css if isinstance(code, StabilizerCode) else code.gauge_is_css
    if not css:
        raise NotCSS(f"{getattr(code, 'name', '') or 'code'} is not CSS")
    if code.k == 0:
        return (None, None)
    cap = code.n if w_max is None else w_max
    hx = code._table.min_weight_logical(cap, "X")
    hz = code._table.min_weight_logical(cap, "Z")
    return (hx[0] if hx else None, hz[0] if hz else None)


# ---------------------------------------------------------------------------
# subsystem codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubsystemCode:
    """Gauge group with its stabilizer centre, bare logicals and gauge pairs."""

    n: int
    gauge_generators: Tuple[PauliOperator, ...]
    stabilizers: Tuple[PauliOperator, ...]
    logical_x: Tuple[PauliOperator, ...]
    logical_z: Tuple[PauliOperator, ...]
    gauge_x: Tuple[PauliOperator, ...]
    gauge_z: Tuple[PauliOperator, ...]
    gauge_rank: int
    name: str = ""
    known_distance: Optional[int] = None

    @property
    def r(self) -> int:
        return len(self.stabilizers)

    @property
    def g(self) -> int:
        return (self.gauge_rank - self.r) // 2

    @property
    def k(self) -> int:
        return self.n - self.r - self.g

    @property
    def generators(self) -> Tuple[PauliOperator, ...]:
        return self.stabilizers

    @property
    def gauge_is_css(self) -> bool:
        return _is_css_ops(self.gauge_generators)

    @property
    def is_css(self) -> bool:
        return self.gauge_is_css

    @cached_property
    def _table(self) -> _SignatureTable:
        return _SignatureTable(self.n, self.stabilizers, tuple(self.logical_x) + tuple(self.logical_z))

    @cached_property
    def _gauge_space(self) -> RowSpace:
        sp = RowSpace()
        for g in self.gauge_generators:
            sp.add(g.vec)
        return sp

    def syndrome(self, E: PauliOperator) -> np.ndarray:
        s = self._table.signature(E.x, E.z) & self._table.syn_mask
        return np.array([(s >> j) & 1 for j in range(self.r)], dtype=np.uint8)

    def in_gauge_group(self, P: PauliOperator) -> bool:
        return self._gauge_space.contains(P.vec)

    def is_dressed_logical(self, P: PauliOperator) -> bool:
        """True when ``P`` commutes with the stabilizers but is outside the gauge group."""
        return self._table.is_nontrivial_logical(P.x, P.z)

    def is_nontrivial_logical(self, P: PauliOperator) -> bool:
        return self.is_dressed_logical(P)

    @property
    def parameters(self) -> Tuple[int, int, int, Optional[int]]:
        return (self.n, self.k, self.g, self.known_distance)

    def with_distance(self, d: Optional[int]) -> "SubsystemCode":
        return SubsystemCode(self.n, self.gauge_generators, self.stabilizers, self.logical_x,
                             self.logical_z, self.gauge_x, self.gauge_z, self.gauge_rank, self.name, d)

    def __repr__(self) -> str:
        d = self.known_distance if self.known_distance is not None else "?"
        return f"SubsystemCode({self.name!r}, [[{self.n},{self.k},{self.g},{d}]])"


def subsystem_analyze(gauge: Sequence[PauliOperator], *, name: str = "", known_distance: Optional[int] = None) -> SubsystemCode:
    """Split a gauge group into stabilizers, bare logicals and gauge qubits."""
    ops = [PauliOperator.from_str(g) if isinstance(g, str) else g for g in gauge]
    if not ops:
        raise CodeError("empty gauge group")
    n = ops[0].n
    if any(P.n != n for P in ops):
        raise CodeError("gauge generators act on different qubit counts")
    basis = _independent([P.vec for P in ops])
    dim = len(basis)
    gram_rows = []
    for a in basis:
        row = 0
        for j, b in enumerate(basis):
            if symplectic_vec_product(a, b, n):
                row |= 1 << j
        gram_rows.append(row)
    centre = []
    for combo in kernel_rows(gram_rows, dim):
        v = 0
        for j in range(dim):
            if (combo >> j) & 1:
                v ^= basis[j]
        centre.append(v)
    centre = _sparsify(centre)
    # bare logicals: commute with all of the gauge group, modulo the centre
    constraint = [_swap_halves(v, n) for v in basis]
    comm = kernel_rows(constraint, 2 * n)
    bare = _independent(comm, seed=centre)
    if _is_css_ops(ops):
        xs = [v for v in bare if (v >> n) == 0]
        zs = [v >> n for v in bare if (v & ((1 << n) - 1)) == 0]
        if len(xs) + len(zs) == len(bare):
            lpairs = [(a, b << n) for a, b in _css_pairing(xs, zs)]
        else:
            lpairs = symplectic_gram_schmidt(bare, n)
    else:
        lpairs = symplectic_gram_schmidt(bare, n)
    gauge_cands = _independent(basis, seed=centre)
    gpairs = symplectic_gram_schmidt(gauge_cands, n)
    mk = lambda v: PauliOperator.from_symplectic(n, v)  # noqa: E731
    return SubsystemCode(
        n=n,
        gauge_generators=tuple(ops),
        stabilizers=tuple(mk(v) for v in centre),
        logical_x=tuple(mk(a) for a, _ in lpairs),
        logical_z=tuple(mk(b) for _, b in lpairs),
        gauge_x=tuple(mk(a) for a, _ in gpairs),
        gauge_z=tuple(mk(b) for _, b in gpairs),
        gauge_rank=dim,
        name=name,
        known_distance=known_distance,
    )


def _sparsify(vecs: List[int]) -> List[int]:
    """Cheap weight reduction of a basis (pairwise replacement while it helps)."""
    vecs = list(vecs)
    changed = True
    while changed:
        changed = False
        for i in range(len(vecs)):
            for j in range(len(vecs)):
                if i != j:
                    cand = vecs[i] ^ vecs[j]
                    if popcount(cand) < popcount(vecs[i]):
                        vecs[i] = cand
                        changed = True
    return vecs


# ---------------------------------------------------------------------------
# classical codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalCode:
    H: BitMatrix
    n: int
    k: int
    d: Optional[int]
    d_exact: bool = True

    def is_codeword(self, c) -> bool:
        return not (self.H @ np.asarray(c)).any()


def classical_analyze(H: BitMatrix, w_max: Optional[int] = None) -> ClassicalCode:
    """(n, k, d) of the kernel code of ``H``; exhaustive when feasible."""
    n = H.cols
    rows = H.packed_rows()
    basis = kernel_rows(rows, n)
    k = len(basis)
    if k == 0:
        return ClassicalCode(H, n, 0, None, True)
    if k <= 20:
        best = n + 1
        acc = 0
        for i in range(1, 1 << k):
            flip = (i & -i).bit_length() - 1
            acc ^= basis[flip]
            w = popcount(acc)
            if w < best:
                best = w
        return ClassicalCode(H, n, k, best, True)
    cap = n if w_max is None else min(w_max, n)
    cols = [0] * n
    for i, r in enumerate(rows):
        for j in range(n):
            if (r >> j) & 1:
                cols[j] |= 1 << i
    for w in range(1, cap + 1):
        for combo in itertools.combinations(range(n), w):
            s = 0
            for j in combo:
                s ^= cols[j]
            if s == 0:
                return ClassicalCode(H, n, k, w, True)
    return ClassicalCode(H, n, k, cap + 1, False)


# ---------------------------------------------------------------------------
# Knill-Laflamme
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KLResult:
    correctable: bool
    violating_pair: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.correctable


def kl_check(code, errors: Sequence[PauliOperator]) -> KLResult:
    """Pauli error set is correctable iff no product ``E_a E_b`` is a nontrivial logical."""
    errs = [PauliOperator.from_str(e) if isinstance(e, str) else e for e in errors]
    table = code._table
    for a in range(len(errs)):
        for b in range(a, len(errs)):
            x = errs[a].x ^ errs[b].x
            z = errs[a].z ^ errs[b].z
            if table.is_nontrivial_logical(x, z):
                return KLResult(False, (a, b))
    return KLResult(True, None)


def all_paulis_up_to_weight(n: int, w: int) -> List[PauliOperator]:
    out = [PauliOperator.identity(n)]
    for wt in range(1, w + 1):
        for combo in itertools.combinations(range(n), wt):
            for kinds in itertools.product("XYZ", repeat=wt):
                out.append(PauliOperator.from_sparse(n, dict(zip(combo, kinds))))
    return out


def symplectic_rank(ops: Sequence[PauliOperator]) -> int:
    return rank_rows([P.vec for P in ops])


__all__ = [
    "ClassicalCode",
    "CodeError",
    "DistanceResult",
    "InstanceTooLarge",
    "KLResult",
    "MinusIdentityGenerated",
    "NonCommuting",
    "NotCSS",
    "StabilizerCode",
    "SubsystemCode",
    "all_paulis_up_to_weight",
    "build_stabilizer_group",
    "classical_analyze",
    "css_distances",
    "distance_bruteforce",
    "kl_check",
    "logical_operators",
    "subsystem_analyze",
    "symplectic_gram_schmidt",
    "symplectic_rank",
    "trivial_code",
]
