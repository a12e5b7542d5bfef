"""Signed stabilizer tableau with Pauli-measurement update rules.

A :class:`Tableau` holds a list of mutually commuting, independent signed
Pauli generators plus an optional list of tracked logical representatives.
With ``n`` generators it describes a pure stabilizer state; with fewer it
describes a code subspace whose logical operators are tracked explicitly.

Measurement follows the three usual cases:

* ``+-P`` already in the group: deterministic outcome, nothing changes;
* ``P`` commutes with every generator but is not in the group: random
  outcome ``o`` and ``oP`` is appended;
* ``P`` anticommutes with generators ``W = {g_a, g_b, ...}`` (listed in
  index order): random outcome; every other member of ``W`` is multiplied
  by the pivot ``g_a`` (the lowest-index one) and ``oP`` takes the pivot's
  slot, so the generator count is unchanged.

Tracked logicals that anticommute with ``P`` are multiplied by the old pivot
in the third case.  In the second case they cannot be repaired: they are
replaced by ``oP`` and reported as consumed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .gf2 import RowSpace
from .pauli import PauliOperator, pauli_mul, product

PauliLike = Union[PauliOperator, str]


class NonHermitianMeasurement(ValueError):
    pass


class Membership(enum.Enum):
    IN_GROUP = "in-group"
    COMMUTES = "commutes-not-in-group"
    ANTICOMMUTES = "anticommutes"


@dataclass(frozen=True)
class Containment:
    kind: Membership
    sign: Optional[int] = None  # +1/-1 when kind is IN_GROUP
    anticommuting: Tuple[int, ...] = ()


@dataclass(frozen=True)
class LogicalEvent:
    """A change to tracked logical ``index`` caused by one measurement.

    ``kind`` is ``"measured"`` (the measured Pauli equals the logical up to
    stabilizers), ``"consumed"`` (anticommuting logical replaced by ``oP``) or
    ``"updated"`` (multiplied by the removed pivot generator).
    """

    index: int
    kind: str


@dataclass(frozen=True)
class MeasurementResult:
    pauli: PauliOperator
    outcome: int
    deterministic: bool
    rule: int
    logical_events: Tuple[LogicalEvent, ...] = ()

    @property
    def is_logical_measurement(self) -> bool:
        return any(e.kind in ("measured", "consumed") for e in self.logical_events)


def _as_pauli(P: PauliLike, n: Optional[int] = None) -> PauliOperator:
    op = PauliOperator.from_str(P) if isinstance(P, str) else P
    if n is not None and op.n != n:
        raise ValueError(f"operator on {op.n} qubits, tableau has {n}")
    return op


# ---------------------------------------------------------------------------
# Clifford conjugation
# ---------------------------------------------------------------------------

# Images of X and Z on each gate qubit, as short Pauli strings over the gate's qubits.
_GATE_IMAGES: Dict[str, Tuple[int, Dict[str, str]]] = {
    "I": (1, {"X0": "X", "Z0": "Z"}),
    "H": (1, {"X0": "Z", "Z0": "X"}),
    "S": (1, {"X0": "Y", "Z0": "Z"}),
    "S_DAG": (1, {"X0": "-Y", "Z0": "Z"}),
    "X": (1, {"X0": "X", "Z0": "-Z"}),
    "Y": (1, {"X0": "-X", "Z0": "-Z"}),
    "Z": (1, {"X0": "-X", "Z0": "Z"}),
    "CNOT": (2, {"X0": "XX", "Z0": "ZI", "X1": "IX", "Z1": "ZZ"}),
    "CZ": (2, {"X0": "XZ", "Z0": "ZI", "X1": "ZX", "Z1": "IZ"}),
    "CY": (2, {"X0": "XY", "Z0": "ZI", "X1": "ZX", "Z1": "ZZ"}),
    "SWAP": (2, {"X0": "IX", "Z0": "IZ", "X1": "XI", "Z1": "ZI"}),
}
_GATE_ALIASES = {"CX": "CNOT", "SDG": "S_DAG", "S_DAGGER": "S_DAG"}
GATES = tuple(_GATE_IMAGES) + tuple(_GATE_ALIASES)


def gate_arity(name: str) -> int:
    return _GATE_IMAGES[_GATE_ALIASES.get(name.upper(), name.upper())][0]


def _embed(n: int, qubits: Sequence[int], local: str) -> PauliOperator:
    op = PauliOperator.from_str(local)
    x = z = 0
    for j, q in enumerate(qubits):
        x |= ((op.x >> j) & 1) << q
        z |= ((op.z >> j) & 1) << q
    return PauliOperator(n, x, z, op.phase)


def conjugate(P: PauliOperator, gate: str, qubits: Sequence[int]) -> PauliOperator:
    """``U P U^dagger`` for a single named gate acting on ``qubits``."""
    name = _GATE_ALIASES.get(gate.upper(), gate.upper())
    if name not in _GATE_IMAGES:
        raise ValueError(f"unknown gate {gate!r}")
    arity, images = _GATE_IMAGES[name]
    qubits = [int(q) for q in qubits]
    if len(qubits) != arity:
        raise ValueError(f"{name} acts on {arity} qubit(s), got {len(qubits)}")
    if len(set(qubits)) != arity:
        raise ValueError(f"{name} needs distinct qubits, got {qubits}")
    for q in qubits:
        if not 0 <= q < P.n:
            raise IndexError(f"qubit {q} out of range for n={P.n}")
    mask = 0
    for q in qubits:
        mask |= 1 << q
    if not ((P.x | P.z) & mask):
        return P
    # P = i^(phase + #Y on gate qubits) * rest * prod_j X_j^{x_j} Z_j^{z_j}
    rest = PauliOperator(P.n, P.x & ~mask, P.z & ~mask, P.phase)
    n_y = bin(P.x & P.z & mask).count("1")
    acc = rest.with_phase(rest.phase + n_y)
    for j, q in enumerate(qubits):
        if (P.x >> q) & 1:
            acc = pauli_mul(acc, _embed(P.n, qubits, images[f"X{j}"]))
        if (P.z >> q) & 1:
            acc = pauli_mul(acc, _embed(P.n, qubits, images[f"Z{j}"]))
    return acc


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instruction:
    """One circuit line: a gate, ``MPP`` (with ``pauli``), ``R`` reset or ``NOISE_DEPOL``."""

    name: str
    qubits: Tuple[int, ...] = ()
    pauli: Optional[PauliOperator] = None
    p: Optional[float] = None

    def __str__(self) -> str:
        if self.name == "MPP":
            s = str(self.pauli)
            return "MPP " + (s if s.startswith("-") else "+" + s)
        if self.name == "NOISE_DEPOL":
            return "NOISE_DEPOL " + " ".join([repr(self.p)] + [str(q) for q in self.qubits])
        return " ".join([self.name] + [str(q) for q in self.qubits])


def parse_circuit(text: str, n: Optional[int] = None) -> List[Instruction]:
    """Parse the line-based circuit format (0-based qubits, ``#`` comments)."""
    out: List[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0].upper()
        try:
            if head == "MPP":
                if len(parts) != 2:
                    raise ValueError("MPP takes one signed Pauli string")
                P = PauliOperator.from_str(parts[1])
                if n is not None and P.n != n:
                    raise ValueError(f"Pauli string has {P.n} qubits, expected {n}")
                out.append(Instruction("MPP", pauli=P))
            elif head == "NOISE_DEPOL":
                p = float(parts[1])
                if not 0.0 <= p <= 1.0:
                    raise ValueError("probability outside [0, 1]")
                out.append(Instruction("NOISE_DEPOL", tuple(int(q) for q in parts[2:]), p=p))
            elif head == "R":
                out.append(Instruction("R", tuple(int(q) for q in parts[1:])))
            else:
                name = _GATE_ALIASES.get(head, head)
                if name not in _GATE_IMAGES:
                    raise ValueError(f"unknown instruction {parts[0]!r}")
                qs = tuple(int(q) for q in parts[1:])
                if len(qs) != _GATE_IMAGES[name][0]:
                    raise ValueError(f"{name} expects {_GATE_IMAGES[name][0]} qubit(s)")
                out.append(Instruction(name, qs))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if n is not None:
            for q in out[-1].qubits:
                if not 0 <= q < n:
                    raise ValueError(f"line {lineno}: qubit {q} out of range")
    return out


def format_circuit(circuit: Sequence[Instruction]) -> str:
    return "\n".join(str(ins) for ins in circuit) + "\n"


def _gate_list(circuit) -> List[Instruction]:
    if isinstance(circuit, str):
        return parse_circuit(circuit)
    out = []
    for item in circuit:
        if isinstance(item, Instruction):
            out.append(item)
        else:
            name, *qs = item
            out.append(Instruction(str(name).upper(), tuple(int(q) for q in qs)))
    return out


def conjugate_pauli_through(circuit, P: PauliLike) -> PauliOperator:
    """Propagate ``P`` forward through a gate list: returns ``U P U^dagger``.

    ``circuit`` may be text, :class:`Instruction` objects or tuples such as
    ``("CNOT", 0, 1)``.  Noise lines are ignored; measurements and resets are
    rejected since they are not unitary.
    """
    op = _as_pauli(P)
    for ins in _gate_list(circuit):
        if ins.name == "NOISE_DEPOL":
            continue
        if ins.name in ("MPP", "R"):
            raise ValueError("cannot conjugate through a measurement or reset")
        op = conjugate(op, ins.name, ins.qubits)
    return op


# ---------------------------------------------------------------------------
# tableau
# ---------------------------------------------------------------------------

class Tableau:
    """Mutable signed stabilizer generators plus tracked logical representatives."""

    def __init__(self, n: int, generators: Sequence[PauliLike] = (), logicals: Sequence[PauliLike] = (),
                 validate: bool = True):
        self.n = int(n)
        self.generators: List[PauliOperator] = [_as_pauli(g, self.n) for g in generators]
        self.logicals: List[PauliOperator] = [_as_pauli(L, self.n) for L in logicals]
        self.record: List[MeasurementResult] = []
        self._space: Optional[RowSpace] = None
        if validate:
            self.check()

    # construction -----------------------------------------------------------
    @classmethod
    def zero_state(cls, n: int) -> "Tableau":
        return cls(n, [PauliOperator(n, 0, 1 << q) for q in range(n)])

    def copy(self) -> "Tableau":
        t = Tableau(self.n, self.generators, self.logicals, validate=False)
        t.record = list(self.record)
        return t

    clone = copy

    # validation -------------------------------------------------------------
    def check(self) -> None:
        """Raise if the generators are not commuting, Hermitian and independent."""
        gens = self.generators
        for i, g in enumerate(gens):
            if not g.is_hermitian:
                raise ValueError(f"generator {i} ({g}) is not Hermitian")
            for j in range(i + 1, len(gens)):
                if not g.commutes(gens[j]):
                    raise ValueError(f"generators {i} and {j} anticommute")
        sp = RowSpace()
        for i, g in enumerate(gens):
            if g.is_identity or not sp.add(g.vec):
                raise ValueError(f"generator {i} ({g}) is dependent")
        self._space = None
        for j, L in enumerate(self.logicals):
            for i, g in enumerate(gens):
                if not L.commutes(g):
                    raise ValueError(f"logical {j} anticommutes with generator {i}")

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def is_pure(self) -> bool:
        return self.rank == self.n

    def _rowspace(self) -> RowSpace:
        if self._space is None:
            sp = RowSpace()
            for g in self.generators:
                sp.add(g.vec)
            self._space = sp
        return self._space

    def _touch(self) -> None:
        self._space = None

    # queries ----------------------------------------------------------------
    def contains(self, P: PauliLike) -> Containment:
        P = _as_pauli(P, self.n)
        anti = tuple(i for i, g in enumerate(self.generators) if not g.commutes(P))
        if anti:
            return Containment(Membership.ANTICOMMUTES, None, anti)
        combo = self._rowspace().express(P.vec)
        if combo is None:
            return Containment(Membership.COMMUTES)
        elem = product([self.generators[i] for i in range(self.rank) if (combo >> i) & 1], n=self.n)
        rel = (elem.phase - P.phase) % 4
        if rel not in (0, 2):
            raise NonHermitianMeasurement(f"{P} is not Hermitian")
        return Containment(Membership.IN_GROUP, 1 if rel == 0 else -1)

    def expectation(self, P: PauliLike) -> Optional[int]:
        """+1/-1 when ``P`` has a definite value, else None."""
        c = self.contains(P)
        return c.sign if c.kind is Membership.IN_GROUP else None

    def phaseless_group_key(self) -> frozenset:
        """Canonical set of unsigned generator vectors (reduced row echelon form)."""
        from .gf2 import _rref_rows

        rows, _ = _rref_rows([g.vec for g in self.generators], 2 * self.n)
        return frozenset(rows)

    def same_group(self, other: "Tableau", phaseless: bool = True) -> bool:
        if self.n != other.n or self.rank != other.rank:
            return False
        for g in other.generators:
            c = self.contains(g)
            if c.kind is not Membership.IN_GROUP:
                return False
            if not phaseless and c.sign != 1:
                return False
        return True

    # evolution -------------------------------------------------------------
    def apply(self, gate: str, *qubits: int) -> "Tableau":
        self.generators = [conjugate(g, gate, qubits) for g in self.generators]
        self.logicals = [conjugate(L, gate, qubits) for L in self.logicals]
        self._touch()
        return self

    def apply_pauli(self, E: PauliOperator) -> "Tableau":
        """Apply a Pauli error: generators anticommuting with ``E`` flip sign."""
        self.generators = [g if g.commutes(E) else -g for g in self.generators]
        self.logicals = [L if L.commutes(E) else -L for L in self.logicals]
        return self

    def measure(self, P: PauliLike, rng: Optional[np.random.Generator] = None,
                forced: Optional[int] = None) -> MeasurementResult:
        """Measure ``P`` in place.  ``forced`` fixes the value of a random outcome."""
        P = _as_pauli(P, self.n)
        if not P.is_hermitian:
            raise NonHermitianMeasurement(f"{P} has phase i^{P.phase}; only +-P can be measured")
        if P.is_identity:
            res = MeasurementResult(P, P.sign, True, 1)
            self.record.append(res)
            return res
        c = self.contains(P)
        events: List[LogicalEvent] = []
        if c.kind is Membership.IN_GROUP:
            outcome = c.sign
            for j, L in enumerate(self.logicals):
                if self._same_class(L, P):
                    events.append(LogicalEvent(j, "measured"))
            res = MeasurementResult(P, outcome, True, 1, tuple(events))
            self.record.append(res)
            return res
        outcome = self._draw(rng, forced)
        oP = P if outcome == 1 else -P
        if c.kind is Membership.COMMUTES:
            for j, L in enumerate(self.logicals):
                if not L.commutes(P):
                    self.logicals[j] = oP
                    events.append(LogicalEvent(j, "consumed"))
                elif L.equal_up_to_phase(P) or self._differs_by_group(L, P):
                    events.append(LogicalEvent(j, "measured"))
            self.generators.append(oP)
            self._touch()
            res = MeasurementResult(P, outcome, False, 2, tuple(events))
            self.record.append(res)
            return res
        pivot_index = c.anticommuting[0]
        pivot = self.generators[pivot_index]
        for i in c.anticommuting[1:]:
            self.generators[i] = pauli_mul(pivot, self.generators[i])
        self.generators[pivot_index] = oP
        for j, L in enumerate(self.logicals):
            if not L.commutes(P):
                self.logicals[j] = pauli_mul(pivot, L)
                events.append(LogicalEvent(j, "updated"))
        self._touch()
        res = MeasurementResult(P, outcome, False, 3, tuple(events))
        self.record.append(res)
        return res

    def reset(self, q: int, rng: Optional[np.random.Generator] = None) -> "Tableau":
        """Reset qubit ``q`` to ``|0>`` (measure Z, flip on -1)."""
        res = self.measure(PauliOperator(self.n, 0, 1 << q), rng)
        if res.outcome == -1:
            self.apply("X", q)
        return self

    # helpers ------------------------------------------------------------------
    def _differs_by_group(self, L: PauliOperator, P: PauliOperator) -> bool:
        d = PauliOperator(self.n, L.x ^ P.x, L.z ^ P.z)
        return self._rowspace().contains(d.vec)

    def _same_class(self, L: PauliOperator, P: PauliOperator) -> bool:
        return self._differs_by_group(L, P)

    @staticmethod
    def _draw(rng, forced) -> int:
        if forced is not None:
            if forced not in (1, -1):
                raise ValueError("forced outcome must be +1 or -1")
            return int(forced)
        if rng is None:
            raise ValueError("random outcome needs an rng or a forced value")
        return 1 if rng.random() < 0.5 else -1

    def run(self, circuit, rng: Optional[np.random.Generator] = None,
            on_noise: Optional[Callable[["Tableau", float, Tuple[int, ...], np.random.Generator], None]] = None,
            forced: Optional[int] = None) -> List[MeasurementResult]:
        """Execute a circuit; returns the measurement results of its MPP lines."""
        results = []
        for ins in _gate_list(circuit):
            if ins.name == "MPP":
                results.append(self.measure(ins.pauli, rng, forced))
            elif ins.name == "R":
                for q in ins.qubits:
                    self.reset(q, rng)
            elif ins.name == "NOISE_DEPOL":
                if on_noise is not None:
                    on_noise(self, float(ins.p), ins.qubits, rng)
            else:
                self.apply(ins.name, *ins.qubits)
        return results

    def state_vector(self) -> np.ndarray:
        """Dense state for a pure tableau (small ``n`` only): projector onto the +1 space."""
        if not self.is_pure:
            raise ValueError("state_vector needs a pure (rank n) tableau")
        if self.n > 12:
            raise ValueError("state_vector is limited to n <= 12")
        dim = 1 << self.n
        M = np.eye(dim, dtype=complex)
        for g in self.generators:
            M = M @ (np.eye(dim) + g.to_matrix()) / 2
        col = int(np.argmax(np.linalg.norm(M, axis=0)))
        v = M[:, col]
        return v / np.linalg.norm(v)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"Tableau(n={self.n}, [{gens}], logicals={[str(L) for L in self.logicals]})"


# ---------------------------------------------------------------------------
# functional interface
# ---------------------------------------------------------------------------

def init_code_state(code, signs: Optional[Sequence[int]] = None, track_x: bool = False) -> Tableau:
    """Pure logical basis state: code generators (+1) and ``s_i Zbar_i``.

    ``signs`` defaults to all +1 (logical ``|0...0>``).  The promoted
    ``Zbar_i`` are also tracked as logicals; ``track_x`` is rejected since
    ``Xbar_i`` anticommutes with the promoted ``Zbar_i``.
    """
    if track_x:
        raise ValueError("Xbar anticommutes with the promoted Zbar and cannot be tracked in a pure state")
    k = len(code.logical_z)
    signs = [1] * k if signs is None else list(signs)
    if len(signs) != k:
        raise ValueError(f"need {k} logical signs")
    zs = [(L if s == 1 else -L) for L, s in zip(code.logical_z, signs)]
    return Tableau(code.n, list(code.stabilizers) + zs, zs)


def code_space_tableau(code, generators: Optional[Sequence[PauliLike]] = None) -> Tableau:
    """Code-subspace view: ``m`` stabilizers plus every Xbar_i and Zbar_i tracked."""
    gens = list(code.stabilizers) if generators is None else [_as_pauli(g, code.n) for g in generators]
    return Tableau(code.n, gens, list(code.logical_x) + list(code.logical_z))


def apply_clifford(t: Tableau, gate: str, qubits: Sequence[int]) -> Tableau:
    return t.apply(gate, *qubits)


def measure_pauli(t: Tableau, P: PauliLike, rng: Optional[np.random.Generator] = None,
                  forced: Optional[int] = None) -> Tuple[int, Tableau]:
    res = t.measure(P, rng, forced)
    return res.outcome, t


def update_logicals(t: Tableau) -> Tuple[LogicalEvent, ...]:
    """Logical events of the most recent measurement (updates happen inside ``measure``)."""
    if not t.record:
        return ()
    return t.record[-1].logical_events


def contains(t: Tableau, P: PauliLike) -> Containment:
    return t.contains(P)


__all__ = [
    "Containment",
    "GATES",
    "Instruction",
    "LogicalEvent",
    "MeasurementResult",
    "Membership",
    "NonHermitianMeasurement",
    "Tableau",
    "apply_clifford",
    "code_space_tableau",
    "conjugate",
    "conjugate_pauli_through",
    "contains",
    "format_circuit",
    "gate_arity",
    "init_code_state",
    "measure_pauli",
    "parse_circuit",
    "update_logicals",
]
