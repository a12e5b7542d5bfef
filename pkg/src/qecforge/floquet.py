"""Dynamical (Floquet) codes driven by measurement schedules.

A schedule is a list of rounds, each a set of commuting Pauli checks.
:func:`run_schedule` measures every check of every round on a
:class:`~qecforge.tableau.Tableau` and records the instantaneous stabilizer
group (ISG), the measured outcomes and the tracked logical representatives
after each round.

Two schedules ship: the period-6 schedule on four qubits and the
green/red/blue honeycomb schedule.  Honeycomb layout: a brick wall with ``R``
rows and ``C`` columns of vertices on a torus.  Vertex ``(r, c)`` has index
``r*C + c``; horizontal edges join ``(r, c)`` and ``(r, c+1)``; a vertical
edge joins ``(r, c)`` and ``(r+1, c)`` when ``r + c`` is even.  The hexagon in
band ``r`` starting at column ``c`` (``c = r mod 2``) covers columns ``c..c+2`` of
rows ``r`` and ``r+1`` and has colour ``((c - r)/2 - r) mod 3``.  Every edge gets
the colour that neither neighbouring hexagon has; colours 0, 1, 2 are green
(XX), red (YY) and blue (ZZ).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .pauli import PauliOperator, pauli_mul, product
from .stabilizer import SubsystemCode, subsystem_analyze
from .tableau import Membership, Tableau

PauliLike = Union[PauliOperator, str]

GREEN, RED, BLUE = 0, 1, 2
COLOR_NAMES = ("green", "red", "blue")
COLOR_PAULI = ("X", "Y", "Z")


class ScheduleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# schedules and traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    rounds: Tuple[Tuple[PauliOperator, ...], ...]

    def __post_init__(self) -> None:
        for r, checks in enumerate(self.rounds):
            for i in range(len(checks)):
                for j in range(i + 1, len(checks)):
                    if not checks[i].commutes(checks[j]):
                        raise ScheduleError(f"round {r}: checks {checks[i]} and {checks[j]} anticommute")

    @classmethod
    def from_lists(cls, rounds: Sequence[Sequence[PauliLike]]) -> "Schedule":
        return cls(tuple(tuple(PauliOperator.from_str(c) if isinstance(c, str) else c for c in rnd) for rnd in rounds))

    @property
    def period(self) -> int:
        return len(self.rounds)

    def to_json(self) -> str:
        return json.dumps({"rounds": [[str(c) for c in rnd] for rnd in self.rounds]})

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        data = json.loads(text)
        if "rounds" not in data:
            raise ScheduleError("schedule JSON needs a 'rounds' list")
        return cls.from_lists(data["rounds"])


@dataclass
class RoundRecord:
    index: int
    checks: Tuple[PauliOperator, ...]
    outcomes: Tuple[int, ...]
    generators: Tuple[PauliOperator, ...]
    logicals: Tuple[PauliOperator, ...]
    warmup: bool = False

    def phaseless(self) -> frozenset:
        return Tableau(self.generators[0].n if self.generators else 0, self.generators,
                       validate=False).phaseless_group_key() if self.generators else frozenset()

    def to_dict(self) -> dict:
        return {
            "round": self.index,
            "checks": [str(c) for c in self.checks],
            "outcomes": list(self.outcomes),
            "generators": [str(g) for g in self.generators],
            "logicals": [str(L) for L in self.logicals],
            "warmup": self.warmup,
        }


@dataclass
class IsgTrace:
    """Round 0 is the starting ISG; entry ``t`` is the ISG after round ``t``."""

    n: int
    records: List[RoundRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i: int) -> RoundRecord:
        return self.records[i]

    def tableau(self, i: int) -> Tableau:
        rec = self.records[i]
        return Tableau(self.n, rec.generators, validate=False)

    def ranks(self) -> List[int]:
        return [len(r.generators) for r in self.records]

    def dumps(self) -> str:
        return "\n".join(json.dumps(r.to_dict()) for r in self.records) + "\n"

    @classmethod
    def loads(cls, text: str) -> "IsgTrace":
        recs = []
        n = 0
        for line in text.splitlines():
            if not line.strip():
                continue
            d = json.loads(line)
            gens = tuple(PauliOperator.from_str(s) for s in d["generators"])
            if gens:
                n = gens[0].n
            recs.append(RoundRecord(d["round"], tuple(PauliOperator.from_str(s) for s in d["checks"]),
                                    tuple(d["outcomes"]), gens,
                                    tuple(PauliOperator.from_str(s) for s in d["logicals"]), d.get("warmup", False)))
        return cls(n, recs)


def run_schedule(start: Tableau, schedule: Schedule, cycles: int = 1,
                 rng: Optional[np.random.Generator] = None, forced: Optional[int] = None,
                 warmup_rounds: int = 0, errors: Optional[Dict[int, PauliOperator]] = None,
                 rounds: Optional[int] = None) -> IsgTrace:
    """Measure ``cycles`` periods of ``schedule`` (or exactly ``rounds`` rounds).

    ``errors`` maps a round number ``t`` to a Pauli applied right after round
    ``t`` was measured (``t = 0`` means before the first round).
    """
    t = start.copy()
    errors = dict(errors or {})
    trace = IsgTrace(t.n)
    if 0 in errors:
        t.apply_pauli(errors[0])
    trace.records.append(RoundRecord(0, (), (), tuple(t.generators), tuple(t.logicals), warmup_rounds > 0))
    total = schedule.period * cycles if rounds is None else rounds
    for step in range(1, total + 1):
        checks = schedule.rounds[(step - 1) % schedule.period]
        outs = tuple(t.measure(P, rng, forced).outcome for P in checks)
        if step in errors:
            t.apply_pauli(errors[step])
        trace.records.append(RoundRecord(step, checks, outs, tuple(t.generators), tuple(t.logicals),
                                         step <= warmup_rounds))
    return trace


def verify_logical_conservation(trace: IsgTrace, signed: bool = True):
    """Check ``L^(r) L^(r+1)`` is a member of ``S^(r)`` for every tracked logical.

    Returns ``(True, None)`` or ``(False, (round, logical_index, product))``.
    With ``signed=True`` the product must be a +1 element, which is the
    signed statement ``s L^(r) = s' L^(r+1)`` with ``s, s'`` the stabilizer signs.
    """
    for r in range(len(trace) - 1):
        a, b = trace[r], trace[r + 1]
        if len(a.logicals) != len(b.logicals):
            return False, (r, -1, None)
        tab = trace.tableau(r)
        for j, (L0, L1) in enumerate(zip(a.logicals, b.logicals)):
            prod = pauli_mul(L0, L1)
            if prod.is_identity:
                if signed and prod.phase != 0:
                    return False, (r, j, prod)
                continue
            c = tab.contains(prod) if prod.is_hermitian else None
            if c is None or c.kind is not Membership.IN_GROUP:
                return False, (r, j, prod)
            if signed and c.sign != 1:
                return False, (r, j, prod)
    return True, None


def isg_period(trace: IsgTrace, start: int = 0) -> Optional[int]:
    """Smallest ``p`` with phaseless ``S^(t+p) = S^(t)`` for all recorded ``t >= start``."""
    keys = [rec.phaseless() for rec in trace.records]
    for p in range(1, len(keys) - start):
        if all(keys[t] == keys[t + p] for t in range(start, len(keys) - p)):
            return p
    return None


# ---------------------------------------------------------------------------
# four-qubit code
# ---------------------------------------------------------------------------

FOUR_QUBIT_ROUNDS = (
    ("IZ;ZI", "ZI;IZ"),
    ("XX;II", "II;XX"),
    ("ZI;ZI", "IZ;IZ"),
    ("XI;IX", "IX;XI"),
    ("ZZ;II", "II;ZZ"),
    ("XI;XI", "IX;IX"),
)

FOUR_QUBIT_ISGS = (
    ("XI;XI", "IX;IX", "ZZ;ZZ"),
    ("XX;XX", "ZI;IZ", "IZ;ZI"),
    ("XX;II", "II;XX", "ZZ;ZZ"),
    ("XX;XX", "ZI;ZI", "IZ;IZ"),
    ("XI;IX", "IX;XI", "ZZ;ZZ"),
    ("XX;XX", "ZZ;II", "II;ZZ"),
)


def four_qubit_schedule() -> Schedule:
    return Schedule.from_lists(FOUR_QUBIT_ROUNDS)


def four_qubit_start() -> Tableau:
    """Rotated d=2 code state with both logicals tracked.

    ``IX;IX`` is listed first so that it is the pivot when ``IZ;ZI`` is
    measured, which turns ``Xbar = XX;II`` into ``XI;IX``.
    """
    return Tableau(4, ["IX;IX", "XI;XI", "ZZ;ZZ"], ["XX;II", "ZI;ZI"])


# ---------------------------------------------------------------------------
# honeycomb code
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Plaquette:
    index: int
    color: int
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    operator: PauliOperator
    # sign such that operator = sign * prod(boundary checks of the two other colours)
    sign: int


@dataclass(frozen=True)
class HoneycombCode:
    rows: int
    cols: int
    edges: Tuple[Tuple[int, int, int], ...]  # (u, v, colour)
    plaquettes: Tuple[Plaquette, ...]
    checks: Tuple[PauliOperator, ...]  # one per edge, same order as ``edges``

    @property
    def n(self) -> int:
        return self.rows * self.cols

    @property
    def n_plaquettes(self) -> int:
        return len(self.plaquettes)

    def edges_of_color(self, color: int) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e[2] == color]

    def checks_of_color(self, color: int) -> List[PauliOperator]:
        return [self.checks[i] for i in self.edges_of_color(color)]

    def plaquettes_of_color(self, color: int) -> List[Plaquette]:
        return [p for p in self.plaquettes if p.color == color]

    def plaquette_operators(self, color: int) -> List[PauliOperator]:
        return [p.operator for p in self.plaquettes_of_color(color)]

    @property
    def schedule(self) -> Schedule:
        return Schedule.from_lists([self.checks_of_color(c) for c in (GREEN, RED, BLUE)])

    def round_color(self, step: int) -> int:
        """Colour measured in round ``step`` (1-based, green first)."""
        return (step - 1) % 3

    def start(self) -> Tableau:
        return Tableau(self.n, [])

    def subsystem_view(self) -> SubsystemCode:
        return subsystem_analyze(list(self.checks), name=f"honeycomb_{self.rows}x{self.cols}")


def build_honeycomb(a: int, b: int) -> HoneycombCode:
    """Honeycomb lattice on a torus with ``R = a`` rows and ``C = 3b`` columns of vertices.

    ``a`` and ``b`` must be even for the 3-colouring to close on the torus;
    this gives ``n_p = 3ab/2`` plaquettes, ``n = 2 n_p`` qubits and ``3 n_p`` edges.
    """
    if a < 2 or b < 2 or a % 2 or b % 2:
        raise ValueError("honeycomb needs even a, b >= 2")
    R, C = a, 3 * b
    vid = lambda r, c: (r % R) * C + (c % C)  # noqa: E731
    n = R * C
    edge_index: Dict[Tuple[int, int], int] = {}
    raw_edges: List[Tuple[int, int]] = []

    def add_edge(u, v):
        key = (min(u, v), max(u, v))
        if key in edge_index:
            raise ValueError("lattice too small: repeated edge")
        edge_index[key] = len(raw_edges)
        raw_edges.append(key)

    for r in range(R):
        for c in range(C):
            add_edge(vid(r, c), vid(r, c + 1))
    for r in range(R):
        for c in range(C):
            if (r + c) % 2 == 0:
                add_edge(vid(r, c), vid(r + 1, c))
    eid = lambda u, v: edge_index[(min(u, v), max(u, v))]  # noqa: E731

    plaq_raw = []
    for r in range(R):
        for c in range(r % 2, C, 2):
            color = ((c - r) // 2 - r) % 3
            top = [vid(r + 1, c + j) for j in range(3)]
            bot = [vid(r, c + j) for j in range(3)]
            verts = tuple(bot + top)
            edges = (
                eid(bot[0], bot[1]), eid(bot[1], bot[2]),
                eid(top[0], top[1]), eid(top[1], top[2]),
                eid(bot[0], top[0]), eid(bot[2], top[2]),
            )
            plaq_raw.append((color, verts, edges))

    # edge colour: the colour not used by either adjacent plaquette
    adjacent: Dict[int, List[int]] = {i: [] for i in range(len(raw_edges))}
    for color, _, edges in plaq_raw:
        for e in edges:
            adjacent[e].append(color)
    colored_edges = []
    for i, (u, v) in enumerate(raw_edges):
        cs = set(adjacent[i])
        if len(adjacent[i]) != 2 or len(cs) != 2:
            raise ValueError("colouring failed; lattice dimensions are incompatible")
        colored_edges.append((u, v, ({0, 1, 2} - cs).pop()))

    checks = tuple(PauliOperator.from_sparse(n, {u: COLOR_PAULI[col], v: COLOR_PAULI[col]})
                   for u, v, col in colored_edges)
    plaquettes = []
    for idx, (color, verts, edges) in enumerate(plaq_raw):
        others = [c for c in (GREEN, RED, BLUE) if c != color]
        parts = []
        for oc in others:
            parts.append(product([checks[e] for e in edges if colored_edges[e][2] == oc], n=n))
        prod = pauli_mul(parts[0], parts[1])
        if prod.phase not in (0, 2):
            raise AssertionError("plaquette operator is not Hermitian")
        op = prod.unsigned()
        plaquettes.append(Plaquette(idx, color, verts, edges, op, prod.sign))
    return HoneycombCode(R, C, tuple(colored_edges), tuple(plaquettes), checks)


def run_honeycomb(code: HoneycombCode, rounds: int, rng: Optional[np.random.Generator] = None,
                  forced: Optional[int] = None, errors: Optional[Dict[int, PauliOperator]] = None) -> IsgTrace:
    """Run ``rounds`` rounds from the maximally mixed state; the first 3 are warm-up."""
    return run_schedule(code.start(), code.schedule, rng=rng, forced=forced, warmup_rounds=3,
                        rounds=rounds, errors=errors)


@dataclass
class SyndromeRound:
    round: int
    color: int  # colour of the plaquettes emitted this round (-1 if none)
    values: Dict[int, int]
    detectors: Dict[int, int]  # +1 unchanged, -1 flipped since the previous emission
    warmup: bool


def honeycomb_syndrome_stream(code: HoneycombCode, trace: IsgTrace) -> List[SyndromeRound]:
    """Plaquette values inferred from the edge outcomes of consecutive rounds.

    Round ``t`` measures colour ``c_t`` and emits the plaquettes of the third
    colour, valued as ``sign * (previous round's outcomes on the boundary)
    * (this round's outcomes on the boundary)``.  Detectors compare with the
    last emitted value of the same plaquette.
    """
    edge_pos: Dict[int, Dict[int, int]] = {}
    for col in (GREEN, RED, BLUE):
        edge_pos[col] = {e: i for i, e in enumerate(code.edges_of_color(col))}
    last: Dict[int, int] = {}
    out: List[SyndromeRound] = []
    for t in range(1, len(trace)):
        cur = code.round_color(t)
        if t == 1:
            out.append(SyndromeRound(t, -1, {}, {}, True))
            continue
        prev = code.round_color(t - 1)
        emit = ({0, 1, 2} - {cur, prev}).pop()
        cur_out = trace[t].outcomes
        prev_out = trace[t - 1].outcomes
        values: Dict[int, int] = {}
        dets: Dict[int, int] = {}
        for p in code.plaquettes_of_color(emit):
            v = p.sign
            for e in p.edges:
                col = code.edges[e][2]
                if col == cur:
                    v *= cur_out[edge_pos[cur][e]]
                elif col == prev:
                    v *= prev_out[edge_pos[prev][e]]
            values[p.index] = v
            if p.index in last:
                dets[p.index] = v * last[p.index]
            last[p.index] = v
        out.append(SyndromeRound(t, emit, values, dets, trace[t].warmup))
    return out


__all__ = [
    "BLUE",
    "COLOR_NAMES",
    "FOUR_QUBIT_ISGS",
    "FOUR_QUBIT_ROUNDS",
    "GREEN",
    "HoneycombCode",
    "IsgTrace",
    "Plaquette",
    "RED",
    "RoundRecord",
    "Schedule",
    "ScheduleError",
    "SyndromeRound",
    "build_honeycomb",
    "four_qubit_schedule",
    "four_qubit_start",
    "honeycomb_syndrome_stream",
    "isg_period",
    "run_honeycomb",
    "run_schedule",
    "verify_logical_conservation",
]
