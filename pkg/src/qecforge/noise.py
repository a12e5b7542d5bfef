"""Pauli noise channels, samplers, repeated-measurement streams and detector models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import BitMatrix
from .pauli import PauliOperator, symplectic_product
from .tableau import Instruction, Tableau


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit Pauli channel applied independently to every qubit."""

    px: float
    py: float
    pz: float

    def __post_init__(self) -> None:
        for name, v in (("px", self.px), ("py", self.py), ("pz", self.pz)):
            if not (0.0 <= v <= 1.0) or not np.isfinite(v):
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.px + self.py + self.pz > 1.0 + 1e-12:
            raise ValueError("px + py + pz exceeds 1")

    @property
    def p_identity(self) -> float:
        return 1.0 - self.px - self.py - self.pz

    @property
    def x_marginal(self) -> float:
        """Probability that the X component is present (X or Y)."""
        return self.px + self.py

    @property
    def z_marginal(self) -> float:
        return self.pz + self.py

    def probabilities(self) -> Tuple[float, float, float, float]:
        return (self.p_identity, self.px, self.py, self.pz)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


def depolarizing(p: float) -> PauliChannel:
    """X, Y, Z each with probability p/4 (identity with 1 - 3p/4)."""
    p = _check_p(p)
    return PauliChannel(p / 4, p / 4, p / 4)


def dephasing(p: float) -> PauliChannel:
    p = _check_p(p)
    return PauliChannel(0.0, 0.0, p)


def bit_flip(p: float) -> PauliChannel:
    p = _check_p(p)
    return PauliChannel(p, 0.0, 0.0)


def independent_xz(p: float) -> PauliChannel:
    """Independent X and Z flips at rate p each (Y when both occur)."""
    p = _check_p(p)
    return PauliChannel(p * (1 - p), p * p, p * (1 - p))


CHANNELS = {"depolarizing": depolarizing, "dephasing": dephasing, "xz": independent_xz, "bitflip": bit_flip}


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_error_bits(ch: PauliChannel, n: int, shots: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Arrays ``(x, z)`` of shape ``(shots, n)`` holding i.i.d. channel samples."""
    u = rng.random((shots, n))
    a = ch.px
    b = a + ch.py
    c = b + ch.pz
    x = (u < b).astype(np.uint8)
    z = ((u >= a) & (u < c)).astype(np.uint8)
    return x, z


def sample_error(ch: PauliChannel, n: int, rng: np.random.Generator) -> PauliOperator:
    x, z = sample_error_bits(ch, n, 1, rng)
    return PauliOperator.from_bits(x[0], z[0])


def syndrome(code, E: PauliOperator) -> np.ndarray:
    """Bit ``j`` is the symplectic product of generator ``j`` with ``E``."""
    if E.n != code.n:
        raise ValueError(f"error acts on {E.n} qubits, code has {code.n}")
    return code.syndrome(E)


def check_outcomes(code, E: PauliOperator) -> np.ndarray:
    """Like :func:`syndrome` but over every measured check, dependent ones included."""
    if E.n != code.n:
        raise ValueError(f"error acts on {E.n} qubits, code has {code.n}")
    return np.array([symplectic_product(g, E) for g in _checks(code)], dtype=np.uint8)


def _checks(code):
    return tuple(getattr(code, "measured_checks", code.stabilizers))


# ---------------------------------------------------------------------------
# noise specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseSpec:
    """Parsed form of ``{"kind", "p", "q", "rounds", "final_perfect"}``."""

    kind: str = "depolarizing"
    p: float = 0.0
    q: float = 0.0
    rounds: int = 1
    final_perfect: bool = True

    def __post_init__(self) -> None:
        if self.kind not in CHANNELS:
            raise ValueError(f"unknown noise kind {self.kind!r}; known: {sorted(CHANNELS)}")
        _check_p(self.p)
        _check_p(self.q)
        if int(self.rounds) < 1:
            raise ValueError("rounds must be >= 1")

    def channel(self, p: Optional[float] = None) -> PauliChannel:
        return CHANNELS[self.kind](self.p if p is None else p)

    @property
    def is_code_capacity(self) -> bool:
        return self.rounds == 1 and self.q == 0.0

    def with_p(self, p: float, q: Optional[float] = None) -> "NoiseSpec":
        return NoiseSpec(self.kind, p, self.q if q is None else q, self.rounds, self.final_perfect)

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSpec":
        unknown = set(d) - {"kind", "p", "q", "rounds", "final_perfect"}
        if unknown:
            raise ValueError(f"unknown noise keys {sorted(unknown)}")
        return cls(str(d.get("kind", "depolarizing")), float(d.get("p", 0.0)), float(d.get("q", 0.0)),
                   int(d.get("rounds", 1)), bool(d.get("final_perfect", True)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "q": self.q, "rounds": self.rounds, "final_perfect": self.final_perfect}

    def label(self) -> str:
        base = self.kind
        if not self.is_code_capacity:
            base += f"(q={self.q:g};T={self.rounds}{';perfect' if self.final_perfect else ''})"
        return base


@dataclass(frozen=True)
class PhenomenologicalModel:
    data: PauliChannel
    q: float
    rounds: int
    final_perfect: bool = True

    def __post_init__(self) -> None:
        _check_p(self.q)
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")

    @classmethod
    def from_spec(cls, spec: NoiseSpec, p: Optional[float] = None) -> "PhenomenologicalModel":
        return cls(spec.channel(p), spec.q, spec.rounds, spec.final_perfect)

    @property
    def total_rounds(self) -> int:
        return self.rounds + (1 if self.final_perfect else 0)


# ---------------------------------------------------------------------------
# phenomenological stream
# ---------------------------------------------------------------------------

@dataclass
class PhenomenologicalRun:
    data_errors: List[PauliOperator]  # F_t for the noisy rounds
    measurement_errors: List[np.ndarray]  # B_t (zeros for the perfect round)
    observed: List[np.ndarray]  # s_t
    detectors: List[np.ndarray]  # Delta_t
    cumulative: PauliOperator  # F_T ... F_1


def phenomenological_stream(code, F: Sequence[PauliOperator], B: Sequence[np.ndarray],
                            final_perfect: bool = True) -> PhenomenologicalRun:
    """Observed syndromes ``s_t = sigma(F_t ... F_1) + B_t`` and changes ``Delta_t``.

    ``Delta_1 = s_1`` and ``Delta_t = s_t + s_{t-1}``, i.e.
    ``Delta_t = sigma(F_t) + B_t + B_{t-1}``.  With ``final_perfect`` an extra
    round with no data error and no measurement error is appended.
    Syndromes run over the measured checks of ``code`` (see
    :func:`check_outcomes`).
    """
    if len(F) != len(B):
        raise ValueError("need one measurement-error vector per round")
    m = len(_checks(code))
    D = PauliOperator.identity(code.n)
    Fs = list(F)
    Bs = [np.asarray(b, dtype=np.uint8) % 2 for b in B]
    if final_perfect:
        Fs.append(PauliOperator.identity(code.n))
        Bs.append(np.zeros(m, dtype=np.uint8))
    observed, dets = [], []
    prev = np.zeros(m, dtype=np.uint8)
    for Ft, Bt in zip(Fs, Bs):
        if Bt.shape != (m,):
            raise ValueError(f"measurement error has shape {Bt.shape}, expected ({m},)")
        D = Ft * D
        s = check_outcomes(code, D) ^ Bt
        observed.append(s)
        dets.append(s ^ prev)
        prev = s
    return PhenomenologicalRun(Fs, Bs, observed, dets, D.unsigned())


def phenomenological_run(code, model: PhenomenologicalModel, rng: np.random.Generator) -> PhenomenologicalRun:
    F = [sample_error(model.data, code.n, rng) for _ in range(model.rounds)]
    m = len(_checks(code))
    B = [(rng.random(m) < model.q).astype(np.uint8) for _ in range(model.rounds)]
    return phenomenological_stream(code, F, B, model.final_perfect)


# ---------------------------------------------------------------------------
# detector model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mechanism:
    probability: float
    detectors: Tuple[int, ...]
    logical_mask: int
    label: Tuple  # ("data", round, qubit, pauli) or ("meas", round, check)


@dataclass
class DetectorModel:
    """Independent fault mechanisms and the detectors / observables they flip.

    Detector ``(i, t)`` is the change of check ``i``'s outcome between
    rounds ``t-1`` and ``t``; ``detector_labels`` lists the kept detectors.
    Observables are the logical operators that detect the modelled errors.
    """

    detector_labels: List[Tuple[int, int]]
    mechanisms: List[Mechanism]
    n_observables: int
    side: Optional[str] = None
    check_indices: Tuple[int, ...] = ()
    rounds: int = 1
    _cache: Dict[str, object] = field(default_factory=dict, repr=False)

    @property
    def n_detectors(self) -> int:
        return len(self.detector_labels)

    @property
    def n_mechanisms(self) -> int:
        return len(self.mechanisms)

    def check_matrix(self) -> BitMatrix:
        if "H" not in self._cache:
            H = np.zeros((self.n_detectors, self.n_mechanisms), dtype=np.uint8)
            for j, mech in enumerate(self.mechanisms):
                for d in mech.detectors:
                    H[d, j] ^= 1
            self._cache["H"] = BitMatrix(H)
        return self._cache["H"]  # type: ignore[return-value]

    def logical_matrix(self) -> BitMatrix:
        if "L" not in self._cache:
            L = np.zeros((self.n_observables, self.n_mechanisms), dtype=np.uint8)
            for j, mech in enumerate(self.mechanisms):
                for b in range(self.n_observables):
                    L[b, j] = (mech.logical_mask >> b) & 1
            self._cache["L"] = BitMatrix(L)
        return self._cache["L"]  # type: ignore[return-value]

    def priors(self) -> np.ndarray:
        return np.array([m.probability for m in self.mechanisms], dtype=float)

    def detector_index(self) -> Dict[Tuple[int, int], int]:
        return {lab: i for i, lab in enumerate(self.detector_labels)}

    def syndrome_of(self, e) -> np.ndarray:
        return self.check_matrix() @ np.asarray(e, dtype=np.uint8)

    def observables_of(self, e) -> np.ndarray:
        return self.logical_matrix() @ np.asarray(e, dtype=np.uint8)

    def sample(self, shots: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Independent mechanism draws: (faults, detection events, observable flips)."""
        e = (rng.random((shots, self.n_mechanisms)) < self.priors()).astype(np.uint8)
        H = self.check_matrix().array.astype(np.int64)
        L = self.logical_matrix().array.astype(np.int64)
        return e, ((e @ H.T) & 1).astype(np.uint8), ((e @ L.T) & 1).astype(np.uint8)

    def fault_vector(self, run: PhenomenologicalRun) -> np.ndarray:
        """Indicator vector of the mechanisms that occurred in a sampled run."""
        index = {m.label: j for j, m in enumerate(self.mechanisms)}
        e = np.zeros(self.n_mechanisms, dtype=np.uint8)
        noisy_rounds = self.rounds
        for t, F in enumerate(run.data_errors[:noisy_rounds], start=1):
            for q in F.support:
                ch = F.char(q)
                for lab in self._data_labels(t, q, ch):
                    if lab not in index:
                        raise KeyError(f"fault {lab} has no mechanism (zero probability?)")
                    e[index[lab]] ^= 1
        for t, Bt in enumerate(run.measurement_errors[:noisy_rounds], start=1):
            for pos, i in enumerate(self.check_indices):
                if Bt[i]:
                    e[index[("meas", t, i)]] ^= 1
        return e

    def _data_labels(self, t: int, q: int, ch: str):
        if self.side is None:
            return [("data", t, q, ch)]
        if self.side == "X":
            return [("data", t, q, "X")] if ch in "XY" else []
        return [("data", t, q, "Z")] if ch in "ZY" else []

    def detection_events(self, run: PhenomenologicalRun) -> np.ndarray:
        """Detector vector of a run restricted to the kept detectors."""
        out = np.zeros(self.n_detectors, dtype=np.uint8)
        for k, (i, t) in enumerate(self.detector_labels):
            out[k] = run.detectors[t - 1][i]
        return out


def build_detector_model(code, model: PhenomenologicalModel, side: Optional[str] = None,
                         prune: bool = True) -> DetectorModel:
    """Detector model for repeated noisy syndrome measurement.

    ``side=None`` models full Pauli data errors (mechanisms X, Y, Z per qubit
    and round) against all generators and all ``2k`` logical observables.
    ``side="X"`` keeps only X components (probability ``px + py``) detected by
    the Z-type checks, with the logical Z operators as observables;
    ``side="Z"`` is the mirror image.  Measurement flips hit every modelled
    check each noisy round with probability ``q``.  Mechanisms with zero
    probability and detectors no mechanism touches are dropped when ``prune``.
    """
    n = code.n
    gens = list(_checks(code))
    if side is None:
        checks = list(range(len(gens)))
        observables = list(code.logical_x) + list(code.logical_z)
        kinds = [("X", model.data.px), ("Y", model.data.py), ("Z", model.data.pz)]
    elif side in ("X", "Z"):
        want_z_checks = side == "X"
        checks = [i for i, g in enumerate(gens) if (g.x == 0 if want_z_checks else g.z == 0) and not g.is_identity]
        mixed = [i for i, g in enumerate(gens) if g.x and g.z]
        if mixed:
            from .stabilizer import NotCSS

            raise NotCSS("side-split detector models need a CSS code")
        observables = list(code.logical_z) if side == "X" else list(code.logical_x)
        kinds = [(side, model.data.x_marginal if side == "X" else model.data.z_marginal)]
    else:
        raise ValueError("side must be None, 'X' or 'Z'")
    T = model.rounds
    T_total = model.total_rounds
    labels_all = [(i, t) for t in range(1, T_total + 1) for i in checks]
    det_of = {lab: k for k, lab in enumerate(labels_all)}
    mechs: List[Mechanism] = []
    for t in range(1, T + 1):
        for q in range(n):
            for ch, prob in kinds:
                E = PauliOperator.from_sparse(n, {q: ch})
                dets = tuple(det_of[(i, t)] for i in checks if symplectic_product(gens[i], E))
                mask = 0
                for b, L in enumerate(observables):
                    if symplectic_product(L, E):
                        mask |= 1 << b
                mechs.append(Mechanism(prob, dets, mask, ("data", t, q, ch)))
        for i in checks:
            dets = [det_of[(i, t)]]
            if t + 1 <= T_total:
                dets.append(det_of[(i, t + 1)])
            mechs.append(Mechanism(model.q, tuple(dets), 0, ("meas", t, i)))
    if prune:
        mechs = [m for m in mechs if m.probability > 0]
        used = sorted({d for m in mechs for d in m.detectors})
        remap = {old: new for new, old in enumerate(used)}
        labels = [labels_all[d] for d in used]
        mechs = [Mechanism(m.probability, tuple(sorted(remap[d] for d in m.detectors)), m.logical_mask, m.label)
                 for m in mechs]
    else:
        labels = labels_all
    return DetectorModel(labels, mechs, len(observables), side, tuple(checks), T)


def code_capacity_model(code, channel: PauliChannel, side: Optional[str] = None) -> DetectorModel:
    """Single perfect round: mechanisms are the columns of the check matrix."""
    return build_detector_model(code, PhenomenologicalModel(channel, 0.0, 1, False), side)


# ---------------------------------------------------------------------------
# Shor-style syndrome extraction
# ---------------------------------------------------------------------------

class GeneratorTooHeavy(ValueError):
    pass


class CatPreparationFailed(RuntimeError):
    pass


_CONTROLLED = {"X": "CNOT", "Y": "CY", "Z": "CZ"}


def shor_gadget(g: PauliOperator, ancillas: Sequence[int], verifier: int) -> Dict[str, List[Instruction]]:
    """Instruction blocks for measuring ``g`` with a verified cat state.

    Blocks: ``prep`` (reset, H, CNOT cascade), ``verify`` (parity of the two
    ends copied onto ``verifier`` and measured in Z), ``couple`` (controlled
    Paulis from cat qubit ``k`` onto the ``k``-th support qubit of ``g``) and
    ``readout`` (X-basis measurement of every cat qubit).
    """
    supp = g.support
    w = len(supp)
    if len(ancillas) < w:
        raise ValueError("not enough ancillas")
    a = list(ancillas[:w])
    N = max([g.n] + a + [verifier]) + 1
    prep = [Instruction("R", (q,)) for q in a] + [Instruction("H", (a[0],))]
    prep += [Instruction("CNOT", (a[k], a[k + 1])) for k in range(w - 1)]
    verify = [Instruction("R", (verifier,)), Instruction("CNOT", (a[0], verifier)),
              Instruction("CNOT", (a[-1], verifier)),
              Instruction("MPP", pauli=PauliOperator.from_sparse(N, {verifier: "Z"}))]
    couple = [Instruction(_CONTROLLED[g.char(q)], (a[k], q)) for k, q in enumerate(supp)]
    readout = [Instruction("MPP", pauli=PauliOperator.from_sparse(N, {anc: "X"})) for anc in a]
    if w == 1:
        verify = []
    return {"prep": prep, "verify": verify, "couple": couple, "readout": readout, "size": N}


def _extend(t: Tableau, N: int) -> Tableau:
    n = t.n
    grow = lambda P: PauliOperator(N, P.x, P.z, P.phase)  # noqa: E731
    gens = [grow(g) for g in t.generators] + [PauliOperator(N, 0, 1 << q) for q in range(n, N)]
    return Tableau(N, gens, [grow(L) for L in t.logicals], validate=False)


def _restrict(t: Tableau, n: int) -> Tableau:
    """Drop ancillas that were reset to ``|0>``: strip their Z factors and generators."""
    from .gf2 import RowSpace

    data_mask = (1 << n) - 1
    sp = RowSpace()
    kept = []
    for g in t.generators:
        if g.x & ~data_mask:
            raise AssertionError("ancilla left entangled with the data")
        body = PauliOperator(n, g.x & data_mask, g.z & data_mask, g.phase)
        if not body.is_identity and sp.add(body.vec):
            kept.append(body)
    logs = [PauliOperator(n, L.x & data_mask, L.z & data_mask, L.phase) for L in t.logicals]
    return Tableau(n, kept, logs, validate=False)


def shor_extraction_cycle(t: Tableau, code, p: float, rng: np.random.Generator,
                          w_max: int = 8, max_attempts: int = 1000) -> Tuple[np.ndarray, Tableau]:
    """One round of Shor extraction of every generator of ``code``.

    Single-qubit depolarizing noise of strength ``p`` follows every reset,
    gate (on each qubit it touches) and precedes every measurement.  A cat
    state whose verification reads -1 is discarded and prepared again.
    Returns the syndrome bits and the data tableau after the round.
    """
    gens = list(code.stabilizers)
    heavy = [g for g in gens if g.weight > w_max]
    if heavy:
        raise GeneratorTooHeavy(f"generator {heavy[0]} has weight {heavy[0].weight} > {w_max}")
    n = code.n
    w = max(g.weight for g in gens)
    anc = list(range(n, n + w))
    ver = n + w
    N = n + w + 1
    ch = depolarizing(p)
    big = _extend(t, N)

    def noisy(qubits):
        if p <= 0:
            return
        E = sample_error(ch, len(qubits), rng)
        if E.is_identity:
            return
        full = PauliOperator(N, 0, 0)
        for j, q in enumerate(qubits):
            c = E.char(j)
            if c != "I":
                full = full * PauliOperator.from_sparse(N, {q: c})
        big.apply_pauli(full)

    def run(block):
        outs = []
        for ins in block:
            if ins.name == "R":
                big.reset(ins.qubits[0], rng)
                noisy(ins.qubits)
            elif ins.name == "MPP":
                noisy(ins.pauli.support)
                P = PauliOperator(N, ins.pauli.x, ins.pauli.z, ins.pauli.phase)
                outs.append(big.measure(P, rng).outcome)
            else:
                big.apply(ins.name, *ins.qubits)
                noisy(ins.qubits)
        return outs

    bits = np.zeros(len(gens), dtype=np.uint8)
    for j, g in enumerate(gens):
        G = PauliOperator(N, g.x, g.z, 0)
        blocks = shor_gadget(G, anc, ver)
        for _ in range(max_attempts):
            run(blocks["prep"])
            ok = run(blocks["verify"])
            if not ok or ok[0] == 1:
                break
        else:
            raise CatPreparationFailed(f"cat state for generator {j} failed {max_attempts} verifications")
        run(blocks["couple"])
        outs = run(blocks["readout"])
        parity = int(np.prod(outs))
        if g.phase == 2:
            parity = -parity
        bits[j] = 1 if parity == -1 else 0
        for q in anc + [ver]:
            big.reset(q, rng)
    return bits, _restrict(big, n)


__all__ = [
    "CHANNELS",
    "CatPreparationFailed",
    "DetectorModel",
    "GeneratorTooHeavy",
    "Mechanism",
    "NoiseSpec",
    "PauliChannel",
    "PhenomenologicalModel",
    "PhenomenologicalRun",
    "bit_flip",
    "build_detector_model",
    "check_outcomes",
    "code_capacity_model",
    "dephasing",
    "depolarizing",
    "independent_xz",
    "phenomenological_run",
    "phenomenological_stream",
    "sample_error",
    "sample_error_bits",
    "shor_extraction_cycle",
    "shor_gadget",
    "syndrome",
]
