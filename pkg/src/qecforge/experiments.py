"""Monte Carlo logical-error sweeps over codes, noise models and decoders."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .decoders import DECODERS, IncompatibleDecoder, NotGraphLike, judge_batch, make_decoder
from .noise import NoiseSpec, PhenomenologicalModel, build_detector_model
from .pauli import PauliOperator
from .rng import make_rng
from .stabilizer import InstanceTooLarge, StabilizerCode

CSV_HEADER = "code,decoder,noise,p,shots,failures,rate,stderr,seconds"
DEFAULT_CHUNK = 25_000


# ---------------------------------------------------------------------------
# per-point problem
# ---------------------------------------------------------------------------

@dataclass
class _Side:
    model: object
    decoder: object
    # per mechanism: (kind, round index, position, pattern) used to gather samples
    kind: np.ndarray
    rnd: np.ndarray
    pos: np.ndarray
    pattern: np.ndarray
    H: np.ndarray


def _sides_for(code) -> List[Optional[str]]:
    return ["X", "Z"] if code.is_css else [None]


def _gather_index(model, side) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    M = model.n_mechanisms
    kind = np.zeros(M, dtype=np.int8)  # 0 data, 1 measurement
    rnd = np.zeros(M, dtype=np.int64)
    pos = np.zeros(M, dtype=np.int64)
    pattern = np.zeros(M, dtype=np.int8)  # 1 X, 2 Z, 3 Y
    for j, mech in enumerate(model.mechanisms):
        lab = mech.label
        if lab[0] == "data":
            _, t, q, ch = lab
            kind[j], rnd[j], pos[j] = 0, t - 1, q
            pattern[j] = {"X": 1, "Z": 2, "Y": 3}[ch]
        else:
            _, t, i = lab
            kind[j], rnd[j], pos[j] = 1, t - 1, i
    return kind, rnd, pos, pattern


class SweepPoint:
    """Everything needed to simulate one ``(code, noise, decoder, p)`` point."""

    def __init__(self, code, noise: NoiseSpec, decoder: str, p: float, options: Optional[Dict] = None):
        if not isinstance(code, StabilizerCode):
            raise IncompatibleDecoder("sweeps need a stabilizer code (subsystem codes are not supported)")
        if decoder not in DECODERS:
            raise KeyError(f"unknown decoder {decoder!r}; known: {sorted(DECODERS)}")
        self.code = code
        self.noise = noise.with_p(p)
        self.p = float(p)
        self.decoder_name = decoder
        self.model = PhenomenologicalModel.from_spec(self.noise)
        self.n_checks = len(code.measured_checks)
        self.sides: List[_Side] = []
        for side in _sides_for(code):
            dm = build_detector_model(code, self.model, side=side)
            if dm.n_mechanisms == 0:
                continue
            try:
                dec = make_decoder(decoder, dm, options, code=code)
            except NotGraphLike as exc:
                raise IncompatibleDecoder(f"{decoder} needs a graph-like model: {exc}") from exc
            except InstanceTooLarge as exc:
                raise IncompatibleDecoder(f"{decoder}: {exc}") from exc
            kind, rnd, pos, pattern = _gather_index(dm, side)
            self.sides.append(_Side(dm, dec, kind, rnd, pos, pattern, np.asarray(dm.check_matrix().array, np.int64)))

    def sample(self, shots: int, rng: np.random.Generator):
        """Data errors ``(x, z)`` of shape (shots, T, n) and flips of shape (shots, T, m)."""
        T, n = self.model.rounds, self.code.n
        ch = self.model.data
        u = rng.random((shots, T, n))
        a, b, c = ch.px, ch.px + ch.py, ch.px + ch.py + ch.pz
        x = (u < b).astype(np.uint8)
        z = ((u >= a) & (u < c)).astype(np.uint8)
        B = (rng.random((shots, T, self.n_checks)) < self.model.q).astype(np.uint8)
        return x, z, B

    @staticmethod
    def _faults(side: _Side, x, z, B) -> np.ndarray:
        out = np.zeros((x.shape[0], len(side.kind)), dtype=np.uint8)
        d = side.kind == 0
        if d.any():
            xs = x[:, side.rnd[d], side.pos[d]]
            zs = z[:, side.rnd[d], side.pos[d]]
            code = (xs + 2 * zs).astype(np.int8)  # 1 X, 2 Z, 3 Y
            pat = side.pattern[d]
            if side.model.side == "X":
                hit = xs
            elif side.model.side == "Z":
                hit = zs
            else:
                hit = (code == pat[None, :]).astype(np.uint8)
            out[:, d] = hit
        mm = ~d
        if mm.any():
            out[:, mm] = B[:, side.rnd[mm], side.pos[mm]]
        return out

    def run(self, shots: int, rng: np.random.Generator) -> int:
        """Number of shots where some side ends in a logical failure or a syndrome mismatch."""
        x, z, B = self.sample(shots, rng)
        failed = np.zeros(shots, dtype=bool)
        for side in self.sides:
            e = self._faults(side, x, z, B)
            det = ((e.astype(np.int64) @ side.H.T) & 1).astype(np.uint8)
            uniq, inverse = np.unique(det, axis=0, return_inverse=True)
            inverse = np.asarray(inverse).ravel()
            corr_u = np.array([side.decoder.decode(row) for row in uniq], dtype=np.uint8).reshape(len(uniq), -1)
            corr = corr_u[inverse]
            failed |= judge_batch(side.model, e, corr) != 0
        return int(failed.sum())


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    code: str
    decoder: str
    noise: str
    p: float
    shots: int
    failures: int
    seconds: float

    def __post_init__(self) -> None:
        if not 0 <= self.failures <= self.shots:
            raise ValueError("failures must lie in [0, shots]")

    @property
    def rate(self) -> float:
        return self.failures / self.shots

    @property
    def stderr(self) -> float:
        r = self.rate
        return math.sqrt(r * (1 - r) / self.shots)

    @property
    def rule_of_three(self) -> Optional[float]:
        """95% upper bound ``3 / shots`` for rows without failures."""
        return 3.0 / self.shots if self.failures == 0 else None

    def interval(self, k: float = 2.0) -> Tuple[float, float]:
        return self.rate - k * self.stderr, self.rate + k * self.stderr

    def csv(self, timing: bool = True) -> str:
        secs = f"{self.seconds:.3f}" if timing else "0"
        code, noise = _csv_safe(self.code), _csv_safe(self.noise)
        return (f"{code},{self.decoder},{noise},{self.p:.6g},{self.shots},{self.failures},"
                f"{self.rate:.6e},{self.stderr:.6e},{secs}")

    def to_dict(self, timing: bool = True) -> dict:
        return {"code": self.code, "decoder": self.decoder, "noise": self.noise, "p": self.p, "shots": self.shots,
                "failures": self.failures, "rate": self.rate, "stderr": self.stderr,
                "seconds": round(self.seconds, 3) if timing else 0, "rule_of_three": self.rule_of_three}


def _csv_safe(text: str) -> str:
    return text.replace(",", ";")


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

@dataclass
class SweepConfig:
    code: object  # built code
    code_label: str
    noise: NoiseSpec
    decoder: str
    p_values: Sequence[float]
    shots: int
    seed: int
    options: Dict = field(default_factory=dict)
    workers: int = 1
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self) -> None:
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        for p in self.p_values:
            if not 0.0 <= float(p) <= 1.0:
                raise ValueError(f"p={p} outside [0, 1]")
        if self.chunk < 1 or self.workers < 1:
            raise ValueError("chunk and workers must be positive")


def _chunks(shots: int, chunk: int) -> List[int]:
    out = [chunk] * (shots // chunk)
    if shots % chunk:
        out.append(shots % chunk)
    return out


def _run_chunk(args) -> int:
    code, noise, decoder, p, options, seed, point, index, shots = args
    sp = _point_cache(code, noise, decoder, p, options)
    return sp.run(shots, make_rng(seed, point, index))


_CACHE: Dict[tuple, SweepPoint] = {}


def _point_cache(code, noise, decoder, p, options) -> SweepPoint:
    key = (id(code), noise, decoder, float(p), tuple(sorted((options or {}).items())))
    sp = _CACHE.get(key)
    if sp is None or sp.code is not code:
        _CACHE.clear()
        sp = SweepPoint(code, noise, decoder, p, options)
        _CACHE[key] = sp
    return sp


def run_sweep(cfg: SweepConfig) -> Iterator[SweepRow]:
    """Yield one row per p value.  Chunk ``c`` of point ``i`` always uses stream ``(seed, i, c)``."""
    pool = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for i, p in enumerate(cfg.p_values):
            t0 = time.perf_counter()
            SweepPoint(cfg.code, cfg.noise, cfg.decoder, p, cfg.options)  # validate before dispatching
            sizes = _chunks(cfg.shots, cfg.chunk)
            jobs = [(cfg.code, cfg.noise, cfg.decoder, float(p), cfg.options, cfg.seed, i, c, n)
                    for c, n in enumerate(sizes)]
            if pool is None:
                fails = sum(_run_chunk(j) for j in jobs)
            else:
                fails = sum(pool.map(_run_chunk, jobs))
            yield SweepRow(cfg.code_label, cfg.decoder, cfg.noise.label(), float(p), cfg.shots, fails,
                           time.perf_counter() - t0)
    finally:
        if pool is not None:
            pool.shutdown()


# ---------------------------------------------------------------------------
# Pauli-level convenience
# ---------------------------------------------------------------------------

class CodeCapacityDecoder:
    """Decode full Pauli syndromes of a code with a registered decoder.

    CSS codes are decoded side by side (X errors from the Z checks and Z
    errors from the X checks); other codes use one model with X, Y and Z
    mechanisms per qubit.
    """

    def __init__(self, code, decoder: str, p: float = 0.01, kind: str = "depolarizing",
                 options: Optional[Dict] = None):
        self.code = code
        self.point = SweepPoint(code, NoiseSpec(kind, p), decoder, p, options)
        self._gens = list(code.measured_checks)

    def decode(self, E_or_syndrome) -> PauliOperator:
        """Correction for the syndrome of ``E`` over every measured check."""
        Eop = E_or_syndrome
        n = self.code.n
        Cx = Cz = 0
        for side in self.point.sides:
            dm = side.model
            s = np.array([int(not self._gens[i].commutes(Eop)) for (i, _t) in dm.detector_labels], dtype=np.uint8)
            c = side.decoder.decode(s)
            for j in np.flatnonzero(c):
                lab = dm.mechanisms[j].label
                if lab[0] != "data":
                    continue
                q, ch = lab[2], lab[3]
                if ch in "XY":
                    Cx ^= 1 << q
                if ch in "ZY":
                    Cz ^= 1 << q
        return PauliOperator(n, Cx, Cz)
