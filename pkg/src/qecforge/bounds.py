"""Code-parameter bounds, weight enumerators and fault-tolerance threshold calculators.

Bound checks use Python integers throughout so that saturation is an exact
equality.  Threshold and qLDPC expressions are evaluated with mpmath so that
tiny logical error rates (1e-100 and below) stay representable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple

import mpmath
import networkx as nx
import numpy as np
from scipy.optimize import bisect

from .stabilizer import InstanceTooLarge

mpmath.mp.dps = 50


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

class Status(str, enum.Enum):
    SATISFIED = "satisfied"
    SATURATED = "saturated"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: object
    rhs: object
    status: Status
    note: str = ""

    def __post_init__(self) -> None:
        if self.status is Status.SATURATED and self.lhs != self.rhs:
            raise ValueError("a saturated bound needs lhs == rhs exactly")

    def row(self) -> Tuple[str, str, str, str]:
        return (self.name, str(self.lhs), str(self.rhs), self.status.value)

    def to_dict(self) -> dict:
        def conv(v):
            return v if isinstance(v, (int, float, str)) or v is None else str(v)

        return {"bound": self.name, "lhs": conv(self.lhs), "rhs": conv(self.rhs), "status": self.status.value,
                "note": self.note}


def _compare(name: str, lhs: int, rhs: int, note: str = "") -> BoundReport:
    """``lhs <= rhs`` style check."""
    if lhs == rhs:
        st = Status.SATURATED
    elif lhs < rhs:
        st = Status.SATISFIED
    else:
        st = Status.VIOLATED
    return BoundReport(name, lhs, rhs, st, note)


def _check_params(n: int, k: int, d: int) -> None:
    if n < 1 or k < 0 or k > n or d < 1:
        raise ValueError(f"invalid parameters (n={n}, k={k}, d={d})")


def hamming_check(n: int, k: int, d: int) -> BoundReport:
    """``2^k sum_{j<=t} C(n,j) 3^j <= 2^n`` with ``t = floor((d-1)/2)``.

    Informational only: degenerate codes are not known to obey it.
    """
    _check_params(n, k, d)
    t = (d - 1) // 2
    lhs = (1 << k) * sum(comb(n, j) * 3 ** j for j in range(t + 1))
    return _compare("hamming", lhs, 1 << n, "perfect code" if lhs == 1 << n else "")


def singleton_check(n: int, k: int, d: int) -> BoundReport:
    """``n - k >= 2 (d - 1)``; saturation means the code is MDS."""
    _check_params(n, k, d)
    if k == 0:
        return BoundReport("singleton", n - k, 2 * (d - 1), Status.NOT_APPLICABLE, "k = 0")
    rhs, lhs = 2 * (d - 1), n - k
    if lhs == rhs:
        return BoundReport("singleton", lhs, rhs, Status.SATURATED, "MDS")
    return BoundReport("singleton", lhs, rhs, Status.SATISFIED if lhs > rhs else Status.VIOLATED)


def gv_check(n: int, k: int, d: int) -> BoundReport:
    """``sum_{j<d} C(n,j) 3^j <= 2^(n-k)``: when true some [[n,k,d]] code exists.

    ``violated`` only means this sufficient condition gives no guarantee.
    """
    _check_params(n, k, d)
    lhs = sum(comb(n, j) * 3 ** j for j in range(d))
    rep = _compare("gilbert-varshamov", lhs, 1 << (n - k))
    note = "existence guaranteed" if rep.status is not Status.VIOLATED else "existence not guaranteed by this bound"
    return BoundReport(rep.name, rep.lhs, rep.rhs, rep.status, note)


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def gv_asymptotic_rate(delta: float) -> float:
    """Achievable rate ``1 - H(delta) - delta log2 3`` at relative distance ``delta``."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    return 1.0 - binary_entropy(delta) - delta * math.log2(3)


def gv_rate_root(tol: float = 1e-6) -> float:
    """Relative distance where the asymptotic rate reaches zero (bisection)."""
    return float(bisect(gv_asymptotic_rate, 1e-9, 0.5, xtol=tol))


def bpt_diagnostic(n: int, k: int, d: int, D: int) -> float:
    """``k d^{2/(D-1)} / n`` for a local code in ``D`` dimensions."""
    if D < 2:
        raise ValueError("D must be >= 2")
    return k * d ** (2.0 / (D - 1)) / n


def bpt_trend(points: Sequence[Tuple[int, int, int]], D: int, growth: float = 1.5) -> Tuple[List[float], bool]:
    """Ratios along a size sweep and a flag when the last exceeds the first by ``growth``."""
    ratios = [bpt_diagnostic(n, k, d, D) for n, k, d in points]
    return ratios, bool(ratios and ratios[-1] > growth * ratios[0])


# ---------------------------------------------------------------------------
# weight enumerators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightEnumerators:
    A: Tuple[int, ...]
    B: Tuple[int, ...]
    n: int
    k: int

    @property
    def K(self) -> int:
        return 1 << self.k

    def constraints_hold(self, d: Optional[int] = None) -> bool:
        ok = self.A[0] == 1 and self.B[0] == 1
        ok &= all(0 <= a <= b for a, b in zip(self.A, self.B))
        if d is not None:
            ok &= all(self.A[j] == self.B[j] for j in range(1, min(d, self.n + 1)))
        return bool(ok)

    def min_distance(self) -> Optional[int]:
        """Smallest ``j`` with ``B_j > A_j`` (None when every normalizer element is in S)."""
        for j in range(1, self.n + 1):
            if self.B[j] > self.A[j]:
                return j
        return None


def _span_weights(vecs: Sequence[int], n: int, limit: int) -> np.ndarray:
    """Weight histogram of the GF(2) span of symplectic vectors (packed ``x | z << n``)."""
    r = len(vecs)
    if r > limit:
        raise InstanceTooLarge(f"enumerating 2^{r} group elements exceeds 2^{limit}")
    mask = (1 << n) - 1
    elems = np.zeros(1, dtype=np.int64)
    for v in vecs:
        elems = np.concatenate([elems, elems ^ np.int64(v)])
    support = (elems & mask) | (elems >> n)
    w = np.bitwise_count(support.astype(np.uint64)).astype(np.int64)
    return np.bincount(w, minlength=n + 1)


def weight_enumerators(code, limit: int = 24) -> WeightEnumerators:
    """``A_j`` over the stabilizer group and ``B_j`` over its centralizer.

    The centralizer is the union of cosets ``S L`` over logical
    representatives ``L``, so it is the span of the generators and the 2k
    logical operators.
    """
    n = code.n
    gens = [g.vec for g in code.stabilizers]
    logs = [L.vec for L in tuple(code.logical_x) + tuple(code.logical_z)]
    if 2 * n > 62:
        raise InstanceTooLarge("packed enumeration supports n <= 31")
    A = _span_weights(gens, n, limit)
    B = _span_weights(gens + logs, n, limit)
    return WeightEnumerators(tuple(int(a) for a in A), tuple(int(b) for b in B), n, code.k)


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_pow(a: List[int], e: int) -> List[int]:
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, a)
    return out


def macwilliams_check(W: WeightEnumerators, n: Optional[int] = None, k: Optional[int] = None) -> bool:
    """Exact check of ``2^n B(y) = 2^k sum_j A_j (1-y)^j (1+3y)^(n-j)`` over the integers."""
    n = W.n if n is None else n
    k = W.k if k is None else k
    rhs = [0] * (n + 1)
    for j, a in enumerate(W.A):
        if not a:
            continue
        term = _poly_mul(_poly_pow([1, -1], j), _poly_pow([1, 3], n - j))
        for i, c in enumerate(term):
            rhs[i] += a * c
    rhs = [(1 << k) * c for c in rhs]
    lhs = [(1 << n) * b for b in W.B]
    lhs += [0] * (len(rhs) - len(lhs))
    return lhs == rhs


# ---------------------------------------------------------------------------
# concatenated threshold recursion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdParams:
    A: float  # bound on the number of malignant fault sets
    t: int  # correctable weight
    p: float

    def __post_init__(self) -> None:
        if not self.A > 0:
            raise ValueError("A must be positive")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.t < 1:
            raise ValueError("t must be >= 1")

    @property
    def threshold(self) -> mpmath.mpf:
        """``A^{-1/t}`` (``1/A`` when ``t = 1``)."""
        return mpmath.mpf(self.A) ** (-mpmath.mpf(1) / self.t)

    @property
    def lam(self) -> mpmath.mpf:
        """``A^{1/t} p``; equals ``A p`` for ``t = 1``."""
        return mpmath.mpf(self.A) ** (mpmath.mpf(1) / self.t) * mpmath.mpf(self.p)


@dataclass(frozen=True)
class RecursionResult:
    levels: Tuple[mpmath.mpf, ...]  # p_L^(0) .. p_L^(levels) by iteration
    closed_form: Tuple[mpmath.mpf, ...]
    lam: mpmath.mpf
    threshold: mpmath.mpf
    diverged: bool  # lambda >= 1: concatenation does not help


def threshold_recursion(params: ThresholdParams, levels: int) -> RecursionResult:
    """Iterate ``p^(l+1) = A (p^(l))^(t+1)`` next to ``A^{-1/t} lambda^{(t+1)^l}``."""
    if levels < 0:
        raise ValueError("levels must be >= 0")
    A = mpmath.mpf(params.A)
    seq = [mpmath.mpf(params.p)]
    for _ in range(levels):
        seq.append(A * seq[-1] ** (params.t + 1))
    lam = params.lam
    closed = tuple(params.threshold * lam ** ((params.t + 1) ** l) for l in range(levels + 1))
    return RecursionResult(tuple(seq), closed, lam, params.threshold, bool(lam >= 1))


def required_levels(N: float, eps: float, params: ThresholdParams, max_levels: int = 64) -> Optional[int]:
    """Smallest ``l`` with ``N p_L^(l) <= eps``; None when below-threshold operation is impossible."""
    res = threshold_recursion(params, max_levels)
    for l, v in enumerate(res.levels):
        if mpmath.mpf(N) * v <= eps:
            return l
    return None


def overhead(n_code: int, levels: int) -> int:
    """Physical qubits per logical qubit after ``levels`` rounds of concatenation."""
    return int(n_code) ** int(levels)


# ---------------------------------------------------------------------------
# qLDPC thresholds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundValue:
    value: mpmath.mpf
    diverged: bool

    def __float__(self) -> float:
        return float(self.value)


E = mpmath.e


def qldpc_threshold(r: int, c: int) -> mpmath.mpf:
    """``p_0 = (2 (r-1) c e)^{-2}`` for checks of weight <= r and qubit degree <= c."""
    if r < 2 or c < 1:
        raise ValueError("need r >= 2 and c >= 1")
    return (2 * (r - 1) * c * E) ** -2


def qldpc_logical_bound(n: int, d: int, p: float, r: int, c: int) -> BoundValue:
    """``n / (alpha (1 - 2 alpha sqrt p)) (p / p_0)^{d/2}`` with ``alpha = (r-1) c e``."""
    alpha = (r - 1) * c * E
    p = mpmath.mpf(p)
    p0 = qldpc_threshold(r, c)
    if p >= p0:
        return BoundValue(mpmath.inf, True)
    return BoundValue(n / (alpha * (1 - 2 * alpha * mpmath.sqrt(p))) * (p / p0) ** (mpmath.mpf(d) / 2), False)


@dataclass(frozen=True)
class NoisyBounds:
    type1: BoundValue
    type2: BoundValue
    type3: BoundValue
    type4: BoundValue
    p_i: mpmath.mpf
    p_f: mpmath.mpf
    T: int

    def as_list(self) -> List[BoundValue]:
        return [self.type1, self.type2, self.type3, self.type4]


def qldpc_noisy_bounds(n: int, d: int, z: int, p1: float, p2: Optional[float] = None,
                       T: Optional[int] = None) -> NoisyBounds:
    """The four logical-error bounds for ``T`` noisy syndrome rounds (default ``T = d``).

    ``p1 = max(p, q)`` and ``p2 = max(p_initial, p, q)`` (default ``p1``);
    ``z`` bounds the degree of the syndrome adjacency graph.  Each bound
    carries a divergence flag when its geometric series does not converge.
    """
    T = d if T is None else int(T)
    p2 = p1 if p2 is None else p2
    a, b = mpmath.mpf(p1), mpmath.mpf(p2)
    ze = z * E
    p_i = (2 * ze) ** -2
    p_f = (2 * ze) ** -4

    def geo(x, root):
        g = 2 * ze * x ** (mpmath.mpf(1) / root)
        return g, g >= 1

    def make(pref, x, root, tail):
        if x == 0:
            return BoundValue(mpmath.mpf(0), False)
        g, bad = geo(x, root)
        if bad:
            return BoundValue(mpmath.inf, True)
        return BoundValue(pref / (ze * (1 - g)) * tail, False)

    t1 = make(n * T, a, 2, (a / p_i) ** (mpmath.mpf(d) / 2))
    t2 = make(n, a, 4, (a / p_f) ** (mpmath.mpf(d) / 4))
    t3 = make(n, b, 2, (b / p_i) ** (mpmath.mpf(d) / 2))
    t4 = make(n, b, 4, (b / p_f) ** (mpmath.mpf(1) / 4) * (b / p_f) ** (mpmath.mpf(T) / 2))
    return NoisyBounds(t1, t2, t3, t4, p_i, p_f, T)


# ---------------------------------------------------------------------------
# magic state distillation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MsdYield:
    accept: object
    bad_accept: object
    output_error: object

    @property
    def reject(self):
        return 1 - self.accept


def msd_yield(p) -> MsdYield:
    """Ten-to-two distillation: acceptance, accepted-bad bound and output-error bound.

    Works for floats, ``Fraction`` (exact) and mpmath numbers.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    one = type(p)(1) if isinstance(p, (Fraction, mpmath.mpf)) else 1.0
    q = one - p
    multi = sum(comb(10, k) * p ** k * q ** (10 - k) for k in range(2, 11))
    accept = q ** 10 + multi
    out = multi / accept if accept else one
    return MsdYield(accept, multi, out)


# ---------------------------------------------------------------------------
# adjacency and local-stochastic helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdjacencyStats:
    max_degree: int
    r: int  # largest check weight
    c: int  # largest number of checks on one qubit
    graph: nx.Graph = field(compare=False, repr=False)

    @property
    def degree_bound(self) -> int:
        return (self.r - 1) * self.c

    @property
    def bound_holds(self) -> bool:
        return self.max_degree <= self.degree_bound


def code_adjacency_stats(code) -> AdjacencyStats:
    """Qubits joined when some check acts on both; degree bound ``(r-1) c``.

    Stabilizer codes use their measured checks, subsystem codes their gauge generators.
    """
    checks = list(getattr(code, "measured_checks", None) or getattr(code, "gauge_generators", code.stabilizers))
    G = nx.Graph()
    G.add_nodes_from(range(code.n))
    per_qubit = [0] * code.n
    r = 0
    for g in checks:
        supp = g.support
        r = max(r, len(supp))
        for q in supp:
            per_qubit[q] += 1
        for i, a in enumerate(supp):
            for b in supp[i + 1:]:
                G.add_edge(a, b)
    max_deg = max((deg for _, deg in G.degree), default=0)
    return AdjacencyStats(max_deg, r, max(per_qubit, default=0), G)


def local_stochastic_prob(p, s: int):
    """Probability bound ``p^s`` for faults on a given set of ``s`` locations."""
    return p ** s


def cluster_count_bound(z: int, s: int, N: int):
    """Connected clusters of size ``s`` in an ``N``-vertex graph of degree <= z: ``N (z e)^{s-1}``."""
    if s < 1:
        raise ValueError("cluster size must be >= 1")
    return N * (z * E) ** (s - 1)


def code_bound_reports(n: int, k: int, d: int) -> List[BoundReport]:
    return [hamming_check(n, k, d), singleton_check(n, k, d), gv_check(n, k, d)]


__all__ = [
    "AdjacencyStats",
    "BoundReport",
    "BoundValue",
    "MsdYield",
    "NoisyBounds",
    "RecursionResult",
    "Status",
    "ThresholdParams",
    "WeightEnumerators",
    "binary_entropy",
    "bpt_diagnostic",
    "bpt_trend",
    "cluster_count_bound",
    "code_adjacency_stats",
    "code_bound_reports",
    "gv_asymptotic_rate",
    "gv_check",
    "gv_rate_root",
    "hamming_check",
    "local_stochastic_prob",
    "macwilliams_check",
    "msd_yield",
    "overhead",
    "qldpc_logical_bound",
    "qldpc_noisy_bounds",
    "qldpc_threshold",
    "required_levels",
    "singleton_check",
    "threshold_recursion",
    "weight_enumerators",
]
