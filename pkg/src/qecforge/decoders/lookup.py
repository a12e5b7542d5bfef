"""Syndrome lookup tables built from all low-weight errors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Optional

import numpy as np

from ..pauli import PauliOperator
from ..stabilizer import all_paulis_up_to_weight, distance_bruteforce
from .common import Decoder, bits_to_int, column_ints, llr_weights, particular_solution, solve_columns


@dataclass(frozen=True)
class LookupResult:
    correction: PauliOperator
    flagged: bool  # True when the syndrome was not in the table


def _correctable_weight(code) -> int:
    d = code.known_distance
    if d is None:
        res = distance_bruteforce(code, w_max=4)
        d = res.d
    return max(0, (d - 1) // 2)


class LookupTable:
    """Maps syndromes of every Pauli of weight at most ``t`` to that Pauli.

    Errors are inserted in order of increasing weight, so for degenerate
    codes the first (lowest weight, then enumeration order) representative
    wins.  Syndromes beyond the table fall back to a consistent correction
    found by linear algebra and are flagged.
    """

    def __init__(self, code, t: Optional[int] = None):
        self.code = code
        self.t = _correctable_weight(code) if t is None else int(t)
        self.table: Dict[int, PauliOperator] = {0: PauliOperator.identity(code.n)}
        for E in all_paulis_up_to_weight(code.n, self.t):
            self.table.setdefault(code.syndrome_int(E), E)

    def __len__(self) -> int:
        return len(self.table)

    def decode(self, s) -> LookupResult:
        key = bits_to_int(s) if not isinstance(s, (int, np.integer)) else int(s)
        hit = self.table.get(key)
        if hit is not None:
            return LookupResult(hit, False)
        return LookupResult(consistent_correction(self.code, key), True)


def consistent_correction(code, s: int) -> PauliOperator:
    """Some Pauli with syndrome ``s`` (pure error from the check matrix)."""
    n = code.n
    cols = []
    for q in range(n):
        cols.append(code.syndrome_int(PauliOperator(n, 1 << q, 0)))
    for q in range(n):
        cols.append(code.syndrome_int(PauliOperator(n, 0, 1 << q)))
    J = solve_columns(cols, s)
    if J is None:
        raise ValueError("syndrome is not produced by any Pauli")
    x = sum(1 << j for j in J if j < n)
    z = sum(1 << (j - n) for j in J if j >= n)
    return PauliOperator(n, x, z)


_TABLES: Dict[int, LookupTable] = {}


def lookup_decode(code, s) -> LookupResult:
    """Table decoder for ``code`` (tables are cached per code object)."""
    tab = _TABLES.get(id(code))
    if tab is None or tab.code is not code:
        tab = LookupTable(code)
        _TABLES[id(code)] = tab
    return tab.decode(s)


class LookupDecoder(Decoder):
    """Lookup over fault mechanisms of a detector model.

    Every combination of at most ``t`` mechanisms is tabulated, keeping the
    most probable one per syndrome; ``t`` comes from the code distance (or
    the ``max_weight`` option).
    """

    name = "lookup"

    def __init__(self, model, options=None, code=None):
        super().__init__(model, options, code)
        t = self.options.get("max_weight")
        if t is None:
            t = _correctable_weight(code) if code is not None else 1
        self.t = int(t)
        cols = column_ints(self.H)
        self._cols = cols
        cost = llr_weights(self.priors)
        best: Dict[int, tuple] = {0: (0.0, ())}
        N = len(cols)
        for w in range(1, self.t + 1):
            for J in combinations(range(N), w):
                s = 0
                for j in J:
                    s ^= cols[j]
                c = float(sum(cost[j] for j in J))
                cur = best.get(s)
                if cur is None or c < cur[0] - 1e-12:
                    best[s] = (c, J)
        self.table = {s: J for s, (c, J) in best.items()}

    def _decode(self, s):
        e = np.zeros(self.H.shape[1], dtype=np.uint8)
        J = self.table.get(bits_to_int(s))
        if J is None:
            self.flagged += 1
            return particular_solution(self.H, s)
        e[list(J)] = 1
        return e
