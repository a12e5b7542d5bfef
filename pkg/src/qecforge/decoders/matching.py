"""Minimum-weight perfect matching on the detector graph, plus a subset-DP oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .common import Decoder, DecoderError
from .graph import DecodingGraph, build_decoding_graph

DP_LIMIT = 20
DP_FAST = 10  # below this size the DP beats the blossom set-up cost


class OddDefects(DecoderError):
    pass


@dataclass(frozen=True)
class Matching:
    pairs: Tuple[Tuple[int, Optional[int]], ...]  # (a, b) or (a, None) for the boundary
    weight: int  # integer-quantised total


def _distance_tables(g: DecodingGraph, defects: Sequence[int]):
    dist, _ = g.shortest_paths()
    idx = list(defects)
    D = dist[np.ix_(idx, idx)]
    B = dist[idx, g.boundary] if g.has_boundary else np.full(len(idx), np.inf)
    return D, B


def min_weight_pairing_dp(D: np.ndarray, B: np.ndarray) -> Tuple[float, List[Tuple[int, Optional[int]]]]:
    """Exact minimum over pairings of ``m`` items (each item may go to the boundary).

    ``D[i, j]`` is the pair cost and ``B[i]`` the boundary cost (``inf`` when
    unavailable).  Runs in ``O(2^m m)`` by always settling the lowest item.
    """
    m = len(B)
    if m > DP_LIMIT:
        raise ValueError(f"subset DP limited to {DP_LIMIT} items, got {m}")
    Dl = D.tolist()
    Bl = [float(b) for b in B]

    @lru_cache(maxsize=None)
    def f(mask: int) -> Tuple[float, tuple]:
        if mask == 0:
            return 0.0, ()
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        best = (np.inf, ())
        if Bl[i] < np.inf:
            c, pr = f(rest)
            if c + Bl[i] < best[0]:
                best = (c + Bl[i], ((i, None),) + pr)
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            r &= r - 1
            dij = Dl[i][j]
            if dij < np.inf:
                c, pr = f(rest & ~(1 << j))
                if c + dij < best[0]:
                    best = (c + dij, ((i, j),) + pr)
        return best

    cost, pairs = f((1 << m) - 1)
    f.cache_clear()
    return cost, list(pairs)


def _blossom(D: np.ndarray, B: np.ndarray, has_boundary: bool) -> List[Tuple[int, Optional[int]]]:
    """Exact pairing through networkx's blossom matcher.

    Each defect ``i`` gets a private boundary copy ``m + i``; the copies are
    joined to each other at zero cost so unused ones pair among themselves.
    """
    m = len(B)
    G = nx.Graph()
    finite = D[np.isfinite(D)]
    big = float((finite.sum() if finite.size else 0.0) + (B[np.isfinite(B)].sum() if has_boundary else 0.0) + 1.0)
    for i in range(m):
        for j in range(i + 1, m):
            if np.isfinite(D[i, j]):
                G.add_edge(i, j, weight=big - float(D[i, j]))
    if has_boundary:
        for i in range(m):
            if np.isfinite(B[i]):
                G.add_edge(i, m + i, weight=big - float(B[i]))
        for i in range(m):
            for j in range(i + 1, m):
                G.add_edge(m + i, m + j, weight=big)
    M = nx.max_weight_matching(G, maxcardinality=True)
    pairs = []
    matched = set()
    for a, b in M:
        a, b = min(a, b), max(a, b)
        matched.update((a, b))
        if b < m:
            pairs.append((a, b))
        elif a < m:
            pairs.append((a, None))
    if any(i not in matched for i in range(m)):
        raise OddDefects("no perfect matching of the defects exists")
    return sorted(pairs, key=lambda t: t[0])


def _greedy(D: np.ndarray, B: np.ndarray) -> List[Tuple[int, Optional[int]]]:
    m = len(B)
    cand = [(float(D[i, j]), i, j) for i in range(m) for j in range(i + 1, m) if np.isfinite(D[i, j])]
    cand += [(float(B[i]), i, None) for i in range(m) if np.isfinite(B[i])]
    cand.sort(key=lambda t: (t[0], t[1], -1 if t[2] is None else t[2]))
    used, pairs = set(), []
    for c, i, j in cand:
        if i in used or (j is not None and j in used):
            continue
        used.add(i)
        if j is not None:
            used.add(j)
        pairs.append((i, j))
    if len(used) != m:
        raise OddDefects("greedy pairing left defects unmatched")
    return pairs


def match_defects(g: DecodingGraph, defects: Sequence[int], exact: bool = True,
                  method: str = "auto") -> Matching:
    defects = list(defects)
    m = len(defects)
    if m == 0:
        return Matching((), 0)
    if m % 2 and not g.has_boundary:
        raise OddDefects(f"{m} defects and no boundary to absorb the odd one")
    D, B = _distance_tables(g, defects)
    if not exact:
        local = _greedy(D, B)
    elif method == "dp" or (method == "auto" and m <= DP_FAST):
        cost, local = min_weight_pairing_dp(D, B)
        if not np.isfinite(cost):
            raise OddDefects("defects cannot be paired within their components")
    else:
        local = _blossom(D, B, g.has_boundary)
    weight = 0
    pairs = []
    for i, j in local:
        weight += int(B[i]) if j is None else int(D[i, j])
        pairs.append((defects[i], None if j is None else defects[j]))
    return Matching(tuple(pairs), weight)


def mwpm_decode(g: DecodingGraph, defects, exact: bool = True, method: str = "auto") -> np.ndarray:
    """Correction (mechanism indicator) from a minimum-weight pairing of ``defects``.

    ``defects`` lists the detector indices that fired.
    """
    defects = [int(x) for x in defects]
    M = match_defects(g, defects, exact, method)
    edges = []
    for a, b in M.pairs:
        edges.extend(g.path_edges(a, g.boundary if b is None else b))
    return g.correction(edges)


class MwpmDecoder(Decoder):
    name = "mwpm"

    def __init__(self, model, options=None, code=None):
        super().__init__(model, options, code)
        self.graph = build_decoding_graph(model)
        self.exact = bool(self.options.get("exact_matching", True))
        self.graph.shortest_paths()

    def _decode(self, s):
        return mwpm_decode(self.graph, [int(i) for i in np.flatnonzero(s)], self.exact)
