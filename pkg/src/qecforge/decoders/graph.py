"""Decoding graphs: detectors as nodes, graph-like fault mechanisms as edges."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..noise import PauliChannel, code_capacity_model, independent_xz

WEIGHT_SCALE = 10 ** 6


class NotGraphLike(ValueError):
    """A mechanism flips more than two detectors."""

    def __init__(self, mechanism: int, n_detectors: int):
        super().__init__(f"mechanism {mechanism} flips {n_detectors} detectors; matching needs at most 2")
        self.mechanism = mechanism
        self.n_detectors = n_detectors


@dataclass(frozen=True)
class Edge:
    u: int
    v: int  # may be the boundary node
    weight: float
    mechanism: int
    logical_mask: int
    probability: float


@dataclass
class DecodingGraph:
    n_detectors: int
    edges: List[Edge]
    has_boundary: bool
    n_mechanisms: int
    _apsp: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    @property
    def boundary(self) -> Optional[int]:
        return self.n_detectors if self.has_boundary else None

    @property
    def n_nodes(self) -> int:
        return self.n_detectors + (1 if self.has_boundary else 0)

    def edge_between(self, u: int, v: int) -> Optional[Edge]:
        return self._lookup().get((min(u, v), max(u, v)))

    def _lookup(self) -> Dict[Tuple[int, int], Edge]:
        if not hasattr(self, "_edge_map"):
            self._edge_map = {(min(e.u, e.v), max(e.u, e.v)): e for e in self.edges}
        return self._edge_map

    def neighbours(self) -> List[List[Tuple[int, Edge]]]:
        adj: List[List[Tuple[int, Edge]]] = [[] for _ in range(self.n_nodes)]
        for e in self.edges:
            adj[e.u].append((e.v, e))
            adj[e.v].append((e.u, e))
        return adj

    def integer_weights(self) -> np.ndarray:
        """Edge weights quantised to positive integers (exact path sums)."""
        w = np.array([e.weight for e in self.edges], dtype=float)
        return np.maximum(1, np.rint(w * WEIGHT_SCALE)).astype(np.int64)

    def shortest_paths(self) -> Tuple[np.ndarray, np.ndarray]:
        """All-pairs distances (integer weights, float array) and predecessors."""
        if self._apsp is None:
            N = self.n_nodes
            w = self.integer_weights()
            rows = [e.u for e in self.edges] + [e.v for e in self.edges]
            cols = [e.v for e in self.edges] + [e.u for e in self.edges]
            A = csr_matrix((np.concatenate([w, w]).astype(float), (rows, cols)), shape=(N, N))
            dist, pred = dijkstra(A, directed=False, return_predecessors=True)
            self._apsp = (dist, pred)
        return self._apsp

    def path_edges(self, a: int, b: int) -> List[Edge]:
        dist, pred = self.shortest_paths()
        if not np.isfinite(dist[a, b]):
            raise ValueError(f"nodes {a} and {b} are disconnected")
        out = []
        cur = b
        while cur != a:
            prev = int(pred[a, cur])
            out.append(self.edge_between(prev, cur))
            cur = prev
        return out

    def correction(self, edges) -> np.ndarray:
        e = np.zeros(self.n_mechanisms, dtype=np.uint8)
        for ed in edges:
            e[ed.mechanism] ^= 1
        return e


def build_decoding_graph(source, side: Optional[str] = None, p: float = 0.01,
                         channel: Optional[PauliChannel] = None) -> DecodingGraph:
    """Graph from a detector model, or from one side of a CSS code.

    With a code, ``side="X"`` decodes X errors on the Z checks (and ``"Z"``
    the reverse) under code-capacity noise of strength ``p``.  Mechanisms
    touching one detector attach to a single shared boundary node.  When two
    mechanisms join the same pair of nodes only the more likely one is kept.
    """
    if hasattr(source, "stabilizers"):
        if side not in ("X", "Z"):
            raise ValueError("pick side='X' or side='Z' for a code")
        source = code_capacity_model(source, channel or independent_xz(p), side=side)
    model = source
    priors = model.priors()
    boundary_needed = False
    for j, mech in enumerate(model.mechanisms):
        if len(mech.detectors) > 2:
            raise NotGraphLike(j, len(mech.detectors))
        if len(mech.detectors) == 1:
            boundary_needed = True
    D = model.n_detectors
    best: Dict[Tuple[int, int], Edge] = {}
    for j, mech in enumerate(model.mechanisms):
        if not mech.detectors:
            continue
        p_j = float(priors[j])
        if not 0.0 < p_j < 1.0:
            continue
        u = mech.detectors[0]
        v = mech.detectors[1] if len(mech.detectors) == 2 else D
        w = float(np.log((1 - p_j) / p_j))
        key = (min(u, v), max(u, v))
        cur = best.get(key)
        if cur is None or w < cur.weight:
            best[key] = Edge(key[0], key[1], w, j, mech.logical_mask, p_j)
    return DecodingGraph(D, list(best.values()), boundary_needed, model.n_mechanisms)
