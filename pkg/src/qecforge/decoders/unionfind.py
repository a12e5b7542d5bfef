"""Union-Find decoder: grow odd clusters by half-edges, then peel a spanning forest."""

from __future__ import annotations

from collections import deque
from typing import Dict, List

import numpy as np

from .common import Decoder
from .graph import DecodingGraph, Edge, build_decoding_graph


class _Clusters:
    """Disjoint sets over graph nodes with defect parity and boundary flag at the roots."""

    def __init__(self, n_nodes: int, boundary):
        self.parent = list(range(n_nodes))
        self.size = [1] * n_nodes
        self.parity = [0] * n_nodes
        self.touches_boundary = [False] * n_nodes
        if boundary is not None:
            self.touches_boundary[boundary] = True

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.parity[ra] ^= self.parity[rb]
        self.touches_boundary[ra] = self.touches_boundary[ra] or self.touches_boundary[rb]
        return ra

    def is_odd(self, root: int) -> bool:
        return bool(self.parity[root]) and not self.touches_boundary[root]


def unionfind_decode(g: DecodingGraph, defects) -> np.ndarray:
    """Correction (mechanism indicator) whose syndrome equals ``defects``.

    Growth: every odd cluster (odd defect count, no boundary) adds half an
    edge to each edge leaving it, clusters taken in FIFO order within a
    round; a fully grown edge fuses its endpoints.  Peeling: each cluster's
    grown edges are reduced to a BFS spanning tree (rooted at the boundary
    when the cluster reaches it) and processed leaves first.
    """
    defects = sorted({int(d) for d in defects})
    if not defects:
        return np.zeros(g.n_mechanisms, dtype=np.uint8)
    adj = g.neighbours()
    N = g.n_nodes
    uf = _Clusters(N, g.boundary)
    for d in defects:
        uf.parity[d] ^= 1
    members: Dict[int, List[int]] = {v: [v] for v in range(N)}
    support: Dict[int, int] = {}  # id(edge) -> 0/1/2 half-edges
    edge_of: Dict[int, Edge] = {}
    grown: List[Edge] = []

    queue = deque(d for d in defects)
    while True:
        odd = []
        seen = set()
        for d in queue:
            r = uf.find(d)
            if r not in seen and uf.is_odd(r):
                seen.add(r)
                odd.append(r)
        if not odd:
            break
        fuse: List[Edge] = []
        for r in odd:
            for v in members[r]:
                for w, e in adj[v]:
                    key = id(e)
                    s = support.get(key, 0)
                    if s >= 2:
                        continue
                    s += 1
                    support[key] = s
                    edge_of[key] = e
                    if s == 2:
                        fuse.append(e)
        if not fuse and all(support.get(id(e), 0) >= 2 for r in odd for v in members[r] for _, e in adj[v]):
            raise RuntimeError("odd cluster cannot grow further (disconnected component without boundary)")
        for e in fuse:
            grown.append(e)
            ra, rb = uf.find(e.u), uf.find(e.v)
            if ra != rb:
                root = uf.union(ra, rb)
                other = rb if root == ra else ra
                members[root].extend(members.pop(other))
        queue = deque(uf.find(r) for r in odd)

    return _peel(g, grown, set(defects))


def _peel(g: DecodingGraph, grown: List[Edge], defects: set) -> np.ndarray:
    adj: Dict[int, List] = {}
    for e in grown:
        adj.setdefault(e.u, []).append((e.v, e))
        adj.setdefault(e.v, []).append((e.u, e))
    visited = set()
    order = []  # (child, parent, edge) in BFS order
    roots = []
    if g.has_boundary and g.boundary in adj:
        roots.append(g.boundary)
    roots += sorted(v for v in adj if v != g.boundary)
    for root in roots:
        if root in visited:
            continue
        visited.add(root)
        dq = deque([root])
        while dq:
            u = dq.popleft()
            for w, e in adj[u]:
                if w not in visited:
                    visited.add(w)
                    order.append((w, u, e))
                    dq.append(w)
    marked = set(defects)
    corr = np.zeros(g.n_mechanisms, dtype=np.uint8)
    for child, parent, e in reversed(order):
        if child in marked:
            corr[e.mechanism] ^= 1
            marked.discard(child)
            if parent != g.boundary:
                marked ^= {parent}
    leftover = {v for v in marked if v != g.boundary}
    if leftover:
        raise RuntimeError(f"peeling left unmatched defects {sorted(leftover)}")
    return corr


class UnionFindDecoder(Decoder):
    name = "unionfind"

    def __init__(self, model, options=None, code=None):
        super().__init__(model, options, code)
        self.graph = build_decoding_graph(model)

    def _decode(self, s):
        return unionfind_decode(self.graph, np.flatnonzero(s))
