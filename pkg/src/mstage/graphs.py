"""Weighted graphs and the combinatorial subroutines the solvers consume.

Everything here is deterministic: ties in greedy choices are broken by
vertex / edge index so that repeated runs produce identical structures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    Disconnected,
    InstanceTooLarge,
    OddDegreeVertex,
    OddSubset,
    SubsetDisconnected,
)

#: Entries in a tableau column smaller than this are treated as zero flow.
_FLOW_EPS = 1e-12

#: Tolerance for the triangle-inequality check.
METRIC_TOL = 1e-9

#: Exact matching uses a subset DP; beyond this many vertices it refuses
#: (use greedy mode there, which voids ratio certificates).
MATCHING_EXACT_LIMIT = 18


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on vertices 0..n-1.

    Parallel edges are allowed; self-loops and negative weights are not.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        for u, v, w in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) references vertex >= n={self.n}")
            if w < 0:
                raise ValueError(f"negative weight on edge ({u},{v})")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels length must equal n")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int, float]]) -> "Graph":
        return Graph(n=n, edges=tuple((u, v, float(w)) for u, v, w in edges))

    @staticmethod
    def complete_from_matrix(costs: Sequence[Sequence[float]]) -> "Graph":
        n = len(costs)
        edges = [(u, v, float(costs[u][v])) for u in range(n) for v in range(u + 1, n)]
        return Graph.from_edges(n, edges)

    def weight_lookup(self) -> dict[tuple[int, int], float]:
        """Minimum weight per unordered pair (parallel edges collapsed)."""
        out: dict[tuple[int, int], float] = {}
        for u, v, w in self.edges:
            key = (u, v) if u < v else (v, u)
            if key not in out or w < out[key]:
                out[key] = w
        return out


@dataclass(frozen=True)
class CutResult:
    value: float
    source_side: frozenset[int]


@dataclass(frozen=True)
class Tour:
    """Cyclic vertex sequence starting and ending at the depot.

    A single-vertex tour is represented as just [depot] with length 0.
    """

    vertices: tuple[int, ...]
    length: float

    @property
    def depot(self) -> int:
        return self.vertices[0]

    def visited(self) -> frozenset[int]:
        return frozenset(self.vertices)


class _Dinic:
    """Max flow on an undirected graph via BFS leveling + blocking flow."""

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[float] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_undirected(self, u: int, v: int, w: float) -> None:
        # Paired arcs act as each other's residual, which is exactly the
        # standard undirected-edge construction.
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(w)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(w)

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * self.n
        self.level[s] = 0
        queue = [s]
        for u in queue:
            for a in self.adj[u]:
                v = self.to[a]
                if self.cap[a] > _FLOW_EPS and self.level[v] < 0:
                    self.level[v] = self.level[u] + 1
                    queue.append(v)
        return self.level[t] >= 0

    def _dfs(self, u: int, t: int, pushed: float) -> float:
        if u == t:
            return pushed
        while self.it[u] < len(self.adj[u]):
            a = self.adj[u][self.it[u]]
            v = self.to[a]
            if self.cap[a] > _FLOW_EPS and self.level[v] == self.level[u] + 1:
                got = self._dfs(v, t, min(pushed, self.cap[a]))
                if got > _FLOW_EPS:
                    self.cap[a] -= got
                    self.cap[a ^ 1] += got
                    return got
            self.it[u] += 1
        return 0.0

    def max_flow(self, s: int, t: int) -> float:
        flow = 0.0
        while self._bfs(s, t):
            self.it = [0] * self.n
            while True:
                pushed = self._dfs(s, t, float("inf"))
                if pushed <= _FLOW_EPS:
                    break
                flow += pushed
        return flow

    def residual_side(self, s: int) -> frozenset[int]:
        seen = {s}
        queue = [s]
        for u in queue:
            for a in self.adj[u]:
                v = self.to[a]
                if self.cap[a] > _FLOW_EPS and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)


def min_st_cut(g: Graph, s: int, t: int) -> CutResult:
    """Minimum s-t cut; value equals max flow, side taken from the residual."""
    if s == t:
        raise ValueError("s and t must differ")
    dinic = _Dinic(g.n)
    for u, v, w in g.edges:
        if w > 0:
            dinic.add_undirected(u, v, w)
    value = dinic.max_flow(s, t)
    side = dinic.residual_side(s)
    return CutResult(value=value, source_side=side)


def cut_weight(g: Graph, source_side: frozenset[int]) -> float:
    """Total weight of edges crossing the partition."""
    return sum(w for u, v, w in g.edges if (u in source_side) != (v in source_side))


def minimum_spanning_tree(
    g: Graph, on: Iterable[int] | None = None
) -> list[tuple[int, int, float]]:
    """Prim's algorithm on the subgraph induced by `on` (defaults to all).

    Raises SubsetDisconnected when no spanning tree exists on the subset.
    """
    vertices = sorted(set(range(g.n) if on is None else on))
    if len(vertices) <= 1:
        return []
    wl = g.weight_lookup()
    in_tree = {vertices[0]}
    out: list[tuple[int, int, float]] = []
    rest = set(vertices[1:])
    while rest:
        best = None
        for u in sorted(in_tree):
            for v in sorted(rest):
                key = (u, v) if u < v else (v, u)
                if key in wl:
                    cand = (wl[key], u, v)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            raise SubsetDisconnected(f"no edge leaves the partial tree {sorted(in_tree)}")
        w, u, v = best
        out.append((min(u, v), max(u, v), w))
        in_tree.add(v)
        rest.discard(v)
    return out


def min_weight_perfect_matching(
    g: Graph, on: Iterable[int]
) -> list[tuple[int, int]]:
    """Minimum-weight perfect matching on an even-sized vertex subset.

    Exact via dynamic programming over subsets, which is affordable at the
    desk scale this package certifies (|subset| <= 18 enforced).  All
    pairs inside the subset must carry a weight.
    """
    verts = sorted(set(on))
    k = len(verts)
    if k % 2 != 0:
        raise OddSubset(f"subset has odd size {k}")
    if k == 0:
        return []
    if k > MATCHING_EXACT_LIMIT:
        raise InstanceTooLarge(
            f"exact matching limited to {MATCHING_EXACT_LIMIT} vertices, got {k}; "
            "use greedy mode for larger inputs"
        )
    wl = g.weight_lookup()

    def pair_w(i: int, j: int) -> float:
        u, v = verts[i], verts[j]
        key = (u, v) if u < v else (v, u)
        if key not in wl:
            raise SubsetDisconnected(f"missing edge between {u} and {v}")
        return wl[key]

    full = (1 << k) - 1
    best = {0: 0.0}
    choice: dict[int, tuple[int, int]] = {}
    for mask in range(1, full + 1):
        if bin(mask).count("1") % 2 != 0:
            continue
        i = (mask & -mask).bit_length() - 1
        best_cost = None
        best_j = -1
        rem = mask ^ (1 << i)
        j_bits = rem
        while j_bits:
            j = (j_bits & -j_bits).bit_length() - 1
            j_bits &= j_bits - 1
            sub = mask ^ (1 << i) ^ (1 << j)
            if sub in best:
                cand = best[sub] + pair_w(i, j)
                if best_cost is None or cand < best_cost:
                    best_cost = cand
                    best_j = j
        if best_cost is not None:
            best[mask] = best_cost
            choice[mask] = (i, best_j)
    pairs = []
    mask = full
    while mask:
        i, j = choice[mask]
        pairs.append((min(verts[i], verts[j]), max(verts[i], verts[j])))
        mask ^= (1 << i) | (1 << j)
    return sorted(pairs)


def greedy_perfect_matching(g: Graph, on: Iterable[int]) -> list[tuple[int, int]]:
    """Cheapest-edge-first matching; fast but voids ratio certificates."""
    verts = sorted(set(on))
    if len(verts) % 2 != 0:
        raise OddSubset(f"subset has odd size {len(verts)}")
    wl = g.weight_lookup()
    cands = []
    for u, v in itertools.combinations(verts, 2):
        key = (u, v)
        if key in wl:
            cands.append((wl[key], u, v))
    cands.sort()
    used: set[int] = set()
    pairs = []
    for w, u, v in cands:
        if u not in used and v not in used:
            pairs.append((u, v))
            used.update((u, v))
    if len(used) != len(verts):
        raise SubsetDisconnected("greedy matching could not pair every vertex")
    return sorted(pairs)


def eulerian_shortcut_tour(
    edges: Sequence[tuple[int, int]],
    depot: int,
    cost: Callable[[int, int], float],
) -> Tour:
    """Eulerian circuit of an even-degree multigraph, shortcut to a tour.

    The circuit starts at the depot; repeated vertices are then skipped,
    so the tour visits exactly the multigraph's vertices once each.  Under
    the triangle inequality the shortcut never lengthens the walk, hence
    length <= total multigraph weight.
    """
    if not edges:
        return Tour(vertices=(depot,), length=0.0)
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx, (u, v) in enumerate(edges):
        adj.setdefault(u, []).append((v, idx))
        adj.setdefault(v, []).append((u, idx))
    for v, nbrs in adj.items():
        if len(nbrs) % 2 != 0:
            raise OddDegreeVertex(f"vertex {v} has odd degree {len(nbrs)}")
    if depot not in adj:
        raise Disconnected(f"depot {depot} touches no multigraph edge")
    # Hierholzer with deterministic neighbor order.
    for nbrs in adj.values():
        nbrs.sort()
    used = [False] * len(edges)
    ptr = {v: 0 for v in adj}
    stack = [depot]
    circuit: list[int] = []
    while stack:
        u = stack[-1]
        nbrs = adj[u]
        while ptr[u] < len(nbrs) and used[nbrs[ptr[u]][1]]:
            ptr[u] += 1
        if ptr[u] == len(nbrs):
            circuit.append(stack.pop())
        else:
            v, idx = nbrs[ptr[u]]
            used[idx] = True
            stack.append(v)
    if not all(used):
        raise Disconnected("multigraph is not connected")
    circuit.reverse()
    seen: set[int] = set()
    order: list[int] = []
    for v in circuit:
        if v not in seen:
            seen.add(v)
            order.append(v)
    order.append(depot)
    length = sum(cost(a, b) for a, b in zip(order, order[1:]))
    return Tour(vertices=tuple(order), length=length)


def check_metric(costs: Sequence[Sequence[float]], tol: float = METRIC_TOL) -> bool:
    """True iff the matrix satisfies the triangle inequality within tol."""
    n = len(costs)
    for u in range(n):
        if abs(costs[u][u]) > tol:
            return False
        for v in range(n):
            if costs[u][v] < -tol or abs(costs[u][v] - costs[v][u]) > tol:
                return False
    for u in range(n):
        for v in range(n):
            cuv = costs[u][v]
            for w in range(n):
                if costs[u][w] > cuv + costs[v][w] + tol:
                    return False
    return True


def metric_closure(costs: Sequence[Sequence[float]]) -> list[list[float]]:
    """All-pairs shortest paths (Floyd-Warshall) of a cost matrix."""
    n = len(costs)
    d = [[float(costs[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            row = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < row[j]:
                    row[j] = alt
    return d
