"""Deterministic random instance generation (desk-scale corpora).

Every instance is a pure function of (problem, n, T, seed, volatility).
Metric problems are built from random planar points with per-step jitter
scaled by volatility, so the triangle inequality holds by construction;
volatility 0 yields identical steps.  Sizes are capped at the brute-force
guards so every generated instance is oracle-comparable.
"""

from __future__ import annotations

import math
import random

from .errors import InstanceTooLarge
from .mincut import MsCutInstance
from .pcst import MsPcstInstance
from .pctsp import MsPctspInstance
from .setcover import MsScInstance
from .vertexcover import MsVcInstance

MAX_N = 7
MAX_T = 4


def _rng(problem: str, n: int, T: int, seed: int) -> random.Random:
    return random.Random(f"{problem}/n{n}/T{T}/seed{seed}")


def _meta(n: int, T: int, seed: int, volatility: float) -> dict:
    return {"seed": seed, "generator": {"n": n, "T": T, "volatility": volatility}}


def _instance_id(problem: str, n: int, T: int, seed: int) -> str:
    return f"{problem}-n{n}-T{T}-s{seed}"


def _guard(problem: str, n: int, T: int) -> None:
    if n > MAX_N or T > MAX_T or n < 2 or T < 1:
        raise InstanceTooLarge(
            f"{problem}: generator limited to 2 <= n <= {MAX_N}, 1 <= T <= {MAX_T}"
        )


def _jittered_points(rng: random.Random, n: int, T: int, volatility: float):
    base = [(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)) for _ in range(n)]
    steps = []
    for _ in range(T):
        pts = [
            (x + volatility * rng.uniform(-2.0, 2.0), y + volatility * rng.uniform(-2.0, 2.0))
            for x, y in base
        ]
        steps.append(pts)
    return steps


def _euclidean(points) -> tuple[tuple[float, ...], ...]:
    n = len(points)
    return tuple(
        tuple(math.dist(points[u], points[v]) for v in range(n)) for u in range(n)
    )


def _mincut(rng, n, T, seed, volatility) -> MsCutInstance:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    base = {p: (rng.random() < 0.65, rng.randint(1, 10)) for p in pairs}
    step_edges = []
    for _ in range(T):
        edges = []
        for (u, v), (present, w) in base.items():
            if rng.random() < volatility * 0.5:
                present = not present
            if rng.random() < volatility:
                w = rng.randint(1, 10)
            if present:
                edges.append((u, v, float(w)))
        step_edges.append(tuple(edges))
    tw = tuple(
        tuple(float(rng.randint(0, 3)) for _ in range(n)) for _ in range(T - 1)
    )
    return MsCutInstance(
        T=T, n=n, source=0, sink=n - 1,
        step_edges=tuple(step_edges), transition_weights=tw,
        id=_instance_id("mincut", n, T, seed), meta=_meta(n, T, seed, volatility),
    )


def _vertexcover(rng, n, T, seed, volatility) -> MsVcInstance:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    base = {p: rng.random() < 0.5 for p in pairs}
    step_edges, vw = [], []
    for _ in range(T):
        edges = []
        for p, present in base.items():
            if rng.random() < volatility * 0.5:
                present = not present
            if present:
                edges.append(p)
        step_edges.append(tuple(edges))
        vw.append(tuple(float(rng.randint(1, 10)) for _ in range(n)))
    tw = tuple(tuple(float(rng.randint(0, 5)) for _ in range(n)) for _ in range(T - 1))
    return MsVcInstance(
        T=T, n=n, step_edges=tuple(step_edges), vertex_weights=tuple(vw),
        transition_weights=tw,
        id=_instance_id("vertexcover", n, T, seed), meta=_meta(n, T, seed, volatility),
    )


def _setcover(rng, m, T, seed, volatility) -> MsScInstance:
    n_elems = m  # ground set size tracks the number of sets
    ground, sets, weights = [], [], []
    base = [[rng.random() < 0.4 for _ in range(n_elems)] for _ in range(m)]
    for _ in range(T):
        memb = [list(row) for row in base]
        for i in range(m):
            for e in range(n_elems):
                if rng.random() < volatility * 0.3:
                    memb[i][e] = not memb[i][e]
        # Keep every element coverable: adopt orphans into a random set.
        for e in range(n_elems):
            if not any(memb[i][e] for i in range(m)):
                memb[rng.randrange(m)][e] = True
        ground.append(tuple(range(n_elems)))
        sets.append(tuple(frozenset(e for e in range(n_elems) if memb[i][e]) for i in range(m)))
        weights.append(tuple(float(rng.randint(1, 10)) for _ in range(m)))
    penalties = tuple(float(rng.randint(0, 8)) for _ in range(m))
    return MsScInstance(
        T=T, m=m, step_ground=tuple(ground), step_sets=tuple(sets),
        step_weights=tuple(weights), penalties=penalties,
        id=_instance_id("setcover", m, T, seed), meta=_meta(m, T, seed, volatility),
    )


def _metric(rng, n, T, seed, volatility, problem):
    step_points = _jittered_points(rng, n, T, volatility)
    costs = tuple(_euclidean(pts) for pts in step_points)
    penalties = []
    for t in range(T):
        row = [rng.uniform(0.0, 8.0) for _ in range(n)]
        row[0] = 0.0  # anchor vertex pays no penalty
        penalties.append(tuple(row))
    tw = [rng.uniform(0.0, 4.0) for _ in range(n)]
    tw[0] = 0.0
    cls = MsPcstInstance if problem == "pcst" else MsPctspInstance
    anchor = {"root": 0} if problem == "pcst" else {"depot": 0}
    return cls(
        T=T, n=n, **anchor, step_costs=costs,
        step_penalties=tuple(penalties), transition_weights=tuple(tw),
        id=_instance_id(problem, n, T, seed), meta=_meta(n, T, seed, volatility),
    )


def generate_instance(problem: str, n: int, T: int, seed: int, volatility: float = 0.3):
    """Build one deterministic random instance of the given problem."""
    _guard(problem, n, T)
    rng = _rng(problem, n, T, seed)
    if problem == "mincut":
        return _mincut(rng, n, T, seed, volatility)
    if problem == "vertexcover":
        return _vertexcover(rng, n, T, seed, volatility)
    if problem == "setcover":
        return _setcover(rng, n, T, seed, volatility)
    if problem in ("pcst", "pctsp"):
        return _metric(rng, n, T, seed, volatility, problem)
    raise ValueError(f"unknown problem {problem!r}")
