"""Exact brute-force solvers for tiny instances of all five problems.

These are the ground truth for every certified approximation ratio, so
they favor simplicity over speed: enumerate the feasible decisions of
every step, price each exactly, and run a dynamic program across time
with the transition costs between consecutive decision vectors.  Hard
size guards keep everything at desk scale.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import InstanceTooLarge
from .graphs import metric_closure, minimum_spanning_tree, Graph
from .mincut import MsCutInstance
from .solution import CostBreakdown, RoundedSchedule

MAX_VERTICES = 7
MAX_SETS = 7
MAX_T = 4
MAX_TSP = 10


def exact_steiner(
    costs: Sequence[Sequence[float]], root: int, terminals: Iterable[int]
) -> float:
    """Minimum cost of an edge set connecting all terminals to the root.

    Enumerates every possible set of extra branching vertices and takes
    the cheapest spanning tree in the metric closure; closure edges expand
    back to paths of the same cost, so this equals the true optimum.
    """
    n = len(costs)
    if n > MAX_VERTICES:
        raise InstanceTooLarge(f"exact_steiner limited to {MAX_VERTICES} vertices")
    need = sorted(set(terminals) | {root})
    if len(need) <= 1:
        return 0.0
    closure = metric_closure(costs)
    g = Graph.complete_from_matrix(closure)
    others = [v for v in range(n) if v not in need]
    best = None
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            tree = minimum_spanning_tree(g, on=need + list(extra))
            w = sum(e[2] for e in tree)
            if best is None or w < best:
                best = w
    return best


def exact_tsp(
    costs: Sequence[Sequence[float]], subset: Iterable[int], depot: int
) -> float:
    """Optimal tour length over the subset (Held-Karp dynamic program)."""
    verts = sorted(set(subset) | {depot})
    k = len(verts)
    if k > MAX_TSP:
        raise InstanceTooLarge(f"exact_tsp limited to {MAX_TSP} vertices")
    if k == 1:
        return 0.0
    if k == 2:
        other = verts[0] if verts[1] == depot else verts[1]
        return 2.0 * costs[depot][other]
    pos = {v: i for i, v in enumerate(verts)}
    d = pos[depot]
    dist = [[costs[a][b] for b in verts] for a in verts]
    full = (1 << k) - 1
    dp = {(1 << d, d): 0.0}
    for mask in range(1 << k):
        if not (mask & (1 << d)):
            continue
        for last in range(k):
            key = (mask, last)
            if key not in dp:
                continue
            base = dp[key]
            for nxt in range(k):
                if mask & (1 << nxt):
                    continue
                nkey = (mask | (1 << nxt), nxt)
                cand = base + dist[last][nxt]
                if nkey not in dp or cand < dp[nkey]:
                    dp[nkey] = cand
    best = min(dp[(full, last)] + dist[last][d] for last in range(k) if last != d)
    return best


def _dp_over_time(
    T: int,
    decisions: list[list[frozenset]],
    step_cost: list[list[float]],
    transition,
) -> tuple[float, list[frozenset]]:
    """Min-cost path through per-step decision layers."""
    best = list(step_cost[0])
    back: list[list[int]] = [[-1] * len(decisions[0])]
    for t in range(1, T):
        cur = []
        arg = []
        for j, dec in enumerate(decisions[t]):
            cand_cost, cand_prev = None, -1
            for i, prev in enumerate(decisions[t - 1]):
                c = best[i] + transition(t - 1, prev, dec)
                if cand_cost is None or c < cand_cost:
                    cand_cost, cand_prev = c, i
            cur.append(cand_cost + step_cost[t][j])
            arg.append(cand_prev)
        best = cur
        back.append(arg)
    j = min(range(len(best)), key=lambda i: best[i])
    total = best[j]
    seq = []
    for t in range(T - 1, -1, -1):
        seq.append(decisions[t][j])
        j = back[t][j]
    seq.reverse()
    return total, seq


def _guard(n_entities: int, T: int, kind: str) -> None:
    limit = MAX_SETS if kind == "sets" else MAX_VERTICES
    if n_entities > limit:
        raise InstanceTooLarge(f"brute force limited to {limit} {kind}, got {n_entities}")
    if T > MAX_T:
        raise InstanceTooLarge(f"brute force limited to T <= {MAX_T}, got {T}")


def brute_force_schedule(inst) -> RoundedSchedule:
    """Dispatch to the per-problem exact solver (guarded to desk scale)."""
    from .vertexcover import MsVcInstance
    from .setcover import MsScInstance
    from .pcst import MsPcstInstance
    from .pctsp import MsPctspInstance

    if isinstance(inst, MsCutInstance):
        return _brute_mincut(inst)
    if isinstance(inst, MsVcInstance):
        return _brute_vertexcover(inst)
    if isinstance(inst, MsScInstance):
        return _brute_setcover(inst)
    if isinstance(inst, MsPcstInstance):
        return _brute_pcst(inst)
    if isinstance(inst, MsPctspInstance):
        return _brute_pctsp(inst)
    raise TypeError(f"unsupported instance type {type(inst)!r}")


def _subsets(items: Sequence[int]) -> list[frozenset]:
    out = []
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            out.append(frozenset(combo))
    return out


def _brute_mincut(inst: MsCutInstance) -> RoundedSchedule:
    inst.validate()
    _guard(inst.n, inst.T, "vertices")
    others = [v for v in range(inst.n) if v not in (inst.source, inst.sink)]
    layers = [frozenset({inst.source}) | s for s in _subsets(others)]
    decisions = [layers] * inst.T
    step_cost = []
    for t in range(inst.T):
        costs = []
        for side in layers:
            costs.append(
                sum(w for u, v, w in inst.step_edges[t] if (u in side) != (v in side))
            )
        step_cost.append(costs)

    def transition(t, prev, cur):
        return sum(
            inst.transition_weights[t][v]
            for v in range(inst.n)
            if (v in prev) != (v in cur)
        )

    total, seq = _dp_over_time(inst.T, decisions, step_cost, transition)
    trans = sum(transition(t, seq[t], seq[t + 1]) for t in range(inst.T - 1))
    return RoundedSchedule(
        problem="mincut",
        chosen=seq,
        breakdown=CostBreakdown(step=total - trans, penalty=0.0, transition=trans),
        params={"algorithm": "brute_force"},
    )


def _brute_vertexcover(inst) -> RoundedSchedule:
    inst.validate()
    _guard(inst.n, inst.T, "vertices")
    all_subsets = _subsets(list(range(inst.n)))
    decisions, step_cost = [], []
    for t in range(inst.T):
        edges = inst.step_edges[t]
        feas = [s for s in all_subsets if all(u in s or v in s for u, v in edges)]
        decisions.append(feas)
        step_cost.append([sum(inst.vertex_weights[t][v] for v in s) for s in feas])

    def transition(t, prev, cur):
        return sum(
            inst.transition_weights[t][v]
            for v in range(inst.n)
            if (v in prev) != (v in cur)
        )

    total, seq = _dp_over_time(inst.T, decisions, step_cost, transition)
    trans = sum(transition(t, seq[t], seq[t + 1]) for t in range(inst.T - 1))
    return RoundedSchedule(
        problem="vertexcover",
        chosen=seq,
        breakdown=CostBreakdown(step=total - trans, penalty=0.0, transition=trans),
        params={"algorithm": "brute_force"},
    )


def _brute_setcover(inst) -> RoundedSchedule:
    inst.validate()
    _guard(inst.m, inst.T, "sets")
    all_subsets = _subsets(list(range(inst.m)))
    decisions, step_cost = [], []
    for t in range(inst.T):
        ground = inst.step_ground[t]
        members = inst.step_sets[t]
        feas = [
            s
            for s in all_subsets
            if all(any(e in members[i] for i in s) for e in ground)
        ]
        decisions.append(feas)
        step_cost.append([sum(inst.step_weights[t][i] for i in s) for s in feas])

    def transition(t, prev, cur):
        return sum(inst.penalties[i] for i in range(inst.m) if (i in prev) != (i in cur))

    total, seq = _dp_over_time(inst.T, decisions, step_cost, transition)
    trans = sum(transition(t, seq[t], seq[t + 1]) for t in range(inst.T - 1))
    return RoundedSchedule(
        problem="setcover",
        chosen=seq,
        breakdown=CostBreakdown(step=total - trans, penalty=0.0, transition=trans),
        params={"algorithm": "brute_force"},
    )


def _brute_pcst(inst) -> RoundedSchedule:
    inst.validate()
    _guard(inst.n, inst.T, "vertices")
    others = [v for v in range(inst.n) if v != inst.root]
    layers = _subsets(others)
    decisions = [layers] * inst.T
    step_cost, penalty_of = [], []
    for t in range(inst.T):
        costs, pens = [], []
        for sel in layers:
            tree = exact_steiner(inst.step_costs[t], inst.root, sel)
            pen = sum(inst.step_penalties[t][v] for v in others if v not in sel)
            costs.append(tree + pen)
            pens.append(pen)
        step_cost.append(costs)
        penalty_of.append(pens)

    def transition(t, prev, cur):
        return sum(inst.transition_weights[v] for v in others if (v in prev) != (v in cur))

    total, seq = _dp_over_time(inst.T, decisions, step_cost, transition)
    trans = sum(transition(t, seq[t], seq[t + 1]) for t in range(inst.T - 1))
    pen = sum(
        penalty_of[t][decisions[t].index(seq[t])] for t in range(inst.T)
    )
    return RoundedSchedule(
        problem="pcst",
        chosen=[s | {inst.root} for s in seq],
        breakdown=CostBreakdown(step=total - trans - pen, penalty=pen, transition=trans),
        params={"algorithm": "brute_force"},
    )


def _brute_pctsp(inst) -> RoundedSchedule:
    inst.validate()
    _guard(inst.n, inst.T, "vertices")
    others = [v for v in range(inst.n) if v != inst.depot]
    layers = _subsets(others)
    decisions = [layers] * inst.T
    step_cost, penalty_of = [], []
    for t in range(inst.T):
        costs, pens = [], []
        for sel in layers:
            tour = exact_tsp(inst.step_costs[t], sel | {inst.depot}, inst.depot)
            pen = sum(inst.step_penalties[t][v] for v in others if v not in sel)
            costs.append(tour + pen)
            pens.append(pen)
        step_cost.append(costs)
        penalty_of.append(pens)

    def transition(t, prev, cur):
        return sum(inst.transition_weights[v] for v in others if (v in prev) != (v in cur))

    total, seq = _dp_over_time(inst.T, decisions, step_cost, transition)
    trans = sum(transition(t, seq[t], seq[t + 1]) for t in range(inst.T - 1))
    pen = sum(penalty_of[t][decisions[t].index(seq[t])] for t in range(inst.T))
    return RoundedSchedule(
        problem="pctsp",
        chosen=[s | {inst.depot} for s in seq],
        breakdown=CostBreakdown(step=total - trans - pen, penalty=pen, transition=trans),
        params={"algorithm": "brute_force"},
    )
