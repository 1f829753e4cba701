"""Multistage prize-collecting Steiner tree.

Pipeline: solve the cut-constrained LP relaxation by separation (one
min-cut per vertex and step), round the per-vertex connection series with
the two-threshold scheme, then build each step's tree with the primal-dual
moat-growing algorithm.  Fixed mode uses alpha=3/4, beta=1/2 (factor 4);
derandomized mode searches the candidate threshold family with
gamma = e^(-1/3), beta = (2/3) alpha and keeps the cheapest schedule
(factor 3.53).  The LP value is reported as a certified lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lp
from .errors import ValidationError
from .graphs import Graph, min_st_cut
from .rounding import (
    PCST_DERAND,
    RoundingParams,
    candidate_alphas,
    two_threshold_round,
)
from .solution import CostBreakdown, FractionalSolution, RoundedSchedule

FIXED_PARAMS = RoundingParams(alpha=0.75, beta=0.5)

#: Capacities below this are omitted from separation flow networks.
_CAP_EPS = 1e-12


@dataclass(frozen=True)
class MsPcstInstance:
    """Complete per-step edge costs, per-step penalties, vertex switch costs.

    Penalty and transition entries for the root are ignored: the root is
    always connected, is never rounded and never pays.
    """

    T: int
    n: int
    root: int
    step_costs: tuple[tuple[tuple[float, ...], ...], ...]
    step_penalties: tuple[tuple[float, ...], ...]
    transition_weights: tuple[float, ...]
    id: str | None = None
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.T < 1:
            raise ValidationError("T must be >= 1", field="T")
        if not (0 <= self.root < self.n):
            raise ValidationError("root out of range", field="root")
        if len(self.step_costs) != self.T or len(self.step_penalties) != self.T:
            raise ValidationError("need one cost matrix and penalty row per step", field="steps")
        for t in range(self.T):
            mat = self.step_costs[t]
            if len(mat) != self.n or any(len(r) != self.n for r in mat):
                raise ValidationError("cost matrix must be n x n", field=f"steps[{t}].costs")
            for u in range(self.n):
                if abs(mat[u][u]) > 1e-12:
                    raise ValidationError("nonzero diagonal", field=f"steps[{t}].costs")
                for v in range(self.n):
                    if mat[u][v] < 0 or abs(mat[u][v] - mat[v][u]) > 1e-9:
                        raise ValidationError(
                            "costs must be symmetric and nonnegative",
                            field=f"steps[{t}].costs",
                        )
            if len(self.step_penalties[t]) != self.n:
                raise ValidationError("penalty row length != n", field=f"steps[{t}].penalties")
            if any(p < 0 for p in self.step_penalties[t]):
                raise ValidationError("negative penalty", field=f"steps[{t}].penalties")
        if len(self.transition_weights) != self.n:
            raise ValidationError("one transition weight per vertex", field="transition_weights")
        if any(w < 0 for w in self.transition_weights):
            raise ValidationError("negative transition weight", field="transition_weights")

    def others(self) -> list[int]:
        return [v for v in range(self.n) if v != self.root]


@dataclass(frozen=True)
class GwResult:
    """Tree edges, the dual lower-bound value, and the moats behind it.

    Each moat is a (vertex set, dual amount) pair; their sum is
    dual_value, the per-edge loads they induce never exceed edge costs,
    and the tree costs at most twice dual_value.
    """

    tree: tuple[tuple[int, int], ...]
    dual_value: float
    moats: tuple[tuple[frozenset[int], float], ...]

    def tree_cost(self, costs) -> float:
        return sum(costs[u][v] for u, v in self.tree)


def gw_steiner_tree(costs, root: int, terminals) -> GwResult:
    """Primal-dual moat growing with reverse delete.

    Components containing a terminal but not the root are active and grow
    their duals uniformly; edges merge components the moment they go
    tight; a component reaching the root deactivates.  Reverse delete then
    drops every edge not needed to keep the terminals connected to the
    root.
    """
    n = len(costs)
    terms = set(terminals) - {root}
    if not terms:
        return GwResult(tree=(), dual_value=0.0, moats=())

    comp_of = list(range(n))
    members: dict[int, set[int]] = {v: {v} for v in range(n)}
    active: dict[int, bool] = {v: (v in terms) for v in range(n)}
    active[root] = False
    dual: dict[int, float] = {v: 0.0 for v in range(n)}
    finished: list[tuple[frozenset[int], float]] = []
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    load = {p: 0.0 for p in pairs}
    merge_edges: list[tuple[int, int]] = []
    next_id = n

    while any(active.values()):
        best_dt, best_pair = None, None
        for u, v in pairs:
            cu, cv = comp_of[u], comp_of[v]
            if cu == cv:
                continue
            rate = int(active[cu]) + int(active[cv])
            if rate == 0:
                continue
            dt = (costs[u][v] - load[(u, v)]) / rate
            if best_dt is None or dt < best_dt - 1e-15:
                best_dt, best_pair = dt, (u, v)
        if best_pair is None:  # cannot happen on a complete finite graph
            raise AssertionError("moat growth stalled")
        dt = max(best_dt, 0.0)
        if dt > 0.0:
            for cid, is_active in active.items():
                if is_active:
                    dual[cid] += dt
            for u, v in pairs:
                cu, cv = comp_of[u], comp_of[v]
                if cu != cv:
                    load[(u, v)] += dt * (int(active[cu]) + int(active[cv]))
        u, v = best_pair
        cu, cv = comp_of[u], comp_of[v]
        merged = members[cu] | members[cv]
        for cid in (cu, cv):
            if dual[cid] > 0.0:
                finished.append((frozenset(members[cid]), dual[cid]))
            del members[cid], active[cid], dual[cid]
        cid = next_id
        next_id += 1
        members[cid] = merged
        dual[cid] = 0.0
        active[cid] = bool(merged & terms) and root not in merged
        for w in merged:
            comp_of[w] = cid
        merge_edges.append((u, v))

    for cid, amount in dual.items():
        if amount > 0.0:
            finished.append((frozenset(members[cid]), amount))
    dual_value = sum(a for _, a in finished)

    # Reverse delete: drop any edge whose removal keeps all terminals
    # connected to the root.
    kept = set(merge_edges)

    def connected_to_root(edges: set[tuple[int, int]]) -> bool:
        adj: dict[int, list[int]] = {}
        for a, b in edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = {root}
        queue = [root]
        for x in queue:
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return terms <= seen

    for e in reversed(merge_edges):
        trial = kept - {e}
        if connected_to_root(trial):
            kept = trial
    tree = tuple(sorted((min(a, b), max(a, b)) for a, b in kept))
    return GwResult(tree=tree, dual_value=dual_value, moats=tuple(finished))


def build_base_lp(inst: MsPcstInstance) -> tuple[lp.LpModel, dict]:
    """Objective and transition rows; cut rows come from separation."""
    others = inst.others()
    x_idx, s_idx, z_idx = {}, {}, {}
    k = 0
    for t in range(inst.T):
        for u in range(inst.n):
            for v in range(u + 1, inst.n):
                x_idx[(t, u, v)] = k
                k += 1
    for t in range(inst.T):
        for v in others:
            s_idx[(t, v)] = k
            k += 1
    for t in range(inst.T - 1):
        for v in others:
            z_idx[(t, v)] = k
            k += 1
    obj = [0.0] * k
    offset = 0.0
    for (t, u, v), j in x_idx.items():
        obj[j] = inst.step_costs[t][u][v]
    for (t, v), j in s_idx.items():
        obj[j] = -inst.step_penalties[t][v]
        offset += inst.step_penalties[t][v]
    for (t, v), j in z_idx.items():
        obj[j] = inst.transition_weights[v]
    rows = []
    for t in range(inst.T - 1):
        for v in others:
            a, b, z = s_idx[(t, v)], s_idx[(t + 1, v)], z_idx[(t, v)]
            rows.append(lp.row([(z, 1.0), (a, -1.0), (b, 1.0)], ">=", 0.0))
            rows.append(lp.row([(z, 1.0), (a, 1.0), (b, -1.0)], ">=", 0.0))
    model = lp.LpModel.build(k, obj, rows, objective_offset=offset)
    return model, {"x": x_idx, "s": s_idx, "z": z_idx}


def make_separation_oracle(inst: MsPcstInstance, idx: dict) -> lp.SeparationOracle:
    """One min v-root cut per (step, vertex); violated when below s_v.

    The returned row sums x over the full complete-graph boundary of the
    cut's source side, so it is valid for every point of the family.
    """
    others = inst.others()

    def oracle(values):
        violated = []
        for t in range(inst.T):
            cap_edges = []
            for u in range(inst.n):
                for v in range(u + 1, inst.n):
                    val = values[idx["x"][(t, u, v)]]
                    if val > _CAP_EPS:
                        cap_edges.append((u, v, val))
            g = Graph.from_edges(inst.n, cap_edges)
            for v in others:
                sv = values[idx["s"][(t, v)]]
                if sv <= _CAP_EPS:
                    continue
                cut = min_st_cut(g, v, inst.root)
                if cut.value < sv - 1e-9:
                    side = cut.source_side
                    coeffs = [
                        (idx["x"][(t, min(a, b), max(a, b))], 1.0)
                        for a in range(inst.n)
                        for b in range(a + 1, inst.n)
                        if (a in side) != (b in side)
                    ]
                    coeffs.append((idx["s"][(t, v)], -1.0))
                    violated.append((lp.row(coeffs, ">=", 0.0), sv - cut.value))
        return violated

    return oracle


def pcst_lp_solve(
    inst: MsPcstInstance, max_rounds: int = 200
) -> FractionalSolution:
    """Solve the relaxation; at termination no cut constraint is violated."""
    inst.validate()
    model, idx = build_base_lp(inst)
    oracle = make_separation_oracle(inst, idx)
    sol = lp.solve_with_separation(model, oracle, max_rounds=max_rounds)
    others = inst.others()
    xs = tuple(
        {
            (u, v): sol.values[idx["x"][(t, u, v)]]
            for u in range(inst.n)
            for v in range(u + 1, inst.n)
        }
        for t in range(inst.T)
    )
    ss = tuple({v: sol.values[idx["s"][(t, v)]] for v in others} for t in range(inst.T))
    zs = tuple(
        {v: sol.values[idx["z"][(t, v)]] for v in others} for t in range(inst.T - 1)
    )
    return FractionalSolution(objective=sol.objective_value, x=xs, s=ss, z=zs)


def schedule_from_rounding(
    inst: MsPcstInstance, frac: FractionalSolution, params: RoundingParams
) -> RoundedSchedule:
    """Round the connection series and grow one tree per step."""
    others = inst.others()
    rounded = {
        v: two_threshold_round([frac.s[t][v] for t in range(inst.T)], params)
        for v in others
    }
    connected = [
        frozenset(v for v in others if rounded[v][t]) | {inst.root}
        for t in range(inst.T)
    ]
    trees = []
    step_cost = 0.0
    penalty = 0.0
    for t in range(inst.T):
        terminals = connected[t] - {inst.root}
        gw = gw_steiner_tree(inst.step_costs[t], inst.root, terminals)
        trees.append(gw)
        step_cost += gw.tree_cost(inst.step_costs[t])
        penalty += sum(
            inst.step_penalties[t][v] for v in others if v not in connected[t]
        )
    transition = sum(
        inst.transition_weights[v]
        for t in range(inst.T - 1)
        for v in others
        if rounded[v][t] != rounded[v][t + 1]
    )
    return RoundedSchedule(
        problem="pcst",
        chosen=connected,
        structures=trees,
        breakdown=CostBreakdown(step=step_cost, penalty=penalty, transition=transition),
        lp_value=frac.objective,
        params={"alpha": params.alpha, "beta": params.beta},
    )


def solve_ms_pcst(
    inst: MsPcstInstance,
    mode: str = "fixed",
    max_rounds: int = 200,
) -> RoundedSchedule:
    """Fixed mode: factor 4 with (3/4, 1/2).  Derandomized: factor 3.53.

    Derandomized mode evaluates every candidate alpha (beta = 2/3 alpha)
    and keeps the cheapest schedule; ties go to the smaller alpha.
    """
    frac = pcst_lp_solve(inst, max_rounds=max_rounds)
    if mode == "fixed":
        schedule = schedule_from_rounding(inst, frac, FIXED_PARAMS)
        schedule.params.update({"mode": "fixed", "bound": 4.0})
        return schedule
    if mode != "derandomized":
        raise ValueError(f"unknown mode {mode!r}")
    cfg = PCST_DERAND
    best = None
    for alpha in candidate_alphas(frac.all_s_values(), cfg):
        cand = schedule_from_rounding(
            inst, frac, RoundingParams(alpha=alpha, beta=cfg.kappa * alpha)
        )
        if best is None or cand.cost < best.cost - 1e-12:
            best = cand
    best.params.update({"mode": "derandomized", "gamma": cfg.gamma, "bound": 3.53})
    return best
