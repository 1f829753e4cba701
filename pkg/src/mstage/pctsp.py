"""Multistage prize-collecting traveling salesman.

The relaxation lives on an augmented step graph: a dummy depot twin r'
with c(r, r') = 0 and c(v, r') = c(v, r) is added, every vertex gets a
degree equality (2 for the depot pair, 2 s_v otherwise) and subtour-style
cut constraints are separated by min v-r' cuts.  Edge variables are
bounded by 2 rather than 1 so the empty tour (the doubled zero-cost
depot edge) stays feasible.

After rounding the visit series, each step's tour through the selected
vertices is built with Christofides' algorithm: spanning tree, minimum
perfect matching on the odd-degree vertices, Eulerian shortcut.  Fixed
mode uses alpha=5/7, beta=3/7 (factor 3.5); derandomized mode searches
candidates with gamma = e^(-2/5), beta = (3/5) alpha (factor 3.034).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lp
from .errors import ValidationError
from .graphs import (
    Graph,
    Tour,
    check_metric,
    eulerian_shortcut_tour,
    greedy_perfect_matching,
    min_st_cut,
    min_weight_perfect_matching,
    minimum_spanning_tree,
)
from .rounding import (
    PCTSP_DERAND,
    RoundingParams,
    candidate_alphas,
    two_threshold_round,
)
from .solution import CostBreakdown, FractionalSolution, RoundedSchedule

FIXED_PARAMS = RoundingParams(alpha=5.0 / 7.0, beta=3.0 / 7.0)

_CAP_EPS = 1e-12


@dataclass(frozen=True)
class MsPctspInstance:
    """Complete metric costs per step; depot is always visited.

    Penalty and transition entries at the depot are ignored.
    """

    T: int
    n: int
    depot: int
    step_costs: tuple[tuple[tuple[float, ...], ...], ...]
    step_penalties: tuple[tuple[float, ...], ...]
    transition_weights: tuple[float, ...]
    id: str | None = None
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.T < 1:
            raise ValidationError("T must be >= 1", field="T")
        if not (0 <= self.depot < self.n):
            raise ValidationError("depot out of range", field="depot")
        if len(self.step_costs) != self.T or len(self.step_penalties) != self.T:
            raise ValidationError("need one cost matrix and penalty row per step", field="steps")
        for t in range(self.T):
            mat = self.step_costs[t]
            if len(mat) != self.n or any(len(r) != self.n for r in mat):
                raise ValidationError("cost matrix must be n x n", field=f"steps[{t}].costs")
            if not check_metric(mat):
                raise ValidationError(
                    "costs must satisfy the triangle inequality",
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
        return [v for v in range(self.n) if v != self.depot]

    def augmented_costs(self, t: int) -> list[list[float]]:
        """Step costs extended with the dummy depot twin at index n."""
        n = self.n
        mat = [[0.0] * (n + 1) for _ in range(n + 1)]
        for u in range(n):
            for v in range(n):
                mat[u][v] = self.step_costs[t][u][v]
        for v in range(n):
            mat[v][n] = mat[n][v] = self.step_costs[t][v][self.depot]
        mat[self.depot][n] = mat[n][self.depot] = 0.0
        return mat


def christofides_tour(costs, subset, depot: int, matching: str = "exact") -> Tour:
    """Christofides on the given metric restricted to `subset` (depot inside).

    matching="greedy" is faster but forfeits the 3/2 certificate.
    """
    verts = sorted(set(subset) | {depot})
    if len(verts) == 1:
        return Tour(vertices=(depot,), length=0.0)
    if len(verts) == 2:
        other = verts[0] if verts[1] == depot else verts[1]
        return Tour(
            vertices=(depot, other, depot), length=2.0 * costs[depot][other]
        )
    g = Graph.complete_from_matrix(costs)
    tree = minimum_spanning_tree(g, on=verts)
    degree: dict[int, int] = {v: 0 for v in verts}
    for u, v, _ in tree:
        degree[u] += 1
        degree[v] += 1
    odd = [v for v in verts if degree[v] % 2 == 1]
    if matching == "greedy":
        pairs = greedy_perfect_matching(g, odd)
    else:
        pairs = min_weight_perfect_matching(g, odd)
    multi = [(u, v) for u, v, _ in tree] + list(pairs)
    return eulerian_shortcut_tour(multi, depot, lambda a, b: costs[a][b])


def build_base_lp(inst: MsPctspInstance) -> tuple[lp.LpModel, dict]:
    """Degree equalities and transition rows on the augmented graph."""
    others = inst.others()
    n1 = inst.n + 1  # dummy twin at index n
    x_idx, s_idx, z_idx = {}, {}, {}
    k = 0
    for t in range(inst.T):
        for u in range(n1):
            for v in range(u + 1, n1):
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
    bounds: list[tuple[float, float | None]] = [(0.0, 1.0)] * k
    for t in range(inst.T):
        aug = inst.augmented_costs(t)
        for u in range(n1):
            for v in range(u + 1, n1):
                j = x_idx[(t, u, v)]
                obj[j] = aug[u][v]
                bounds[j] = (0.0, 2.0)
    for (t, v), j in s_idx.items():
        obj[j] = -inst.step_penalties[t][v]
        offset += inst.step_penalties[t][v]
    for (t, v), j in z_idx.items():
        obj[j] = inst.transition_weights[v]
    rows = []
    for t in range(inst.T):
        for u in range(n1):
            coeffs = [
                (x_idx[(t, min(u, w), max(u, w))], 1.0) for w in range(n1) if w != u
            ]
            if u == inst.depot or u == inst.n:
                rows.append(lp.row(coeffs, "=", 2.0))
            else:
                rows.append(lp.row(coeffs + [(s_idx[(t, u)], -2.0)], "=", 0.0))
    for t in range(inst.T - 1):
        for v in others:
            a, b, z = s_idx[(t, v)], s_idx[(t + 1, v)], z_idx[(t, v)]
            rows.append(lp.row([(z, 1.0), (a, -1.0), (b, 1.0)], ">=", 0.0))
            rows.append(lp.row([(z, 1.0), (a, 1.0), (b, -1.0)], ">=", 0.0))
    model = lp.LpModel.build(k, obj, rows, bounds=bounds, objective_offset=offset)
    return model, {"x": x_idx, "s": s_idx, "z": z_idx}


def make_separation_oracle(inst: MsPctspInstance, idx: dict) -> lp.SeparationOracle:
    """Min v-r' cut per (step, vertex); violated when below 2 s_v.

    The depot itself is separated too (its s is fixed at 1), which is
    valid because every tour visits both depot copies.
    """
    n1 = inst.n + 1

    def svalue(values, t, v):
        return 1.0 if v == inst.depot else values[idx["s"][(t, v)]]

    def oracle(values):
        violated = []
        for t in range(inst.T):
            cap_edges = []
            for u in range(n1):
                for v in range(u + 1, n1):
                    val = values[idx["x"][(t, u, v)]]
                    if val > _CAP_EPS:
                        cap_edges.append((u, v, val))
            g = Graph.from_edges(n1, cap_edges)
            for v in range(inst.n):
                target = 2.0 * svalue(values, t, v)
                if target <= _CAP_EPS:
                    continue
                cut = min_st_cut(g, v, inst.n)
                if cut.value < target - 1e-9:
                    side = cut.source_side
                    coeffs = [
                        (idx["x"][(t, min(a, b), max(a, b))], 1.0)
                        for a in range(n1)
                        for b in range(a + 1, n1)
                        if (a in side) != (b in side)
                    ]
                    if v == inst.depot:
                        violated.append(
                            (lp.row(coeffs, ">=", 2.0), target - cut.value)
                        )
                    else:
                        coeffs.append((idx["s"][(t, v)], -2.0))
                        violated.append(
                            (lp.row(coeffs, ">=", 0.0), target - cut.value)
                        )
        return violated

    return oracle


def pctsp_lp_solve(
    inst: MsPctspInstance, max_rounds: int = 200
) -> FractionalSolution:
    inst.validate()
    model, idx = build_base_lp(inst)
    oracle = make_separation_oracle(inst, idx)
    sol = lp.solve_with_separation(model, oracle, max_rounds=max_rounds)
    others = inst.others()
    n1 = inst.n + 1
    xs = tuple(
        {
            (u, v): sol.values[idx["x"][(t, u, v)]]
            for u in range(n1)
            for v in range(u + 1, n1)
        }
        for t in range(inst.T)
    )
    ss = tuple({v: sol.values[idx["s"][(t, v)]] for v in others} for t in range(inst.T))
    zs = tuple(
        {v: sol.values[idx["z"][(t, v)]] for v in others} for t in range(inst.T - 1)
    )
    return FractionalSolution(objective=sol.objective_value, x=xs, s=ss, z=zs)


def schedule_from_rounding(
    inst: MsPctspInstance,
    frac: FractionalSolution,
    params: RoundingParams,
    matching: str = "exact",
) -> RoundedSchedule:
    """Round visit series, then one Christofides tour per step (in G,
    the dummy twin dropped)."""
    others = inst.others()
    rounded = {
        v: two_threshold_round([frac.s[t][v] for t in range(inst.T)], params)
        for v in others
    }
    visited = [
        frozenset(v for v in others if rounded[v][t]) | {inst.depot}
        for t in range(inst.T)
    ]
    tours: list[Tour] = []
    step_cost = 0.0
    penalty = 0.0
    for t in range(inst.T):
        tour = christofides_tour(
            inst.step_costs[t], visited[t], inst.depot, matching=matching
        )
        tours.append(tour)
        step_cost += tour.length
        penalty += sum(
            inst.step_penalties[t][v] for v in others if v not in visited[t]
        )
    transition = sum(
        inst.transition_weights[v]
        for t in range(inst.T - 1)
        for v in others
        if rounded[v][t] != rounded[v][t + 1]
    )
    flags = ["greedy_matching_voids_certificate"] if matching == "greedy" else []
    return RoundedSchedule(
        problem="pctsp",
        chosen=visited,
        structures=tours,
        breakdown=CostBreakdown(step=step_cost, penalty=penalty, transition=transition),
        lp_value=frac.objective,
        params={"alpha": params.alpha, "beta": params.beta, "matching": matching},
        flags=flags,
    )


def solve_ms_pctsp(
    inst: MsPctspInstance,
    mode: str = "fixed",
    matching: str = "exact",
    max_rounds: int = 200,
) -> RoundedSchedule:
    """Fixed mode: factor 3.5 with (5/7, 3/7).  Derandomized: factor 3.034."""
    frac = pctsp_lp_solve(inst, max_rounds=max_rounds)
    if mode == "fixed":
        schedule = schedule_from_rounding(inst, frac, FIXED_PARAMS, matching=matching)
        schedule.params.update({"mode": "fixed", "bound": 3.5})
        return schedule
    if mode != "derandomized":
        raise ValueError(f"unknown mode {mode!r}")
    cfg = PCTSP_DERAND
    best = None
    for alpha in candidate_alphas(frac.all_s_values(), cfg):
        cand = schedule_from_rounding(
            inst,
            frac,
            RoundingParams(alpha=alpha, beta=cfg.kappa * alpha),
            matching=matching,
        )
        if best is None or cand.cost < best.cost - 1e-12:
            best = cand
    best.params.update({"mode": "derandomized", "gamma": cfg.gamma, "bound": 3.034})
    return best
