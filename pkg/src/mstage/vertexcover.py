"""Multistage vertex cover: 2-approximation from half-integral LP vertices.

The LP relaxation (coverage rows x_u + x_v >= 1 per edge per step, plus
transition rows) is a two-variable-per-row system, so basic optimal
solutions have coordinates in {0, 1/2, 1}.  Rounding the halves up covers
every edge and at most doubles each coordinate, hence cost <= 2 * LP.

Should a basic solution ever come back off the half-integral grid, the
solver falls back to two-threshold rounding with alpha=1/2, beta=1/4 (the
frequency-2 set-cover case), which still guarantees a factor of 4; the
report is flagged accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lp
from .errors import ValidationError
from .rounding import RoundingParams, two_threshold_round
from .solution import CostBreakdown, FractionalSolution, RoundedSchedule

SNAP_TOL = 0.01

_FALLBACK = RoundingParams(alpha=0.5, beta=0.25)


@dataclass(frozen=True)
class MsVcInstance:
    T: int
    n: int
    step_edges: tuple[tuple[tuple[int, int], ...], ...]
    vertex_weights: tuple[tuple[float, ...], ...]
    transition_weights: tuple[tuple[float, ...], ...]
    id: str | None = None
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.T < 1:
            raise ValidationError("T must be >= 1", field="T")
        if len(self.step_edges) != self.T:
            raise ValidationError("one edge list per step required", field="steps")
        if len(self.vertex_weights) != self.T:
            raise ValidationError("one weight row per step required", field="vertex_weights")
        for t in range(self.T):
            for u, v in self.step_edges[t]:
                if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                    raise ValidationError(f"bad edge ({u},{v})", field=f"steps[{t}].edges")
            if len(self.vertex_weights[t]) != self.n:
                raise ValidationError("weight row length != n", field=f"steps[{t}].vertex_weights")
            if any(w < 0 for w in self.vertex_weights[t]):
                raise ValidationError("negative vertex weight", field=f"steps[{t}].vertex_weights")
        if len(self.transition_weights) != self.T - 1:
            raise ValidationError("need T-1 transition rows", field="transition_weights")
        for t, rw in enumerate(self.transition_weights):
            if len(rw) != self.n or any(w < 0 for w in rw):
                raise ValidationError("bad transition row", field=f"transition_weights[{t}]")


def build_lp(inst: MsVcInstance) -> tuple[lp.LpModel, dict]:
    """Coverage + transition LP; returns the model and the variable map."""
    x_idx = {}
    z_idx = {}
    k = 0
    for t in range(inst.T):
        for v in range(inst.n):
            x_idx[(t, v)] = k
            k += 1
    for t in range(inst.T - 1):
        for v in range(inst.n):
            z_idx[(t, v)] = k
            k += 1
    obj = [0.0] * k
    for (t, v), j in x_idx.items():
        obj[j] = inst.vertex_weights[t][v]
    for (t, v), j in z_idx.items():
        obj[j] = inst.transition_weights[t][v]
    rows = []
    for t in range(inst.T):
        for u, v in inst.step_edges[t]:
            rows.append(lp.row([(x_idx[(t, u)], 1.0), (x_idx[(t, v)], 1.0)], ">=", 1.0))
    for t in range(inst.T - 1):
        for v in range(inst.n):
            a, b, z = x_idx[(t, v)], x_idx[(t + 1, v)], z_idx[(t, v)]
            rows.append(lp.row([(z, 1.0), (a, -1.0), (b, 1.0)], ">=", 0.0))
            rows.append(lp.row([(z, 1.0), (a, 1.0), (b, -1.0)], ">=", 0.0))
    model = lp.LpModel.build(k, obj, rows)
    return model, {"x": x_idx, "z": z_idx}


def lp_relaxation_solve(inst: MsVcInstance) -> FractionalSolution:
    inst.validate()
    model, idx = build_lp(inst)
    sol = lp.solve_lp(model)
    xs = tuple(
        {v: sol.values[idx["x"][(t, v)]] for v in range(inst.n)} for t in range(inst.T)
    )
    zs = tuple(
        {v: sol.values[idx["z"][(t, v)]] for v in range(inst.n)}
        for t in range(inst.T - 1)
    )
    return FractionalSolution(objective=sol.objective_value, x=xs, z=zs)


def _snap(value: float) -> float | None:
    for target in (0.0, 0.5, 1.0):
        if abs(value - target) <= SNAP_TOL:
            return target
    return None


def _covers_cost(inst: MsVcInstance, covers: list[frozenset[int]]) -> CostBreakdown:
    step = sum(
        inst.vertex_weights[t][v] for t in range(inst.T) for v in covers[t]
    )
    transition = sum(
        inst.transition_weights[t][v]
        for t in range(inst.T - 1)
        for v in range(inst.n)
        if (v in covers[t]) != (v in covers[t + 1])
    )
    return CostBreakdown(step=step, penalty=0.0, transition=transition)


def _check_covers(inst: MsVcInstance, covers: list[frozenset[int]]) -> None:
    for t in range(inst.T):
        for u, v in inst.step_edges[t]:
            if u not in covers[t] and v not in covers[t]:
                raise AssertionError(f"edge ({u},{v}) uncovered at step {t}")


def solve_ms_vertexcover(inst: MsVcInstance) -> RoundedSchedule:
    """Solve the LP, snap to {0, 1/2, 1}, round halves up.

    Covers every step; cost <= 2 * LP optimum on the half-integral path.
    """
    frac = lp_relaxation_solve(inst)
    snapped: list[dict[int, float]] = []
    half_integral = True
    for t in range(inst.T):
        snap_t = {}
        for v in range(inst.n):
            s = _snap(frac.x[t][v])
            if s is None:
                half_integral = False
                break
            snap_t[v] = s
        if not half_integral:
            break
        snapped.append(snap_t)

    flags = []
    if half_integral:
        covers = [
            frozenset(v for v in range(inst.n) if snapped[t][v] >= 0.5)
            for t in range(inst.T)
        ]
        params = {"path": "half_integral", "bound": 2.0}
    else:
        # Off-grid vertex: fall back to threshold rounding (factor 4).
        covers = []
        per_vertex = {
            v: two_threshold_round([frac.x[t][v] for t in range(inst.T)], _FALLBACK)
            for v in range(inst.n)
        }
        for t in range(inst.T):
            covers.append(frozenset(v for v in range(inst.n) if per_vertex[v][t]))
        params = {
            "path": "rs_fallback",
            "alpha": _FALLBACK.alpha,
            "beta": _FALLBACK.beta,
            "bound": 4.0,
        }
        flags.append("half_integrality_violation")

    _check_covers(inst, covers)
    return RoundedSchedule(
        problem="vertexcover",
        chosen=covers,
        breakdown=_covers_cost(inst, covers),
        lp_value=frac.objective,
        params=params,
        flags=flags,
    )
