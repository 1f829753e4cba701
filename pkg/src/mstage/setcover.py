"""Multistage f-set cover via two-threshold rounding (factor 2f).

f is the maximum number of sets any element belongs to, taken over all
steps.  Solving the covering LP and rounding each set's fractional
time series with thresholds alpha=1/f, beta=1/(2f) keeps every element
covered (some covering set carries at least 1/f by pigeonhole) and blows
up the step-weight and transition parts of the objective by at most 2f
each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lp
from .errors import UncoverableElement, ValidationError
from .rounding import RoundingParams, two_threshold_round
from .solution import CostBreakdown, FractionalSolution, RoundedSchedule


@dataclass(frozen=True)
class MsScInstance:
    """Per-step memberships; both sets and the ground set may change."""

    T: int
    m: int
    step_ground: tuple[tuple[int, ...], ...]
    step_sets: tuple[tuple[frozenset[int], ...], ...]
    step_weights: tuple[tuple[float, ...], ...]
    penalties: tuple[float, ...]
    id: str | None = None
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.T < 1:
            raise ValidationError("T must be >= 1", field="T")
        for name, seq in (
            ("ground", self.step_ground),
            ("sets", self.step_sets),
            ("weights", self.step_weights),
        ):
            if len(seq) != self.T:
                raise ValidationError(f"need one {name} block per step", field=name)
        if len(self.penalties) != self.m:
            raise ValidationError("one penalty per set required", field="penalties")
        if any(p < 0 for p in self.penalties):
            raise ValidationError("negative penalty", field="penalties")
        for t in range(self.T):
            if len(self.step_sets[t]) != self.m:
                raise ValidationError("set count != m", field=f"steps[{t}].sets")
            if len(self.step_weights[t]) != self.m:
                raise ValidationError("weight count != m", field=f"steps[{t}].weights")
            if any(w < 0 for w in self.step_weights[t]):
                raise ValidationError("negative set weight", field=f"steps[{t}].weights")
            for e in self.step_ground[t]:
                if not any(e in s for s in self.step_sets[t]):
                    raise UncoverableElement(
                        f"element {e} belongs to no set at step {t}"
                    )


def frequency(inst: MsScInstance) -> int:
    """Max number of sets containing any single element, over all steps."""
    inst.validate()
    f = 0
    for t in range(inst.T):
        for e in inst.step_ground[t]:
            f = max(f, sum(1 for s in inst.step_sets[t] if e in s))
    return f


def build_lp(inst: MsScInstance) -> tuple[lp.LpModel, dict]:
    x_idx, z_idx = {}, {}
    k = 0
    for t in range(inst.T):
        for i in range(inst.m):
            x_idx[(t, i)] = k
            k += 1
    for t in range(inst.T - 1):
        for i in range(inst.m):
            z_idx[(t, i)] = k
            k += 1
    obj = [0.0] * k
    for (t, i), j in x_idx.items():
        obj[j] = inst.step_weights[t][i]
    for (t, i), j in z_idx.items():
        obj[j] = inst.penalties[i]
    rows = []
    for t in range(inst.T):
        for e in sorted(set(inst.step_ground[t])):
            covering = [(x_idx[(t, i)], 1.0) for i in range(inst.m) if e in inst.step_sets[t][i]]
            rows.append(lp.row(covering, ">=", 1.0))
    for t in range(inst.T - 1):
        for i in range(inst.m):
            a, b, z = x_idx[(t, i)], x_idx[(t + 1, i)], z_idx[(t, i)]
            rows.append(lp.row([(z, 1.0), (a, -1.0), (b, 1.0)], ">=", 0.0))
            rows.append(lp.row([(z, 1.0), (a, 1.0), (b, -1.0)], ">=", 0.0))
    return lp.LpModel.build(k, obj, rows), {"x": x_idx, "z": z_idx}


def lp_relaxation_solve(inst: MsScInstance) -> FractionalSolution:
    inst.validate()
    model, idx = build_lp(inst)
    sol = lp.solve_lp(model)
    xs = tuple(
        {i: sol.values[idx["x"][(t, i)]] for i in range(inst.m)} for t in range(inst.T)
    )
    zs = tuple(
        {i: sol.values[idx["z"][(t, i)]] for i in range(inst.m)}
        for t in range(inst.T - 1)
    )
    return FractionalSolution(objective=sol.objective_value, x=xs, z=zs)


def _chosen_cost(inst: MsScInstance, chosen: list[frozenset[int]]) -> CostBreakdown:
    step = sum(inst.step_weights[t][i] for t in range(inst.T) for i in chosen[t])
    transition = sum(
        inst.penalties[i]
        for t in range(inst.T - 1)
        for i in range(inst.m)
        if (i in chosen[t]) != (i in chosen[t + 1])
    )
    return CostBreakdown(step=step, penalty=0.0, transition=transition)


def solve_ms_setcover(inst: MsScInstance) -> RoundedSchedule:
    """LP plus per-set two-threshold rounding with alpha=1/f, beta=1/(2f)."""
    f = frequency(inst)
    frac = lp_relaxation_solve(inst)
    params = RoundingParams(alpha=1.0 / f, beta=1.0 / (2.0 * f))
    per_set = {
        i: two_threshold_round([frac.x[t][i] for t in range(inst.T)], params)
        for i in range(inst.m)
    }
    chosen = [
        frozenset(i for i in range(inst.m) if per_set[i][t]) for t in range(inst.T)
    ]
    for t in range(inst.T):
        for e in inst.step_ground[t]:
            if not any(e in inst.step_sets[t][i] for i in chosen[t]):
                raise AssertionError(f"element {e} uncovered at step {t}")
    return RoundedSchedule(
        problem="setcover",
        chosen=chosen,
        breakdown=_chosen_cost(inst, chosen),
        lp_value=frac.objective,
        params={"f": f, "alpha": params.alpha, "beta": params.beta, "bound": 2.0 * f},
    )
