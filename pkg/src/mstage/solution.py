"""Result containers shared by every problem module."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CostBreakdown:
    """Structural cost per step, penalty cost and transition cost."""

    step: float
    penalty: float
    transition: float

    @property
    def total(self) -> float:
        return self.step + self.penalty + self.transition

    def as_dict(self) -> dict[str, float]:
        return {
            "step": self.step,
            "penalty": self.penalty,
            "transition": self.transition,
            "total": self.total,
        }


@dataclass(frozen=True)
class FractionalSolution:
    """Per-step fractional vectors from an LP relaxation.

    x holds the structural variables (edge or set selections), s the
    connection variables where the problem has them, z the transition
    variables.  Each is a list with one dict per step (z has T-1 entries).
    """

    objective: float
    x: tuple[dict, ...]
    s: tuple[dict, ...] = ()
    z: tuple[dict, ...] = ()

    def all_s_values(self) -> list[float]:
        return [v for step in self.s for v in step.values()]


@dataclass
class RoundedSchedule:
    """Per-step binary decisions plus realized structures and costs.

    `chosen` holds one frozenset of selected ids per step (cut source
    side, cover vertices, chosen sets, connected vertices, visited
    vertices).  `structures` holds the realized object per step where one
    exists (tree edge lists, tours); None otherwise.
    """

    problem: str
    chosen: list[frozenset]
    breakdown: CostBreakdown
    structures: list | None = None
    lp_value: float | None = None
    params: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def cost(self) -> float:
        return self.breakdown.total


@dataclass
class SolveReport:
    """Everything the CLI writes about one solve."""

    instance_id: str
    problem: str
    algorithm: str
    mode: str
    lp_value: float | None
    cost: float
    breakdown: CostBreakdown
    params: dict
    flags: list[str]
    ratio_vs_lp: float | None = None
    oracle_value: float | None = None
    ratio_vs_oracle: float | None = None
    wall_time_s: float = 0.0

    @staticmethod
    def ratio(cost: float, reference: float | None) -> float | None:
        """cost / reference, treating a ~zero reference with ~zero cost as 1."""
        if reference is None:
            return None
        if abs(reference) < 1e-12:
            return 1.0 if abs(cost) < 1e-9 else float("inf")
        return cost / reference

    @classmethod
    def from_schedule(
        cls,
        instance_id: str,
        schedule: RoundedSchedule,
        algorithm: str,
        mode: str,
        oracle_value: float | None = None,
        wall_time_s: float = 0.0,
    ) -> "SolveReport":
        return cls(
            instance_id=instance_id,
            problem=schedule.problem,
            algorithm=algorithm,
            mode=mode,
            lp_value=schedule.lp_value,
            cost=schedule.cost,
            breakdown=schedule.breakdown,
            params=dict(schedule.params),
            flags=list(schedule.flags),
            ratio_vs_lp=cls.ratio(schedule.cost, schedule.lp_value),
            oracle_value=oracle_value,
            ratio_vs_oracle=cls.ratio(schedule.cost, oracle_value),
            wall_time_s=wall_time_s,
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "instance_id": self.instance_id,
            "problem": self.problem,
            "algorithm": self.algorithm,
            "mode": self.mode,
            "lp_value": self.lp_value,
            "cost": self.cost,
            "breakdown": self.breakdown.as_dict(),
            "params": self.params,
            "flags": self.flags,
            "ratio_vs_lp": self.ratio_vs_lp,
            "oracle_value": self.oracle_value,
            "ratio_vs_oracle": self.ratio_vs_oracle,
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)
