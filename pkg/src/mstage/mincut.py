"""Multistage minimum s-p cut, solved exactly via a time-expanded graph.

The T per-step graphs are stacked into one static graph: each vertex gets
one copy per step, copies of the same vertex in consecutive steps are
joined by an edge carrying that vertex's transition weight, and two super
terminals pin every step's s (resp. p) copy to the source (resp. sink)
side through edges of effectively infinite weight.  A single min cut of
the stacked graph then prices every per-step cut plus every side switch,
so the multistage optimum is recovered exactly in polynomial time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .graphs import CutResult, Graph, min_st_cut
from .solution import CostBreakdown, RoundedSchedule


@dataclass(frozen=True)
class MsCutInstance:
    """Shared vertex set, per-step edge lists, per-vertex transition weights.

    transition_weights[t][v] is the price of vertex v switching sides
    between steps t and t+1 (T-1 boundaries).
    """

    T: int
    n: int
    source: int
    sink: int
    step_edges: tuple[tuple[tuple[int, int, float], ...], ...]
    transition_weights: tuple[tuple[float, ...], ...]
    id: str | None = None
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.T < 1:
            raise ValidationError("T must be >= 1", field="T")
        if self.source == self.sink:
            raise ValidationError("source and sink must differ", field="sink")
        for name, v in (("source", self.source), ("sink", self.sink)):
            if not (0 <= v < self.n):
                raise ValidationError(f"{name} {v} out of range", field=name)
        if len(self.step_edges) != self.T:
            raise ValidationError(
                f"expected {self.T} step edge lists, got {len(self.step_edges)}",
                field="steps",
            )
        for t, edges in enumerate(self.step_edges):
            for u, v, w in edges:
                if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                    raise ValidationError(f"bad edge ({u},{v})", field=f"steps[{t}].edges")
                if w < 0:
                    raise ValidationError("negative edge cost", field=f"steps[{t}].edges")
        if len(self.transition_weights) != self.T - 1:
            raise ValidationError(
                f"expected {self.T - 1} transition weight rows",
                field="transition_weights",
            )
        for t, rw in enumerate(self.transition_weights):
            if len(rw) != self.n:
                raise ValidationError(
                    f"row {t} has {len(rw)} weights, expected {self.n}",
                    field="transition_weights",
                )
            if any(w < 0 for w in rw):
                raise ValidationError("negative transition weight", field="transition_weights")


@dataclass(frozen=True)
class TimeExpandedGraph:
    graph: Graph
    super_source: int
    super_sink: int
    n: int
    T: int
    inf_weight: float

    def node(self, t: int, v: int) -> int:
        return t * self.n + v


def build_time_expanded_graph(inst: MsCutInstance) -> TimeExpandedGraph:
    """Stack the per-step graphs; vertex count is n*T + 2.

    The "infinite" terminal edges use a finite sentinel larger than four
    times the total finite weight, so they can never be part of a minimum
    cut yet sums stay far from overflow.
    """
    inst.validate()
    n, T = inst.n, inst.T
    total = sum(w for edges in inst.step_edges for _, _, w in edges)
    total += sum(w for rw in inst.transition_weights for w in rw)
    inf_weight = 4 * total + 1
    edges: list[tuple[int, int, float]] = []
    for t in range(T):
        for u, v, w in inst.step_edges[t]:
            edges.append((t * n + u, t * n + v, w))
    for t in range(T - 1):
        for v in range(n):
            edges.append((t * n + v, (t + 1) * n + v, inst.transition_weights[t][v]))
    s_super = n * T
    t_super = n * T + 1
    for t in range(T):
        edges.append((s_super, t * n + inst.source, inf_weight))
        edges.append((t * n + inst.sink, t_super, inf_weight))
    graph = Graph.from_edges(n * T + 2, edges)
    return TimeExpandedGraph(
        graph=graph,
        super_source=s_super,
        super_sink=t_super,
        n=n,
        T=T,
        inf_weight=inf_weight,
    )


def schedule_cost(inst: MsCutInstance, sides: list[frozenset[int]]) -> CostBreakdown:
    """Price a sequence of source-side sets directly against the instance."""
    step = 0.0
    for t, edges in enumerate(inst.step_edges):
        side = sides[t]
        step += sum(w for u, v, w in edges if (u in side) != (v in side))
    transition = 0.0
    for t in range(inst.T - 1):
        for v in range(inst.n):
            if (v in sides[t]) != (v in sides[t + 1]):
                transition += inst.transition_weights[t][v]
    return CostBreakdown(step=step, penalty=0.0, transition=transition)


def solve_ms_mincut(inst: MsCutInstance) -> RoundedSchedule:
    """Exact optimum: min cut of the time-expanded graph.

    Returns the per-step source sides; the reported cost is recomputed
    from the instance and equals the cut value.
    """
    te = build_time_expanded_graph(inst)
    cut: CutResult = min_st_cut(te.graph, te.super_source, te.super_sink)
    sides = []
    for t in range(inst.T):
        side = frozenset(v for v in range(inst.n) if te.node(t, v) in cut.source_side)
        sides.append(side)
    breakdown = schedule_cost(inst, sides)
    return RoundedSchedule(
        problem="mincut",
        chosen=sides,
        breakdown=breakdown,
        lp_value=cut.value,
        params={"algorithm": "time_expanded_mincut", "exact": True},
    )
