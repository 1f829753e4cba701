"""JSON instance (de)serialization.

One format per problem, all wrapped in {"problem": tag, "T": ..., ...}.
Sparse per-step edge lists for mincut / vertexcover, dense cost matrices
for the metric problems.  serialize(parse(text)) round-trips to a
semantically identical instance.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import SchemaError, ValidationError
from .mincut import MsCutInstance
from .pcst import MsPcstInstance
from .pctsp import MsPctspInstance
from .setcover import MsScInstance
from .vertexcover import MsVcInstance

PROBLEMS = ("mincut", "vertexcover", "setcover", "pcst", "pctsp")


def _need(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise SchemaError(f"missing key {key!r}", path=path)
    val = obj[key]
    if kind is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise SchemaError(f"{key!r} must be a number", path=path)
        return float(val)
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise SchemaError(f"{key!r} must be an integer", path=path)
        return val
    if not isinstance(val, kind):
        raise SchemaError(f"{key!r} must be {kind.__name__}", path=path)
    return val


def _num_list(raw, path: str) -> tuple[float, ...]:
    if not isinstance(raw, list):
        raise SchemaError("expected a list of numbers", path=path)
    out = []
    for i, v in enumerate(raw):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise SchemaError(f"entry {i} is not a number", path=path)
        out.append(float(v))
    return tuple(out)


def _matrix(raw, n: int, path: str) -> tuple[tuple[float, ...], ...]:
    if not isinstance(raw, list) or len(raw) != n:
        raise SchemaError(f"expected an {n}x{n} matrix", path=path)
    rows = []
    for i, r in enumerate(raw):
        row = _num_list(r, f"{path}[{i}]")
        if len(row) != n:
            raise ValidationError(f"row {i} has length {len(row)}, expected {n}", field=path)
        rows.append(row)
    return tuple(rows)


def _edge_list(raw, path: str, weighted: bool):
    if not isinstance(raw, list):
        raise SchemaError("expected an edge list", path=path)
    out = []
    width = 3 if weighted else 2
    for i, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != width:
            raise SchemaError(f"edge {i} must be a {width}-element list", path=path)
        u, v = e[0], e[1]
        if not isinstance(u, int) or not isinstance(v, int):
            raise SchemaError(f"edge {i} endpoints must be integers", path=path)
        if weighted:
            w = e[2]
            if not isinstance(w, (int, float)) or isinstance(w, bool):
                raise SchemaError(f"edge {i} weight must be a number", path=path)
            out.append((u, v, float(w)))
        else:
            out.append((u, v))
    return tuple(out)


def _steps(obj: dict, T: int, path: str) -> list[dict]:
    steps = _need(obj, "steps", list, path)
    if len(steps) != T:
        raise ValidationError(f"steps has length {len(steps)}, expected T={T}", field="steps")
    for i, s in enumerate(steps):
        if not isinstance(s, dict):
            raise SchemaError(f"step {i} must be an object", path=f"{path}.steps")
    return steps


def _common(obj: dict) -> tuple[int, str | None, dict]:
    T = _need(obj, "T", int, "$")
    iid = obj.get("id")
    if iid is not None and not isinstance(iid, str):
        raise SchemaError("'id' must be a string", path="$")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        raise SchemaError("'meta' must be an object", path="$")
    return T, iid, meta


def _parse_mincut(obj: dict) -> MsCutInstance:
    T, iid, meta = _common(obj)
    n = _need(obj, "n", int, "$")
    steps = _steps(obj, T, "$")
    step_edges = tuple(
        _edge_list(_need(s, "edges", list, f"$.steps[{t}]"), f"$.steps[{t}].edges", True)
        for t, s in enumerate(steps)
    )
    raw_tw = _need(obj, "transition_weights", list, "$")
    tw = tuple(_num_list(r, f"$.transition_weights[{i}]") for i, r in enumerate(raw_tw))
    inst = MsCutInstance(
        T=T,
        n=n,
        source=_need(obj, "source", int, "$"),
        sink=_need(obj, "sink", int, "$"),
        step_edges=step_edges,
        transition_weights=tw,
        id=iid,
        meta=meta,
    )
    inst.validate()
    return inst


def _parse_vertexcover(obj: dict) -> MsVcInstance:
    T, iid, meta = _common(obj)
    n = _need(obj, "n", int, "$")
    steps = _steps(obj, T, "$")
    step_edges = tuple(
        _edge_list(_need(s, "edges", list, f"$.steps[{t}]"), f"$.steps[{t}].edges", False)
        for t, s in enumerate(steps)
    )
    vw = tuple(
        _num_list(_need(s, "vertex_weights", list, f"$.steps[{t}]"), f"$.steps[{t}].vertex_weights")
        for t, s in enumerate(steps)
    )
    raw_tw = _need(obj, "transition_weights", list, "$")
    tw = tuple(_num_list(r, f"$.transition_weights[{i}]") for i, r in enumerate(raw_tw))
    inst = MsVcInstance(
        T=T, n=n, step_edges=step_edges, vertex_weights=vw,
        transition_weights=tw, id=iid, meta=meta,
    )
    inst.validate()
    return inst


def _parse_setcover(obj: dict) -> MsScInstance:
    T, iid, meta = _common(obj)
    m = _need(obj, "m", int, "$")
    steps = _steps(obj, T, "$")
    ground, sets, weights = [], [], []
    for t, s in enumerate(steps):
        g = _need(s, "ground", list, f"$.steps[{t}]")
        if not all(isinstance(e, int) for e in g):
            raise SchemaError("ground elements must be integers", path=f"$.steps[{t}].ground")
        ground.append(tuple(g))
        raw_sets = _need(s, "sets", list, f"$.steps[{t}]")
        if len(raw_sets) != m:
            raise ValidationError(
                f"step {t} has {len(raw_sets)} sets, expected m={m}", field=f"steps[{t}].sets"
            )
        step_sets = []
        for i, members in enumerate(raw_sets):
            if not isinstance(members, list) or not all(isinstance(e, int) for e in members):
                raise SchemaError(f"set {i} must be a list of integers", path=f"$.steps[{t}].sets")
            step_sets.append(frozenset(members))
        sets.append(tuple(step_sets))
        weights.append(
            _num_list(_need(s, "weights", list, f"$.steps[{t}]"), f"$.steps[{t}].weights")
        )
    inst = MsScInstance(
        T=T,
        m=m,
        step_ground=tuple(ground),
        step_sets=tuple(sets),
        step_weights=tuple(weights),
        penalties=_num_list(_need(obj, "penalties", list, "$"), "$.penalties"),
        id=iid,
        meta=meta,
    )
    inst.validate()
    return inst


def _parse_metric(obj: dict, cls, anchor: str):
    T, iid, meta = _common(obj)
    n = _need(obj, "n", int, "$")
    steps = _steps(obj, T, "$")
    costs, penalties = [], []
    for t, s in enumerate(steps):
        costs.append(_matrix(_need(s, "costs", list, f"$.steps[{t}]"), n, f"$.steps[{t}].costs"))
        pen = _num_list(_need(s, "penalties", list, f"$.steps[{t}]"), f"$.steps[{t}].penalties")
        if len(pen) != n:
            raise ValidationError(
                f"penalties has length {len(pen)}, expected n={n}", field=f"steps[{t}].penalties"
            )
        penalties.append(pen)
    tw = _num_list(_need(obj, "transition_weights", list, "$"), "$.transition_weights")
    if len(tw) != n:
        raise ValidationError(
            f"transition_weights has length {len(tw)}, expected n={n}",
            field="transition_weights",
        )
    inst = cls(
        T=T,
        n=n,
        **{anchor: _need(obj, anchor, int, "$")},
        step_costs=tuple(costs),
        step_penalties=tuple(penalties),
        transition_weights=tw,
        id=iid,
        meta=meta,
    )
    inst.validate()
    return inst


def parse_instance(text: str):
    """Parse and validate a JSON instance of any supported problem."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    problem = _need(obj, "problem", str, "$")
    if problem == "mincut":
        return _parse_mincut(obj)
    if problem == "vertexcover":
        return _parse_vertexcover(obj)
    if problem == "setcover":
        return _parse_setcover(obj)
    if problem == "pcst":
        return _parse_metric(obj, MsPcstInstance, "root")
    if problem == "pctsp":
        return _parse_metric(obj, MsPctspInstance, "depot")
    raise SchemaError(f"unknown problem tag {problem!r}", path="$.problem")


def instance_to_dict(inst) -> dict[str, Any]:
    base: dict[str, Any] = {"T": inst.T}
    if inst.id is not None:
        base["id"] = inst.id
    if inst.meta:
        base["meta"] = inst.meta
    if isinstance(inst, MsCutInstance):
        base.update(
            problem="mincut",
            n=inst.n,
            source=inst.source,
            sink=inst.sink,
            steps=[{"edges": [list(e) for e in edges]} for edges in inst.step_edges],
            transition_weights=[list(r) for r in inst.transition_weights],
        )
    elif isinstance(inst, MsVcInstance):
        base.update(
            problem="vertexcover",
            n=inst.n,
            steps=[
                {"edges": [list(e) for e in inst.step_edges[t]],
                 "vertex_weights": list(inst.vertex_weights[t])}
                for t in range(inst.T)
            ],
            transition_weights=[list(r) for r in inst.transition_weights],
        )
    elif isinstance(inst, MsScInstance):
        base.update(
            problem="setcover",
            m=inst.m,
            steps=[
                {"ground": list(inst.step_ground[t]),
                 "sets": [sorted(s) for s in inst.step_sets[t]],
                 "weights": list(inst.step_weights[t])}
                for t in range(inst.T)
            ],
            penalties=list(inst.penalties),
        )
    elif isinstance(inst, (MsPcstInstance, MsPctspInstance)):
        tag = "pcst" if isinstance(inst, MsPcstInstance) else "pctsp"
        anchor = "root" if tag == "pcst" else "depot"
        base.update(
            problem=tag,
            n=inst.n,
            steps=[
                {"costs": [list(r) for r in inst.step_costs[t]],
                 "penalties": list(inst.step_penalties[t])}
                for t in range(inst.T)
            ],
            transition_weights=list(inst.transition_weights),
        )
        base[anchor] = getattr(inst, anchor)
    else:
        raise TypeError(f"unsupported instance type {type(inst)!r}")
    return base


def serialize_instance(inst) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, sort_keys=True)
