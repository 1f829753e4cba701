"""Command line driver: solve / oracle / gen / bench.

Exit codes: 0 success, 2 validation or usage error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import instance_io, oracle as oracle_mod
from .errors import (
    InstanceTooLarge,
    MstageError,
    NumericalFailure,
    RoundLimitExceeded,
    SchemaError,
    UncoverableElement,
    ValidationError,
)
from .mincut import MsCutInstance, solve_ms_mincut
from .pcst import MsPcstInstance, solve_ms_pcst
from .pctsp import MsPctspInstance, solve_ms_pctsp
from .setcover import MsScInstance, solve_ms_setcover
from .solution import RoundedSchedule, SolveReport
from .vertexcover import MsVcInstance, solve_ms_vertexcover
from .generator import generate_instance

_PROBLEM_OF = {
    MsCutInstance: "mincut",
    MsVcInstance: "vertexcover",
    MsScInstance: "setcover",
    MsPcstInstance: "pcst",
    MsPctspInstance: "pctsp",
}

_DEFAULT_MODE = {
    "mincut": "exact",
    "vertexcover": "half_integral",
    "setcover": "rs",
    "pcst": "fixed",
    "pctsp": "fixed",
}

CSV_COLUMNS = [
    "instance",
    "problem",
    "T",
    "size",
    "algorithm",
    "mode",
    "alpha",
    "beta",
    "gamma",
    "lp_value",
    "cost_total",
    "cost_step",
    "cost_penalty",
    "cost_transition",
    "ratio_vs_lp",
    "oracle_value",
    "ratio_vs_oracle",
    "bound",
    "within_bound",
    "flags",
    "wall_time_s",
]


def _solve_dispatch(inst, mode: str, matching: str) -> tuple[RoundedSchedule, str]:
    if isinstance(inst, MsCutInstance):
        return solve_ms_mincut(inst), "time_expanded_mincut"
    if isinstance(inst, MsVcInstance):
        return solve_ms_vertexcover(inst), "half_integral_lp"
    if isinstance(inst, MsScInstance):
        return solve_ms_setcover(inst), "rs_msc"
    if isinstance(inst, MsPcstInstance):
        return solve_ms_pcst(inst, mode=mode), "rs_mpcst"
    if isinstance(inst, MsPctspInstance):
        return solve_ms_pctsp(inst, mode=mode, matching=matching), "rs_mpctsp"
    raise TypeError(f"unsupported instance type {type(inst)!r}")


def _instance_size(inst) -> int:
    return inst.m if isinstance(inst, MsScInstance) else inst.n


def _oracle_value(inst) -> float | None:
    try:
        return oracle_mod.brute_force_schedule(inst).cost
    except InstanceTooLarge:
        return None


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _report_row(inst, report: SolveReport) -> dict:
    params = report.params
    bound = params.get("bound")
    within = None
    if bound is not None and report.lp_value is not None:
        within = report.cost <= bound * max(report.lp_value, 0.0) + 1e-6
    return {
        "instance": report.instance_id,
        "problem": report.problem,
        "T": inst.T,
        "size": _instance_size(inst),
        "algorithm": report.algorithm,
        "mode": report.mode,
        "alpha": params.get("alpha"),
        "beta": params.get("beta"),
        "gamma": params.get("gamma"),
        "lp_value": report.lp_value,
        "cost_total": report.cost,
        "cost_step": report.breakdown.step,
        "cost_penalty": report.breakdown.penalty,
        "cost_transition": report.breakdown.transition,
        "ratio_vs_lp": report.ratio_vs_lp,
        "oracle_value": report.oracle_value,
        "ratio_vs_oracle": report.ratio_vs_oracle,
        "bound": bound,
        "within_bound": within,
        "flags": "|".join(report.flags),
        "wall_time_s": report.wall_time_s,
    }


def _cmd_solve(args) -> int:
    text = Path(args.infile).read_text(encoding="utf-8")
    inst = instance_io.parse_instance(text)
    problem = _PROBLEM_OF[type(inst)]
    if args.problem and args.problem != problem:
        raise ValidationError(
            f"file contains a {problem!r} instance, not {args.problem!r}", field="problem"
        )
    mode = args.mode or _DEFAULT_MODE[problem]
    start = time.perf_counter()
    schedule, algorithm = _solve_dispatch(inst, mode, args.matching)
    elapsed = time.perf_counter() - start
    oracle_value = _oracle_value(inst) if args.with_oracle else None
    report = SolveReport.from_schedule(
        instance_id=inst.id or Path(args.infile).stem,
        schedule=schedule,
        algorithm=algorithm,
        mode=schedule.params.get("mode", mode),
        oracle_value=oracle_value,
        wall_time_s=elapsed,
    )
    out = report.to_json()
    if args.out:
        Path(args.out).write_text(out + "\n", encoding="utf-8")
    else:
        print(out)
    print(
        f"{report.instance_id}: cost={report.cost:.6g} lp={_fmt(report.lp_value)} "
        f"ratio_vs_lp={_fmt(report.ratio_vs_lp)}",
        file=sys.stderr,
    )
    return 0


def _cmd_oracle(args) -> int:
    text = Path(args.infile).read_text(encoding="utf-8")
    inst = instance_io.parse_instance(text)
    start = time.perf_counter()
    schedule = oracle_mod.brute_force_schedule(inst)
    elapsed = time.perf_counter() - start
    report = SolveReport.from_schedule(
        instance_id=inst.id or Path(args.infile).stem,
        schedule=schedule,
        algorithm="brute_force",
        mode="exact",
        wall_time_s=elapsed,
    )
    out = report.to_json()
    if args.out:
        Path(args.out).write_text(out + "\n", encoding="utf-8")
    else:
        print(out)
    return 0


def _cmd_gen(args) -> int:
    inst = generate_instance(args.problem, args.n, args.T, args.seed, args.volatility)
    text = instance_io.serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _bench_modes(problem: str) -> list[str]:
    if problem in ("pcst", "pctsp"):
        return ["fixed", "derandomized"]
    return [_DEFAULT_MODE[problem]]


def _cmd_bench(args) -> int:
    corpus = sorted(Path(args.corpus).glob("*.json"))
    if not corpus:
        raise ValidationError(f"no .json instances under {args.corpus}", field="corpus")
    rows = []
    for path in corpus:
        inst = instance_io.parse_instance(path.read_text(encoding="utf-8"))
        problem = _PROBLEM_OF[type(inst)]
        oracle_value = _oracle_value(inst) if not args.no_oracle else None
        for mode in _bench_modes(problem):
            start = time.perf_counter()
            schedule, algorithm = _solve_dispatch(inst, mode, args.matching)
            elapsed = time.perf_counter() - start
            report = SolveReport.from_schedule(
                instance_id=inst.id or path.stem,
                schedule=schedule,
                algorithm=algorithm,
                mode=schedule.params.get("mode", mode),
                oracle_value=oracle_value,
                wall_time_s=elapsed,
            )
            rows.append(_report_row(inst, report))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _fmt(v) for k, v in r.items()})
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mstage",
        description="Solvers for multistage combinatorial minimization problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("--problem", choices=instance_io.PROBLEMS)
    p_solve.add_argument("--mode", help="fixed or derandomized (pcst/pctsp)")
    p_solve.add_argument("--in", dest="infile", required=True)
    p_solve.add_argument("--out")
    p_solve.add_argument("--matching", choices=["exact", "greedy"], default="exact")
    p_solve.add_argument("--with-oracle", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_oracle = sub.add_parser("oracle", help="brute-force optimum of an instance file")
    p_oracle.add_argument("--problem", choices=instance_io.PROBLEMS)
    p_oracle.add_argument("--in", dest="infile", required=True)
    p_oracle.add_argument("--out")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--problem", choices=instance_io.PROBLEMS, required=True)
    p_gen.add_argument("--n", type=int, required=True, help="vertices (or sets)")
    p_gen.add_argument("--T", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--volatility", type=float, default=0.3)
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser("bench", help="run all algorithms over a corpus directory")
    p_bench.add_argument("--corpus", required=True)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--matching", choices=["exact", "greedy"], default="exact")
    p_bench.add_argument("--no-oracle", action="store_true")
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (SchemaError, ValidationError, UncoverableElement, InstanceTooLarge, ValueError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return 2
    except (NumericalFailure, RoundLimitExceeded, MstageError) as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
