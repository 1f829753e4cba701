"""Exact LP solving for the relaxations used by the solvers.

A bounded-variable two-phase primal simplex returning basic (vertex)
optimal solutions, plus a cutting-plane driver fed by problem-specific
separation oracles.  The solver runs in double precision and re-solves
with exact rational arithmetic when the float path trips its cycling
guard or fails post-solve verification; both paths share one code body.

Pivot rule: Dantzig for a fixed number of iterations, then Bland (which
guarantees termination under exact arithmetic).  Ties always break toward
the lowest variable index, so repeated solves are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import MalformedModel, NumericalFailure, RoundLimitExceeded

Relation = str  # ">=", "<=" or "="
_RELATIONS = (">=", "<=", "=")

# Iterations of Dantzig pricing before switching to Bland's rule.
_DANTZIG_ITERS = 400
# Column entries below this magnitude are not eligible pivots.
_PIV_EPS = 1e-10


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances; all zero on the exact (rational) path."""

    feasibility: float = 1e-7
    bounds: float = 1e-9
    reduced_cost: float = 1e-9
    separation: float = 1e-6


@dataclass(frozen=True)
class LpRow:
    """Sparse constraint: sum(coef * x[idx]) relation rhs."""

    coeffs: tuple[tuple[int, float], ...]
    relation: Relation
    rhs: float

    def key(self) -> tuple:
        return (self.coeffs, self.relation, self.rhs)

    def evaluate(self, values: Sequence[float]) -> float:
        return sum(c * values[i] for i, c in self.coeffs)


def row(coeffs: Iterable[tuple[int, float]], relation: Relation, rhs: float) -> LpRow:
    """Build a canonical LpRow (indices sorted, zero coefficients dropped)."""
    clean = tuple(sorted((int(i), float(c)) for i, c in coeffs if c != 0.0))
    return LpRow(coeffs=clean, relation=relation, rhs=float(rhs))


@dataclass(frozen=True)
class LpModel:
    """Minimization LP with per-variable bounds.

    Bounds default to [0, 1]; an upper bound of None means +infinity.
    `objective_offset` is a constant added to the reported objective value
    (used for penalty terms of the form pi * (1 - s)).
    """

    n_vars: int
    objective: tuple[float, ...]
    rows: tuple[LpRow, ...]
    bounds: tuple[tuple[float, float | None], ...]
    objective_offset: float = 0.0

    @staticmethod
    def build(
        n_vars: int,
        objective: Sequence[float],
        rows: Iterable[LpRow],
        bounds: Sequence[tuple[float, float | None]] | None = None,
        objective_offset: float = 0.0,
    ) -> "LpModel":
        if bounds is None:
            bounds = [(0.0, 1.0)] * n_vars
        model = LpModel(
            n_vars=n_vars,
            objective=tuple(float(c) for c in objective),
            rows=tuple(rows),
            bounds=tuple((float(lo), None if hi is None else float(hi)) for lo, hi in bounds),
            objective_offset=float(objective_offset),
        )
        model.validate()
        return model

    def validate(self) -> None:
        if len(self.objective) != self.n_vars:
            raise MalformedModel(
                f"objective length {len(self.objective)} != n_vars {self.n_vars}"
            )
        if len(self.bounds) != self.n_vars:
            raise MalformedModel(
                f"bounds length {len(self.bounds)} != n_vars {self.n_vars}"
            )
        for j, (lo, hi) in enumerate(self.bounds):
            if not math.isfinite(lo):
                raise MalformedModel(f"variable {j}: lower bound must be finite")
            if hi is not None and lo > hi:
                raise MalformedModel(f"variable {j}: lo {lo} > hi {hi}")
        for k, r in enumerate(self.rows):
            if r.relation not in _RELATIONS:
                raise MalformedModel(f"row {k}: bad relation {r.relation!r}")
            for i, c in r.coeffs:
                if not (0 <= i < self.n_vars):
                    raise MalformedModel(f"row {k}: coefficient references variable {i}")
                if not math.isfinite(c):
                    raise MalformedModel(f"row {k}: non-finite coefficient")
            if not math.isfinite(r.rhs):
                raise MalformedModel(f"row {k}: non-finite rhs")

    def with_rows(self, extra: Iterable[LpRow]) -> "LpModel":
        return replace(self, rows=self.rows + tuple(extra))

    def lp_text(self) -> str:
        """Human-readable dump, one row per line, for external cross-checks."""

        def term(c, j):
            return f"{c:+g} x{j}"

        lines = ["min: " + " ".join(term(c, j) for j, c in enumerate(self.objective))]
        if self.objective_offset:
            lines[0] += f" {self.objective_offset:+g}"
        for k, r in enumerate(self.rows):
            body = " ".join(term(c, j) for j, c in r.coeffs)
            lines.append(f"r{k}: {body} {r.relation} {r.rhs:g}")
        for j, (lo, hi) in enumerate(self.bounds):
            hs = "inf" if hi is None else f"{hi:g}"
            lines.append(f"bound: {lo:g} <= x{j} <= {hs}")
        return "\n".join(lines)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal", "infeasible" or "unbounded"
    values: tuple[float, ...] | None
    objective_value: float | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


# A separation oracle maps candidate values to (violated row, magnitude)
# pairs; returned rows must be valid for the full constraint family.
SeparationOracle = Callable[[Sequence[float]], list[tuple[LpRow, float]]]

_LO, _HI, _BASIC = 0, 1, 2


class _Simplex:
    """One solve on the standard form min c'x, Ax = b, lo <= x <= hi."""

    def __init__(self, model: LpModel, tols: Tolerances, exact: bool):
        self.exact = exact
        self.tols = tols
        self.n = model.n_vars
        self.model = model
        num = Fraction if exact else float
        self._num = num
        self.zero = num(0)

        m = len(model.rows)
        self.m0 = m
        n_slack = sum(1 for r in model.rows if r.relation != "=")
        self.art_start = self.n + n_slack
        ncols = self.art_start + m
        self.ncols = ncols

        self.lo: list = [num(b[0]) for b in model.bounds]
        self.hi: list = [None if b[1] is None else num(b[1]) for b in model.bounds]
        self.lo += [self.zero] * (n_slack + m)
        self.hi += [None] * (n_slack + m)

        # Dense row-major constraint matrix with slack and artificial columns.
        dense = [[self.zero] * (ncols + 1) for _ in range(m)]
        slack_col = self.n
        for i, r in enumerate(model.rows):
            for j, c in r.coeffs:
                dense[i][j] = num(c)
            if r.relation == "<=":
                dense[i][slack_col] = num(1)
                slack_col += 1
            elif r.relation == ">=":
                dense[i][slack_col] = num(-1)
                slack_col += 1
            dense[i][ncols] = num(r.rhs)

        # Start: every variable nonbasic at its lower bound.
        self.status = [_LO] * ncols
        residual = []
        for i in range(m):
            acc = dense[i][ncols]
            for j in range(self.art_start):
                if dense[i][j] != 0 and self.lo[j] != 0:
                    acc -= dense[i][j] * self.lo[j]
            residual.append(acc)
        self.basis: list[int] = []
        for i in range(m):
            sign = num(1) if residual[i] >= 0 else num(-1)
            dense[i][self.art_start + i] = sign
            if sign < 0:
                dense[i] = [-v for v in dense[i]]
            a = self.art_start + i
            self.basis.append(a)
            self.status[a] = _BASIC

        if exact:
            self.T: list = dense
        else:
            self.T = np.array(dense, dtype=np.float64) if m else np.zeros((0, ncols + 1))

        self.iteration_cap = max(1000, 40 * (m + ncols))

    # -- generic helpers ------------------------------------------------

    def _nrows(self) -> int:
        return len(self.basis)

    def _basic_values(self) -> list:
        m = self._nrows()
        if not self.exact:
            xb = self.T[:, -1].copy()
            for j in range(self.ncols):
                if self.status[j] == _LO:
                    v = self.lo[j]
                elif self.status[j] == _HI:
                    v = self.hi[j]
                else:
                    continue
                if v != 0:
                    xb -= self.T[:, j] * v
            return list(xb)
        xb = [self.T[i][self.ncols] for i in range(m)]
        for j in range(self.ncols):
            if self.status[j] == _LO:
                v = self.lo[j]
            elif self.status[j] == _HI:
                v = self.hi[j]
            else:
                continue
            if v != 0:
                for i in range(m):
                    if self.T[i][j] != 0:
                        xb[i] -= self.T[i][j] * v
        return xb

    def _reduced_costs(self, costs: list) -> list:
        if not self.exact:
            cb = np.array([costs[v] for v in self.basis], dtype=np.float64)
            z = cb @ self.T[:, : self.ncols] if self._nrows() else np.zeros(self.ncols)
            return list(np.asarray(costs, dtype=np.float64) - z)
        d = list(costs)
        for p, v in enumerate(self.basis):
            cb = costs[v]
            if cb != 0:
                rowp = self.T[p]
                for j in range(self.ncols):
                    if rowp[j] != 0:
                        d[j] -= cb * rowp[j]
        return d

    def _pivot(self, p: int, q: int) -> None:
        if not self.exact:
            piv = self.T[p, q]
            self.T[p] = self.T[p] / piv
            col = self.T[:, q].copy()
            col[p] = 0.0
            self.T -= np.outer(col, self.T[p])
            self.T[:, q] = 0.0
            self.T[p, q] = 1.0
        else:
            piv = self.T[p][q]
            self.T[p] = [v / piv for v in self.T[p]]
            rowp = self.T[p]
            for i in range(self._nrows()):
                if i == p:
                    continue
                f = self.T[i][q]
                if f != 0:
                    self.T[i] = [a - f * b for a, b in zip(self.T[i], rowp)]

    def _entry(self, i: int, j: int):
        return self.T[i][j] if self.exact else self.T[i, j]

    # -- simplex iterations ----------------------------------------------

    def _choose_entering(self, d: list, iteration: int, barred_from: int):
        rc_tol = self.zero if self.exact else self.tols.reduced_cost
        bland = iteration > _DANTZIG_ITERS
        best_j, best_dir, best_score = None, 0, None
        for j in range(self.ncols):
            st = self.status[j]
            if st == _BASIC or j >= barred_from:
                continue
            if self.hi[j] is not None and self.lo[j] == self.hi[j]:
                continue
            dj = d[j]
            if st == _LO and dj < -rc_tol:
                direction, score = 1, -dj
            elif st == _HI and dj > rc_tol:
                direction, score = -1, dj
            else:
                continue
            if bland:
                return j, direction
            if best_score is None or score > best_score:
                best_j, best_dir, best_score = j, direction, score
        return (best_j, best_dir) if best_j is not None else (None, 0)

    def _ratio_test(self, q: int, direction: int, xb: list):
        """Return (step, leaving row or None, side the leaver hits)."""
        piv_eps = self.zero if self.exact else _PIV_EPS
        tie = self.zero if self.exact else 1e-12
        inf = None  # None stands for an infinite step
        best_t, best_p, best_side = inf, None, _LO
        for p, var in enumerate(self.basis):
            delta = self._entry(p, q) * direction
            if delta > piv_eps:
                t = (xb[p] - self.lo[var]) / delta
                side = _LO
            elif delta < -piv_eps:
                if self.hi[var] is None:
                    continue
                t = (self.hi[var] - xb[p]) / (-delta)
                side = _HI
            else:
                continue
            if t < 0:
                t = self.zero
            if best_t is None or t < best_t - tie or (
                abs(t - best_t) <= tie and var < self.basis[best_p]
            ):
                best_t, best_p, best_side = t, p, side
        gap = None if self.hi[q] is None else self.hi[q] - self.lo[q]
        if gap is not None and (best_t is None or gap <= best_t):
            return gap, None, _LO  # bound flip
        return best_t, best_p, best_side

    def _run_phase(self, costs: list, barred_from: int, phase: int) -> str:
        iteration = 0
        while True:
            iteration += 1
            if iteration > self.iteration_cap:
                raise NumericalFailure(
                    f"simplex cycling guard exceeded in phase {phase}"
                )
            xb = self._basic_values()
            d = self._reduced_costs(costs)
            q, direction = self._choose_entering(d, iteration, barred_from)
            if q is None:
                return "optimal"
            t, p, side = self._ratio_test(q, direction, xb)
            if t is None:
                if phase == 1:
                    raise NumericalFailure("unbounded ray in phase 1")
                return "unbounded"
            if p is None:
                self.status[q] = _HI if self.status[q] == _LO else _LO
            else:
                leaving = self.basis[p]
                self._pivot(p, q)
                self.basis[p] = q
                self.status[q] = _BASIC
                self.status[leaving] = side

    def _drop_row(self, p: int) -> None:
        if self.exact:
            del self.T[p]
        else:
            self.T = np.delete(self.T, p, axis=0)
        del self.basis[p]

    def _drive_out_artificials(self) -> None:
        p = 0
        while p < self._nrows():
            var = self.basis[p]
            if var < self.art_start:
                p += 1
                continue
            best_j, best_mag = None, None
            for j in range(self.art_start):
                if self.status[j] == _BASIC:
                    continue
                mag = abs(self._entry(p, j))
                threshold = self.zero if self.exact else _PIV_EPS
                if mag > threshold and (best_mag is None or mag > best_mag):
                    best_j, best_mag = j, mag
            if best_j is None:
                # Redundant constraint: remove the row entirely.
                self.status[var] = _LO
                self._drop_row(p)
            else:
                self._pivot(p, best_j)
                self.basis[p] = best_j
                self.status[best_j] = _BASIC
                self.status[var] = _LO
                p += 1

    # -- main entry -------------------------------------------------------

    def solve(self) -> LpSolution:
        num = self._num
        phase1_costs = [self.zero] * self.ncols
        for j in range(self.art_start, self.ncols):
            phase1_costs[j] = num(1)
        self._run_phase(phase1_costs, barred_from=self.ncols, phase=1)

        xb = self._basic_values()
        infeas = sum(
            xb[p] for p, v in enumerate(self.basis) if v >= self.art_start
        )
        feas_tol = self.zero if self.exact else self.tols.feasibility
        if infeas > feas_tol:
            return LpSolution(status="infeasible", values=None, objective_value=None)
        self._drive_out_artificials()

        phase2_costs = [self.zero] * self.ncols
        for j in range(self.n):
            phase2_costs[j] = num(self.model.objective[j])
        status = self._run_phase(phase2_costs, barred_from=self.art_start, phase=2)
        if status == "unbounded":
            return LpSolution(status="unbounded", values=None, objective_value=None)
        return self._extract()

    def _extract(self) -> LpSolution:
        xb = self._basic_values()
        full = [self.zero] * self.ncols
        for j in range(self.ncols):
            if self.status[j] == _LO:
                full[j] = self.lo[j]
            elif self.status[j] == _HI:
                full[j] = self.hi[j]
        for p, v in enumerate(self.basis):
            full[v] = xb[p]
        values = full[: self.n]

        # Snap basic values onto bounds they only miss by noise.
        for j in range(self.n):
            lo, hi = self.lo[j], self.hi[j]
            if values[j] < lo:
                if not self.exact and lo - values[j] > self.tols.bounds:
                    raise NumericalFailure(f"variable {j} below bound after solve")
                values[j] = lo
            if hi is not None and values[j] > hi:
                if not self.exact and values[j] - hi > self.tols.bounds:
                    raise NumericalFailure(f"variable {j} above bound after solve")
                values[j] = hi

        if not self.exact:
            for k, r in enumerate(self.model.rows):
                lhs = r.evaluate(values)
                slack = self.tols.feasibility * (1.0 + abs(r.rhs))
                if r.relation == ">=" and lhs < r.rhs - slack:
                    raise NumericalFailure(f"row {k} violated after solve")
                if r.relation == "<=" and lhs > r.rhs + slack:
                    raise NumericalFailure(f"row {k} violated after solve")
                if r.relation == "=" and abs(lhs - r.rhs) > slack:
                    raise NumericalFailure(f"row {k} violated after solve")

        obj = sum(
            self._num(c) * v for c, v in zip(self.model.objective, values) if c != 0
        )
        obj_f = float(obj) + self.model.objective_offset
        return LpSolution(
            status="optimal",
            values=tuple(float(v) for v in values),
            objective_value=obj_f,
        )


def solve_lp(
    model: LpModel,
    tolerances: Tolerances | None = None,
    exact: bool | None = None,
) -> LpSolution:
    """Solve to a basic optimal solution (or infeasible / unbounded).

    exact=None (default) runs in floats and falls back to rational
    arithmetic on NumericalFailure; True forces the rational path, False
    forbids the fallback.
    """
    model.validate()
    tols = tolerances or Tolerances()
    if exact is True:
        return _Simplex(model, tols, exact=True).solve()
    try:
        return _Simplex(model, tols, exact=False).solve()
    except NumericalFailure:
        if exact is False:
            raise
        return _Simplex(model, tols, exact=True).solve()


def solve_with_separation(
    base: LpModel,
    oracle: SeparationOracle,
    max_rounds: int = 200,
    tolerances: Tolerances | None = None,
) -> LpSolution:
    """Cutting-plane loop: solve, separate, add violated rows, repeat.

    Terminates when the oracle reports no violation above the separation
    tolerance, certifying optimality for the full (exponential) family.
    Rows already present are never re-added; if the oracle only produces
    duplicates the loop stops (tolerance jitter), returning the current
    solution.  Raises RoundLimitExceeded with the best solution attached
    when max_rounds is hit.
    """
    tols = tolerances or Tolerances()
    current = base
    seen = {r.key() for r in base.rows}
    solution = None
    for _ in range(max_rounds):
        solution = solve_lp(current, tolerances=tols)
        if not solution.optimal:
            return solution
        fresh = []
        for vrow, magnitude in oracle(solution.values):
            if magnitude > tols.separation and vrow.key() not in seen:
                seen.add(vrow.key())
                fresh.append(vrow)
        if not fresh:
            return solution
        current = current.with_rows(fresh)
    raise RoundLimitExceeded(
        f"separation did not converge within {max_rounds} rounds",
        solution=solution,
        rounds=max_rounds,
    )
