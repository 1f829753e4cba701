"""Two-threshold rounding of fractional time series.

Every approximation algorithm in this package shares one rounding
primitive: a fractional sequence x^1, ..., x^T in [0, 1] is mapped to
binary decisions using an upper threshold alpha and a lower threshold
beta.  Values at or above alpha switch on, values at or below beta switch
off, and each maximal run strictly between the thresholds switches on only
when both of its flanks (or the sequence boundary) are on.  Compared to a
single threshold, this caps the number of on/off flips by the total
variation of the input divided by (alpha - beta), which is what makes the
transition-cost guarantees work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ValueOutOfRange

# Threshold comparisons use this guard, pulled toward the decisive classes
# so that LP solver jitter cannot drop a tight coordinate into the
# undecided band (which would silently void the feasibility argument).
THRESHOLD_EPS = 1e-9

# Inputs may overshoot [0, 1] by up to this much (solver noise) and are
# clamped; anything worse is an error.
_RANGE_SLACK = 1e-7


@dataclass(frozen=True)
class RoundingParams:
    """Threshold pair for the rounding scheme.

    The ratio bounds all require a strict gap, so alpha > beta is enforced
    even though the degenerate alpha == beta case would still be
    well-defined.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (1.0 >= self.alpha > self.beta >= 0.0):
            raise ValueError(
                f"need 1 >= alpha > beta >= 0, got alpha={self.alpha}, beta={self.beta}"
            )


@dataclass(frozen=True)
class DerandomizationConfig:
    """Range and ratio defining a family of candidate thresholds.

    gamma is the lower endpoint of the alpha range (alpha is searched over
    [gamma, 1]) and kappa is the fixed ratio beta / alpha.
    """

    gamma: float
    kappa: float

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise ValueError(f"gamma must be in (0,1), got {self.gamma}")
        if not (0.0 < self.kappa < 1.0):
            raise ValueError(f"kappa must be in (0,1), got {self.kappa}")


# Constants used by the prize-collecting solvers.
PCST_DERAND = DerandomizationConfig(gamma=math.exp(-1.0 / 3.0), kappa=2.0 / 3.0)
PCTSP_DERAND = DerandomizationConfig(gamma=math.exp(-2.0 / 5.0), kappa=3.0 / 5.0)


def _classify(value: float, alpha: float, beta: float) -> int:
    """Return +1 (>= alpha), -1 (<= beta) or 0 (strictly between).

    The >= alpha test wins when the guarded ranges overlap.
    """
    if value >= alpha - THRESHOLD_EPS:
        return 1
    if value <= beta + THRESHOLD_EPS:
        return -1
    return 0


def _check_range(x: Sequence[float]) -> list[float]:
    out = []
    for i, v in enumerate(x):
        if v < -_RANGE_SLACK or v > 1.0 + _RANGE_SLACK:
            raise ValueOutOfRange(f"x[{i}] = {v} outside [0, 1]")
        out.append(min(1.0, max(0.0, v)))
    return out


def two_threshold_round(x: Sequence[float], params: RoundingParams) -> list[int]:
    """Round a fractional sequence to binary decisions.

    Positions with x >= alpha become 1, positions with x <= beta become 0.
    Each maximal run of in-between positions becomes all-1 exactly when
    both of its flanking positions are at-or-above alpha, where a sequence
    boundary counts as satisfying the condition; otherwise it becomes
    all-0.

    Note the corner case of a sequence lying entirely strictly between the
    thresholds: both boundary conditions hold vacuously, so the output is
    all ones.
    """
    if len(x) == 0:
        raise ValueError("sequence must have length >= 1")
    vals = _check_range(x)
    cls = [_classify(v, params.alpha, params.beta) for v in vals]
    y = [1 if c == 1 else 0 for c in cls]
    t = 0
    T = len(cls)
    while t < T:
        if cls[t] != 0:
            t += 1
            continue
        run_start = t
        while t < T and cls[t] == 0:
            t += 1
        run_end = t  # exclusive
        left_ok = run_start == 0 or cls[run_start - 1] == 1
        right_ok = run_end == T or cls[run_end] == 1
        fill = 1 if (left_ok and right_ok) else 0
        for i in range(run_start, run_end):
            y[i] = fill
    return y


def transition_count(y: Sequence[int], weights: Sequence[float] | None = None) -> float:
    """Weighted number of flips: sum over boundaries of w_t * |y[t+1] - y[t]|.

    With weights omitted, every boundary counts 1.
    """
    T = len(y)
    if weights is None:
        weights = [1.0] * (T - 1)
    if len(weights) != T - 1:
        raise ValueError(f"need {T - 1} boundary weights, got {len(weights)}")
    return sum(w * abs(y[t + 1] - y[t]) for t, w in zip(range(T - 1), weights))


def partition_signature(
    values: Sequence[float], alpha: float, kappa: float
) -> tuple[int, ...]:
    """Class of every value under thresholds (alpha, kappa * alpha).

    Two alphas with equal signatures produce identical rounded schedules,
    since the rounding depends on the values only through this partition.
    """
    beta = kappa * alpha
    return tuple(_classify(v, alpha, beta) for v in values)


def candidate_alphas(
    values: Iterable[float], cfg: DerandomizationConfig
) -> list[float]:
    """Finite set of alpha candidates covering every threshold partition.

    The candidate set contains, clipped to [gamma, 1]: every positive
    value v, every ratio v / kappa, and the endpoints gamma and 1.  Those
    are the breakpoints at which the partition (as a function of alpha)
    can change.  Because the two threshold tests flip on opposite sides of
    their breakpoints, an open interval between adjacent breakpoints may
    carry a partition realised at neither endpoint; a midpoint candidate
    is added for exactly those intervals.  The result is that for any
    alpha in [gamma, 1] some candidate induces the identical partition,
    which is what the derandomized solvers rely on.
    """
    vals = sorted(set(float(v) for v in values if v > 0.0))
    bps = {cfg.gamma, 1.0}
    for v in vals:
        if cfg.gamma <= v <= 1.0:
            bps.add(v)
        r = v / cfg.kappa
        if cfg.gamma <= r <= 1.0:
            bps.add(r)
    ordered = sorted(bps)
    out = list(ordered)
    for a, b in zip(ordered, ordered[1:]):
        mid = 0.5 * (a + b)
        sig_mid = partition_signature(vals, mid, cfg.kappa)
        if sig_mid != partition_signature(vals, a, cfg.kappa) and sig_mid != (
            partition_signature(vals, b, cfg.kappa)
        ):
            out.append(mid)
    return sorted(out)
