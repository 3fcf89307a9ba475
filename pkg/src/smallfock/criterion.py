"""Decision engine for the complete-interpolating-sequence criterion.

A perturbed geometric sequence is complete interpolating iff it is separated,
the perturbations are bounded, and every long-enough sliding-window average of
the perturbations stays strictly below 1/2 in absolute value (two-sided specs
first get to shift their enumeration by an integer).  All three conditions are
exactly decidable for finitely described perturbation data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .core import (
    SequenceSpec,
    Side,
    SpecError,
    TailedSpec,
    TailKind,
    UnsupportedSideError,
    separation_constant,
)


class Failure(Enum):
    SEPARATION = "SEPARATION"
    BOUNDEDNESS = "BOUNDEDNESS"
    WINDOW = "WINDOW"


class Decision(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    sep_const: float
    sup_delta: float
    window_N: int | None = None
    epsilon: float | None = None
    shift_m: int | None = None
    failures: tuple[Failure, ...] = ()

    def to_json(self) -> dict:
        return {
            "decision": self.decision.value,
            "sep_const": self.sep_const,
            "sup_delta": self.sup_delta,
            "N": self.window_N,
            "epsilon": self.epsilon,
            "shift_m": self.shift_m,
            "failures": [f.value for f in self.failures],
        }


def check_bounded(spec: SequenceSpec) -> tuple[bool, float]:
    """Always true for finitely described perturbations; returns the exact sup."""
    return True, spec.sup_delta()


def _window_starts(delta: TailedSpec, N: int, side: Side):
    """Window starts whose averages cover the exact supremum."""
    if delta.kind is TailKind.CONSTANT:
        return [0]
    if delta.kind is TailKind.PERIODIC:
        period = delta.period()
        start = 0  # every residue occurs for n >= 0 as well
        return range(start, start + period)
    lo, hi = delta.head_range()
    starts = range(lo - N, hi + 1)
    if side is Side.ONE_SIDED:
        starts = range(max(0, lo - N), max(hi + 1, 1))
    return starts


def window_sup(spec: SequenceSpec, N: int) -> float:
    """Exact sup over admissible n of |(1/N) sum_{k=n}^{n+N-1} delta_k|."""
    if N < 1:
        raise SpecError("window length N must be >= 1")
    delta = spec.delta
    if delta.kind is TailKind.CONSTANT:
        return abs(delta.constant)
    best = 0.0
    for n in _window_starts(delta, N, spec.side):
        avg = math.fsum(delta.at(n + i) for i in range(N)) / N
        best = max(best, abs(avg))
    if delta.kind is TailKind.TABLE:
        best = max(best, abs(delta.default_right))
        if spec.side is Side.TWO_SIDED:
            best = max(best, abs(delta.default_left))
    return best


def _tail_mean_right(delta: TailedSpec) -> float:
    if delta.kind is TailKind.CONSTANT:
        return delta.constant
    if delta.kind is TailKind.PERIODIC:
        return math.fsum(delta.values) / len(delta.values)
    return delta.default_right


def _tail_mean_left(delta: TailedSpec) -> float:
    if delta.kind is TailKind.TABLE:
        return delta.default_left
    return _tail_mean_right(delta)


def _certify_window(spec: SequenceSpec, eps: float) -> int:
    """Smallest N with window_sup(spec, N) <= 1/2 - eps; search is bounded."""
    delta = spec.delta
    period = delta.period()
    lo, hi = delta.head_range()
    deviation = 0.0
    if delta.kind is TailKind.PERIODIC:
        mu = _tail_mean_right(delta)
        deviation = math.fsum(abs(v - mu) for v in delta.values)
    elif delta.kind is TailKind.TABLE:
        deviation = math.fsum(
            abs(v - (delta.default_right if k >= 0 else delta.default_left))
            for k, v in delta.entries.items())
        deviation += abs(delta.default_right - delta.default_left)
    n_max = period * (math.ceil(2.0 * deviation / eps) + 2) + (hi - lo) + 1
    for N in range(1, n_max + 1):
        if window_sup(spec, N) <= 0.5 - eps:
            return N
    raise AssertionError("certified window search exhausted its provable bound")


def shift_enumeration(spec: SequenceSpec, m: int) -> SequenceSpec:
    """Re-numerate a two-sided sequence: lambda'_k = lambda_{k+m}.

    The point set is unchanged; delta'_k = delta_{k+m} + m and
    theta'_k = theta_{k+m}.
    """
    if spec.side is not Side.TWO_SIDED:
        raise UnsupportedSideError("enumeration shifts require a two-sided spec")
    return replace(spec,
                   delta=spec.delta.shifted(m).plus(float(m)),
                   theta=spec.theta.shifted(m))


def reindex_for_exponent(spec: SequenceSpec, p_new: float) -> SequenceSpec:
    """Re-express the same point set with a different exponent p.

    Node moduli depend on delta_k + 2/p only, so delta'_k = delta_k + 2/p_old - 2/p_new.
    """
    if not (p_new > 0):
        raise SpecError(f"p must be positive, got {p_new}")
    old = spec.space.two_over_p
    new = 0.0 if math.isinf(p_new) else 2.0 / p_new
    return replace(spec,
                   delta=spec.delta.plus(old - new),
                   space=replace(spec.space, p=p_new))


def check_condition_iii(spec: SequenceSpec):
    """Decide the sliding-window condition by exact tail analysis.

    Returns (holds, N, eps, m); N, eps, m are None when it fails, and m is
    None for one-sided specs.
    """
    spec = spec.canonicalized()
    if spec.side is Side.ONE_SIDED:
        mu = _tail_mean_right(spec.delta)
        if not abs(mu) < 0.5:
            return False, None, None, None
        eps = (0.5 - abs(mu)) / 2.0
        return True, _certify_window(spec, eps), eps, None

    mu_left = _tail_mean_left(spec.delta)
    mu_right = _tail_mean_right(spec.delta)
    span = math.ceil(abs(mu_left)) + math.ceil(abs(mu_right)) + 1
    center = -round((mu_left + mu_right) / 2.0)
    valid = [m for m in range(center - span, center + span + 1)
             if max(abs(mu_left + m), abs(mu_right + m)) < 0.5]
    if not valid:
        return False, None, None, None
    # Two shifted means within 1/2 of 0 cannot both move by an integer and
    # stay there, so the shift is unique.
    assert len(valid) == 1
    m = valid[0]
    worst = max(abs(mu_left + m), abs(mu_right + m))
    eps = (0.5 - worst) / 2.0
    shifted = shift_enumeration(spec, m)
    return True, _certify_window(shifted, eps), eps, m


def decide_cis(spec: SequenceSpec) -> Verdict:
    """Conjunction of the separation, boundedness, and window conditions."""
    spec = spec.canonicalized()
    sep = separation_constant(spec)
    _, sup_delta = check_bounded(spec)
    holds, N, eps, m = check_condition_iii(spec)

    failures = []
    if sep == 0.0:
        failures.append(Failure.SEPARATION)
    if not holds:
        failures.append(Failure.WINDOW)
    decision = Decision.YES if not failures else Decision.NO
    return Verdict(
        decision=decision,
        sep_const=sep,
        sup_delta=sup_delta,
        window_N=N,
        epsilon=eps,
        shift_m=m,
        failures=tuple(failures),
    )
