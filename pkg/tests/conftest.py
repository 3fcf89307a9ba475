"""Shared fixtures: the SequenceSpec corpus and the brute-force product oracle."""

from __future__ import annotations

import cmath
import math

import pytest

from smallfock.core import (
    LogComplex,
    SequenceSpec,
    Side,
    SpaceParams,
    TailedSpec,
    node,
    normalize_phase,
)


def make_spec(delta, theta, alpha=1.0, p=2.0, side=Side.ONE_SIDED) -> SequenceSpec:
    return SequenceSpec(delta, theta, SpaceParams(alpha, p, side))


def gamma_one(alpha=1.0, p=2.0) -> SequenceSpec:
    """The unperturbed real-positive reference sequence, one-sided."""
    return make_spec(TailedSpec.const(0.0), TailedSpec.const(0.0), alpha, p)


def gamma_two(alpha=1.0, p=2.0) -> SequenceSpec:
    return make_spec(TailedSpec.const(0.0), TailedSpec.const(0.0), alpha, p,
                     Side.TWO_SIDED)


def corpus() -> list[SequenceSpec]:
    """Fixed spec corpus exercised by oracle and regression tests."""
    return [
        gamma_one(),
        gamma_one(alpha=1.0, p=math.inf),
        gamma_one(alpha=0.5, p=1.0),
        gamma_two(),
        make_spec(TailedSpec.const(0.25), TailedSpec.const(0.0)),
        make_spec(TailedSpec.periodic([0.4, -0.4]), TailedSpec.const(0.0),
                  side=Side.TWO_SIDED),
        make_spec(TailedSpec.periodic([0.2, -0.1, 0.3]),
                  TailedSpec.periodic([0.0, math.pi]), side=Side.TWO_SIDED),
        make_spec(TailedSpec.table({0: 0.3, 5: -0.2}, 0.1, -0.1),
                  TailedSpec.const(1.0), side=Side.TWO_SIDED),
    ]


@pytest.fixture(scope="session")
def spec_corpus():
    return corpus()


def brute_product(spec: SequenceSpec, z: LogComplex, n_factors: int = 600):
    """Partial-product oracle: (log-modulus, phase) accumulated factor by factor.

    Valid for z with logmod in roughly [-5, 12], where every ratio z/lambda_k
    (and lambda_k/z on the left tail) is natively representable.
    """
    log_sum = 0.0
    phase_sum = 0.0

    def factor(w: complex) -> None:
        nonlocal log_sum, phase_sum
        f = 1.0 - w
        log_sum += math.log(abs(f))
        phase_sum += cmath.phase(f)

    for k in range(n_factors):
        lam = node(spec, k)
        factor(cmath.exp(complex(z.logmod - lam.logmod, z.phase - lam.phase)))
    if spec.side is Side.TWO_SIDED:
        for k in range(-1, -n_factors - 1, -1):
            lam = node(spec, k)
            factor(cmath.exp(complex(lam.logmod - z.logmod, lam.phase - z.phase)))
    return log_sum, normalize_phase(phase_sum)
