"""Log-domain canonical products and their two-sided growth comparators.

The canonical product vanishes exactly on the sequence; away from the nodes
its modulus tracks e^{phi(z)} times a polynomial correction whose exponent is
the running average of the perturbations.  Both comparator ratios computed
here are expected to stay in a fixed bracket (the theory only pins them down
up to multiplicative constants).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import (
    ZERO,
    DegenerateSequenceError,
    LogComplex,
    SequenceSpec,
    Side,
    SpecError,
    dist_to_sequence,
    dlog_nearest_index,
    node,
    one_minus,
    separation_constant,
    softplus,
)


class TruncationError(RuntimeError):
    """Factor cap reached before the tail bound certified the target tolerance."""

    def __init__(self, achieved_bound: float, hard_cap: int):
        super().__init__(
            f"tail bound {achieved_bound:.3e} not certified within {hard_cap} factors")
        self.achieved_bound = achieved_bound
        self.hard_cap = hard_cap


@dataclass(frozen=True)
class TruncationPolicy:
    """Certified truncation of the infinite products.

    Factors with |z/lambda_k| (or |lambda_k/z| on the small-modulus tail)
    above a threshold tau are kept; the discarded tail's log-contribution is
    bounded by |log(1-w)| <= |w|/(1-|w|) per factor summed over a geometric
    majorant, and tau is chosen so that bound stays below rel_tol.
    """

    rel_tol: float = 1e-12
    hard_cap: int = 100_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise SpecError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if self.hard_cap < 1:
            raise SpecError("hard_cap must be positive")

    def tau(self, spec: SequenceSpec) -> float:
        alpha = spec.space.alpha
        s = spec.sup_delta()
        majorant = math.exp(s / alpha) / (1.0 - math.exp(-0.5 / alpha))
        return min(self.rel_tol / (2.0 * majorant), 0.5 * math.exp(-s / alpha))


def _coincident_index(spec: SequenceSpec, z: LogComplex):
    d = dist_to_sequence(spec, z)
    return d.index if math.isinf(d.log_dist) and d.log_dist < 0 else None


def _factor_window(spec: SequenceSpec, z: LogComplex, pol: TruncationPolicy):
    """Indices whose factors are kept: right tail while |z/lambda_k| >= tau,
    left tail (two-sided) while |lambda_k/z| >= tau."""
    log_tau = math.log(pol.tau(spec))
    ks = []
    k = 0
    while z.logmod - node(spec, k).logmod >= log_tau:
        ks.append(k)
        k += 1
        if len(ks) > pol.hard_cap:
            raise TruncationError(math.exp(log_tau), pol.hard_cap)
    right_end = k
    left_end = 0
    if spec.side is Side.TWO_SIDED:
        k = -1
        while node(spec, k).logmod - z.logmod >= log_tau:
            ks.append(k)
            k -= 1
            if len(ks) > pol.hard_cap:
                raise TruncationError(math.exp(log_tau), pol.hard_cap)
        left_end = k + 1
    return ks, left_end, right_end


def _product_over(spec: SequenceSpec, z: LogComplex, indices, skip: int | None):
    """prod over k in indices of (1 - z/lambda_k) for k >= 0 and
    (1 - lambda_k/z) for k < 0, accumulated in log-domain."""
    logmod_sum = 0.0
    phase_sum = 0.0
    for k in indices:
        if skip is not None and k == skip:
            continue
        lam = node(spec, k)
        w = z / lam if k >= 0 else lam / z
        f = one_minus(w)
        if f is ZERO:
            return ZERO
        logmod_sum += f.logmod
        phase_sum += f.phase
    return LogComplex.from_polar(logmod_sum, phase_sum)


def canonical_product(spec: SequenceSpec, z: LogComplex,
                      pol: TruncationPolicy = TruncationPolicy()) -> LogComplex:
    """G(z): the product vanishing exactly on the sequence.

    One-sided: prod_{k>=0} (1 - z/lambda_k).  Two-sided additionally carries
    the factors prod_{m>=1} (1 - lambda_{-m}/z).  Returns ZERO exactly iff z
    coincides with a node; the truncated tail's log-contribution is below
    pol.rel_tol.
    """
    if z is ZERO:
        raise SpecError("the canonical product is evaluated on nonzero z")
    if _coincident_index(spec, z) is not None:
        return ZERO
    indices, _, _ = _factor_window(spec, z, pol)
    return _product_over(spec, z, indices, skip=None)


def product_derivative_at_node(spec: SequenceSpec, k: int,
                               pol: TruncationPolicy = TruncationPolicy()) -> LogComplex:
    """G'(lambda_k), with the vanishing diagonal factor removed analytically."""
    if separation_constant(spec) == 0.0:
        raise DegenerateSequenceError("coincident nodes: derivative undefined")
    lam = node(spec, k)
    indices, _, _ = _factor_window(spec, lam, pol)
    if k not in indices:
        indices.append(k)
    rest = _product_over(spec, lam, indices, skip=k)
    # d/dz (1 - z/lam) = -1/lam;  d/dz (1 - lam/z) at z=lam is +1/lam.
    diag = LogComplex.from_polar(-lam.logmod, math.pi - lam.phase) if k >= 0 \
        else LogComplex.from_polar(-lam.logmod, -lam.phase)
    return rest * diag


def _comparator_log_coarse(spec: SequenceSpec, z: LogComplex, n: int) -> float:
    """log of (|z - lambda_n|/|lambda_n|) * prod of the dominant moduli ratios."""
    lam_n = node(spec, n)
    diff = z - lam_n
    if diff is ZERO:
        raise SpecError("coarse comparator is undefined at a node")
    total = diff.logmod - lam_n.logmod
    if n >= 0:
        for k in range(0, n):
            total += z.logmod - node(spec, k).logmod
    else:
        for k in range(n, 0):
            total += node(spec, k).logmod - z.logmod
    return total


def coarse_estimate_ratio(spec: SequenceSpec, z: LogComplex,
                          pol: TruncationPolicy = TruncationPolicy()) -> float:
    """|G(z)| divided by its coarse comparator, entirely in log-domain."""
    g = canonical_product(spec, z, pol)
    if g is ZERO:
        raise SpecError("z lies on the sequence")
    n = dlog_nearest_index(spec, z)
    return math.exp(g.logmod - _comparator_log_coarse(spec, z, n))


def weight_phi_log(spec: SequenceSpec, z: LogComplex) -> float:
    alpha = spec.space.alpha
    t = z.logmod
    if spec.side is Side.ONE_SIDED:
        t = max(t, 0.0)
    return alpha * t * t


def running_average_exponent(spec: SequenceSpec, n: int) -> float:
    """Average of (delta_k + 2/p) over the index window between 0 and n."""
    two_over_p = spec.space.two_over_p
    lo, hi = (0, n) if n >= 0 else (n, 0)
    count = hi - lo + 1
    return math.fsum(spec.delta.at(k) for k in range(lo, hi + 1)) / count + two_over_p


def fine_estimate_ratio(spec: SequenceSpec, z: LogComplex,
                        pol: TruncationPolicy = TruncationPolicy()) -> float:
    """|G(z)| divided by e^{phi(z)} dist(z, seq) / B^{1/2 + avg}.

    B is 1+|z| one-sided and |z| two-sided; avg is the running average of the
    effective perturbations delta_k + 2/p up to the nearest index.
    """
    g = canonical_product(spec, z, pol)
    if g is ZERO:
        raise SpecError("z lies on the sequence")
    d = dist_to_sequence(spec, z)
    n = dlog_nearest_index(spec, z)
    exponent = 0.5 + running_average_exponent(spec, n)
    log_base = softplus(z.logmod) if spec.side is Side.ONE_SIDED else z.logmod
    log_ratio = (g.logmod + exponent * log_base
                 - weight_phi_log(spec, z) - d.log_dist)
    return math.exp(log_ratio)


def near_node_value(spec: SequenceSpec, z: LogComplex,
                    pol: TruncationPolicy = TruncationPolicy()):
    """Linearized G near a node: G'(lambda_n) (z - lambda_n).

    Used within Euclidean distance 1e-8 |lambda_n| of the node, where the
    single near-vanishing factor would cancel catastrophically.
    """
    d = dist_to_sequence(spec, z)
    lam = node(spec, d.index)
    diff = z - lam
    if diff is ZERO:
        return ZERO
    return product_derivative_at_node(spec, d.index, pol) * diff


def product_value(spec: SequenceSpec, z: LogComplex,
                  pol: TruncationPolicy = TruncationPolicy()):
    """Canonical product with the near-node linearization applied."""
    d = dist_to_sequence(spec, z)
    if math.isinf(d.log_dist):
        return ZERO
    lam = node(spec, d.index)
    if d.log_dist - lam.logmod < math.log(1e-8):
        return near_node_value(spec, z, pol)
    return canonical_product(spec, z, pol)
