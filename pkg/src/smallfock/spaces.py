"""Weights, norms, restriction, biorthogonal functions, interpolation series.

An EvaluableFunction is any callable LogComplex -> LogComplex | ZERO that is
deterministic on equal inputs.  All growth bookkeeping stays in log-domain;
only O(1)-sized quantities (weighted samples, comparator ratios, quadrature
cells) are ever materialized as native floats.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    ZERO,
    DegenerateSequenceError,
    LogComplex,
    SequenceSpec,
    Side,
    SpaceParams,
    SpecError,
    dist_to_sequence,
    dlog_nearest_index,
    node,
    separation_constant,
    softplus,
)
from .products import TruncationPolicy

EvaluableFunction = Callable[[LogComplex], "LogComplex | object"]


class EvaluationError(RuntimeError):
    """Non-finite sample met during quadrature; carries the grid location."""

    def __init__(self, t: float, theta: float):
        super().__init__(f"non-finite sample at log|z|={t}, arg z={theta}")
        self.t = t
        self.theta = theta


class GuardViolationError(ValueError):
    """Evaluation point too close to the sequence for the requested quantity."""


@dataclass(frozen=True)
class SampleSeq:
    """Finitely supported data (c_k) on the sequence indices."""

    support: dict[int, complex]
    space: SpaceParams

    def lp_norm(self) -> float:
        vals = [abs(v) for v in self.support.values()]
        if not vals:
            return 0.0
        p = self.space.p
        if math.isinf(p):
            return max(vals)
        return math.fsum(v**p for v in vals) ** (1.0 / p)


def weight_phi(space: SpaceParams, z: LogComplex) -> float:
    """alpha log_+^2|z| (one-sided) or alpha log^2|z| (two-sided)."""
    if z is ZERO:
        raise SpecError("the weight is defined on nonzero z")
    t = z.logmod
    if space.side is Side.ONE_SIDED:
        t = max(t, 0.0)
    return space.alpha * t * t


def _log_poly_factor(space: SpaceParams, lam: LogComplex) -> float:
    """log of |lam| (two-sided) or 1+|lam| (one-sided)."""
    return lam.logmod if space.side is Side.TWO_SIDED else softplus(lam.logmod)


def eval_weight(space: SpaceParams, lam: LogComplex) -> LogComplex:
    """The positive evaluation-functional weight at lam, in log-domain.

    Two-sided: |lam|^{2/p} e^{-phi(lam)}; one-sided: (1+|lam|)^{2/p} e^{-phi(lam)}.
    """
    log_w = space.two_over_p * _log_poly_factor(space, lam) - weight_phi(space, lam)
    return LogComplex(log_w, 0.0)


def restriction(spec: SequenceSpec, f: EvaluableFunction,
                index_window) -> SampleSeq:
    """(R f)_k = f(lambda_k) * eval_weight(lambda_k) over the index window."""
    out: dict[int, complex] = {}
    for k in index_window:
        lam = node(spec, k)
        try:
            v = f(lam)
        except Exception as exc:
            raise EvaluationError(lam.logmod, lam.phase) from exc
        if v is ZERO:
            out[k] = 0j
        else:
            out[k] = (v * eval_weight(spec.space, lam)).to_complex()
    return SampleSeq(out, spec.space)


def _punctured_product(spec: SequenceSpec, z: LogComplex, skip: int,
                       pol: TruncationPolicy):
    """The canonical product with the factor of node `skip` removed."""
    from .products import _factor_window, _product_over
    indices, _, _ = _factor_window(spec, z, pol)
    return _product_over(spec, z, indices, skip=skip)


def biorthogonal(spec: SequenceSpec, k: int,
                 pol: TruncationPolicy = TruncationPolicy()) -> EvaluableFunction:
    """g_k(z) = G(z) / (G'(lambda_k) (z - lambda_k)).

    Evaluated as a ratio of punctured products, so the removable singularity
    at lambda_k never appears: g_k(lambda_k) = 1 exactly and g_k(lambda_j) = 0
    exactly for other nodes.
    """
    if separation_constant(spec) == 0.0:
        raise DegenerateSequenceError("coincident nodes: no biorthogonal system")
    lam_k = node(spec, k)
    denom = _punctured_product(spec, lam_k, k, pol)

    def g(z: LogComplex):
        if z is ZERO:
            raise SpecError("evaluation point must be nonzero")
        numer = _punctured_product(spec, z, k, pol)
        if numer is ZERO:
            return ZERO
        value = numer / denom
        if spec.side is Side.TWO_SIDED and k < 0:
            # (1 - lam_k/z)/(z - lam_k) = 1/z, vs 1/lam_k at the node.
            value = value * (lam_k / z)
        return value

    return g


def weighted_biorthogonal(spec: SequenceSpec, k: int,
                          pol: TruncationPolicy = TruncationPolicy()) -> EvaluableFunction:
    """The series term w_k g_k whose weighted restriction is the k-th unit vector.

    The coefficient w_k cancels eval_weight(lambda_k) exactly, so
    restriction(weighted_biorthogonal(k)) has entry 1 at k and 0 elsewhere
    up to the product truncation error only.
    """
    coeff = interpolation_coefficient(spec, k)
    g = biorthogonal(spec, k, pol)

    def f(z: LogComplex):
        gz = g(z)
        if gz is ZERO:
            return ZERO
        return coeff * gz

    return f


def interpolation_coefficient(spec: SequenceSpec, k: int) -> LogComplex:
    """The series weight (1+|lambda_k|)^{-2/p} e^{phi(lambda_k)} (|lambda_k|^{-2/p} two-sided)."""
    lam = node(spec, k)
    log_c = weight_phi(spec.space, lam) - spec.space.two_over_p * _log_poly_factor(spec.space, lam)
    return LogComplex(log_c, 0.0)


def interpolate(spec: SequenceSpec, data: SampleSeq,
                pol: TruncationPolicy = TruncationPolicy()) -> EvaluableFunction:
    """The interpolation series f = sum_k c_k w_k g_k for finitely supported data.

    By construction the weighted restriction of f returns the data exactly on
    the support and vanishes off it.
    """
    terms = []
    for k, c in sorted(data.support.items()):
        if c == 0:
            continue
        coeff = LogComplex.from_complex(c) * interpolation_coefficient(spec, k)
        terms.append((coeff, biorthogonal(spec, k, pol)))

    def f(z: LogComplex):
        vals = []
        for coeff, g in terms:
            gz = g(z)
            if gz is ZERO:
                continue
            vals.append(coeff * gz)
        if not vals:
            return ZERO
        top = max(v.logmod for v in vals)
        acc = 0j
        for v in vals:
            acc += cmath.exp(complex(v.logmod - top, v.phase))
        if acc == 0:
            return ZERO
        return LogComplex(top, 0.0) * LogComplex.from_complex(acc)

    return f


@dataclass(frozen=True)
class QuadratureParams:
    """Log-polar product grid: Gauss-Legendre in angle, composite GL in log-radius."""

    n_theta: int = 64
    panel_length: float = 0.5
    panel_order: int = 12
    tail_log_cut: float = 60.0  # weight drop (in nats) at the window edge
    refine_levels: int = 25  # local refinement rounds for the sup-norm

    def doubled(self) -> "QuadratureParams":
        return QuadratureParams(self.n_theta * 2, self.panel_length / 2.0,
                                self.panel_order, self.tail_log_cut,
                                self.refine_levels)


def _t_window(space: SpaceParams, quad: QuadratureParams, p_eff: float):
    """Window in t = log|z| outside which e^{-p alpha t^2 + 2t} is negligible."""
    a = p_eff * space.alpha
    t_star = 1.0 / a
    half = math.sqrt(quad.tail_log_cut / a) + 1.0
    t_max = t_star + half
    if space.side is Side.TWO_SIDED:
        t_min = t_star - half
    else:
        # phi = 0 for t < 0, integrand ~ e^{2t}: cut where 2|t| exceeds the budget
        t_min = min(-quad.tail_log_cut / 2.0 - 2.0, t_star - half)
    return t_min, t_max


def _composite_gl(t_min: float, t_max: float, quad: QuadratureParams):
    xs, ws = np.polynomial.legendre.leggauss(quad.panel_order)
    # The one-sided weight has a kink at t = 0; keep it on a panel edge.
    breaks = [t_min, t_max]
    if t_min < 0.0 < t_max:
        breaks = [t_min, 0.0, t_max]
    nodes, weights = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        n_panels = max(1, math.ceil((hi - lo) / quad.panel_length))
        edges = np.linspace(lo, hi, n_panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            h = 0.5 * (b - a)
            nodes.extend(0.5 * (a + b) + h * xs)
            weights.extend(h * ws)
    return np.asarray(nodes), np.asarray(weights)


def norm_fp(space: SpaceParams, f: EvaluableFunction,
            quad: QuadratureParams = QuadratureParams()) -> float:
    """The space (quasi-)norm of f by log-polar quadrature; sup-norm for p = inf.

    Substitution z = e^{t + i theta} turns the area integral into
    int int |f|^p e^{-p phi(e^t)} e^{2t} dt dtheta.
    """
    if math.isinf(space.p):
        return _sup_norm(space, f, quad)
    p = space.p
    t_min, t_max = _t_window(space, quad, p)
    t_nodes, t_weights = _composite_gl(t_min, t_max, quad)
    th_x, th_w = np.polynomial.legendre.leggauss(quad.n_theta)
    th_nodes = math.pi * (th_x + 1.0)
    th_weights = math.pi * th_w

    total = 0.0
    for t, wt in zip(t_nodes, t_weights):
        phi = space.alpha * (max(t, 0.0) ** 2 if space.side is Side.ONE_SIDED else t * t)
        row = 0.0
        for th, wth in zip(th_nodes, th_weights):
            v = f(LogComplex.from_polar(t, th))
            if v is ZERO:
                continue
            log_cell = p * v.logmod - p * phi + 2.0 * t
            if not math.isfinite(log_cell):
                raise EvaluationError(t, th)
            if log_cell > 700.0:
                raise EvaluationError(t, th)
            row += wth * math.exp(log_cell)
        total += wt * row
    return total ** (1.0 / p)


def _sup_norm(space: SpaceParams, f: EvaluableFunction,
              quad: QuadratureParams) -> float:
    t_min, t_max = _t_window(space, quad, 1.0)
    ts = np.linspace(t_min, t_max, max(64, int((t_max - t_min) / quad.panel_length) * 8))
    ths = np.linspace(0.0, 2.0 * math.pi, quad.n_theta, endpoint=False)

    def score(t: float, th: float) -> float:
        v = f(LogComplex.from_polar(t, th))
        if v is ZERO:
            return -math.inf
        phi = space.alpha * (max(t, 0.0) ** 2 if space.side is Side.ONE_SIDED else t * t)
        return v.logmod - phi

    best = (-math.inf, 0.0, 0.0)
    for t in ts:
        for th in ths:
            s = score(t, th)
            if s > best[0]:
                best = (s, t, th)
    dt = ts[1] - ts[0]
    dth = ths[1] - ths[0] if len(ths) > 1 else math.pi
    for _ in range(quad.refine_levels):
        s0, t0, th0 = best
        dt /= 2.0
        dth /= 2.0
        for t in (t0 - dt, t0, t0 + dt):
            for th in (th0 - dth, th0, th0 + dth):
                s = score(t, th)
                if s > best[0]:
                    best = (s, t, th)
    return math.exp(best[0])


def eval_bound_ratio(space: SpaceParams, f: EvaluableFunction,
                     normf: float, z: LogComplex) -> float:
    """|f(z)| B^{2/p} e^{-phi(z)} / ||f||, with B = 1+|z| or |z| per side."""
    if not normf > 0:
        raise SpecError("normf must be positive")
    v = f(z)
    if v is ZERO:
        return 0.0
    log_ratio = (v.logmod + space.two_over_p * _log_poly_factor(space, z)
                 - weight_phi(space, z) - math.log(normf))
    return math.exp(log_ratio)


def weight_sum(spec: SequenceSpec, z: LogComplex, tail_tol: float = 1e-14) -> float:
    """sum_k dist(z, seq) B_k^{1/2} / (B_z^{1/2} |z - lambda_k|), B = 1+|.| or |.|.

    Expected to lie in a fixed bracket away from the nodes; guarded by
    dist(z, seq) >= 0.05 (1 + |z|) because the identity degenerates at nodes.
    """
    d = dist_to_sequence(spec, z)
    guard_log = math.log(0.05) + softplus(z.logmod)
    if d.log_dist < guard_log:
        raise GuardViolationError("z is too close to the sequence for the weight sum")
    alpha = spec.space.alpha
    center = dlog_nearest_index(spec, z)
    half_span = math.ceil(4.0 * alpha * math.log(1.0 / tail_tol)) + 4
    lo = center - half_span
    hi = center + half_span
    if spec.side is Side.ONE_SIDED:
        lo = max(lo, 0)
    log_bz = _log_poly_factor(spec.space, z)
    total = 0.0
    for k in range(lo, hi + 1):
        lam = node(spec, k)
        diff = z - lam
        term = (d.log_dist + 0.5 * _log_poly_factor(spec.space, lam)
                - 0.5 * log_bz - diff.logmod)
        total += math.exp(term)
    return total
