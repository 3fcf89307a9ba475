"""Finite sections of the Hilbert-transform-type matrix and their diagnostics.

The entry magnitudes decay like e^{-|m-k|/(4 alpha)} corrected by partial sums
of the perturbations; when the sliding-window condition fails, one triangular
half of the matrix grows instead, which the slope fit and section norms make
visible at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    ZERO,
    LogComplex,
    SequenceSpec,
    Side,
    SpecError,
    TailedSpec,
    TailKind,
    node,
    normalize_phase,
    softplus,
)
from .products import (
    TruncationPolicy,
    canonical_product,
    product_derivative_at_node,
)
from .spaces import _log_poly_factor, weight_phi


class FitDegenerateError(RuntimeError):
    """A triangular half of the section carries no usable entries."""


class PowerIterationError(RuntimeError):
    """Spectral-norm power iteration failed to settle."""


def _modulus_nearest_index(spec: SequenceSpec, target_logmod: float) -> int:
    """Node index minimizing |log|lambda_k| - target|; ties to smaller index."""
    s = spec.sup_delta()
    alpha = spec.space.alpha
    center = 2.0 * alpha * target_logmod - spec.space.two_over_p
    lo = math.floor(center - 2.0 * s - 2.0)
    hi = math.ceil(center + 2.0 * s + 2.0)
    if spec.side is Side.ONE_SIDED:
        lo = max(lo, 0)
        hi = max(hi, lo)
    best = (math.inf, lo)
    for k in range(lo, hi + 1):
        d = abs(node(spec, k).logmod - target_logmod)
        if d < best[0]:
            best = (d, k)
    return best[1]


def gamma_phase_choice(spec: SequenceSpec) -> TailedSpec:
    """Phases for the reference geometric sequence, opposite the nearby nodes.

    gamma_m is put on the ray opposite the phase of the modulus-nearest
    lambda, which keeps dist(gamma_m, seq) comparable to |gamma_m|.
    """
    spec = spec.canonicalized()
    sp = spec.space

    def phase_at(m: int) -> float:
        gamma_logmod = (m + sp.two_over_p) / (2.0 * sp.alpha)
        k = _modulus_nearest_index(spec, gamma_logmod)
        return normalize_phase(spec.theta.at(k) + math.pi)

    delta, theta = spec.delta, spec.theta
    if delta.kind is TailKind.CONSTANT and theta.kind is TailKind.CONSTANT:
        return TailedSpec.const(phase_at(0))
    if delta.kind is not TailKind.TABLE and theta.kind is not TailKind.TABLE:
        period = _lcm(delta.period(), theta.period())
        return TailedSpec.periodic(phase_at(m) for m in range(period))
    d_lo, d_hi = delta.head_range()
    t_lo, t_hi = theta.head_range()
    s = spec.sup_delta()
    margin = math.ceil(2.0 * s) + 2
    lo = min(d_lo, t_lo, 0) - margin
    hi = max(d_hi, t_hi, 0) + margin
    if spec.side is Side.ONE_SIDED:
        lo = max(lo, 0)
    entries = {m: phase_at(m) for m in range(lo, hi + 1)}
    right = normalize_phase(
        (theta.default_right if theta.kind is TailKind.TABLE else theta.constant) + math.pi)
    left = normalize_phase(
        (theta.default_left if theta.kind is TailKind.TABLE else theta.constant) + math.pi)
    return TailedSpec.table(entries, right, left)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def gamma_spec(spec: SequenceSpec, gamma_phases: TailedSpec) -> SequenceSpec:
    """The unperturbed reference sequence carrying the chosen phases."""
    return replace(spec, delta=TailedSpec.const(0.0), theta=gamma_phases)


def t_entry(spec: SequenceSpec, gamma_phases: TailedSpec, m: int, k: int,
            pol: TruncationPolicy = TruncationPolicy()):
    """T_mk = (B_m/B_k)^{2/p} e^{phi(lambda_k) - phi(gamma_m)}
    G(gamma_m) / (G'(lambda_k) (gamma_m - lambda_k))."""
    gspec = gamma_spec(spec, gamma_phases)
    gm = node(gspec, m)
    g_at = canonical_product(spec, gm, pol)
    if g_at is ZERO:
        raise SpecError(f"gamma_{m} coincides with a node of the sequence")
    dg = product_derivative_at_node(spec, k, pol)
    return _entry_from_parts(spec, gm, node(spec, k), g_at, dg)


def _entry_from_parts(spec: SequenceSpec, gm: LogComplex, lam: LogComplex,
                      g_at_gamma: LogComplex, deriv_at_node: LogComplex):
    sp = spec.space
    log_w = (sp.two_over_p * (_log_poly_factor(sp, gm) - _log_poly_factor(sp, lam))
             + weight_phi(sp, lam) - weight_phi(sp, gm))
    diff = gm - lam
    if diff is ZERO:
        raise SpecError("gamma point coincides with a node")
    return LogComplex(log_w, 0.0) * g_at_gamma / (deriv_at_node * diff)


def predicted_log_entry(spec: SequenceSpec, m: int, k: int) -> float:
    """Exponent of the predicted entry magnitude.

    0 on the diagonal; (1/(4 alpha)) (-(m-k) - 2 sum_{j=k}^{m-1} delta_j)
    below it, and the sign-flipped mirror above it.
    """
    if m == k:
        return 0.0
    alpha = spec.space.alpha
    if m > k:
        ssum = math.fsum(spec.delta.at(j) for j in range(k, m))
        return (-(m - k) - 2.0 * ssum) / (4.0 * alpha)
    ssum = math.fsum(spec.delta.at(j) for j in range(m, k))
    return (-(k - m) + 2.0 * ssum) / (4.0 * alpha)


@dataclass(frozen=True)
class TMatrixSection:
    """A rectangular block of the matrix with enough metadata to recompute it."""

    row_range: range
    col_range: range
    entries: dict[tuple[int, int], LogComplex]
    spec: SequenceSpec
    gamma_phases: TailedSpec
    pol: TruncationPolicy

    def log_abs(self, m: int, k: int) -> float:
        return self.entries[(m, k)].logmod

    def to_array(self) -> np.ndarray:
        out = np.empty((len(self.row_range), len(self.col_range)), dtype=complex)
        for i, m in enumerate(self.row_range):
            for j, k in enumerate(self.col_range):
                out[i, j] = self.entries[(m, k)].to_complex()
        return out


def assemble_section(spec: SequenceSpec, gamma_phases: TailedSpec,
                     row_range: range, col_range: range,
                     pol: TruncationPolicy = TruncationPolicy()) -> TMatrixSection:
    """All entries of the block; products are cached per row and per column."""
    if len(row_range) == 0 or len(col_range) == 0:
        raise SpecError("section ranges must be nonempty")
    gspec = gamma_spec(spec, gamma_phases)
    g_rows = {}
    for m in row_range:
        gm = node(gspec, m)
        g_at = canonical_product(spec, gm, pol)
        if g_at is ZERO:
            raise SpecError(f"gamma_{m} coincides with a node of the sequence")
        g_rows[m] = (gm, g_at)
    d_cols = {k: (node(spec, k), product_derivative_at_node(spec, k, pol))
              for k in col_range}
    entries = {}
    for m in row_range:
        gm, g_at = g_rows[m]
        for k in col_range:
            lam, dg = d_cols[k]
            entries[(m, k)] = _entry_from_parts(spec, gm, lam, g_at, dg)
    return TMatrixSection(row_range, col_range, entries, spec, gamma_phases, pol)


def decay_fit(section: TMatrixSection):
    """Least-squares slopes of log|T_mk| against the diagonal offset.

    Returns (slope_upper, slope_lower, offset): the upper fit runs over k > m
    against d = k - m, the lower over m > k against d = m - k.
    """
    if len(section.row_range) < 16 or len(section.col_range) < 16:
        raise SpecError("decay_fit needs a section of at least 16x16")
    upper, lower = [], []
    for (m, k), v in section.entries.items():
        if k > m:
            upper.append((k - m, v.logmod))
        elif m > k:
            lower.append((m - k, v.logmod))
    slopes = []
    offsets = []
    for half in (upper, lower):
        pts = [(d, y) for d, y in half if math.isfinite(y)]
        if not pts:
            raise FitDegenerateError("a triangular half has no finite entries")
        ds = np.array([d for d, _ in pts], dtype=float)
        ys = np.array([y for _, y in pts], dtype=float)
        a = np.vstack([ds, np.ones_like(ds)]).T
        coef, *_ = np.linalg.lstsq(a, ys, rcond=None)
        slopes.append(float(coef[0]))
        offsets.append(float(coef[1]))
    return slopes[0], slopes[1], (offsets[0] + offsets[1]) / 2.0


def _power_iteration_norm(a: np.ndarray, max_iter: int = 10_000,
                          tol: float = 1e-12) -> float:
    gram = a.conj().T @ a
    v = np.ones(gram.shape[0], dtype=complex)
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(max_iter):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        if abs(nw - prev) <= tol * max(nw, 1.0):
            return math.sqrt(nw)
        prev = nw
    raise PowerIterationError("spectral norm power iteration did not converge")


@dataclass(frozen=True)
class SectionNorms:
    p1: float
    p2: float
    pinf: float

    def interpolated(self, p: float) -> float:
        """Upper bound p1^{1/p} pinf^{1-1/p}, valid for 1 <= p <= inf only."""
        if p < 1:
            raise SpecError("no interpolation bound for p < 1; diagnostic only")
        inv = 0.0 if math.isinf(p) else 1.0 / p
        return self.p1 ** inv * self.pinf ** (1.0 - inv)


def section_norms(section: TMatrixSection) -> SectionNorms:
    """Exact finite-section norms for p in {1, 2, inf}.

    Max column sum, spectral norm by power iteration on the Gram form, and
    max row sum.
    """
    a = np.abs(section.to_array())
    p1 = float(a.sum(axis=0).max())
    pinf = float(a.sum(axis=1).max())
    p2 = _power_iteration_norm(section.to_array())
    return SectionNorms(p1, p2, pinf)
