"""Sequence model, log-domain complex arithmetic, and the d_log geometry.

Node moduli grow like e^{k/(2*alpha)}, so everything downstream works with
(log-magnitude, phase) pairs instead of native complex numbers; native floats
would overflow already around k ~ 60*alpha.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable

TAU = 2.0 * math.pi


class SpecError(ValueError):
    """Invalid sequence specification or parameter."""


class IndexDomainError(SpecError):
    """Index outside the admissible index set for the chosen side."""


class UnsupportedSideError(SpecError):
    """Operation requires the other sidedness."""


class DegenerateSequenceError(SpecError):
    """Two nodes of the sequence coincide exactly."""


def normalize_phase(phase: float) -> float:
    """Map a phase in radians into (-pi, pi]."""
    r = math.remainder(phase, TAU)
    if r <= -math.pi:
        r += TAU
    return r


def softplus(x: float) -> float:
    """log(1 + e^x), overflow-safe."""
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


class Side(Enum):
    ONE_SIDED = "one"
    TWO_SIDED = "two"


@dataclass(frozen=True)
class SpaceParams:
    """Weight constant alpha, integrability exponent p, and sidedness.

    p = math.inf is a legal, distinguished value; 2/p is then 0.
    """

    alpha: float
    p: float
    side: Side

    def __post_init__(self):
        if not (self.alpha > 0):
            raise SpecError(f"alpha must be positive, got {self.alpha}")
        if not (self.p > 0):
            raise SpecError(f"p must be positive, got {self.p}")

    @property
    def two_over_p(self) -> float:
        return 0.0 if math.isinf(self.p) else 2.0 / self.p


class _Zero:
    """Distinguished exact-zero value; not a LogComplex."""

    __slots__ = ()

    def __repr__(self):
        return "ZERO"

    def __bool__(self):
        return False


ZERO = _Zero()


@dataclass(frozen=True)
class LogComplex:
    """Nonzero complex number stored as (log-magnitude, phase in (-pi, pi]).

    Multiplication and division are exact in (logmod, phase) arithmetic up to
    floating round-off; addition factors out the larger magnitude so the ratio
    is representable natively.
    """

    logmod: float
    phase: float

    @staticmethod
    def from_polar(logmod: float, phase: float) -> "LogComplex":
        return LogComplex(logmod, normalize_phase(phase))

    @staticmethod
    def from_complex(z: complex):
        z = complex(z)
        if z == 0:
            return ZERO
        return LogComplex(math.log(abs(z)), normalize_phase(cmath.phase(z)))

    @staticmethod
    def from_real(x: float):
        if x == 0:
            return ZERO
        return LogComplex(math.log(abs(x)), 0.0 if x > 0 else math.pi)

    def to_complex(self) -> complex:
        return cmath.rect(math.exp(self.logmod), self.phase)

    @property
    def modulus(self) -> float:
        return math.exp(self.logmod)

    def __mul__(self, other):
        if other is ZERO:
            return ZERO
        return LogComplex(self.logmod + other.logmod,
                          normalize_phase(self.phase + other.phase))

    def __truediv__(self, other):
        if other is ZERO:
            raise ZeroDivisionError("division by ZERO")
        return LogComplex(self.logmod - other.logmod,
                          normalize_phase(self.phase - other.phase))

    def __neg__(self) -> "LogComplex":
        return LogComplex(self.logmod, normalize_phase(self.phase + math.pi))

    def __add__(self, other):
        if other is ZERO:
            return self
        if self.logmod >= other.logmod:
            big, small = self, other
        else:
            big, small = other, self
        ratio = cmath.exp(complex(small.logmod - big.logmod,
                                  small.phase - big.phase))
        s = 1.0 + ratio
        if s == 0:
            return ZERO
        return big * LogComplex.from_complex(s)

    def __sub__(self, other):
        if other is ZERO:
            return self
        if self.logmod == other.logmod and self.phase == other.phase:
            return ZERO
        return self + (-other)

    def pow_real(self, e: float) -> "LogComplex":
        return LogComplex(e * self.logmod, normalize_phase(e * self.phase))


def one_minus(w) -> LogComplex | _Zero:
    """1 - w, overflow-safe for |w| of any magnitude."""
    if w is ZERO:
        return LogComplex(0.0, 0.0)
    if w.logmod <= 30.0:
        return LogComplex.from_complex(1.0 - cmath.exp(complex(w.logmod, w.phase)))
    # 1 - w = (-w) * (1 - 1/w); 1/w is tiny here.
    inv = cmath.exp(complex(-w.logmod, -w.phase))
    return (-w) * LogComplex.from_complex(1.0 - inv)


class TailKind(Enum):
    CONSTANT = "constant"
    PERIODIC = "periodic"
    TABLE = "table"


@dataclass(frozen=True)
class TailedSpec:
    """Finitely described real sequence over N0 or Z.

    CONSTANT(c): every index maps to c.
    PERIODIC(values): index k maps to values[k mod len(values)].
    TABLE(entries, default_right, default_left): finite overrides over
    constant tails; default_left is consulted only for negative indices.
    """

    kind: TailKind
    constant: float = 0.0
    values: tuple[float, ...] = ()
    entries: dict[int, float] = field(default_factory=dict)
    default_right: float = 0.0
    default_left: float = 0.0

    def __post_init__(self):
        if self.kind is TailKind.PERIODIC and not self.values:
            raise SpecError("PERIODIC values list must be nonempty")

    @staticmethod
    def const(c: float) -> "TailedSpec":
        return TailedSpec(TailKind.CONSTANT, constant=float(c))

    @staticmethod
    def periodic(values: Iterable[float]) -> "TailedSpec":
        return TailedSpec(TailKind.PERIODIC, values=tuple(float(v) for v in values))

    @staticmethod
    def table(entries: dict[int, float], default_right: float = 0.0,
              default_left: float = 0.0) -> "TailedSpec":
        return TailedSpec(TailKind.TABLE,
                          entries={int(k): float(v) for k, v in entries.items()},
                          default_right=float(default_right),
                          default_left=float(default_left))

    def at(self, k: int) -> float:
        if self.kind is TailKind.CONSTANT:
            return self.constant
        if self.kind is TailKind.PERIODIC:
            return self.values[k % len(self.values)]
        if k in self.entries:
            return self.entries[k]
        return self.default_right if k >= 0 else self.default_left

    def sup_abs(self, side: Side) -> float:
        """Exact sup of |values| over the admissible index set."""
        if self.kind is TailKind.CONSTANT:
            return abs(self.constant)
        if self.kind is TailKind.PERIODIC:
            return max(abs(v) for v in self.values)
        vals = [abs(v) for k, v in self.entries.items()
                if side is Side.TWO_SIDED or k >= 0]
        vals.append(abs(self.default_right))
        if side is Side.TWO_SIDED:
            vals.append(abs(self.default_left))
        return max(vals)

    def period(self) -> int:
        """Period of the tail pattern (1 for CONSTANT and TABLE tails)."""
        return len(self.values) if self.kind is TailKind.PERIODIC else 1

    def head_range(self) -> tuple[int, int]:
        """Smallest [lo, hi) containing every index with non-tail value."""
        if self.kind is TailKind.TABLE and self.entries:
            ks = self.entries.keys()
            return min(ks), max(ks) + 1
        return 0, 0

    def plus(self, c: float) -> "TailedSpec":
        """Pointwise shift by the constant c."""
        if self.kind is TailKind.CONSTANT:
            return TailedSpec.const(self.constant + c)
        if self.kind is TailKind.PERIODIC:
            return TailedSpec.periodic(v + c for v in self.values)
        return TailedSpec.table({k: v + c for k, v in self.entries.items()},
                                self.default_right + c, self.default_left + c)

    def shifted(self, m: int) -> "TailedSpec":
        """Re-indexed sequence: value at k is the old value at k + m."""
        if self.kind is TailKind.CONSTANT or m == 0:
            return self
        if self.kind is TailKind.PERIODIC:
            n = len(self.values)
            return TailedSpec.periodic(self.values[(i + m) % n] for i in range(n))
        return TailedSpec.table({k - m: v for k, v in self.entries.items()},
                                self.default_right, self.default_left)


@dataclass(frozen=True)
class SequenceSpec:
    """Perturbed geometric sequence lambda_k = e^{(k + 2/p + delta_k)/(2 alpha)} e^{i theta_k}."""

    delta: TailedSpec
    theta: TailedSpec
    space: SpaceParams

    @property
    def side(self) -> Side:
        return self.space.side

    def sup_delta(self) -> float:
        return self.delta.sup_abs(self.side)

    def min_index(self):
        return 0 if self.side is Side.ONE_SIDED else None

    def is_monotone(self) -> bool:
        """Whether k + delta_k is nondecreasing in k."""
        lo, hi = self.delta.head_range()
        period = self.delta.period()
        start = 0 if self.side is Side.ONE_SIDED else lo - period - 2
        stop = max(hi, 0) + period + 2
        return all(self.delta.at(k + 1) - self.delta.at(k) >= -1.0
                   for k in range(start, stop))

    def canonicalized(self) -> "SequenceSpec":
        """Sort nodes by modulus and recompute delta if monotonicity fails."""
        if self.is_monotone():
            return self
        return _sort_spec(self)


def _sort_spec(spec: SequenceSpec) -> SequenceSpec:
    delta, theta = spec.delta, spec.theta
    # Bounded perturbation => sorting displaces each node by at most this many slots.
    disp = math.ceil(2.0 * spec.sup_delta()) + 2

    if delta.kind is TailKind.PERIODIC or theta.kind is TailKind.PERIODIC:
        if delta.kind is TailKind.TABLE or theta.kind is TailKind.TABLE:
            raise SpecError("cannot canonicalize mixed TABLE/PERIODIC delta and theta")
        period = _lcm(delta.period(), theta.period())
        lo, hi = -period - disp, 2 * period + disp
        new_d, new_t = _sorted_window(spec, lo, hi)
        base = period + disp  # window offset of index 0
        dv = [new_d[base + i] for i in range(period)]
        tv = [new_t[base + i] for i in range(period)]
        return replace(spec, delta=TailedSpec.periodic(dv), theta=TailedSpec.periodic(tv))

    if theta.kind not in (TailKind.CONSTANT, TailKind.TABLE):
        raise SpecError("cannot canonicalize this delta/theta combination")
    d_lo, d_hi = delta.head_range()
    t_lo, t_hi = theta.head_range()
    lo = min(d_lo, t_lo, 0) - disp - 1
    hi = max(d_hi, t_hi, 0) + disp + 1
    if spec.side is Side.ONE_SIDED:
        lo = max(lo, 0)
    new_d, new_t = _sorted_window(spec, lo, hi)
    d_entries = {lo + i: v for i, v in enumerate(new_d)}
    t_entries = {lo + i: v for i, v in enumerate(new_t)}
    return replace(
        spec,
        delta=TailedSpec.table(d_entries, delta.default_right if delta.kind is TailKind.TABLE else delta.constant,
                               delta.default_left if delta.kind is TailKind.TABLE else delta.constant),
        theta=TailedSpec.table(t_entries, theta.default_right if theta.kind is TailKind.TABLE else theta.constant,
                               theta.default_left if theta.kind is TailKind.TABLE else theta.constant),
    )


def _sorted_window(spec: SequenceSpec, lo: int, hi: int):
    ks = range(lo, hi)
    pairs = sorted(((k + spec.delta.at(k), spec.theta.at(k), k) for k in ks),
                   key=lambda t: (t[0], t[2]))
    new_d = [v - (lo + i) for i, (v, _t, _k) in enumerate(pairs)]
    new_t = [t for (_v, t, _k) in pairs]
    return new_d, new_t


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def node(spec: SequenceSpec, k: int) -> LogComplex:
    """The k-th node lambda_k as a LogComplex."""
    if spec.side is Side.ONE_SIDED and k < 0:
        raise IndexDomainError(f"index {k} invalid for a one-sided sequence")
    sp = spec.space
    logmod = (k + sp.two_over_p + spec.delta.at(k)) / (2.0 * sp.alpha)
    return LogComplex.from_polar(logmod, spec.theta.at(k))


def dlog(z: LogComplex, w: LogComplex) -> float:
    """Product metric on R x T: |log|z| - log|w|| + |z/|z| - w/|w||."""
    if z is ZERO or w is ZERO:
        raise SpecError("d_log is defined on nonzero values only")
    return abs(z.logmod - w.logmod) + abs(
        cmath.exp(1j * z.phase) - cmath.exp(1j * w.phase))


def _euclid(z: LogComplex, w: LogComplex) -> float:
    return abs(z.to_complex() - w.to_complex())


def dlog_plus(z: LogComplex, w: LogComplex) -> float:
    """One-sided separation quantity.

    d_log for moduli >= 1, Euclidean inside the unit disc, and
    max(d_log, Euclidean) in the mixed case (a fixed, documented choice).
    """
    if z is ZERO or w is ZERO:
        raise SpecError("d_log+ is defined on nonzero values only")
    if z.logmod >= 0 and w.logmod >= 0:
        return dlog(z, w)
    if z.logmod < 0 and w.logmod < 0:
        return _euclid(z, w)
    return max(dlog(z, w), _euclid(z, w))


@dataclass(frozen=True)
class DistResult:
    """Euclidean distance to the sequence, kept in log-magnitude form."""

    log_dist: float  # -inf when z lies exactly on the sequence
    index: int

    @property
    def dist(self) -> float:
        return math.exp(self.log_dist)


def _node_window(spec: SequenceSpec, z: LogComplex) -> range:
    sp = spec.space
    s = spec.sup_delta()
    center = 2.0 * sp.alpha * z.logmod - sp.two_over_p
    half = 2.0 * sp.alpha * (s + 1.0) + 1.0
    lo = math.floor(center - half)
    hi = math.ceil(center + half)
    if spec.side is Side.ONE_SIDED:
        lo = max(lo, 0)
        hi = max(hi, lo + math.ceil(2.0 * s) + 2)
    return range(lo, hi + 1)


def dist_to_sequence(spec: SequenceSpec, z: LogComplex) -> DistResult:
    """min_k |z - lambda_k| with the attaining index (ties to smaller index).

    The search window provably contains the minimizer because the node
    moduli grow geometrically.
    """
    if z is ZERO:
        raise SpecError("distance to the sequence requires nonzero z")
    best_log = math.inf
    best_k = None
    window = _node_window(spec, z)
    for k in window:
        lam = node(spec, k)
        diff = z - lam
        d = -math.inf if diff is ZERO else diff.logmod
        if d < best_log:
            best_log, best_k = d, k
    # Nodes of smaller modulus can still be nearest when z sits on a far ray
    # (their distances approach |z| from below); scan left until |lambda_k|
    # drops below the double-precision resolution of |z|.
    k = window.start - 1
    floor_k = 0 if spec.side is Side.ONE_SIDED else None
    while (floor_k is None or k >= floor_k) \
            and node(spec, k).logmod - z.logmod >= -40.0:
        diff = z - node(spec, k)
        d = -math.inf if diff is ZERO else diff.logmod
        if d <= best_log:
            best_log, best_k = d, k
        k -= 1
    return DistResult(best_log, best_k)


def dlog_nearest_index(spec: SequenceSpec, z: LogComplex) -> int:
    """Index of the d_log-closest node (d_log+ one-sided); ties to smaller index.

    Unlike the Euclidean distance, d_log grows without bound toward 0 and
    infinity, so a finite window around the modulus-matching index suffices.
    """
    if z is ZERO:
        raise SpecError("nearest-node search requires nonzero z")
    metric = dlog_plus if spec.side is Side.ONE_SIDED else dlog
    sp = spec.space
    s = spec.sup_delta()
    center = 2.0 * sp.alpha * z.logmod - sp.two_over_p

    def scan(lo: int, hi: int) -> tuple[float, int]:
        best, best_k = math.inf, lo
        for k in range(lo, hi + 1):
            d = metric(z, node(spec, k))
            if d < best:
                best, best_k = d, k
        return best, best_k

    half = math.ceil(2.0 * sp.alpha * (s + 1.0) + 1.0)
    lo, hi = math.floor(center) - half, math.ceil(center) + half
    if spec.side is Side.ONE_SIDED:
        # scan from 0: the Euclidean branch inside the unit disc breaks the
        # modulus-gap exclusion argument, and the index range is short anyway
        lo = 0
        hi = max(hi, 0)
        return scan(lo, hi)[1]
    best, _ = scan(lo, hi)
    # nodes at index offset o from the center have d_log >= (o - 2s)/(2 alpha)
    off = half + math.ceil(2.0 * sp.alpha * best + 2.0 * s) + 2
    return scan(math.floor(center) - off, math.ceil(center) + off)[1]


def _pattern_window(spec: SequenceSpec, extra: int) -> range:
    """Index window containing a representative of every local pattern."""
    d_lo, d_hi = spec.delta.head_range()
    t_lo, t_hi = spec.theta.head_range()
    period = _lcm(spec.delta.period(), spec.theta.period())
    lo = min(d_lo, t_lo, 0) - 2 * period - extra
    hi = max(d_hi, t_hi, 0) + 2 * period + extra
    if spec.side is Side.ONE_SIDED:
        lo = 0
    return range(lo, hi + 1)


def separation_constant(spec: SequenceSpec) -> float:
    """Exact infimum of the separation metric over distinct node pairs.

    Uses d_log+ for one-sided and d_log for two-sided specs.  Finitely many
    pair classes are enumerated; larger index offsets are excluded by the
    monotone tail bound |log|lambda_j| - log|lambda_k|| >= (|j-k| - 2 sup|delta|)/(2 alpha).
    """
    metric = dlog_plus if spec.side is Side.ONE_SIDED else dlog
    s = spec.sup_delta()
    alpha = spec.space.alpha

    # Adjacent pairs give an upper bound on the infimum, which then caps the
    # offsets that need scanning.
    window = _pattern_window(spec, math.ceil(2 * s) + 2)
    nodes = {k: node(spec, k) for k in window}
    best = math.inf
    for k in window[:-1]:
        best = min(best, metric(nodes[k], nodes[k + 1]))
    max_offset = max(1, math.ceil(2.0 * alpha * best + 2.0 * s) + 1)

    window = _pattern_window(spec, max_offset + math.ceil(2 * s) + 2)
    nodes = {k: node(spec, k) for k in window}
    for j in window:
        for d in range(1, max_offset + 1):
            k = j + d
            if k not in nodes:
                break
            a, b = nodes[j], nodes[k]
            if a == b:
                return 0.0
            best = min(best, metric(a, b))
    return best
