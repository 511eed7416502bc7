# asymptotics.py - Epsilon grids, representative nets and valuation estimation
"""
Numerical surrogate for the valuation of a net.

We use the convention val(x) = sup{b : |x_eps| = O(eps^b)} and estimate it by a
least-squares line through (log eps, log |x_eps|) on the tail half of a
geometric grid eps_k = base^-k.  The ultra-pseudo-norm is |x|_e = e^{-val(x)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from errors import AmbiguousValuation, TooFewSamples

# magnitudes at or below this are clamped and flagged as underflow
UNDERFLOW_FLOOR = 1e-290

MIN_SAMPLES = 8


@dataclass(frozen=True)
class EpsGrid:
    """Geometric grid eps_k = base^-k for k = k_min..k_max (strictly decreasing)."""

    base: float = 2.0
    k_min: int = 6
    k_max: int = 40

    def __post_init__(self):
        if not self.base > 1:
            raise ValueError(f"grid base must be > 1, got {self.base}")
        if not self.k_min < self.k_max:
            raise ValueError(f"k_min ({self.k_min}) must be < k_max ({self.k_max})")
        if self.k_min < 0:
            raise ValueError("k_min must be >= 0 so that eps <= 1")
        if float(self.base) ** (-self.k_max) <= UNDERFLOW_FLOOR:
            raise ValueError(f"base^-k_max underflows for k_max={self.k_max}")

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def eps(self) -> np.ndarray:
        return float(self.base) ** (-self.ks.astype(float))

    @property
    def tail_start(self) -> int:
        """Index of the first sample in the tail half (largest k)."""
        n = len(self.ks)
        return n - (n + 1) // 2

    def __len__(self):
        return int(self.k_max - self.k_min + 1)

    def extended(self, k_max: int) -> "EpsGrid":
        return replace(self, k_max=k_max)

    def to_dict(self) -> dict:
        return {"base": self.base, "k_min": self.k_min, "k_max": self.k_max}


@dataclass(frozen=True)
class ValuationSettings:
    grid: EpsGrid = field(default_factory=EpsGrid)
    q_max: float = 10.0
    residual_tol: float = 0.25
    n_max: float = 12.0
    cancellation_tol: float = 1e-8


DEFAULT_SETTINGS = ValuationSettings()


class Classification(str, Enum):
    ORDER = "Order"
    BEYOND_ORDER = "BeyondOrder"
    IDENTICALLY_ZERO = "IdenticallyZero"
    AMBIGUOUS = "Ambiguous"


@dataclass(frozen=True)
class DecayEstimate:
    slope: float
    intercept: float
    residual: float
    classification: Classification
    q_max: float
    underflow: bool = False

    @property
    def order(self) -> float:
        """Measured order: the slope for Order(a), q_max for negligible nets, nan when ambiguous."""
        if self.classification is Classification.ORDER:
            return self.slope
        if self.classification is Classification.AMBIGUOUS:
            return math.nan
        return float(self.q_max)

    @property
    def negligible(self) -> bool:
        return self.classification in (Classification.BEYOND_ORDER, Classification.IDENTICALLY_ZERO)

    def label(self) -> str:
        if self.classification is Classification.ORDER:
            return f"Order({self.slope:.3f})"
        if self.classification is Classification.BEYOND_ORDER:
            return f"BeyondOrder({self.q_max:g})"
        return self.classification.value

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "order": self.order,
            "underflow": self.underflow,
        }


def estimate_valuation(samples: Iterable[tuple[float, float]], q_max: float = 10.0,
                       residual_tol: float = 0.25, floor: float = UNDERFLOW_FLOOR) -> DecayEstimate:
    """Fit log|x| against log eps on the tail half of the samples and classify the net."""
    pairs = [(float(e), float(m)) for e, m in samples]
    if len(pairs) < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {len(pairs)}")

    eps = np.array([p[0] for p in pairs])
    mags = np.array([p[1] for p in pairs])
    if np.any(~np.isfinite(eps)) or np.any(eps <= 0) or np.any(eps > 1):
        raise ValueError("eps samples must lie in (0, 1]")
    if len(np.unique(eps)) != len(eps):
        raise ValueError("eps samples must be distinct")
    if np.any(np.isnan(mags)) or np.any(mags < 0):
        raise ValueError("magnitudes must be non-negative numbers")

    if np.all(mags == 0):
        return DecayEstimate(float(q_max), 0.0, 0.0, Classification.IDENTICALLY_ZERO, q_max)

    order = np.argsort(-eps)
    eps, mags = eps[order], mags[order]
    n = len(eps)
    tail = np.arange(n - (n + 1) // 2, n)

    flagged = mags <= floor
    log_e = np.log(eps)
    log_m = np.log(np.clip(mags, floor, np.finfo(float).max))
    underflow = bool(np.any(flagged[tail]))

    if np.all(flagged[tail]):
        return DecayEstimate(float(q_max), float(np.log(floor)), 0.0,
                             Classification.BEYOND_ORDER, q_max, True)

    # every tail sample already under eps^q_max (or flagged) is enough
    if np.all(flagged[tail] | (log_m[tail] <= q_max * log_e[tail])):
        slope, intercept = np.polyfit(log_e[tail], log_m[tail], 1)
        return DecayEstimate(float(max(slope, q_max)), float(intercept), 0.0,
                             Classification.BEYOND_ORDER, q_max, underflow)

    fit = tail
    if underflow:
        # flagged samples only bound the net from above; fit the last resolved ones
        resolved = np.flatnonzero(~flagged)
        fit = resolved[len(resolved) - (len(resolved) + 1) // 2:]
        if len(fit) < 3:
            return DecayEstimate(float(q_max), float(np.log(floor)), 0.0,
                                 Classification.BEYOND_ORDER, q_max, True)

    slope, intercept = np.polyfit(log_e[fit], log_m[fit], 1)
    fitted = slope * log_e[fit] + intercept
    residual = float(np.sqrt(np.mean((log_m[fit] - fitted) ** 2)))

    if residual <= residual_tol:
        if slope >= q_max:
            return DecayEstimate(float(slope), float(intercept), residual,
                                 Classification.BEYOND_ORDER, q_max, underflow)
        return DecayEstimate(float(slope), float(intercept), residual,
                             Classification.ORDER, q_max, underflow)

    return DecayEstimate(float(slope), float(intercept), residual,
                         Classification.AMBIGUOUS, q_max, underflow)


def ultra_norm(d: DecayEstimate) -> float:
    """e^{-val}: e^{-slope} for Order(slope), 0 for negligible nets."""
    if d.classification is Classification.AMBIGUOUS:
        raise AmbiguousValuation(f"no valuation for ambiguous fit (residual {d.residual:.3f})")
    if d.classification is Classification.ORDER:
        return math.exp(-d.slope)
    return 0.0


class EpsNet:
    """A representative net eps -> value (scalar or vector).

    ``scale`` maps eps to the magnitude of the terms the value was computed
    from; it defaults to |value| and drives the numerically-zero test.
    Samples are memoized per eps, so composite nets never re-evaluate their parts.
    """

    def __init__(self, func: Callable[[float], object], scale: Callable[[float], float] | None = None,
                 label: str = "net", paired: bool = False):
        self.func = func
        self._scale = scale
        self._paired = paired
        self.label = label
        self._memo: dict[float, tuple[object, float | None]] = {}

    @classmethod
    def paired(cls, func: Callable[[float], tuple[object, float]], label: str = "net") -> "EpsNet":
        """Net whose function returns (value, scale) in one evaluation."""
        return cls(func, label=label, paired=True)

    def _sample(self, eps: float):
        eps = float(eps)
        hit = self._memo.get(eps)
        if hit is None:
            if self._paired:
                value, scale = self.func(eps)
            else:
                value, scale = self.func(eps), None
            hit = (value, scale)
            self._memo[eps] = hit
        return hit

    def __call__(self, eps: float):
        return self._sample(eps)[0]

    def scale(self, eps: float) -> float:
        value, scale = self._sample(eps)
        if scale is not None:
            return float(scale)
        if self._scale is not None:
            return float(self._scale(eps))
        return float(np.linalg.norm(np.atleast_1d(value)))

    def sample(self, grid: EpsGrid) -> np.ndarray:
        return np.array([self(e) for e in grid.eps])

    def magnitudes(self, grid: EpsGrid, cancellation_tol: float = 0.0) -> np.ndarray:
        return cancelled_magnitudes(
            [self(e) for e in grid.eps],
            [self.scale(e) for e in grid.eps] if cancellation_tol > 0 else None,
            cancellation_tol,
        )

    # arithmetic at representative level
    def __add__(self, other):
        other = as_net(other)
        return EpsNet(lambda e: self(e) + other(e), lambda e: self.scale(e) + other.scale(e),
                      f"({self.label} + {other.label})")

    __radd__ = __add__

    def __neg__(self):
        return EpsNet(lambda e: -self(e), self.scale, f"-{self.label}")

    def __sub__(self, other):
        return self + (-as_net(other))

    def __rsub__(self, other):
        return as_net(other) - self

    def __mul__(self, other):
        other = as_net(other)
        return EpsNet(lambda e: self(e) * other(e), lambda e: self.scale(e) * other.scale(e),
                      f"{self.label}*{other.label}")

    __rmul__ = __mul__

    def scale_pow(self, r: float) -> "EpsNet":
        return EpsNet(lambda e: self(e) * e ** r, lambda e: self.scale(e) * e ** r,
                      f"eps^{r:g}*{self.label}")

    def map(self, func: Callable[[object], object], label: str | None = None) -> "EpsNet":
        """Apply ``func`` to every sample, keeping the scale."""
        return EpsNet(lambda e: func(self(e)), self.scale, label or self.label)

    def __repr__(self):
        return f"EpsNet({self.label})"


def as_net(value) -> EpsNet:
    if isinstance(value, EpsNet):
        return value
    if callable(value):
        return EpsNet(value)
    const = complex(value) if isinstance(value, complex) else float(value)
    return EpsNet(lambda e: const, label=f"{value}")


def power_net(a: float, c: float = 1.0) -> EpsNet:
    return EpsNet(lambda e: c * e ** a, label=f"{c:g}*eps^{a:g}")


def cancelled_magnitudes(values: Sequence, scales: Sequence | None, tol: float) -> np.ndarray:
    """|values| with numerically-zero entries pushed below the underflow floor.

    An entry is numerically zero when 0 < |v| <= tol * scale; exact zeros stay exact.
    """
    mags = np.array([float(np.linalg.norm(np.atleast_1d(v))) for v in values])
    if scales is None or tol <= 0:
        return mags
    scales = np.asarray(scales, dtype=float)
    cancelled = (mags > 0) & (mags <= tol * scales)
    mags[cancelled] = UNDERFLOW_FLOOR * 0.5
    return mags


def sample_net(net: EpsNet, grid: EpsGrid, cancellation_tol: float = 0.0) -> list[tuple[float, float]]:
    return list(zip(grid.eps.tolist(), net.magnitudes(grid, cancellation_tol).tolist()))


def estimate_net(net: EpsNet, settings: ValuationSettings = DEFAULT_SETTINGS,
                 cancellation: bool = True) -> DecayEstimate:
    tol = settings.cancellation_tol if cancellation else 0.0
    return estimate_valuation(sample_net(net, settings.grid, tol), settings.q_max, settings.residual_tol)


def is_negligible(net: EpsNet, q_max: float | None = None,
                  settings: ValuationSettings = DEFAULT_SETTINGS) -> bool:
    """True iff the measured order is >= q_max or every tail sample is below the floor."""
    if q_max is not None:
        settings = replace(settings, q_max=q_max)
    d = estimate_net(net, settings)
    if d.classification is Classification.AMBIGUOUS:
        raise AmbiguousValuation(f"{net.label}: residual {d.residual:.3f} above {settings.residual_tol}")
    return d.negligible


def log2_series(eps: np.ndarray, mags: np.ndarray) -> list[list[float]]:
    """Plot-ready (log2 eps, log2 magnitude) pairs; magnitudes are clamped at the floor."""
    return [[float(np.log2(e)), float(np.log2(max(m, UNDERFLOW_FLOOR)))] for e, m in zip(eps, mags)]


def leading_constant(net: EpsNet, exponent: float, grid: EpsGrid) -> complex:
    """Median of x_eps * eps^-exponent over the tail half of the grid."""
    eps = grid.eps[grid.tail_start:]
    vals = np.array([complex(np.atleast_1d(net(e))[0]) * e ** (-exponent) for e in eps])
    c = complex(np.median(vals.real), np.median(vals.imag))
    return c.real if c.imag == 0 else c
