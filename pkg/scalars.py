# scalars.py - Generalized numbers and generalized points
"""
GenNumber wraps an EpsNet of complex values; GenPoint an EpsNet of points in R^n.
Both are checked for moderateness on construction: a sample growing faster
than eps^-n_max anywhere on the tail of the grid rejects the net.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from asymptotics import (DEFAULT_SETTINGS, Classification, DecayEstimate, EpsNet, ValuationSettings,
                         as_net, estimate_net, is_negligible)
from errors import NonModerateNet, WindowEmpty


@dataclass(frozen=True)
class SupportSettings:
    cluster_radius: float = 1e-3
    segments: int = 4
    samples_per_level: int = 128


DEFAULT_SUPPORT = SupportSettings()


@dataclass(frozen=True)
class Box:
    """Axis-aligned closed box [lo_1, hi_1] x ... x [lo_n, hi_n]."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in np.atleast_1d(self.lo)))
        object.__setattr__(self, "hi", tuple(float(v) for v in np.atleast_1d(self.hi)))
        if len(self.lo) != len(self.hi):
            raise ValueError("box bounds differ in dimension")

    @classmethod
    def interval(cls, lo, hi):
        return cls((lo,), (hi,))

    @classmethod
    def cube(cls, lo, hi, dim):
        return cls((lo,) * dim, (hi,) * dim)

    @property
    def dim(self):
        return len(self.lo)

    @property
    def is_empty(self):
        return any(a > b for a, b in zip(self.lo, self.hi))

    @property
    def center(self):
        return tuple(0.5 * (a + b) for a, b in zip(self.lo, self.hi))

    @property
    def half_widths(self):
        return tuple(0.5 * (b - a) for a, b in zip(self.lo, self.hi))

    def bounds(self, axis=0):
        return self.lo[axis], self.hi[axis]

    def contains(self, point, tol=0.0):
        p = np.atleast_1d(point)
        return all(a - tol <= x <= b + tol for a, x, b in zip(self.lo, p, self.hi))

    def contains_box(self, other: "Box"):
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def interior_contains_box(self, other: "Box", margin=0.0):
        return all(a + margin < c and d < b - margin for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def expanded(self, margin):
        return Box(tuple(a - margin for a in self.lo), tuple(b + margin for b in self.hi))

    def to_dict(self):
        return {"lo": list(self.lo), "hi": list(self.hi)}

    def __repr__(self):
        return " x ".join(f"[{a:g}, {b:g}]" for a, b in zip(self.lo, self.hi))


def _tail_eps(settings):
    grid = settings.grid
    return grid.eps[grid.tail_start:]


class GenNumber:
    """Element of C~: a moderate net of complex numbers."""

    def __init__(self, net, settings: ValuationSettings = DEFAULT_SETTINGS, check=True, label=None):
        self.net = as_net(net)
        if label:
            self.net.label = label
        self.settings = settings
        self._estimate = None
        if check:
            self._check_moderate()

    def _check_moderate(self):
        for e in _tail_eps(self.settings):
            mag = float(np.linalg.norm(np.atleast_1d(self.net(e))))
            if not math.isfinite(mag) or mag > e ** (-self.settings.n_max):
                raise NonModerateNet(
                    f"{self.net.label}: |x| = {mag:.3e} at eps = {e:.3e} exceeds eps^-{self.settings.n_max:g}")

    @property
    def label(self):
        return self.net.label

    @property
    def estimate(self) -> DecayEstimate:
        if self._estimate is None:
            self._estimate = estimate_net(self.net, self.settings)
        return self._estimate

    def value(self, eps):
        return self.net(eps)

    def _wrap(self, net):
        return GenNumber(net, self.settings, check=False)

    def __add__(self, other):
        return gn_add(self, _as_number(other, self.settings))

    __radd__ = __add__

    def __sub__(self, other):
        return gn_add(self, -_as_number(other, self.settings))

    def __rsub__(self, other):
        return gn_add(_as_number(other, self.settings), -self)

    def __neg__(self):
        return self._wrap(-self.net)

    def __mul__(self, other):
        return gn_mul(self, _as_number(other, self.settings))

    __rmul__ = __mul__

    def scale_pow(self, r):
        return gn_scale_pow(self, r)

    def to_dict(self):
        return {"label": self.label, "estimate": self.estimate.to_dict()}

    def __repr__(self):
        return f"GenNumber({self.label})"


def _as_number(value, settings):
    if isinstance(value, GenNumber):
        return value
    return GenNumber(as_net(value), settings, check=False)


def gn_add(a: GenNumber, b: GenNumber) -> GenNumber:
    return GenNumber(a.net + b.net, a.settings, check=False)


def gn_mul(a: GenNumber, b: GenNumber) -> GenNumber:
    return GenNumber(a.net * b.net, a.settings, check=False)


def gn_scale_pow(a: GenNumber, r: float) -> GenNumber:
    """a * [(eps^r)]."""
    return GenNumber(a.net.scale_pow(r), a.settings, check=False)


def gn_equal(a: GenNumber, b: GenNumber, q_max=None) -> bool:
    """Equality in C~: the difference is negligible (order >= q_max)."""
    return is_negligible((a - b).net, q_max, a.settings)


# --- points ----------------------------------------------------------------------

def dyadic_valuation(n: int) -> int:
    """Exponent of 2 in n (0 for n = 0); every natural number recurs infinitely often."""
    n = int(n)
    if n <= 0:
        return 0
    return (n & -n).bit_length() - 1


class GenPoint:
    """Element of the generalized points: a moderate net eps -> x_eps in R^n."""

    def __init__(self, net, dimension=1, domain: Box | None = None,
                 settings: ValuationSettings = DEFAULT_SETTINGS, label=None, check=True):
        self.net = net if isinstance(net, EpsNet) else EpsNet(net, label=label or "x_eps")
        if label:
            self.net.label = label
        self.dimension = dimension
        self.domain = domain
        self.settings = settings
        if check:
            for e in _tail_eps(settings):
                mag = float(np.max(np.abs(self.at(e))))
                if not math.isfinite(mag) or mag > e ** (-settings.n_max):
                    raise NonModerateNet(f"{self.label}: |x_eps| = {mag:.3e} at eps = {e:.3e}")

    @classmethod
    def constant(cls, x0, settings=DEFAULT_SETTINGS, domain=None):
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        value = float(x0[0]) if x0.size == 1 else x0
        label = f"{float(x0[0]):g}" if x0.size == 1 else str(tuple(x0.tolist()))
        return cls(EpsNet(lambda e: value, label=label), x0.size, domain, settings)

    @classmethod
    def from_function(cls, func: Callable[[float], object], label, dimension=1, settings=DEFAULT_SETTINGS,
                      domain=None):
        return cls(EpsNet(func, label=label), dimension, domain, settings)

    @classmethod
    def piecewise(cls, values: Callable[[int], float] | Sequence[float], label="piecewise",
                  settings=DEFAULT_SETTINGS, domain=None):
        """x_eps = x_n for eps in (1/(n+2), 1/(n+1)], n = 0, 1, 2, ..."""
        lookup = values if callable(values) else (lambda n: values[min(n, len(values) - 1)])

        def func(e):
            n = max(int(math.floor(1.0 / e)) - 1, 0)
            return float(lookup(n))

        return cls(EpsNet(func, label=label), 1, domain, settings)

    @property
    def label(self):
        return self.net.label

    def at(self, eps):
        return np.atleast_1d(np.asarray(self.net(eps), dtype=float))

    def coordinate(self, axis=0) -> Callable[[float], float]:
        if self.dimension == 1:
            return lambda e: float(self.net(e))
        return lambda e: float(self.at(e)[axis])

    def perturbed(self, r: float, c: float = 1.0) -> "GenPoint":
        """The same class with representative x_eps + c eps^r."""
        return GenPoint(EpsNet(lambda e: self.net(e) + c * e ** r, label=f"{self.label}+{c:g}eps^{r:g}"),
                        self.dimension, self.domain, self.settings, check=False)

    def __repr__(self):
        return f"GenPoint({self.label})"


def support_samples(settings: ValuationSettings, per_level: int):
    """Tail sample points eps = 1/(m + 1/2) grouped by base-adic level of the grid tail.

    Within a level the m run with an odd stride, so residues modulo small powers
    of two are all visited.
    """
    grid = settings.grid
    levels = []
    for k in grid.ks[grid.tail_start:]:
        start = int(math.ceil(float(grid.base) ** int(k)))
        stop = int(math.floor(float(grid.base) ** (int(k) + 1)))
        span = max(stop - start, 1)
        stride = max(span // per_level, 1) | 1
        ms = [start + i * stride for i in range(per_level) if start + i * stride < start + span]
        levels.append([1.0 / (m + 0.5) for m in ms])
    return levels


def _cluster(points, radius):
    """Greedy clustering in the max-norm; seeds are visited in sorted order."""
    order = sorted(range(len(points)), key=lambda i: tuple(points[i]))
    seeds, members = [], []
    for i in order:
        p = points[i]
        for c, seed in enumerate(seeds):
            if np.max(np.abs(p - seed)) <= radius:
                members[c].append(i)
                break
        else:
            seeds.append(p)
            members.append([i])
    return members


def point_support(x: GenPoint, window: Box, cluster_radius=None,
                  support: SupportSettings = DEFAULT_SUPPORT) -> frozenset:
    """Approximate accumulation set of the trajectory inside ``window``.

    A cluster of tail samples counts when it has members in every one of
    ``support.segments`` consecutive tail segments.  Returns floats in one
    dimension and tuples otherwise.
    """
    if window.is_empty:
        raise WindowEmpty(f"support window {window!r} is empty")
    if not all(math.isfinite(v) for v in window.lo + window.hi):
        raise WindowEmpty("support window must be bounded")
    radius = support.cluster_radius if cluster_radius is None else cluster_radius

    levels = support_samples(x.settings, support.samples_per_level)
    segments = np.array_split(np.arange(len(levels)), min(support.segments, len(levels)))
    points, seg_of = [], []
    for s, idx in enumerate(segments):
        for level in idx:
            for e in levels[level]:
                p = x.at(e)
                if window.contains(p):
                    points.append(p)
                    seg_of.append(s)
    if not points:
        return frozenset()

    found = set()
    for cluster in _cluster(points, radius):
        if len({seg_of[i] for i in cluster}) < len(segments):
            continue
        center = np.median(np.array([points[i] for i in cluster]), axis=0)
        found.add(float(center[0]) if x.dimension == 1 else tuple(float(c) for c in center))
    return frozenset(found)


def is_compactly_supported(x: GenPoint) -> Box | None:
    """Bounding box of the sampled trajectory, or None when the tail diverges."""
    grid = x.settings.grid
    samples = np.array([x.at(e) for e in grid.eps])
    norms = np.max(np.abs(samples), axis=1)
    head_max = float(np.max(norms[:grid.tail_start]))
    tail_max = float(np.max(norms[grid.tail_start:]))
    if tail_max > 10.0 * max(head_max, 1.0):
        return None
    d = estimate_net(EpsNet(lambda e: float(np.max(np.abs(x.at(e))))), replace(x.settings, cancellation_tol=0.0),
                     cancellation=False)
    if d.classification is Classification.ORDER and d.slope < -0.05 and tail_max > 1.0:
        return None
    return Box(tuple(np.min(samples, axis=0)), tuple(np.max(samples, axis=0)))
