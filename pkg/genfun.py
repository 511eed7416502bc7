# genfun.py - Generalized functions: seminorm nets, point values, integrals, regularity
"""
A GenFunction couples a representative expression (smoothrep) with a domain,
optional support metadata and a space tag.  Every operation here returns an
EpsNet (or a GenNumber wrapping one) sampled lazily on the grid.

Sups are lower bounds: a dense grid per axis, an equally dense grid on each
eps-concentrated feature window, then bounded Brent refinement around the
largest samples.  Integrals run over the expression's window split at its
features, in origin + offset coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from asymptotics import (DEFAULT_SETTINGS, Classification, EpsNet, ValuationSettings, estimate_net,
                         ultra_norm)
from errors import NoCompactSupport, OrderTooHigh, PointEscapesDomain, TailNotCertified
from quadrature import DEFAULT_QUADRATURE, QuadratureSettings, integrate_window
from scalars import DEFAULT_SUPPORT, Box, GenNumber, GenPoint, SupportSettings, is_compactly_supported
from smoothrep import (MAX_ORDER, Constant, Product, Scaled, Sum, TensorRep, eps_pow, intersect_windows,
                       is_empty)

# width of the band checked by the global tail certificate
TAIL_BAND = 5.0


@dataclass(frozen=True)
class SupSettings:
    points_per_axis: int = 2048
    refine_top: int = 5
    global_radius: float = 50.0


@dataclass(frozen=True)
class Numerics:
    valuation: ValuationSettings = field(default_factory=lambda: DEFAULT_SETTINGS)
    quadrature: QuadratureSettings = field(default_factory=lambda: DEFAULT_QUADRATURE)
    sup: SupSettings = field(default_factory=SupSettings)
    support: SupportSettings = field(default_factory=lambda: DEFAULT_SUPPORT)


DEFAULT_NUMERICS = Numerics()


class SpaceTag(str, Enum):
    G = "G"
    G_C = "G_c"
    G_INF = "G_inf"
    G_C_INF = "G_c_inf"
    G_S = "G_S"
    G_S_INF = "G_S_inf"
    G_TAU = "G_tau"


COMPACT_TAGS = {SpaceTag.G_C, SpaceTag.G_C_INF}
DECAYING_TAGS = COMPACT_TAGS | {SpaceTag.G_S, SpaceTag.G_S_INF}
GLOBAL_TAGS = DECAYING_TAGS | {SpaceTag.G_TAU}
REGULAR = {SpaceTag.G: SpaceTag.G_INF, SpaceTag.G_C: SpaceTag.G_C_INF, SpaceTag.G_S: SpaceTag.G_S_INF}


def construction_tag(rep, support=None) -> SpaceTag:
    """Space tag implied by the expression flags; eps-free representatives are regular."""
    if support is not None or rep.compact:
        tag = SpaceTag.G_C
    elif rep.schwartz:
        tag = SpaceTag.G_S
    elif rep.tempered:
        tag = SpaceTag.G_TAU
    else:
        tag = SpaceTag.G
    if rep.eps_free:
        tag = REGULAR.get(tag, tag)
    return tag


class GenFunction:
    """Generalized function on a box (or all of R^n) with a representative expression."""

    def __init__(self, rep, domain: Box | None = None, support: Box | None = None,
                 space_tag: SpaceTag | str | None = None, numerics: Numerics = DEFAULT_NUMERICS,
                 label: str | None = None):
        self.rep = rep
        self.domain = domain
        if support is None and not isinstance(rep, TensorRep) and rep.compact and rep.eps_free:
            w = rep.window(1.0)
            if w is not None and not is_empty(w):
                support = Box.interval(w[0] - w[1], w[0] + w[1])
        self.support = support
        self.space_tag = SpaceTag(space_tag) if space_tag else construction_tag(rep, support)
        self.numerics = numerics
        self.label = label or rep.label

    @property
    def dim(self):
        return self.rep.dim if isinstance(self.rep, TensorRep) else 1

    @property
    def settings(self):
        return self.numerics.valuation

    @property
    def decaying(self):
        return self.space_tag in DECAYING_TAGS

    def with_tag(self, tag):
        return GenFunction(self.rep, self.domain, self.support, tag, self.numerics, self.label)

    def _combine(self, rep, other=None):
        support = None
        if other is not None and self.support is not None and other.support is not None:
            lo = tuple(min(a, b) for a, b in zip(self.support.lo, other.support.lo))
            hi = tuple(max(a, b) for a, b in zip(self.support.hi, other.support.hi))
            support = Box(lo, hi)
        return GenFunction(rep, self.domain, support, None, self.numerics)

    def __add__(self, other):
        return self._combine(Sum(self.rep, other.rep), other)

    def __sub__(self, other):
        return self._combine(Sum(self.rep, -other.rep), other)

    def __mul__(self, other):
        if isinstance(other, GenFunction):
            out = GenFunction(Product(self.rep, other.rep), self.domain, None, None, self.numerics)
            if self.support is not None or other.support is not None:
                out.support = self.support or other.support
                out.space_tag = construction_tag(out.rep, out.support)
            return out
        return GenFunction(Scaled(self.rep, other), self.domain, self.support, None, self.numerics)

    __rmul__ = __mul__

    def scale_pow(self, r, c=1.0):
        """[(c eps^r)] * u."""
        return GenFunction(Scaled(self.rep, eps_pow(r, c)), self.domain, self.support, None, self.numerics)

    def evaluate(self, eps, x, m=0):
        return self.rep.evaluate(eps, x, m)

    def __repr__(self):
        return f"GenFunction({self.label}, {self.space_tag.value})"


def constant_function(c, numerics=DEFAULT_NUMERICS):
    return GenFunction(Constant(c), numerics=numerics)


# --- sups ----------------------------------------------------------------------

def _narrow_features(rep, eps, lo, hi, clip=True):
    """Feature windows narrower than [lo, hi] that meet it (clipped unless contained)."""
    out = []
    half = 0.5 * (hi - lo)
    for w in rep.features(eps):
        if w is None or is_empty(w) or w[1] >= half:
            continue
        flo, fhi = w[0] - w[1], w[0] + w[1]
        if not clip or (flo >= lo and fhi <= hi):
            out.append(w)
        elif fhi > lo and flo < hi:
            a, b = max(lo, flo), min(hi, fhi)
            out.append((0.5 * (a + b), 0.5 * (b - a)))
    return out


def _sup_pieces(rep, eps, pieces, orders, weight, sup: SupSettings):
    """Sup over the union of (origin, radius) pieces of weight(x) * max_k |d^k rep(x)|."""
    top = max(orders)
    n = sup.points_per_axis + 1
    candidates = []
    best = 0.0

    def profile(origin, offsets):
        jets = rep.jet(eps, origin, offsets, top)
        vals = np.max(np.abs(jets[list(orders)]), axis=0)
        if weight is not None:
            vals = vals * weight(origin + np.asarray(offsets))
        return vals

    for origin, radius in pieces:
        if radius <= 0:
            offsets = np.zeros(1)
        else:
            offsets = np.linspace(-radius, radius, n)
        vals = profile(origin, offsets)
        if vals.size == 0:
            continue
        best = max(best, float(np.max(vals)))
        step = 2.0 * radius / (n - 1) if radius > 0 else 0.0
        if not sup.refine_top:
            continue
        for i in np.argsort(vals)[-sup.refine_top:]:
            candidates.append((float(vals[i]), origin, float(offsets[i]), step, radius))

    candidates.sort(key=lambda c: -c[0])
    for _, origin, off, step, radius in candidates[:sup.refine_top]:
        if step <= 0:
            continue
        a, b = max(-radius, off - step), min(radius, off + step)
        res = minimize_scalar(lambda t: -float(profile(origin, np.array([t]))[0]),
                              bounds=(a, b), method="bounded", options={"xatol": step * 1e-6})
        best = max(best, -float(res.fun))
    return best


def _box_pieces(rep, eps, lo, hi):
    base = (0.5 * (lo + hi), 0.5 * (hi - lo))
    return [base] + _narrow_features(rep, eps, lo, hi)


def _axis_sups(rep, eps, lo, hi, m, sup, weight=None):
    """sup over [lo, hi] of |d^k rep| for each k <= m."""
    pieces = _box_pieces(rep, eps, lo, hi)
    return [_sup_pieces(rep, eps, pieces, [k], weight, sup) for k in range(m + 1)]


def _check_order(m):
    if m > MAX_ORDER:
        raise OrderTooHigh(f"derivative order {m} above the supported maximum {MAX_ORDER}")


def _check_inside(u, K):
    if u.domain is not None and not u.domain.contains_box(K):
        raise ValueError(f"box {K!r} is not inside the domain {u.domain!r}")


def seminorm_net(u: GenFunction, K: Box, m: int) -> EpsNet:
    """eps -> sup over K, |alpha| <= m, of |d^alpha u_eps|."""
    _check_order(m)
    _check_inside(u, K)
    sup = u.numerics.sup

    if isinstance(u.rep, TensorRep):
        def func(eps):
            per_axis = [_axis_sups(f, eps, *K.bounds(i), m, sup) for i, f in enumerate(u.rep.factors)]
            return max(math.prod(s[a] for s, a in zip(per_axis, alpha))
                       for alpha in itertools.product(range(m + 1), repeat=u.dim) if sum(alpha) <= m)
    else:
        lo, hi = K.bounds()

        def func(eps):
            return _sup_pieces(u.rep, eps, _box_pieces(u.rep, eps, lo, hi), list(range(m + 1)), None, sup)

    return EpsNet(func, label=f"P_{K!r},{m}({u.label})")


def ultra_pseudo_seminorm(u: GenFunction, K: Box, m: int) -> float:
    return ultra_norm(estimate_net(seminorm_net(u, K, m), u.settings))


def _global_pieces(rep, eps, radius):
    """The expression window when it has one, else [-radius, radius]; plus narrower features."""
    window = rep.window(eps)
    base = window if window is not None else (0.0, radius)
    if is_empty(base):
        return []
    features = [w for w in rep.features(eps) if w is not None and not is_empty(w) and w[1] < base[1]]
    return [base] + features


def _tail_band_max(rep, eps, radius, orders, weight, sup):
    """Max over R - TAIL_BAND <= |x| <= R away from every feature window."""
    features = [w for w in rep.features(eps) if w is not None and not is_empty(w) and w[1] < radius]
    n = sup.points_per_axis // 4 + 1
    best = 0.0
    for sign in (-1.0, 1.0):
        x = sign * np.linspace(radius - TAIL_BAND, radius, n)
        keep = np.ones(n, dtype=bool)
        for c, r in features:
            keep &= np.abs(x - c) > r
        if not np.any(keep):
            continue
        jets = rep.jet(eps, 0.0, x[keep], max(orders))
        vals = np.max(np.abs(jets[list(orders)]), axis=0)
        if weight is not None:
            vals = vals * weight(x[keep])
        best = max(best, float(np.max(vals)))
    return best


def _global_sup(rep, eps, orders, weight, numerics, certify):
    radius = numerics.sup.global_radius
    pieces = _global_pieces(rep, eps, radius)
    if not pieces:
        return 0.0
    value = _sup_pieces(rep, eps, pieces, orders, weight, numerics.sup)
    # a windowed expression vanishes outside its window, nothing to certify
    if certify and rep.window(eps) is None:
        tail = _tail_band_max(rep, eps, radius, orders, weight, numerics.sup)
        if tail > 0 and tail > numerics.valuation.cancellation_tol * value:
            raise TailNotCertified(
                f"{rep.label}: tail band value {tail:.3e} vs sup {value:.3e} at eps = {eps:.3e}")
    return value


def schwartz_seminorm_net(u: GenFunction, alpha=0, beta=0) -> EpsNet:
    """eps -> sup over R^n of |x^alpha d^beta u_eps|, truncated at the global radius.

    The band next to the truncation radius must be negligible against the sup,
    otherwise TailNotCertified is raised when the net is sampled.
    """
    if isinstance(u.rep, TensorRep):
        alphas, betas = tuple(np.atleast_1d(alpha)), tuple(np.atleast_1d(beta))
        for b in betas:
            _check_order(int(b))

        def func(eps):
            out = 1.0
            for f, a, b in zip(u.rep.factors, alphas, betas):
                out *= _global_sup(f, eps, [int(b)], _power_weight(int(a)), u.numerics, True)
            return out
    else:
        a, b = int(alpha), int(beta)
        _check_order(b)

        def func(eps):
            return _global_sup(u.rep, eps, [b], _power_weight(a), u.numerics, True)

    return EpsNet(func, label=f"S_{alpha},{beta}({u.label})")


def _power_weight(a):
    if a == 0:
        return None
    return lambda x: np.abs(x) ** a


def global_sup_net(u: GenFunction, m: int = 0, certify: bool = True) -> EpsNet:
    """eps -> sup over R of max_{k <= m} |d^k u_eps| (one dimension)."""
    _check_order(m)
    return EpsNet(lambda eps: _global_sup(u.rep, eps, list(range(m + 1)), None, u.numerics, certify),
                  label=f"sup_R,{m}({u.label})")


def weighted_defect_net(u: GenFunction, v: GenFunction, weight_power: float, m: int,
                        radius: float | None = None) -> EpsNet:
    """eps -> sup over |x| <= radius of (1 + |x|)^-weight_power max_{k <= m} |d^k (u - v)|.

    The scale of each sample is the same weighted sup taken of u and v separately.
    """
    _check_order(m)
    rep = Sum(u.rep, -v.rep)
    radius = radius or u.numerics.sup.global_radius
    weight = lambda x: (1.0 + np.abs(x)) ** (-weight_power)
    sup = u.numerics.sup
    orders = list(range(m + 1))

    def func(eps):
        pieces = [(0.0, radius)] + _narrow_features(rep, eps, -radius, radius)
        value = _sup_pieces(rep, eps, pieces, orders, weight, sup)
        scale = sum(_sup_pieces(f.rep, eps, pieces, orders, weight, sup) for f in (u, v))
        return value, scale

    return EpsNet.paired(func, label=f"weighted({u.label} - {v.label})")


# --- point values ------------------------------------------------------------------

def _admit_point(u: GenFunction, x: GenPoint):
    if u.space_tag in GLOBAL_TAGS:
        return
    box = is_compactly_supported(x)
    if box is None:
        raise PointEscapesDomain(
            f"{x.label} is not compactly supported and {u.label} is tagged {u.space_tag.value}")
    if u.domain is not None and not u.domain.contains_box(box):
        raise PointEscapesDomain(f"{x.label} stays in {box!r}, outside the domain {u.domain!r}")


def point_derivative(u: GenFunction, x: GenPoint, k: int = 0, check=True) -> GenNumber:
    """[(d^k u_eps (x_eps))_eps]; origin-exact evaluation at the point."""
    _check_order(k)
    if check:
        _admit_point(u, x)
    if isinstance(u.rep, TensorRep):
        if k:
            raise ValueError("point derivatives are one-dimensional")
        net = EpsNet(lambda e: _tensor_value(u.rep, e, x.at(e)), label=f"{u.label}({x.label})")
    else:
        coord = x.coordinate()
        net = EpsNet(lambda e: u.rep.jet(e, coord(e), np.zeros(1), k)[k, 0],
                     label=f"d^{k}{u.label}({x.label})" if k else f"{u.label}({x.label})")
    return GenNumber(net, u.settings, check=False)


def _tensor_value(rep: TensorRep, eps, point):
    out = 1.0
    for f, c in zip(rep.factors, point):
        out = out * f.jet(eps, float(c), np.zeros(1), 0)[0, 0]
    return out


def point_value(u: GenFunction, x: GenPoint) -> GenNumber:
    return point_derivative(u, x, 0)


# --- integrals ---------------------------------------------------------------------

def integration_pieces(window, features):
    """Partition the window at its narrow features; contained features keep their exact center."""
    c, r = window
    lo, hi = c - r, c + r
    narrow = []
    for w in features:
        if w is None or is_empty(w) or w[1] >= r:
            continue
        flo, fhi = w[0] - w[1], w[0] + w[1]
        if fhi <= lo or flo >= hi:
            continue
        if flo >= lo and fhi <= hi:
            narrow.append(w)
        else:
            a, b = max(lo, flo), min(hi, fhi)
            narrow.append((0.5 * (a + b), 0.5 * (b - a)))
    if not narrow:
        return [window]

    narrow.sort(key=lambda w: w[0] - w[1])
    merged = [narrow[0]]
    for w in narrow[1:]:
        pc, pr = merged[-1]
        if w[0] - w[1] <= pc + pr:
            a, b = pc - pr, max(pc + pr, w[0] + w[1])
            merged[-1] = (0.5 * (a + b), 0.5 * (b - a))
        else:
            merged.append(w)

    pieces = []
    cursor = lo
    for fc, fr in merged:
        start = fc - fr
        if start > cursor:
            pieces.append((0.5 * (cursor + start), 0.5 * (start - cursor)))
        pieces.append((fc, fr))
        cursor = max(cursor, fc + fr)
    if hi > cursor:
        pieces.append((0.5 * (cursor + hi), 0.5 * (hi - cursor)))
    return pieces


def _integral_1d(rep, eps, window, quadrature, order=0, power=1, rtol=None):
    """(int d^order rep, int |d^order rep|) over a window; power 2 integrates |d^order rep|^2."""
    if window is None or is_empty(window):
        return 0.0, 0.0
    total, total_abs = 0.0, 0.0
    for origin, radius in integration_pieces(window, rep.features(eps)):
        if power == 1:
            f = lambda off, o=origin: rep.jet(eps, o, off, order)[order]
        else:
            f = lambda off, o=origin: np.abs(rep.jet(eps, o, off, order)[order]) ** 2
        res = integrate_window(f, radius, quadrature, rtol)
        total = total + res.value
        total_abs += res.abs_value
    return total, total_abs


def _box_window(K: Box, axis=0):
    lo, hi = K.bounds(axis)
    return (0.5 * (lo + hi), 0.5 * (hi - lo))


def _integration_window(rep, eps, K: Box | None, axis, radius):
    outer = _box_window(K, axis) if K is not None else None
    inner = rep.window(eps)
    if outer is None and inner is None:
        return (0.0, radius)
    return intersect_windows([outer, inner])


def integrate_compact(u: GenFunction, K: Box) -> GenNumber:
    """[(int_K u_eps)_eps] by composite Gauss-Legendre over the window of u inside K."""
    _check_inside(u, K)
    return _integrate(u.rep, K, u.numerics, f"int_{K!r} {u.label}")


def integrate_global(u: GenFunction) -> GenNumber:
    """[(int u_eps)_eps] over the window of u (or the global radius when it has none)."""
    if not u.decaying:
        raise NoCompactSupport(f"{u.label} ({u.space_tag.value}) is not integrable over R")
    return _integrate(u.rep, None, u.numerics, f"int {u.label}")


def _integrate(rep, K, numerics, label):
    radius = numerics.sup.global_radius

    if isinstance(rep, TensorRep):
        def func(eps):
            value, scale = 1.0, 1.0
            for axis, f in enumerate(rep.factors):
                v, s = _integral_1d(f, eps, _integration_window(f, eps, K, axis, radius), numerics.quadrature)
                value, scale = value * v, scale * s
            return value, scale
    else:
        def func(eps):
            return _integral_1d(rep, eps, _integration_window(rep, eps, K, 0, radius), numerics.quadrature)

    return GenNumber(EpsNet.paired(func, label=label), numerics.valuation, check=False)


def _pair_admissible(u, v):
    if u.space_tag in COMPACT_TAGS or v.space_tag in COMPACT_TAGS:
        return True
    if u.space_tag in DECAYING_TAGS and v.space_tag in GLOBAL_TAGS:
        return True
    return v.space_tag in DECAYING_TAGS and u.space_tag in GLOBAL_TAGS


def pair_rep(u: GenFunction, v: GenFunction):
    if isinstance(u.rep, TensorRep):
        return TensorRep(*(Product(a, b) for a, b in zip(u.rep.factors, v.rep.factors)))
    return Product(u.rep, v.rep)


def integrate_pair(u: GenFunction, v: GenFunction) -> GenNumber:
    """[(int u_eps v_eps)_eps] over the common support, or the global radius for decaying pairs."""
    if not _pair_admissible(u, v):
        raise NoCompactSupport(
            f"pairing {u.label} ({u.space_tag.value}) with {v.label} ({v.space_tag.value}) needs "
            "a compactly supported or rapidly decreasing factor")
    K = u.support or v.support
    if u.support is not None and v.support is not None:
        lo = tuple(max(a, b) for a, b in zip(u.support.lo, v.support.lo))
        hi = tuple(min(a, b) for a, b in zip(u.support.hi, v.support.hi))
        K = Box(lo, hi)
        if K.is_empty:
            return GenNumber(EpsNet(lambda e: 0.0, label="0"), u.settings, check=False)
    # K None: the product window, or the global radius when the product has none
    return _integrate(pair_rep(u, v), K, u.numerics, f"<{u.label}, {v.label}>")


def sobolev_l2_net(u: GenFunction, m: int = 0, K: Box | None = None) -> EpsNet:
    """eps -> sqrt(sum_{j <= m} int |d^j u_eps|^2) over K (or the global radius)."""
    _check_order(m)
    radius = u.numerics.sup.global_radius
    if isinstance(u.rep, TensorRep):
        raise ValueError("L2 nets are one-dimensional")

    def func(eps):
        window = _integration_window(u.rep, eps, K, 0, radius)
        total = 0.0
        for j in range(m + 1):
            value, _ = _integral_1d(u.rep, eps, window, u.numerics.quadrature, order=j, power=2)
            total += float(np.real(value))
        return math.sqrt(max(total, 0.0))

    return EpsNet(func, label=f"||{u.label}||_H{m}")


# --- regularity ---------------------------------------------------------------------

@dataclass(frozen=True)
class Regularity:
    kind: str
    N: float | None
    growth: tuple

    def to_dict(self):
        return {"kind": self.kind, "N": self.N, "growth": list(self.growth)}

    def __str__(self):
        return f"Regular({self.N:.2f})" if self.kind == "Regular" else self.kind


def classify_regular(u: GenFunction, K: Box, m_max: int = 4) -> Regularity:
    """N(m) = -slope of the K-seminorm of order m; flat means Regular, steady growth NotRegular.

    When every seminorm is negligible the input is a member of the ideal and is
    reported as Negligible rather than Regular(-q_max).
    """
    if m_max < 3:
        raise ValueError("classify_regular needs m_max >= 3")
    growth, negligible = [], True
    for m in range(m_max + 1):
        d = estimate_net(seminorm_net(u, K, m), u.settings)
        if d.classification is Classification.AMBIGUOUS:
            return Regularity("Inconclusive", None, tuple(growth))
        growth.append(-d.order)
        negligible = negligible and d.negligible
    if negligible:
        return Regularity("Negligible", None, tuple(growth))
    if max(growth) - min(growth) <= 0.3:
        return Regularity("Regular", max(growth), tuple(growth))
    steps = np.diff(growth)
    run = best = 0
    for s in steps:
        run = run + 1 if s >= 0.7 else 0
        best = max(best, run)
    if best >= 3:
        return Regularity("NotRegular", None, tuple(growth))
    return Regularity("Inconclusive", None, tuple(growth))


def certify_tag(u: GenFunction, K: Box, m_max: int = 4) -> GenFunction:
    """Upgrade the tag to its regular variant when classify_regular measures Regular or Negligible."""
    if classify_regular(u, K, m_max).kind in ("Regular", "Negligible") and u.space_tag in REGULAR:
        return u.with_tag(REGULAR[u.space_tag])
    return u
