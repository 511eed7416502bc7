# smoothrep.py - Derivative-closed expression trees for representatives
"""
Every node evaluates a *jet*: the value and the first m derivatives in x at the
points ``origin + offsets``, as an array of shape (m + 1, len(offsets)).
Derivatives come from the chain and product rules on the tree, never from
differencing.  Keeping ``origin`` separate lets an affine node form
``scale * (x - shift)`` without cancellation when the origin sits on the shift.

Nodes also report a window (center, radius) outside of which they vanish
numerically, plus the windows of concentrated parts ("features").
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.hermite import hermval

from quadrature import composite_rule

MAX_ORDER = 8

# exp(-t) is treated as exactly zero beyond this
EXP_CUTOFF = 700.0

EMPTY = (0.0, -1.0)

Window = tuple[float, float]


# --- jet algebra -----------------------------------------------------------

def jet_mul(a, b):
    """Leibniz rule on derivative arrays."""
    m = min(a.shape[0], b.shape[0]) - 1
    out = np.zeros((m + 1,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]), dtype=np.result_type(a, b))
    for k in range(m + 1):
        for j in range(k + 1):
            out[k] += math.comb(k, j) * a[j] * b[k - j]
    return out


def jet_recip(a):
    r = np.zeros_like(a, dtype=np.result_type(a, float))
    r[0] = 1.0 / a[0]
    for k in range(1, a.shape[0]):
        acc = np.zeros_like(r[0])
        for j in range(1, k + 1):
            acc += math.comb(k, j) * a[j] * r[k - j]
        r[k] = -r[0] * acc
    return r


def jet_exp(g):
    w = np.zeros_like(g, dtype=np.result_type(g, float))
    w[0] = np.exp(g[0])
    for k in range(1, g.shape[0]):
        for j in range(k):
            w[k] += math.comb(k - 1, j) * g[j + 1] * w[k - 1 - j]
    return w


def _linear_jet(t, slope, m):
    out = np.zeros((m + 1,) + t.shape)
    out[0] = t
    if m >= 1:
        out[1] = slope
    return out


def _flat_jet(t, slope, m, sharpness):
    """Jets of exp(-sharpness / t) for t > 0 linear in x."""
    out = np.zeros((m + 1,) + t.shape)
    live = sharpness / t < EXP_CUTOFF
    if np.any(live):
        g = -sharpness * jet_recip(_linear_jet(t[live], slope[live], m))
        out[:, live] = jet_exp(g)
    return out


def smooth_step_jet(t, slope, m, sharpness=1.0):
    """Jets of the smooth step h(t) = f(t) / (f(t) + f(1 - t)), f(t) = exp(-sharpness/t).

    ``t`` is linear in x with derivative ``slope``; h is exactly 0 for t <= 0 and
    exactly 1 (all derivatives 0) for t >= 1.
    """
    t = np.asarray(t, dtype=float)
    slope = np.broadcast_to(np.asarray(slope, dtype=float), t.shape)
    out = np.zeros((m + 1,) + t.shape)
    out[0][t >= 1.0] = 1.0
    inner = (t > 0.0) & (t < 1.0)
    if np.any(inner):
        ti, si = t[inner], slope[inner]
        fa = _flat_jet(ti, si, m, sharpness)
        fb = _flat_jet(1.0 - ti, -si, m, sharpness)
        out[:, inner] = jet_mul(fa, jet_recip(fa + fb))
    return out


def smooth_ramp(t, sharpness=1.0):
    return smooth_step_jet(np.atleast_1d(t), 0.0, 0, sharpness)[0]


# --- windows ---------------------------------------------------------------

def window_bounds(w):
    return w[0] - w[1], w[0] + w[1]


def is_empty(w):
    return w is not None and w[1] < 0


def window_contains(outer, inner):
    lo_o, hi_o = window_bounds(outer)
    lo_i, hi_i = window_bounds(inner)
    return lo_o <= lo_i and hi_i <= hi_o


def intersect_windows(windows):
    """Intersection; a window contained in all others is returned unchanged."""
    windows = [w for w in windows if w is not None]
    if not windows:
        return None
    if any(is_empty(w) for w in windows):
        return EMPTY
    for w in sorted(windows, key=lambda w: w[1]):
        if all(window_contains(o, w) for o in windows):
            return w
    lo = max(window_bounds(w)[0] for w in windows)
    hi = min(window_bounds(w)[1] for w in windows)
    if lo > hi:
        return EMPTY
    return (0.5 * (lo + hi), 0.5 * (hi - lo))


def hull_windows(windows):
    if any(w is None for w in windows):
        return None
    windows = [w for w in windows if not is_empty(w)]
    if not windows:
        return EMPTY
    for w in sorted(windows, key=lambda w: -w[1]):
        if all(window_contains(w, o) for o in windows):
            return w
    lo = min(window_bounds(w)[0] for w in windows)
    hi = max(window_bounds(w)[1] for w in windows)
    return (0.5 * (lo + hi), 0.5 * (hi - lo))


# --- eps-dependent parameters -----------------------------------------------

class EpsParam:
    """A number or a function of eps."""

    def __init__(self, value, label=None):
        if isinstance(value, EpsParam):
            self.func, self.constant, self.label = value.func, value.constant, value.label
            return
        self.constant = not callable(value)
        self.func = value if callable(value) else (lambda e, v=value: v)
        if label is None:
            label = f"{value:g}" if self.constant and not isinstance(value, complex) else "f(eps)"
        self.label = label

    def __call__(self, eps):
        return self.func(eps)


def eps_pow(r, c=1.0):
    return EpsParam(lambda e: c * e ** r, f"{c:g}*eps^{r:g}" if c != 1 else f"eps^{r:g}")


# --- base node ---------------------------------------------------------------

class SmoothRep:
    """Base class of representative expressions in one variable."""

    schwartz = False
    tempered = True
    compact = False
    eps_free = True
    label = "rep"

    def jet(self, eps, origin, offsets, m):
        raise NotImplementedError

    def window(self, eps):
        return None

    def features(self, eps):
        return []

    def evaluate(self, eps, x, m=0):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return self.jet(eps, 0.0, x, m)

    def __call__(self, eps, x):
        return self.evaluate(eps, x, 0)[0]

    def __add__(self, other):
        return Sum(self, _coerce(other))

    def __radd__(self, other):
        return Sum(_coerce(other), self)

    def __sub__(self, other):
        return Sum(self, -_coerce(other))

    def __rsub__(self, other):
        return Sum(_coerce(other), -self)

    def __neg__(self):
        return Scaled(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, SmoothRep):
            return Product(self, other)
        return Scaled(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def conj(self):
        return Conjugate(self)

    def __repr__(self):
        return self.label


def _coerce(value):
    return value if isinstance(value, SmoothRep) else Constant(value)


def _zeros(m, offsets, dtype=float):
    return np.zeros((m + 1, len(offsets)), dtype=dtype)


# --- leaves -------------------------------------------------------------------

class Constant(SmoothRep):
    def __init__(self, value):
        self.value = value
        self.label = f"{value:g}" if not isinstance(value, complex) else str(value)

    def jet(self, eps, origin, offsets, m):
        out = _zeros(m, offsets, np.result_type(self.value, float))
        out[0] = self.value
        return out


class Polynomial1D(SmoothRep):
    def __init__(self, coeffs):
        self.poly = Polynomial(coeffs)
        self.label = f"poly{tuple(float(c) for c in coeffs)}"

    def jet(self, eps, origin, offsets, m):
        x = origin + offsets
        out = _zeros(m, offsets)
        p = self.poly
        for k in range(m + 1):
            out[k] = p(x)
            p = p.deriv()
        return out


class Exponential(SmoothRep):
    def __init__(self, rate):
        self.rate = float(rate)
        self.tempered = self.rate == 0
        self.label = f"exp({rate:g}x)"

    def jet(self, eps, origin, offsets, m):
        base = np.exp(self.rate * (origin + offsets))
        return np.array([self.rate ** k * base for k in range(m + 1)])


class Gaussian(SmoothRep):
    """exp(-a x^2); derivatives through physicists' Hermite polynomials."""

    schwartz = True

    def __init__(self, a=1.0):
        self.a = float(a)
        self.label = f"exp(-{a:g}x^2)"

    def jet(self, eps, origin, offsets, m):
        x = origin + offsets
        s = math.sqrt(self.a)
        base = np.exp(-self.a * x * x)
        out = _zeros(m, offsets)
        for k in range(m + 1):
            coef = np.zeros(k + 1)
            coef[k] = 1.0
            out[k] = (-s) ** k * hermval(s * x, coef) * base
        return out

    def window(self, eps):
        return (0.0, math.sqrt(EXP_CUTOFF / self.a))

    def features(self, eps):
        return [self.window(eps)]


class Sine(SmoothRep):
    def __init__(self, freq=1.0, phase=0.0):
        self.freq = float(freq)
        self.phase = float(phase)
        self.label = f"sin({freq:g}x+{phase:g})"

    def jet(self, eps, origin, offsets, m):
        arg = self.freq * (origin + offsets) + self.phase
        return np.array([self.freq ** k * np.sin(arg + 0.5 * k * math.pi) for k in range(m + 1)])


def Cosine(freq=1.0):
    return Sine(freq, 0.5 * math.pi)


class Cutoff(SmoothRep):
    """Smooth plateau: exactly 1 on [lo, hi], exactly 0 outside [lo - margin, hi + margin]."""

    schwartz = True
    compact = True

    def __init__(self, lo, hi, margin):
        if not lo <= hi or not margin > 0:
            raise ValueError(f"cutoff needs lo <= hi and margin > 0, got {lo}, {hi}, {margin}")
        self.lo, self.hi, self.margin = float(lo), float(hi), float(margin)
        self.label = f"cutoff[{lo:g},{hi:g};{margin:g}]"

    @property
    def plateau(self):
        return self.lo, self.hi

    @property
    def support(self):
        return self.lo - self.margin, self.hi + self.margin

    def jet(self, eps, origin, offsets, m):
        x = origin + offsets
        left = smooth_step_jet((x - (self.lo - self.margin)) / self.margin, 1.0 / self.margin, m)
        right = smooth_step_jet(((self.hi + self.margin) - x) / self.margin, -1.0 / self.margin, m)
        return jet_mul(left, right)

    def window(self, eps):
        return (0.5 * (self.lo + self.hi), 0.5 * (self.hi - self.lo) + self.margin)

    def features(self, eps):
        return [self.window(eps)]


class SpectralProfile(SmoothRep):
    """chi(xi): 1 on |xi| <= r_in, 0 on |xi| >= r_out, smooth ramp between."""

    schwartz = True
    compact = True

    def __init__(self, r_in, r_out, sharpness=1.0):
        self.r_in, self.r_out, self.sharpness = float(r_in), float(r_out), float(sharpness)
        self.label = f"chi[{r_in:g},{r_out:g}]"

    def jet(self, eps, origin, offsets, m):
        xi = origin + offsets
        width = self.r_out - self.r_in
        t = (self.r_out - np.abs(xi)) / width
        return smooth_step_jet(t, -np.sign(xi) / width, m, self.sharpness)

    def window(self, eps):
        return (0.0, self.r_out)

    def features(self, eps):
        return [self.window(eps)]


class Kernel(SmoothRep):
    """Leaf for a kernel object exposing ``derivatives(x, m)`` and ``radius``."""

    schwartz = True

    def __init__(self, kernel):
        self.kernel = kernel
        self.label = getattr(kernel, "label", "kernel")

    def jet(self, eps, origin, offsets, m):
        return self.kernel.derivatives(origin + offsets, m)

    def window(self, eps):
        return (0.0, float(self.kernel.radius))

    def features(self, eps):
        return [self.window(eps)]


# --- combinators --------------------------------------------------------------

class Sum(SmoothRep):
    def __init__(self, *terms):
        flat = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, Sum) else [t])
        self.terms = tuple(flat)
        self.schwartz = all(t.schwartz for t in self.terms)
        self.tempered = all(t.tempered or t.schwartz for t in self.terms)
        self.compact = all(t.compact for t in self.terms)
        self.eps_free = all(t.eps_free for t in self.terms)
        self.label = "(" + " + ".join(t.label for t in self.terms) + ")"

    def jet(self, eps, origin, offsets, m):
        out = self.terms[0].jet(eps, origin, offsets, m)
        for t in self.terms[1:]:
            out = out + t.jet(eps, origin, offsets, m)
        return out

    def window(self, eps):
        return hull_windows([t.window(eps) for t in self.terms])

    def features(self, eps):
        return [w for t in self.terms for w in t.features(eps)]


class Product(SmoothRep):
    def __init__(self, *factors):
        flat = []
        for f in factors:
            flat.extend(f.factors if isinstance(f, Product) else [f])
        self.factors = tuple(flat)
        self.compact = any(f.compact for f in self.factors)
        self.schwartz = self.compact or (any(f.schwartz for f in self.factors)
                                         and all(f.tempered or f.schwartz for f in self.factors))
        self.tempered = all(f.tempered or f.schwartz for f in self.factors)
        self.eps_free = all(f.eps_free for f in self.factors)
        self.label = "*".join(f.label for f in self.factors)

    def jet(self, eps, origin, offsets, m):
        out = self.factors[0].jet(eps, origin, offsets, m)
        for f in self.factors[1:]:
            out = jet_mul(out, f.jet(eps, origin, offsets, m))
        return out

    def window(self, eps):
        return intersect_windows([f.window(eps) for f in self.factors])

    def features(self, eps):
        return [w for f in self.factors for w in f.features(eps)]


class Reciprocal(SmoothRep):
    """1 / child; the child must stay away from zero."""

    def __init__(self, child):
        self.child = child
        self.eps_free = child.eps_free
        self.label = f"1/{child.label}"

    def jet(self, eps, origin, offsets, m):
        return jet_recip(self.child.jet(eps, origin, offsets, m))

    def features(self, eps):
        return self.child.features(eps)


class Scaled(SmoothRep):
    """factor(eps) * child."""

    def __init__(self, child, factor, label=None):
        self.child = child
        self.factor = EpsParam(factor, label)
        self.schwartz, self.tempered, self.compact = child.schwartz, child.tempered, child.compact
        self.eps_free = child.eps_free and self.factor.constant
        self.label = f"{self.factor.label}*{child.label}"

    def jet(self, eps, origin, offsets, m):
        return self.factor(eps) * self.child.jet(eps, origin, offsets, m)

    def window(self, eps):
        return self.child.window(eps)

    def features(self, eps):
        return self.child.features(eps)


def eps_power(child, r, c=1.0):
    """[(c * eps^r)] * child."""
    return Scaled(child, eps_pow(r, c))


class Affine(SmoothRep):
    """x -> child(scale(eps) * (x - shift(eps)))."""

    def __init__(self, child, scale=1.0, shift=0.0):
        self.child = child
        self.scale = EpsParam(scale)
        self.shift = EpsParam(shift)
        self.schwartz, self.tempered, self.compact = child.schwartz, child.tempered, child.compact
        self.eps_free = child.eps_free and self.scale.constant and self.shift.constant
        self.label = f"{child.label}@({self.scale.label}*(x-{self.shift.label}))"

    def jet(self, eps, origin, offsets, m):
        a = self.scale(eps)
        b = self.shift(eps)
        out = self.child.jet(eps, a * (origin - b), a * np.asarray(offsets), m)
        for k in range(1, m + 1):
            out[k] = out[k] * a ** k
        return out

    def _map(self, w, eps):
        if w is None or is_empty(w):
            return w
        a = self.scale(eps)
        if a == 0:
            return None
        return (self.shift(eps) + w[0] / a, w[1] / abs(a))

    def window(self, eps):
        return self._map(self.child.window(eps), eps)

    def features(self, eps):
        return [self._map(w, eps) for w in self.child.features(eps) if self.scale(eps) != 0]


class Conjugate(SmoothRep):
    def __init__(self, child):
        self.child = child
        self.schwartz, self.tempered, self.compact = child.schwartz, child.tempered, child.compact
        self.eps_free = child.eps_free
        self.label = f"conj({child.label})"

    def jet(self, eps, origin, offsets, m):
        return np.conj(self.child.jet(eps, origin, offsets, m))

    def window(self, eps):
        return self.child.window(eps)

    def features(self, eps):
        return self.child.features(eps)


class Derivative(SmoothRep):
    """k-th derivative of the child."""

    def __init__(self, child, k):
        if k < 0:
            raise ValueError("derivative order must be >= 0")
        self.child = child
        self.k = int(k)
        self.schwartz, self.tempered, self.compact = child.schwartz, child.tempered, child.compact
        self.eps_free = child.eps_free
        self.label = f"d^{k}({child.label})"

    def jet(self, eps, origin, offsets, m):
        return self.child.jet(eps, origin, offsets, m + self.k)[self.k:]

    def window(self, eps):
        return self.child.window(eps)

    def features(self, eps):
        return self.child.features(eps)


class Mollified(SmoothRep):
    """Convolution x -> int k(z) child(x - width(eps) z) dz with a kernel object."""

    CHUNK = 256

    def __init__(self, child, kernel, width, order=16, panels=32):
        self.child = child
        self.kernel = kernel
        self.width = EpsParam(width)
        t, w = composite_rule(order, panels)
        radius = float(kernel.radius)
        self._nodes = radius * t
        self._weights = radius * w * kernel.derivatives(self._nodes, 0)[0]
        self.schwartz = child.schwartz
        self.tempered = child.tempered or child.schwartz
        self.eps_free = child.eps_free and self.width.constant
        self.label = f"({getattr(kernel, 'label', 'k')}_{self.width.label} * {child.label})"

    def jet(self, eps, origin, offsets, m):
        w = self.width(eps)
        offsets = np.asarray(offsets, dtype=float)
        q = len(self._nodes)
        parts = []
        for i in range(0, len(offsets), self.CHUNK):
            chunk = offsets[i:i + self.CHUNK]
            pts = (chunk[:, None] - w * self._nodes[None, :]).ravel()
            vals = self.child.jet(eps, origin, pts, m).reshape(m + 1, len(chunk), q)
            parts.append(vals @ self._weights)
        return np.concatenate(parts, axis=1)

    def window(self, eps):
        w = self.child.window(eps)
        if w is None or is_empty(w):
            return w
        return (w[0], w[1] + abs(self.width(eps)) * float(self.kernel.radius))

    def features(self, eps):
        spread = abs(self.width(eps)) * float(self.kernel.radius)
        return [(c, r + spread) for c, r in self.child.features(eps)]


def concentrated(kernel, center, width, derivative=0):
    """y -> width^-1 k^(derivative)((center - y) / width), eps-dependent center and width."""
    width = EpsParam(width)
    center = EpsParam(center)
    rep = Affine(Kernel(kernel), EpsParam(lambda e: -1.0 / width(e), f"-1/{width.label}"), center)
    if derivative:
        rep = Derivative(rep, derivative)
    return Scaled(rep, EpsParam(lambda e: 1.0 / width(e), f"1/{width.label}"))


class TensorRep:
    """Separable representative f_1(x_1) * ... * f_n(x_n)."""

    def __init__(self, *factors):
        if not factors:
            raise ValueError("tensor needs at least one factor")
        self.factors = tuple(factors)
        self.schwartz = all(f.schwartz for f in self.factors)
        self.tempered = all(f.tempered or f.schwartz for f in self.factors)
        self.compact = all(f.compact for f in self.factors)
        self.eps_free = all(f.eps_free for f in self.factors)
        self.label = " (x) ".join(f.label for f in self.factors)

    @property
    def dim(self):
        return len(self.factors)

    def value(self, eps, point):
        out = 1.0
        for f, x in zip(self.factors, np.atleast_1d(point)):
            out = out * f.evaluate(eps, [x], 0)[0, 0]
        return out

    def __repr__(self):
        return self.label
