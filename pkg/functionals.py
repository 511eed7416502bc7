# functionals.py - Dual elements: deltas, distribution embeddings, kernels, support probing
"""
A Functional maps a GenFunction to a GenNumber.  Everything here works at the
representative level: the evaluator builds the net eps -> T_eps(u_eps) and
never looks at more than one eps at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from asymptotics import Classification, DecayEstimate, EpsNet, estimate_net
from errors import (CutoffDoesNotCoverSupport, CutoffDoesNotCoverTail, OrderTooHigh, SupportNotContained,
                    UnsupportedDistribution)
from genfun import (COMPACT_TAGS, DEFAULT_NUMERICS, GenFunction, Numerics, SpaceTag, integrate_pair,
                    point_derivative, point_value)
from scalars import Box, GenNumber, GenPoint, is_compactly_supported
from smoothrep import (MAX_ORDER, Affine, Cutoff, Derivative, EpsParam, Kernel, Mollified, Polynomial1D, Product,
                       Scaled, SmoothRep, TensorRep, concentrated)

MAX_DELTA_ORDER = 6


@dataclass(frozen=True)
class Provenance:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}({self.detail})"


class Functional:
    """C~-linear map GenFunction -> GenNumber."""

    def __init__(self, evaluator: Callable[[GenFunction], GenNumber], domain_tag: str,
                 provenance: Provenance, support: Box | None = None):
        self.evaluator = evaluator
        self.domain_tag = domain_tag
        self.provenance = provenance
        self.support = support

    def __call__(self, u: GenFunction) -> GenNumber:
        return self.evaluator(u)

    @property
    def label(self):
        return str(self.provenance)

    def with_support(self, support: Box | None) -> "Functional":
        return Functional(self.evaluator, self.domain_tag, self.provenance, support)

    def __add__(self, other: "Functional") -> "Functional":
        return combine([(1.0, self), (1.0, other)])

    def __sub__(self, other: "Functional") -> "Functional":
        return combine([(1.0, self), (-1.0, other)])

    def __repr__(self):
        return f"Functional({self.label}, acts on {self.domain_tag})"


def combine(terms: Sequence[tuple[object, Functional]]) -> Functional:
    """sum_i c_i T_i with c_i a number, a GenNumber or a function of eps."""
    def coefficient(c):
        if isinstance(c, GenNumber):
            return c.net
        if callable(c) and not isinstance(c, EpsNet):
            return EpsNet(c)
        return c

    def evaluate(u):
        total = None
        for c, t in terms:
            part = t(u)
            if isinstance(c, (int, float)) and c == -1.0:
                part = -part
            elif not (isinstance(c, (int, float)) and c == 1.0):
                part = part * coefficient(c)
            total = part if total is None else total + part
        return total

    support = None
    boxes = [t.support for _, t in terms]
    if all(b is not None for b in boxes):
        support = Box(tuple(min(v) for v in zip(*(b.lo for b in boxes))),
                      tuple(max(v) for v in zip(*(b.hi for b in boxes))))
    detail = " + ".join(f"c*{t.label}" for _, t in terms)
    return Functional(evaluate, terms[0][1].domain_tag, Provenance("Combination", detail), support)


# --- distributions ---------------------------------------------------------------

@dataclass(frozen=True)
class DeltaDerivative:
    order: int
    point: float = 0.0

    def __str__(self):
        return f"delta^({self.order})_{self.point:g}" if self.order else f"delta_{self.point:g}"


@dataclass(frozen=True)
class RegularFunction:
    f: SmoothRep
    label: str = field(default="f")

    def __str__(self):
        return self.label


def _check_distribution(w):
    if isinstance(w, DeltaDerivative):
        if not 0 <= w.order <= MAX_DELTA_ORDER:
            raise UnsupportedDistribution(f"delta derivatives are supported up to order {MAX_DELTA_ORDER}")
        return
    if isinstance(w, RegularFunction):
        if not (w.f.compact or w.f.tempered or w.f.schwartz):
            raise UnsupportedDistribution(f"{w.label} is neither compactly supported nor of polynomial growth")
        return
    raise UnsupportedDistribution(f"unsupported distribution {w!r}")


def delta(x: GenPoint) -> Functional:
    """u -> u(x~)."""
    box = is_compactly_supported(x)
    tag = "G" if box is not None else "G_c/G_S"
    return Functional(lambda u: point_value(u, x), tag, Provenance("Delta", x.label), box)


def embed_distribution_direct(w, numerics: Numerics = DEFAULT_NUMERICS) -> Functional:
    """iota_d(w): u -> [(w(u_eps))_eps]."""
    _check_distribution(w)
    if isinstance(w, DeltaDerivative):
        x0 = GenPoint.constant(w.point, numerics.valuation)
        sign = (-1.0) ** w.order

        def evaluate(u):
            value = point_derivative(u, x0, w.order)
            return value if sign > 0 else -value

        support = Box.interval(w.point, w.point)
        return Functional(evaluate, "G", Provenance("DirectDistribution", str(w)), support)

    density = GenFunction(w.f, numerics=numerics, label=w.label)
    return Functional(lambda u: integrate_pair(density, u), "G" if density.space_tag in COMPACT_TAGS else "G_S",
                      Provenance("DirectDistribution", str(w)), density.support)


def iota(w, kernel, numerics: Numerics = DEFAULT_NUMERICS) -> GenFunction:
    """The generalized function [(w * k_eps)_eps]."""
    _check_distribution(w)
    inv = EpsParam(lambda e: 1.0 / e, "1/eps")
    if isinstance(w, DeltaDerivative):
        rep = Affine(Kernel(kernel), inv, w.point)
        if w.order:
            rep = Derivative(rep, w.order)
        return GenFunction(Scaled(rep, inv), numerics=numerics, space_tag=SpaceTag.G_S, label=f"iota({w})")
    rep = Mollified(w.f, kernel, EpsParam(lambda e: e, "eps"))
    return GenFunction(rep, numerics=numerics, label=f"iota({w})")


def embed_distribution(w, kernel, numerics: Numerics = DEFAULT_NUMERICS) -> Functional:
    """iota'(w): integration against iota(w)."""
    v = iota(w, kernel, numerics)
    return embed_genfunction(v)


def embed_genfunction(v: GenFunction) -> Functional:
    """u -> int v u."""
    if v.space_tag in COMPACT_TAGS:
        tag = "G"
    elif v.space_tag in (SpaceTag.G_S, SpaceTag.G_S_INF, SpaceTag.G_TAU):
        tag = "G_S"
    else:
        tag = "G_c"
    return Functional(lambda u: integrate_pair(v, u), tag, Provenance("IntegralKernel", v.label), v.support)


# --- kernels v_x --------------------------------------------------------------------

def _require_cover(psi: Cutoff, box: Box, axis=0):
    lo, hi = psi.plateau
    a, b = box.bounds(axis)
    if not (lo < a and b < hi):
        raise CutoffDoesNotCoverTail(
            f"cutoff plateau [{lo:g}, {hi:g}] does not contain a neighborhood of [{a:g}, {b:g}]")


def delta_kernel(x: GenPoint, psi, phi, numerics: Numerics = DEFAULT_NUMERICS) -> GenFunction:
    """v = [(psi(y) phi_eps(x_eps - y))_eps], tagged G_c with support in supp psi."""
    box = is_compactly_supported(x)
    if box is None:
        raise CutoffDoesNotCoverTail(f"{x.label} is not compactly supported")
    width = EpsParam(lambda e: e, "eps")

    if x.dimension == 1:
        _require_cover(psi, box)
        rep = Product(psi, concentrated(phi, x.coordinate(), width))
        support = Box.interval(*psi.support)
    else:
        cutoffs = list(psi)
        for axis, c in enumerate(cutoffs):
            _require_cover(c, box, axis)
        rep = TensorRep(*(Product(c, concentrated(phi, x.coordinate(axis), width))
                          for axis, c in enumerate(cutoffs)))
        support = Box(tuple(c.support[0] for c in cutoffs), tuple(c.support[1] for c in cutoffs))
    return GenFunction(rep, support=support, space_tag=SpaceTag.G_C, numerics=numerics,
                       label=f"psi*{phi.label}_eps({x.label} - y)")


def delta_kernel_global(x: GenPoint, phi, numerics: Numerics = DEFAULT_NUMERICS) -> GenFunction:
    """v = [(phi_eps(x_eps - y))_eps], tagged G_S."""
    width = EpsParam(lambda e: e, "eps")
    if x.dimension == 1:
        rep = concentrated(phi, x.coordinate(), width)
    else:
        rep = TensorRep(*(concentrated(phi, x.coordinate(axis), width) for axis in range(x.dimension)))
    return GenFunction(rep, space_tag=SpaceTag.G_S, numerics=numerics, label=f"{phi.label}_eps({x.label} - y)")


def moment_kernel(x: GenPoint, psi, phi, numerics: Numerics = DEFAULT_NUMERICS, axis=0) -> GenFunction:
    """v = [(psi(y) (x_i - y_i) phi_eps(x - y))_eps]; regular inputs cannot see it."""
    base = delta_kernel(x, psi, phi, numerics)
    coord = x.coordinate(axis)
    lever = Affine(Polynomial1D([0.0, -1.0]), 1.0, EpsParam(coord, x.label))
    if isinstance(base.rep, TensorRep):
        factors = list(base.rep.factors)
        factors[axis] = Product(factors[axis], lever)
        rep = TensorRep(*factors)
    else:
        rep = Product(base.rep, lever)
    return GenFunction(rep, support=base.support, space_tag=SpaceTag.G_C, numerics=numerics,
                       label=f"(x_{axis} - y_{axis})*{base.label}")


def regularization_sequence(x: GenPoint, rho, q: int, numerics: Numerics = DEFAULT_NUMERICS) -> GenFunction:
    """v_{x,q} = [(rho_{eps^q}(x_eps - y))_eps]."""
    if q < 1:
        raise ValueError("q must be >= 1")
    width = EpsParam(lambda e: e ** q, f"eps^{q}")
    rep = concentrated(rho, x.coordinate(), width)
    return GenFunction(rep, space_tag=SpaceTag.G_S, numerics=numerics, label=f"v_{{{x.label},{q}}}")


def smoothing_sequence(u: GenFunction, rho, q: int) -> GenFunction:
    """u_q = [(rho_hat(eps^q x) int rho_{eps^q}(x - y) u_eps(y) dy)_eps]."""
    if q < 1:
        raise ValueError("q must be >= 1")
    width = EpsParam(lambda e: e ** q, f"eps^{q}")
    rep = Product(Affine(rho.profile, width, 0.0), Mollified(u.rep, rho, width))
    return GenFunction(rep, space_tag=SpaceTag.G_S, numerics=u.numerics, label=f"{u.label}_{q}")


# --- series -------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesRow:
    index: int
    estimate: DecayEstimate
    bound: float

    @property
    def passed(self):
        return self.estimate.negligible or self.estimate.order >= self.bound

    def to_dict(self):
        return {"index": self.index, "estimate": self.estimate.to_dict(), "bound": self.bound,
                "passed": self.passed}


@dataclass(frozen=True)
class SeriesReport:
    kind: str
    rows: tuple
    terms: tuple = ()

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    def to_dict(self):
        return {"kind": self.kind, "passed": self.passed, "rows": [r.to_dict() for r in self.rows],
                "terms": [t.to_dict() for t in self.terms]}


def diverging_points(n: int, numerics: Numerics = DEFAULT_NUMERICS) -> GenPoint:
    """x_n = [(eps^-n)]."""
    return GenPoint(EpsNet(lambda e: e ** (-n), label=f"eps^-{n}"), 1, None, numerics.valuation)


def series_delta(points: Callable[[int], GenPoint], u: GenFunction, q_probe: int, n_max: int = 6,
                 slack: float = 0.5) -> SeriesReport:
    """Valuations of the tails sum_{n=q}^{n_max} delta_{x_n}(u) against the bound q - slack."""
    values = [point_value(u, points(n)) for n in range(n_max + 1)]
    terms = tuple(SeriesRow(n, v.estimate, -math.inf) for n, v in enumerate(values))
    rows = []
    for q in range(1, q_probe + 1):
        tail = values[q]
        for v in values[q + 1:]:
            tail = tail + v
        rows.append(SeriesRow(q, tail.estimate, q - slack))
    return SeriesReport("series-delta", tuple(rows), terms)


def partial_sums(points: Callable[[int], GenPoint], u: GenFunction, m: int) -> list[GenNumber]:
    """S_0, ..., S_m with S_k = sum_{n <= k} delta_{x_n}(u)."""
    out, total = [], None
    for n in range(m + 1):
        value = point_value(u, points(n))
        total = value if total is None else total + value
        out.append(total)
    return out


def taylor_delta_series(u: GenFunction, q_max: int, point: GenPoint | None = None, N: float = 0.0,
                        slack: float = 0.5) -> SeriesReport:
    """Defects u(x~) - sum_{i<=q} [(eps^i / i!)] u^(i)(0) for q = 0..q_max, with x~ = [(eps)]."""
    if q_max + 1 > MAX_ORDER:
        raise OrderTooHigh(f"Taylor defects need derivatives up to {q_max + 1}, above {MAX_ORDER}")
    settings = u.settings
    point = point or GenPoint(EpsNet(lambda e: e, label="eps"), 1, None, settings)
    origin = GenPoint.constant(0.0, settings)
    value = point_value(u, point)
    derivs = [point_derivative(u, origin, i, check=False) for i in range(q_max + 1)]

    rows = []
    partial = None
    for q in range(q_max + 1):
        coeff = EpsNet(lambda e, i=q: e ** i / math.factorial(i), label=f"eps^{q}/{q}!")
        term = derivs[q].net * coeff if q else derivs[0].net
        partial = term if partial is None else partial + term
        defect = value.net - partial
        rows.append(SeriesRow(q, estimate_net(defect, settings), q + 1 - N - slack))
    return SeriesReport("taylor", tuple(rows))


def taylor_defect(u: GenFunction, q: int, point: GenPoint | None = None) -> EpsNet:
    """The net u(x~) - sum_{i<=q} eps^i/i! u^(i)(0), for direct inspection."""
    settings = u.settings
    point = point or GenPoint(EpsNet(lambda e: e, label="eps"), 1, None, settings)
    origin = GenPoint.constant(0.0, settings)
    partial = None
    for i in range(q + 1):
        term = point_derivative(u, origin, i, check=False).net * EpsNet(
            lambda e, i=i: e ** i / math.factorial(i))
        partial = term if partial is None else partial + term
    return point_value(u, point).net - partial


# --- restriction, support, extension --------------------------------------------------

def restrict(T: Functional, V: Box) -> Functional:
    """T|_V: accepts inputs supported in V only."""
    def evaluate(u):
        if u.support is None or not V.contains_box(u.support):
            raise SupportNotContained(f"{u.label} is not supported inside {V!r}")
        return T(u)

    support = None
    if T.support is not None:
        lo = tuple(max(a, b) for a, b in zip(T.support.lo, V.lo))
        hi = tuple(min(a, b) for a, b in zip(T.support.hi, V.hi))
        support = Box(lo, hi)
    return Functional(evaluate, f"G_c({V!r})", Provenance("Restriction", f"{T.label} to {V!r}"), support)


def probe_bumps(center: float, radius: float) -> list[SmoothRep]:
    """Probes supported in [center - radius, center + radius]: bump, odd bump, eps-shifted and eps-dilated bumps."""
    half = 0.5 * radius
    bump = Cutoff(center - half, center + half, half)
    odd = Product(bump, Polynomial1D([-center / radius, 1.0 / radius]))
    base = Cutoff(-0.5 * half, 0.5 * half, 0.5 * half)
    shifted = Affine(base, 1.0, EpsParam(lambda e, c=center, h=half: c + 0.5 * h * e, f"{center:g}+eps"))
    dilated = Affine(base, EpsParam(lambda e: 1.0 / (1.0 + e), "1/(1+eps)"), center)
    return [bump, odd, shifted, dilated]


def _non_negligible(value: GenNumber) -> bool:
    d = value.estimate
    return d.classification in (Classification.ORDER, Classification.AMBIGUOUS)


def support_probe(T: Functional, probe_centers, radius: float,
                  numerics: Numerics = DEFAULT_NUMERICS) -> frozenset:
    """Centers at which some probe supported in the ball of ``radius`` sees T non-negligibly."""
    found = set()
    for c in probe_centers:
        for rep in probe_bumps(float(c), radius):
            probe = GenFunction(rep, support=Box.interval(c - radius, c + radius), numerics=numerics)
            if _non_negligible(T(probe)):
                found.add(float(c))
                break
    return frozenset(found)


def probed_support_box(T: Functional, window: Box, radius: float,
                       numerics: Numerics = DEFAULT_NUMERICS) -> Box | None:
    """Hull of the probed support on a grid of centers spaced ``radius`` apart in ``window``."""
    lo, hi = window.bounds()
    centers = np.arange(lo, hi + 0.5 * radius, radius)
    hits = support_probe(T, centers, radius, numerics)
    if not hits:
        return None
    return Box.interval(min(hits) - radius, max(hits) + radius)


def cutoff_extension(T: Functional, chi: Cutoff, numerics: Numerics = DEFAULT_NUMERICS,
                     probe_radius: float = 0.1) -> Functional:
    """T'(u) = T(chi u) for a cutoff equal to 1 near supp T.

    Without a recorded support, supp T is probed on a grid around supp chi; an
    empty probe set counts as unknown, not as compact.
    """
    support = T.support
    if support is None:
        lo, hi = chi.support
        reach = chi.margin + probe_radius
        support = probed_support_box(T, Box.interval(lo - reach, hi + reach), probe_radius, numerics)
        if support is None:
            raise CutoffDoesNotCoverSupport(f"{T.label} has no recorded or probed compact support")
    lo, hi = chi.plateau
    a, b = support.bounds()
    if not (lo < a and b < hi):
        raise CutoffDoesNotCoverSupport(
            f"cutoff plateau [{lo:g}, {hi:g}] does not contain a neighborhood of supp T = [{a:g}, {b:g}]")
    chi_support = Box.interval(*chi.support)

    def evaluate(u):
        cut = GenFunction(Product(chi, u.rep), u.domain, chi_support, SpaceTag.G_C, u.numerics,
                          f"chi*{u.label}")
        return T(cut)

    return Functional(evaluate, "G", Provenance("Extension", f"{T.label} by {chi.label}"), support)
