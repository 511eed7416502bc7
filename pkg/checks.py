# checks.py - Check builders and the ordered registry
"""
Every builder takes a CheckContext and returns a list of Findings.  Universal
statements are measured over the named corpora of corpus.py only.
"""

from __future__ import annotations

import math

import numpy as np

from asymptotics import EpsNet, estimate_net, power_net, ultra_norm
from corpus import ideal_corpus, parse_net, probe_family, regular_corpus
from errors import CutoffDoesNotCoverSupport, SupportNotContained
from functionals import (DeltaDerivative, RegularFunction, cutoff_extension, delta, delta_kernel,
                         delta_kernel_global, diverging_points, embed_distribution, embed_distribution_direct,
                         embed_genfunction, moment_kernel, partial_sums, probe_bumps, regularization_sequence,
                         restrict, series_delta, smoothing_sequence, support_probe, taylor_defect)
from genfun import (GenFunction, SpaceTag, classify_regular, global_sup_net, integrate_global, integrate_pair,
                    point_value, schwartz_seminorm_net, seminorm_net, sobolev_l2_net, ultra_pseudo_seminorm,
                    weighted_defect_net)
from mollifier import check_moments
from quadrature import integrate_window
from scalars import Box, GenPoint, dyadic_valuation, point_support
from smoothrep import (Affine, Constant, Conjugate, Cosine, Cutoff, EpsParam, Exponential, Gaussian,
                       Polynomial1D, Product, Reciprocal, Scaled, Sine, Sum, TensorRep, concentrated, eps_pow)
from verify import (AtMost, CheckDef, CheckSkipped, ConstantEquals, Finding, Holds, IdenticallyZero,
                    Negligible, NonNegligible, SetEquals, SlopeAtLeast, SlopeAtMost, SlopeEquals, worst_ratio)

INV_EPS = EpsParam(lambda e: 1.0 / e, "1/eps")
EPS = EpsParam(lambda e: e, "eps")


# --- small builders ----------------------------------------------------------------

def _point(ctx, func, label):
    return GenPoint.from_function(func, label, settings=ctx.settings)


def _const(ctx, x0):
    return GenPoint.constant(x0, ctx.settings)


def _fn(ctx, rep, label, **kwargs):
    return GenFunction(rep, numerics=ctx.numerics, label=label, **kwargs)


def _diff(a, b):
    return a.net - b.net


def _raises(error, func):
    try:
        func()
    except error:
        return True
    return False


def _compact_points(ctx):
    return [
        _point(ctx, lambda e: 0.3 + e, "0.3+eps"),
        _point(ctx, lambda e: -0.5 + e * e, "-0.5+eps^2"),
        _point(ctx, lambda e: 0.1 * math.cos(e), "0.1cos(eps)"),
    ]


def _ball_probes(ctx, centers, radius):
    out = []
    for c in centers:
        for i, rep in enumerate(probe_bumps(c, radius)):
            out.append((f"probe{i}@{c:g}",
                        _fn(ctx, rep, f"probe{i}@{c:g}", support=Box.interval(c - radius, c + radius))))
    return out


# --- sheaf and support -------------------------------------------------------------------

def sheaf_restrict(ctx):
    V, W = Box.interval(-1.0, 1.0), Box.interval(-0.5, 0.5)
    probes = _ball_probes(ctx, (-0.4, -0.2, 0.0, 0.2, 0.4), 0.1)
    outside = _ball_probes(ctx, (0.7,), 0.1)[0][1]
    functionals = [
        ("delta(0.3+eps)", delta(_point(ctx, lambda e: 0.3 + e, "0.3+eps"))),
        ("int cos", embed_genfunction(_fn(ctx, Cosine(), "cos"))),
    ]
    findings = []
    for name, T in functionals:
        T_V, T_W = restrict(T, V), restrict(T, W)
        T_VW = restrict(T_V, W)
        findings.append(ctx.worst_finding(f"{name}: (T|V)|W - T|W",
                                          [(p, _diff(T_VW(u), T_W(u))) for p, u in probes], IdenticallyZero()))
        findings.append(ctx.worst_finding(f"{name}: T|W - T",
                                          [(p, _diff(T_W(u), T(u))) for p, u in probes], IdenticallyZero()))
        findings.append(Finding(f"{name}: T|W rejects inputs supported outside W",
                                _raises(SupportNotContained, lambda: T_W(outside)), Holds()))
    return findings


def compact_support_extension(ctx):
    chi = Cutoff(-1.0, 1.0, 0.5)
    findings = []

    T = delta(_point(ctx, lambda e: 0.3 + e, "0.3+eps"))
    ext = cutoff_extension(T, chi)
    findings.append(ctx.worst_finding("delta(0.3+eps): T(chi u) - T(u) on G",
                                      [(e.name, _diff(ext(e.function), T(e.function)))
                                       for e in regular_corpus(ctx.numerics)], IdenticallyZero()))

    v = _fn(ctx, Product(Cutoff(-0.5, 0.5, 0.25), Cosine(3.0)), "cut*cos3")
    S = embed_genfunction(v)
    ext_S = cutoff_extension(S, chi)
    findings.append(ctx.worst_finding("int v: T(chi u) - T(u) on G_c probes",
                                      [(e.name, _diff(ext_S(e.function), S(e.function)))
                                       for e in probe_family(numerics=ctx.numerics)], Negligible()))

    iota0 = embed_distribution(DeltaDerivative(0), ctx.phi, ctx.numerics)
    ext_iota = cutoff_extension(iota0, chi, ctx.numerics)
    findings.append(ctx.worst_finding("iota'(delta_0), probed support: T(chi u) - T(u) on G_c probes",
                                      [(e.name, _diff(ext_iota(e.function), iota0(e.function)))
                                       for e in probe_family(numerics=ctx.numerics)], Negligible()))

    narrow = Cutoff(-0.5, 0.5, 0.25)
    findings.append(Finding("cutoff not covering supp T is rejected",
                            _raises(CutoffDoesNotCoverSupport, lambda: cutoff_extension(S, narrow)), Holds()))
    far = delta(_point(ctx, lambda e: 0.5 / e, "0.5/eps"))
    findings.append(Finding("delta at a non-compact point has no extension",
                            _raises(CutoffDoesNotCoverSupport, lambda: cutoff_extension(far, chi, ctx.numerics)),
                            Holds()))
    findings.append(Finding("int cos has no extension",
                            _raises(CutoffDoesNotCoverSupport,
                                    lambda: cutoff_extension(embed_genfunction(_fn(ctx, Cosine(), "cos")), chi,
                                                             ctx.numerics)),
                            Holds()))
    return findings


# --- embeddings of distributions --------------------------------------------------------

def direct_embedding(ctx):
    corpus = regular_corpus(ctx.numerics)
    entries = {e.name: e.function for e in corpus}
    d0 = embed_distribution_direct(DeltaDerivative(0), ctx.numerics)
    d1 = embed_distribution_direct(DeltaDerivative(1), ctx.numerics)
    d2 = embed_distribution_direct(DeltaDerivative(2), ctx.numerics)
    delta0 = delta(_const(ctx, 0.0))

    findings = [
        ctx.worst_finding("iota_d(delta_0) - delta_0",
                          [(e.name, _diff(d0(e.function), delta0(e.function))) for e in corpus], IdenticallyZero()),
        ctx.net_finding("iota_d(delta_0)(cos)", d0(entries["cos"]).net, NonNegligible()),
        ctx.constant_finding("iota_d(delta_0')(sin) = -1", d1(entries["sin"]).net, 0.0, -1.0, 1e-9),
        ctx.constant_finding("iota_d(delta_0'')(cos) = -1", d2(entries["cos"]).net, 0.0, -1.0, 1e-9),
    ]

    f = Product(Cutoff(-1.0, 1.0, 0.5), Gaussian())
    df = embed_distribution_direct(RegularFunction(f, "cut*gauss"), ctx.numerics)
    density = _fn(ctx, f, "cut*gauss")
    findings.append(ctx.worst_finding("iota_d(f)(u) - int f u",
                                      [(e.name, _diff(df(e.function), integrate_pair(density, e.function)))
                                       for e in corpus], Negligible()))

    u, w = entries["cos"], entries["exp-third"]
    combo = _fn(ctx, Sum(Scaled(u.rep, 2.0), Scaled(w.rep, -3.0)), "2cos-3exp")
    linear = d1(combo).net - (d1(u).net * 2.0 - d1(w).net * 3.0)
    findings.append(ctx.net_finding("iota_d(delta_0') is linear", linear, Negligible()))
    return findings


def delta_continuity(ctx):
    x = _point(ctx, lambda e: 0.3 + e, "0.3+eps")
    K = Box.interval(0.0, 1.0)
    inputs = [
        ("cos", Cosine()),
        ("eps^2 gauss", Scaled(Gaussian(), eps_pow(2))),
        ("eps^-1 x^2", Scaled(Polynomial1D([0.0, 0.0, 1.0]), eps_pow(-1))),
        ("eps^3 exp(x/3)", Scaled(Exponential(1.0 / 3.0), eps_pow(3))),
    ]
    ratios, worst = [], None
    for name, rep in inputs:
        u = _fn(ctx, rep, name)
        lhs = ultra_norm(point_value(u, x).estimate)
        rhs = ultra_pseudo_seminorm(u, K, 0)
        ratio = 0.0 if lhs == 0 else (math.inf if rhs == 0 else lhs / rhs)
        ratios.append(ratio)
        if worst is None or ratio > worst[1]:
            worst = (name, ratio)
    return [Finding("|delta(u)|_e / P_K,0(u)", worst_ratio(ratios), AtMost(1.15), None,
                    f"largest at {worst[0]}")]


def support_empty(ctx):
    x = _point(ctx, lambda e: 0.5 / e, "0.5/eps")
    T = delta(x)
    centers = np.arange(-10.0, 10.0 + 0.25, 0.5)
    bump = _fn(ctx, Cutoff(-1.0, 1.0, 0.5), "bump")
    return [
        Finding("accumulation points in [-10, 10]", point_support(x, Box.interval(-10.0, 10.0),
                                                                  support=ctx.numerics.support),
                SetEquals((), 1e-3)),
        Finding("probed support", support_probe(T, centers, 0.25, ctx.numerics), SetEquals((), 0.25)),
        ctx.net_finding("delta(bump)", T(bump).net, IdenticallyZero()),
    ]


def support_naturals(ctx):
    x = GenPoint.piecewise(dyadic_valuation, "nu_2(n)", settings=ctx.settings)
    x0 = _const(ctx, 0.3)
    centers = np.round(np.arange(-1.0, 1.0 + 0.05, 0.1), 10)
    return [
        Finding("accumulation points of nu_2(n)", point_support(x, Box.interval(-0.5, 5.5), 1e-3,
                                                               ctx.numerics.support),
                SetEquals((0.0, 1.0, 2.0, 3.0, 4.0, 5.0), 1e-3)),
        Finding("accumulation points of 0.3", point_support(x0, Box.interval(-1.0, 1.0), 1e-3,
                                                           ctx.numerics.support),
                SetEquals((0.3,), 1e-3)),
        Finding("accumulation points of 0.3 + eps^(q+1)",
                point_support(x0.perturbed(ctx.settings.q_max + 1.0), Box.interval(-1.0, 1.0), 1e-3,
                              ctx.numerics.support),
                SetEquals((0.3,), 1e-3)),
        Finding("probed support of delta_0.3", support_probe(delta(x0), centers, 0.05, ctx.numerics),
                SetEquals((0.3,), 0.05)),
    ]


# --- delta at [(eps)] and the Taylor series -----------------------------------------

def no_linear_combination(ctx):
    x = _point(ctx, lambda e: e, "eps")
    psi = Cutoff(-1.0, 1.0, 0.5)
    monomials = [_fn(ctx, Product(Polynomial1D([0.0] * h + [1.0]), psi), f"x^{h}psi") for h in range(6)]
    dx = delta(x)
    d0 = [embed_distribution_direct(DeltaDerivative(h), ctx.numerics) for h in range(6)]

    findings, coeffs = [], []
    for h in range(5):
        num, den = dx(monomials[h]).net, d0[h](monomials[h]).net
        c = EpsNet(lambda e, a=num, b=den: a(e) / b(e), label=f"c_{h}")
        coeffs.append(c)
        findings.append(ctx.net_finding(f"c_{h} order", c, SlopeEquals(float(h), 0.1)))
        findings.append(ctx.constant_finding(f"c_{h} = (-eps)^{h}/{h}!", c, float(h),
                                             (-1.0) ** h / math.factorial(h)))

    def residual(m, u):
        net = dx(u).net
        for h in range(m + 1):
            net = net - coeffs[h] * d0[h](u).net
        return net

    for m in (1, 2, 3):
        findings.append(ctx.net_finding(f"residual of m={m} at x^{m + 1}psi", residual(m, monomials[m + 1]),
                                        SlopeEquals(float(m + 1), 0.1)))
        findings.append(ctx.worst_finding(f"combination of m={m} matches on x^j psi, j <= {m}",
                                          [(f"j={j}", residual(m, monomials[j])) for j in range(m + 1)],
                                          Negligible()))
    return findings


def taylor_series(ctx):
    u = _fn(ctx, Product(Cosine(), Exponential(1.0 / 3.0)), "cos*exp(x/3)")
    c = _fn(ctx, Constant(3.0), "3")
    findings = []
    for q in range(7):
        findings.append(ctx.net_finding(f"defect q={q}", taylor_defect(u, q), SlopeAtLeast(q + 0.5)))
    findings.append(ctx.worst_finding("constant input", [(f"q={q}", taylor_defect(c, q)) for q in range(7)],
                                      IdenticallyZero()))
    return findings


def _sin_taylor_at_one(q):
    return sum((0.0, 1.0, 0.0, -1.0)[i % 4] / math.factorial(i) for i in range(q + 1))


def taylor_diverges(ctx):
    u = _fn(ctx, Product(Affine(Sine(), INV_EPS), Gaussian()), "sin(x/eps)*gauss")
    findings = []
    for q in range(7):
        net = taylor_defect(u, q)
        findings.append(ctx.net_finding(f"defect q={q}", net, SlopeAtMost(0.1)))
        findings.append(ctx.constant_finding(f"defect q={q} constant", net, 0.0,
                                             math.sin(1.0) - _sin_taylor_at_one(q)))
    return findings


def delta_series(ctx):
    points = lambda n: diverging_points(n, ctx.numerics)
    decaying = _fn(ctx, Product(Reciprocal(Polynomial1D([1.0, 0.0, 1.0])), Affine(Gaussian(), eps_pow(8))),
                   "gauss(eps^8 x)/(1+x^2)", space_tag=SpaceTag.G_S)
    report = series_delta(points, decaying, q_probe=5, n_max=6)
    findings = []
    for q, row in enumerate(report.rows, start=1):
        findings.append(Finding(f"tail from n={q}", row.estimate, SlopeAtLeast(q - 0.5)))

    compact = _fn(ctx, Cutoff(-9.0, 9.0, 1.0), "bump[-10,10]")
    findings.append(ctx.worst_finding("compact input: terms n >= 1",
                                      [(f"n={n}", point_value(compact, points(n)).net) for n in range(1, 7)],
                                      IdenticallyZero()))
    sums = partial_sums(points, compact, 6)
    findings.append(ctx.net_finding("compact input: S_6 - S_1", sums[6].net - sums[1].net, IdenticallyZero()))
    return findings


# --- delta kernels -------------------------------------------------------------------------

def delta_kernel_check(ctx):
    psi = Cutoff(-1.5, 1.5, 0.5)
    corpus = regular_corpus(ctx.numerics)
    findings = []
    for x in _compact_points(ctx):
        v = delta_kernel(x, psi, ctx.phi, ctx.numerics)
        nets = [(e.name, _diff(point_value(e.function, x), integrate_pair(v, e.function))) for e in corpus]
        findings.append(ctx.worst_finding(f"u({x.label}) - int v u", nets, SlopeAtLeast(8.0)))
    return findings


def cutoff_independence(ctx):
    x = _point(ctx, lambda e: 0.3 + e, "0.3+eps")
    v1 = delta_kernel(x, Cutoff(-1.0, 1.0, 0.25), ctx.phi, ctx.numerics)
    v2 = delta_kernel(x, Cutoff(-2.0, 3.0, 1.0), ctx.phi, ctx.numerics)
    nets = [(e.name, _diff(integrate_pair(v1, e.function), integrate_pair(v2, e.function)))
            for e in regular_corpus(ctx.numerics)]
    return [ctx.worst_finding("int v1 u - int v2 u", nets, Negligible())]


def nonregular_defect(ctx):
    phi = ctx.phi
    x = _const(ctx, 0.3)
    v = delta_kernel(x, Cutoff(-1.0, 1.0, 0.5), phi, ctx.numerics)
    u0 = _fn(ctx, Conjugate(concentrated(phi, 0.3, EPS)), "conj(phi)_eps(0.3 - y)", space_tag=SpaceTag.G_S)
    defect = _diff(integrate_pair(v, u0), point_value(u0, x))
    return [
        ctx.net_finding("int v u0 - u0(x)", defect, SlopeEquals(-1.0, 0.1)),
        ctx.constant_finding("||phi||^2 - phi(0)", defect, -1.0, phi.counterexample_constant),
    ]


def two_variable_kernel(ctx):
    psi = Cutoff(-1.0, 1.0, 0.25)
    corpus = regular_corpus(ctx.numerics)
    findings = []
    for x0 in (-0.4, -0.1, 0.2, 0.45):
        x = _const(ctx, x0)
        v = delta_kernel(x, psi, ctx.phi, ctx.numerics)
        nets = [(e.name, _diff(point_value(e.function, x), integrate_pair(v, e.function))) for e in corpus]
        findings.append(ctx.worst_finding(f"x={x0:g}: u(x) - int v(x, y) u(y) dy", nets, SlopeAtLeast(8.0)))
        findings.append(ctx.net_finding(f"x={x0:g}: sup_y |v(x, y)|", seminorm_net(v, Box.interval(-1.5, 1.5), 0),
                                        SlopeEquals(-1.0, 0.1)))
    return findings


def delta_kernel_tempered(ctx):
    phi, rho = ctx.phi, ctx.rho
    points = [
        _point(ctx, lambda e: 1.0 / e, "1/eps"),
        _const(ctx, 0.7),
        _point(ctx, lambda e: e ** -0.5, "eps^-1/2"),
    ]
    inputs = [
        ("x*gauss", Product(Polynomial1D([0.0, 1.0]), Gaussian())),
        ("gauss(0.5)*cos2", Product(Gaussian(0.5), Cosine(2.0))),
        ("(1+x^2)*gauss", Product(Polynomial1D([1.0, 0.0, 1.0]), Gaussian())),
        ("one", Constant(1.0)),
    ]
    functions = [(name, _fn(ctx, rep, name)) for name, rep in inputs]
    findings = []
    for x in points:
        v = delta_kernel_global(x, phi, ctx.numerics)
        nets = [(name, _diff(point_value(u, x), integrate_pair(v, u))) for name, u in functions]
        findings.append(ctx.worst_finding(f"u({x.label}) - int v u", nets, Negligible()))

    zero = _const(ctx, 0.0)
    u0 = _fn(ctx, concentrated(rho, 0.0, EPS), "rho_eps(-y)", space_tag=SpaceTag.G_S)
    v0 = delta_kernel_global(zero, rho, ctx.numerics)
    defect = _diff(point_value(u0, zero), integrate_pair(v0, u0))
    findings.append(ctx.net_finding("Gaussian kernel: u0(0) - int v u0", defect, SlopeEquals(-1.0, 0.1)))
    findings.append(ctx.constant_finding("rho(0) - ||rho||^2", defect, -1.0, -rho.counterexample_constant))
    return findings


# --- integration embedding ----------------------------------------------------------------

def embedding_continuity(ctx):
    K = Box.interval(-2.0, 2.0)
    densities = [
        ("eps^-1(2+cos)", Scaled(Sum(Constant(2.0), Cosine()), eps_pow(-1))),
        ("eps^2(1+x^2)", Scaled(Polynomial1D([1.0, 0.0, 1.0]), eps_pow(2))),
        ("exp(x/3)", Exponential(1.0 / 3.0)),
    ]
    probes = probe_family(numerics=ctx.numerics)
    probe_norms = {e.name: ultra_pseudo_seminorm(e.function, K, 0) for e in probes}

    ratios, worst = [], ("", 0.0)

    def record(label, value, norm):
        nonlocal worst
        lhs = ultra_norm(value.estimate)
        ratio = 0.0 if lhs == 0 else (math.inf if norm == 0 else lhs / norm)
        ratios.append(ratio)
        if ratio > worst[1]:
            worst = (label, ratio)

    for name, rep in densities:
        v = _fn(ctx, rep, name)
        T = embed_genfunction(v)
        pv = ultra_pseudo_seminorm(v, K, 0)
        for e in probes:
            record(f"{name} on {e.name}", T(e.function), pv * probe_norms[e.name])

    K_c = Box.interval(-1.0, 1.0)
    v_c = _fn(ctx, Scaled(Cutoff(-0.5, 0.5, 0.25), eps_pow(-2)), "eps^-2 bump")
    T_c = embed_genfunction(v_c)
    pv_c = ultra_pseudo_seminorm(v_c, K_c, 0)
    for e in regular_corpus(ctx.numerics):
        record(f"eps^-2 bump on {e.name}", T_c(e.function), pv_c * ultra_pseudo_seminorm(e.function, K_c, 0))

    return [Finding("|T(u)|_e / (P(v) P(u))", worst_ratio(ratios), AtMost(1.15), None,
                    f"{len(ratios)} pairs, largest at {worst[0] or 'none'}")]


def noninjective_regular(ctx):
    phi = ctx.phi_skew
    psi = Cutoff(-1.0, 1.0, 0.5)
    findings = []

    v = moment_kernel(_const(ctx, 0.3), psi, phi, ctx.numerics)
    T = embed_genfunction(v)
    findings.append(ctx.worst_finding("n=1: T on regular probes",
                                      [(e.name, T(e.function).net) for e in regular_corpus(ctx.numerics)],
                                      Negligible()))
    u0 = _fn(ctx, concentrated(phi, 0.3, EPS), "phi_eps(0.3 - y)", space_tag=SpaceTag.G_S)
    value = T(u0).net
    findings.append(ctx.net_finding("n=1: T(u0)", value, SlopeEquals(0.0, 0.1)))
    findings.append(ctx.constant_finding("n=1: int y phi(y)^2 dy", value, 0.0, phi.square_moment(1)))

    x2 = _const(ctx, (0.3, -0.2))
    v2 = moment_kernel(x2, [psi, psi], phi, ctx.numerics, axis=0)
    T2 = embed_genfunction(v2)
    regular_2d = [
        ("cos (x) one", TensorRep(Cosine(), Constant(1.0))),
        ("exp(x/3) (x) cos", TensorRep(Exponential(1.0 / 3.0), Cosine())),
        ("gauss (x) sin", TensorRep(Gaussian(), Sine())),
    ]
    findings.append(ctx.worst_finding("n=2: T on regular probes",
                                      [(name, T2(_fn(ctx, rep, name)).net) for name, rep in regular_2d],
                                      Negligible()))
    u0_2 = _fn(ctx, TensorRep(concentrated(phi, 0.3, EPS), concentrated(phi, -0.2, EPS)), "phi_eps(x0 - y)",
               space_tag=SpaceTag.G_S)
    value2 = T2(u0_2).net
    findings.append(ctx.net_finding("n=2: T(u0)", value2, SlopeEquals(-1.0, 0.1)))
    findings.append(ctx.constant_finding("n=2: int y_1 phi^2 * ||phi||^2", value2, -1.0,
                                         phi.square_moment(1) * phi.axis_norm_sq))
    return findings


# --- ideals ---------------------------------------------------------------------------------

_CONTROL = "eps2-gauss"


def ideal_sup(ctx):
    findings = []
    for entry in ideal_corpus(ctx.numerics):
        u = entry.function
        moderate = estimate_net(schwartz_seminorm_net(u, alpha=2), ctx.settings)
        findings.append(Finding(f"{entry.name}: x^2 u is S-moderate",
                                moderate.negligible or moderate.order >= -ctx.settings.n_max, Holds()))
        if entry.name == _CONTROL:
            findings.append(ctx.net_finding(f"{entry.name}: order-0 sup", global_sup_net(u, 0), NonNegligible()))
            continue
        for m in (0, 1, 2):
            findings.append(ctx.net_finding(f"{entry.name}: order-{m} sup", global_sup_net(u, m), Negligible()))
    return findings


def ideal_l2(ctx):
    findings = []
    for entry in ideal_corpus(ctx.numerics):
        u = entry.function
        if entry.name == _CONTROL:
            findings.append(ctx.net_finding(f"{entry.name}: L2 norm", sobolev_l2_net(u, 0), NonNegligible()))
            continue
        for m in (0, 1, 2):
            findings.append(ctx.net_finding(f"{entry.name}: H{m} norm", sobolev_l2_net(u, m), Negligible()))
    return findings


def _phihat_at(phi, scale):
    return Affine(phi.profile, scale, 0.0)


def injectivity_device(ctx):
    N = 1
    u = Scaled(Product(Gaussian(), Cosine()), eps_pow(2))
    uf = _fn(ctx, u, "eps^2 gauss*cos", space_tag=SpaceTag.G_S)
    A = _phihat_at(ctx.phi, eps_pow(N + 1))
    w = _fn(ctx, Product(Conjugate(u), A, A), "conj(u)|phihat(eps^2 x)|^2", space_tag=SpaceTag.G_S)
    pairing = integrate_pair(uf, w).net
    norm = integrate_pair(uf, _fn(ctx, Conjugate(u), "conj(u)", space_tag=SpaceTag.G_S)).net
    return [
        ctx.net_finding("int u w", pairing, SlopeEquals(4.0, 0.1)),
        ctx.net_finding("int u w - ||u||^2", pairing - norm, Negligible()),
    ]


def _phihat_defect(ctx, square=False):
    A = _phihat_at(ctx.phi, EPS)
    factors = (A, A, Sum(A, Constant(-1.0))) if square else (A, Sum(A, Constant(-1.0)))
    label = "phihat(eps x)^2 (phihat(eps x) - 1)" if square else "phihat(eps x)(phihat(eps x) - 1)"
    return _fn(ctx, Product(*factors), label, space_tag=SpaceTag.G_S)


def phihat_net(ctx):
    t = _phihat_defect(ctx)
    sup = global_sup_net(t, 0)
    x = _point(ctx, lambda e: 1.5 / e, "1.5/eps")
    return [
        ctx.net_finding("sup over [-10, 10]", seminorm_net(t, Box.interval(-10.0, 10.0), 2), IdenticallyZero()),
        ctx.net_finding("global sup", sup, SlopeEquals(0.0, 0.1)),
        ctx.constant_finding("global sup = 1/4", sup, 0.0, 0.25),
        ctx.constant_finding("value at 1.5/eps", point_value(t, x).net, 0.0, -0.25),
    ]


def not_dense(ctx):
    profile = ctx.phi.profile
    chi = lambda xi: profile.evaluate(1.0, xi, 0)[0]
    oracle = integrate_window(lambda xi: chi(xi) ** 2 * (chi(xi) - 1.0), profile.r_out).value.real
    if abs(oracle) <= 1e-12:
        raise CheckSkipped(f"int phihat^2 (phihat - 1) = {oracle:.3e} is zero for this profile")
    t = _phihat_defect(ctx, square=True)
    total = integrate_global(t).net
    return [
        ctx.net_finding("sup over [-10, 10]", seminorm_net(t, Box.interval(-10.0, 10.0), 0), IdenticallyZero()),
        ctx.net_finding("int over R", total, SlopeEquals(-1.0, 0.1)),
        ctx.constant_finding("int phihat^2 (phihat - 1)", total, -1.0, oracle),
    ]


# --- iota_d against iota' ------------------------------------------------------------------------

def iota_compare(ctx):
    phi = ctx.phi
    K = Box.interval(-1.0, 1.0)
    d = embed_distribution_direct(DeltaDerivative(0), ctx.numerics)
    p = embed_distribution(DeltaDerivative(0), phi, ctx.numerics)
    cut = Cutoff(-2.0, 2.0, 1.0)
    regular = [(e.name, _fn(ctx, Product(cut, e.function.rep), f"cut*{e.name}"))
               for e in regular_corpus(ctx.numerics)]

    findings = [ctx.worst_finding("iota_d(delta_0) - iota'(delta_0) on G_c^inf",
                                  [(name, _diff(d(u), p(u))) for name, u in regular], Negligible())]
    kinds = [classify_regular(u, K).kind for _, u in regular[:3]]
    findings.append(Finding("corpus inputs classify Regular", all(k == "Regular" for k in kinds), Holds(),
                            None, ", ".join(kinds)))

    u0 = _fn(ctx, Conjugate(concentrated(phi, 0.0, EPS)), "conj(phi)_eps(-y)", space_tag=SpaceTag.G_S)
    kind = classify_regular(u0, K).kind
    findings.append(Finding("conj(phi)_eps(-y) classifies NotRegular", kind == "NotRegular", Holds(), None, kind))
    gap = _diff(d(u0), p(u0))
    findings.append(ctx.net_finding("iota_d(delta_0)(u0) - iota'(delta_0)(u0)", gap, SlopeEquals(-1.0, 0.1)))
    findings.append(ctx.constant_finding("phi(0) - ||phi||^2", gap, -1.0, -phi.counterexample_constant))
    return findings


def support_equal(ctx):
    centers = np.arange(-1.0, 1.0 + 0.125, 0.25)
    findings = []
    for x0 in (0.0, 0.5):
        w = DeltaDerivative(0, x0)
        for name, T in (("iota_d", embed_distribution_direct(w, ctx.numerics)),
                        ("iota'", embed_distribution(w, ctx.phi, ctx.numerics))):
            findings.append(Finding(f"supp {name}(delta_{x0:g})", support_probe(T, centers, 0.1, ctx.numerics),
                                    SetEquals((x0,), 0.1)))
    return findings


# --- regularization and density -----------------------------------------------------------

def regularization(ctx):
    rho = ctx.rho
    K = Box.interval(-1.0, 1.0)
    inputs = [
        ("sin@0.3", Sine(), _const(ctx, 0.3)),
        ("sin(x/eps)@eps", Affine(Sine(), INV_EPS), _point(ctx, lambda e: e, "eps")),
        ("eps^-2 cos@0.3+eps", Scaled(Cosine(), eps_pow(-2)), _point(ctx, lambda e: 0.3 + e, "0.3+eps")),
        ("x gauss@0.3", Product(Polynomial1D([0.0, 1.0]), Gaussian()), _const(ctx, 0.3)),
    ]
    findings = []
    slopes_at_one = {}
    for name, rep, x in inputs:
        u = _fn(ctx, rep, name)
        growth = estimate_net(seminorm_net(u, K, 1), ctx.settings)
        N = max(0.0, -growth.order) if not math.isnan(growth.order) else 0.0
        orders = []
        for q in range(1, 7):
            v = regularization_sequence(x, rho, q, ctx.numerics)
            defect = _diff(integrate_pair(v, u), point_value(u, x))
            f = ctx.net_finding(f"{name}: q={q}", defect, SlopeAtLeast(q - N - 0.5), f"N = {N:.2f}")
            findings.append(f)
            orders.append(f.measured.order)
            if q == 1:
                slopes_at_one[name] = f.measured
        findings.append(Finding(f"{name}: monotone in q",
                                all(b >= a - 0.1 for a, b in zip(orders, orders[1:])), Holds(), None,
                                ", ".join(f"{o:.2f}" for o in orders)))

    base = slopes_at_one["sin(x/eps)@eps"]
    x = _point(ctx, lambda e: e, "eps")
    scaled = _fn(ctx, Scaled(Affine(Sine(), INV_EPS), eps_pow(-2)), "eps^-2 sin(x/eps)")
    v = regularization_sequence(x, rho, 1, ctx.numerics)
    shifted = ctx.estimate(_diff(integrate_pair(v, scaled), point_value(scaled, x)))
    findings.append(Finding("scaling by eps^-2 shifts the q=1 slope", base.slope - shifted.slope,
                            ConstantEquals(2.0, 0.05)))
    return findings


def density(ctx):
    rho = ctx.rho
    inputs = [
        ("x", Polynomial1D([0.0, 1.0]), 1, 0),
        ("gauss", Gaussian(), 0, 0),
        ("one", Constant(1.0), 0, 0),
        ("x/eps", Scaled(Polynomial1D([0.0, 1.0]), eps_pow(-1)), 1, 1),
    ]
    findings = []
    for name, rep, N, M in inputs:
        u = _fn(ctx, rep, name)
        for q in (1, 2, 3):
            uq = smoothing_sequence(u, rho, q)
            net = weighted_defect_net(uq, u, N + 1, 1, radius=50.0)
            findings.append(ctx.net_finding(f"{name}: q={q}", net, SlopeAtLeast(q - M - 0.5)))

    one = _fn(ctx, Constant(1.0), "one")
    net = weighted_defect_net(smoothing_sequence(one, ctx.phi, 1), one, 1, 1, radius=50.0)
    findings.append(ctx.net_finding("vanishing-moment kernel on 1", net, Negligible()))
    return findings


# --- kernel and engine certificates -----------------------------------------------------

def mollifier_certificate(ctx):
    phi = ctx.phi
    cert = phi.certificate
    p = phi.params
    chi = lambda xi: phi.profile.evaluate(1.0, xi, 0)[0]
    oracle = integrate_window(lambda xi: chi(xi) ** 2 - chi(xi), p.r_out).value.real
    skew = ctx.phi_skew
    rho_report = check_moments(ctx.rho, 2)
    return [
        Finding("|int phi - 1|", abs(cert["mass"] - 1.0), AtMost(1e-8)),
        Finding("max |int y^a phi|, 1 <= a <= 6", cert["max_moment"], AtMost(1e-6)),
        Finding("Parseval relative gap", cert["parseval_relative"], AtMost(1e-6)),
        Finding("||phi||^2 - phi(0) against the spectral oracle", phi.counterexample_constant,
                ConstantEquals(oracle, 1e-6)),
        Finding("phihat = 1 on [-r_in, r_in]", bool(np.all(phi.hat(np.linspace(-p.r_in, p.r_in, 101)) == 1.0)),
                Holds()),
        Finding("skewed kernel certified with int y phi^2 != 0", bool(skew.certificate) and
                abs(skew.square_moment(1)) > 1e-6, Holds(), None, f"{skew.square_moment(1):.6g}"),
        Finding("Gaussian kernel has a second moment", not rho_report.passed, Holds()),
    ]


def valuation_engine(ctx):
    errors = []
    for a in range(-3, 4):
        for c in (1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3):
            d = estimate_net(power_net(float(a), c), ctx.settings)
            errors.append(abs(d.slope - a) if d.classification.value == "Order" else math.inf)
    flat = EpsNet(lambda e: math.exp(-1.0 / e), label="exp(-1/eps)")
    wobble = estimate_net(EpsNet(lambda e: e * e * math.sin(1.0 / e), label="eps^2 sin(1/eps)"), ctx.settings)
    wobble_ok = wobble.classification.value != "Order" or abs(wobble.slope - 2.0) <= 0.1
    parsed = ctx.estimate(parse_net("eps^2", ctx.numerics))
    return [
        Finding("max |slope - a| over 49 power nets", max(errors), AtMost(0.05)),
        ctx.net_finding("exp(-1/eps)", flat, Negligible()),
        Finding("eps^2 sin(1/eps) is never Order(b), b != 2", wobble_ok, Holds(), None, wobble.label()),
        Finding("parsed eps^2", parsed, SlopeEquals(2.0, 0.05)),
    ]


# --- registry --------------------------------------------------------------------------

DEFAULT_BUILD = "binds to the default kernel build"

REGISTRY = [
    CheckDef("T-sheaf-restrict", "sheaf property (restriction consistency)", "is a sheaf",
              sheaf_restrict, IdenticallyZero()),
    CheckDef("T-compact-support", "cutoff extension theorem", "if and only if supp T is a compact subset",
              compact_support_extension, IdenticallyZero()),
    CheckDef("E-iota-d", "direct embedding of distributions", "u → [(w(u_ε))_ε]",
              direct_embedding, IdenticallyZero()),
    CheckDef("E-delta-cont", "continuity of the generalized delta", "|δ_x̃(u)|_e ≤ e^{−val(sup_K |u_ε(x)|)}",
              delta_continuity, AtMost(1.15)),
    CheckDef("E-supp-empty", "support of a delta at a divergent point", "supp(δ_{[(ε^{−1}x)ε]}) = ∅",
              support_empty, SetEquals((), 1e-3)),
    CheckDef("E-supp-N", "support as accumulation points", "supp δ_x̃ = ℕ",
              support_naturals, SetEquals((0.0, 1.0, 2.0, 3.0, 4.0, 5.0), 1e-3)),
    CheckDef("R-no-lincomb", "delta at [(eps)] versus delta derivatives", "not C̃-linear combinations of δ₀",
              no_linear_combination, SlopeEquals(0.0, 0.1)),
    CheckDef("R-taylor-series", "Taylor series of a point value", "u([(ε)ε]) = Σ_{i=0}^∞ [(ε^i/i!)_ε] u^{(i)}(0)",
              taylor_series, SlopeAtLeast(0.5)),
    CheckDef("R-taylor-diverges", "Taylor series for non-regular inputs", "is not convergent in C̃",
              taylor_diverges, SlopeAtMost(0.1)),
    CheckDef("E-series-delta", "series of deltas at divergent points", "val_C̃(Σ_{n=q+N}^m δ_{x̃_n}(u)) ≥ q",
              delta_series, SlopeAtLeast(0.5)),
    CheckDef("T-delta-kernel", "delta kernel theorem", "u(x̃) = ∫_Ω v(y)u(y) dy",
              delta_kernel_check, SlopeAtLeast(8.0), DEFAULT_BUILD),
    CheckDef("R-cutoff-indep", "cutoff independence of the kernel",
              "does not depend on the choice of the cut-off", cutoff_independence, Negligible(), DEFAULT_BUILD),
    CheckDef("R-nonregular-defect", "kernel defect on non-regular inputs", "ε^{−1}‖φ‖²₂ − ε^{−1}φ̄(0)",
              nonregular_defect, SlopeEquals(-1.0, 0.1), DEFAULT_BUILD),
    CheckDef("T-two-var-kernel", "two-variable kernel (sampled x)", "u|_{Ω′}(x) = ∫_Ω v(x,y)u(y) dy",
              two_variable_kernel, SlopeAtLeast(8.0), DEFAULT_BUILD),
    CheckDef("P-delta-global", "tempered delta kernel", "u(x̃) = ∫_{ℝⁿ} v(y)u(y) dy",
              delta_kernel_tempered, Negligible(), DEFAULT_BUILD),
    CheckDef("T-embed-continuity", "continuity of the integration embedding", "≤ P_{G_K(Ω),0}(v) P_{K′,0}(u)",
              embedding_continuity, AtMost(1.15)),
    CheckDef("R-noninjective-Ginf", "non-injectivity on regular inputs", "∫ y_i φ²(y) dy ≠ 0",
              noninjective_regular, SlopeEquals(0.0, 0.1), "binds to the skewed kernel build"),
    CheckDef("P-ideal-0th", "zeroth-order characterization of the ideal", "sup_{x∈ℝⁿ}|u_ε(x)| = O(ε^q)",
              ideal_sup, Negligible()),
    CheckDef("P-ideal-L2", "zeroth-order characterization in L2", "‖u_ε‖_p = O(ε^m)",
              ideal_l2, Negligible()),
    CheckDef("P-GS-Gpp-inject", "injectivity device", "(ū_ε|φ̂(ε^{N+1}·)|²)_ε",
              injectivity_device, SlopeEquals(4.0, 0.1), DEFAULT_BUILD),
    CheckDef("P-phihat-net", "negligible on compacts, not globally", "φ̂(εx)(φ̂(εx) − 1)",
              phihat_net, IdenticallyZero(), DEFAULT_BUILD),
    CheckDef("P-GS-not-dense", "non-density witness", "∫ φ̂²(x)(φ̂(x)−1) dx ≠ 0",
              not_dense, SlopeEquals(-1.0, 0.1), DEFAULT_BUILD),
    CheckDef("P-iota-compare", "direct versus convolution embedding", "coincide on G_c^∞(Ω)",
              iota_compare, Negligible(), DEFAULT_BUILD),
    CheckDef("P-supp-equal", "supports of the embeddings", "supp w = supp ι(w)",
              support_equal, SetEquals((0.0,), 0.1), DEFAULT_BUILD),
    CheckDef("P-regularize", "regularizing sequence for the delta",
              "(v_{x̃,q})_q converges to δ_x̃", regularization, SlopeAtLeast(0.5)),
    CheckDef("P-density", "density of the smoothing sequence", "is dense in G_τ(ℝⁿ)",
              density, SlopeAtLeast(0.5)),
    CheckDef("M-mollifier-certificate", "vanishing-moment kernel certificate",
              "∫φ = 1 and ∫ y^α φ = 0", mollifier_certificate, AtMost(1e-6), DEFAULT_BUILD),
    CheckDef("A-valuation-engine", "valuation estimator calibration", "O(ε^q)",
              valuation_engine, AtMost(0.05)),
]
