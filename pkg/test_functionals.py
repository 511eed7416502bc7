"""
Tests for dual elements: deltas, embeddings, kernels, series and support probing.
"""

import math

import pytest

from asymptotics import Classification
from errors import (CutoffDoesNotCoverSupport, CutoffDoesNotCoverTail, OrderTooHigh, SupportNotContained,
                    UnsupportedDistribution)
from functionals import (DeltaDerivative, RegularFunction, combine, cutoff_extension, delta, delta_kernel,
                         delta_kernel_global, diverging_points, embed_distribution, embed_distribution_direct,
                         embed_genfunction, partial_sums, probe_bumps, probed_support_box, regularization_sequence,
                         restrict, series_delta, smoothing_sequence, support_probe, taylor_delta_series)
from genfun import GenFunction, SpaceTag, integrate_pair
from scalars import Box, GenPoint
from smoothrep import Constant, Cosine, Cutoff, Exponential, Gaussian, Sine


def test_delta_evaluates_at_its_point():
    T = delta(GenPoint.constant(0.3))
    assert T(GenFunction(Gaussian())).value(0.5) == pytest.approx(math.exp(-0.09))
    assert T.domain_tag == "G"
    assert T.support.bounds() == (0.3, 0.3)
    assert delta(diverging_points(1)).support is None
    with pytest.raises(TypeError):
        delta(GenPoint.constant(0.3), None)


def test_direct_embedding_of_a_delta_derivative_carries_the_sign():
    T = embed_distribution_direct(DeltaDerivative(1))
    assert T(GenFunction(Sine())).value(0.1) == pytest.approx(-1.0)
    assert str(DeltaDerivative(1)) == "delta^(1)_0"


def test_direct_embedding_of_a_density():
    T = embed_distribution_direct(RegularFunction(Gaussian(), "gauss"))
    assert T(GenFunction(Constant(1.0))).value(0.1) == pytest.approx(math.sqrt(math.pi))
    assert T.label == "DirectDistribution(gauss)"


@pytest.mark.parametrize("w", [DeltaDerivative(7), RegularFunction(Exponential(1.0)), "delta"])
def test_unsupported_distributions(w):
    with pytest.raises(UnsupportedDistribution):
        embed_distribution_direct(w)


def test_combination_cancels_and_hulls_supports():
    a, b = delta(GenPoint.constant(0.3)), delta(GenPoint.constant(0.5))
    zero = a - a
    assert zero(GenFunction(Sine())).value(0.2) == 0.0
    both = a + b
    assert both.support.bounds() == (0.3, 0.5)
    scaled = combine([(lambda e: e, a)])
    assert scaled(GenFunction(Constant(2.0))).value(0.25) == pytest.approx(0.5)


def test_restriction_rejects_inputs_outside_the_box():
    T = restrict(delta(GenPoint.constant(0.0)), Box.interval(-1.0, 1.0))
    with pytest.raises(SupportNotContained):
        T(GenFunction(Gaussian()))
    assert T(GenFunction(Cutoff(-0.5, 0.5, 0.25))).value(0.5) == 1.0


def test_support_probe_finds_the_delta():
    T = delta(GenPoint.constant(0.3))
    assert support_probe(T, [0.3, 0.0, -0.5], 0.1) == frozenset({0.3})
    box = probed_support_box(T, Box.interval(-1.0, 1.0), 0.1)
    assert box.bounds() == pytest.approx((0.2, 0.4))


def test_test_bump_family_stays_in_the_ball_and_dilates_with_eps():
    bumps = probe_bumps(0.3, 0.2)
    assert len(bumps) == 4
    dilated = bumps[3]
    assert not dilated.eps_free
    assert dilated(0.5, 0.37)[0] == 1.0
    assert 0.0 < dilated(2.0 ** -10, 0.37)[0] < 1.0
    for rep in bumps:
        for eps in (1.0, 2.0 ** -10):
            assert rep(eps, 0.51)[0] == 0.0
            assert rep(eps, 0.09)[0] == 0.0


def test_cutoff_extension():
    T = delta(GenPoint.constant(0.3))
    extended = cutoff_extension(T, Cutoff(0.0, 1.0, 0.5))
    assert extended(GenFunction(Sine())).value(0.5) == pytest.approx(math.sin(0.3))
    with pytest.raises(CutoffDoesNotCoverSupport):
        cutoff_extension(T, Cutoff(0.4, 1.0, 0.1))
    with pytest.raises(CutoffDoesNotCoverSupport):
        cutoff_extension(delta(diverging_points(1)), Cutoff(0.0, 1.0, 0.5))


def test_cutoff_extension_falls_back_to_the_probed_support():
    far = GenPoint.from_function(lambda e: 1.0 / e, "1/eps")
    T = delta(GenPoint.constant(0.3)) + (delta(far) - delta(far))
    assert T.support is None
    extended = cutoff_extension(T, Cutoff(-0.5, 0.9, 0.2))
    assert extended.support.bounds() == pytest.approx((0.2, 0.4))
    assert extended(GenFunction(Sine())).value(0.5) == pytest.approx(math.sin(0.3))
    with pytest.raises(CutoffDoesNotCoverSupport):
        cutoff_extension(T, Cutoff(-0.5, 0.25, 0.2))


@pytest.mark.slow
def test_cutoff_extension_of_the_convolution_embedded_delta(phi):
    T = embed_distribution(DeltaDerivative(0), phi)
    assert T.support is None
    extended = cutoff_extension(T, Cutoff(-0.5, 0.5, 0.2))
    assert extended.support.bounds() == pytest.approx((-0.1, 0.1), abs=1e-9)
    assert extended(GenFunction(Cosine())).value(2.0 ** -10) == pytest.approx(1.0, rel=1e-6)


def test_delta_kernel_needs_a_covering_cutoff(rho):
    origin = GenPoint.constant(0.0)
    v = delta_kernel(origin, Cutoff(-1.0, 1.0, 0.5), rho)
    assert v.space_tag is SpaceTag.G_C
    assert v.support.bounds() == (-1.5, 1.5)
    with pytest.raises(CutoffDoesNotCoverTail):
        delta_kernel(origin, Cutoff(0.5, 1.0, 0.2), rho)
    with pytest.raises(CutoffDoesNotCoverTail):
        delta_kernel(diverging_points(1), Cutoff(-1.0, 1.0, 0.5), rho)


def test_sequence_builders_need_positive_q(rho):
    with pytest.raises(ValueError):
        regularization_sequence(GenPoint.constant(0.0), rho, 0)
    with pytest.raises(ValueError):
        smoothing_sequence(GenFunction(Gaussian()), rho, 0)


def test_taylor_series_of_the_sine():
    report = taylor_delta_series(GenFunction(Sine()), 3)
    assert report.passed
    assert len(report.rows) == 4
    first = report.rows[0].estimate
    assert first.classification is Classification.ORDER
    assert first.slope == pytest.approx(1.0, abs=0.05)
    with pytest.raises(OrderTooHigh):
        taylor_delta_series(GenFunction(Sine()), 8)


def test_series_of_deltas_at_diverging_points():
    u = GenFunction(Gaussian())
    report = series_delta(diverging_points, u, 3, n_max=5)
    assert report.passed
    assert [r.index for r in report.rows] == [1, 2, 3]
    assert report.terms[0].estimate.slope == pytest.approx(0.0, abs=1e-6)
    sums = partial_sums(diverging_points, u, 3)
    assert len(sums) == 4
    assert sums[-1].value(0.5) == pytest.approx(math.exp(-1.0) + math.exp(-4.0) + math.exp(-16.0) + math.exp(-64.0))


def test_global_delta_kernel_reproduces_point_values(phi):
    v = delta_kernel_global(GenPoint.constant(0.0), phi)
    assert v.space_tag is SpaceTag.G_S
    value = integrate_pair(v, GenFunction(Gaussian()))
    assert value.value(2.0 ** -10) == pytest.approx(1.0, rel=1e-6)
    T = embed_genfunction(v)
    assert T.domain_tag == "G_S"
    assert T(GenFunction(Gaussian())).value(2.0 ** -10) == pytest.approx(1.0, rel=1e-6)
