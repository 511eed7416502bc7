"""
Tests for generalized functions: tags, seminorm nets, point values, integrals
and the regularity classifier.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from asymptotics import Classification, estimate_net
from errors import NoCompactSupport, OrderTooHigh, PointEscapesDomain, TailNotCertified
from genfun import (GenFunction, SpaceTag, classify_regular, construction_tag, global_sup_net, integrate_compact,
                    integrate_global, integrate_pair, integration_pieces, point_derivative, point_value,
                    schwartz_seminorm_net, seminorm_net, sobolev_l2_net, ultra_pseudo_seminorm,
                    weighted_defect_net)
from scalars import Box, GenPoint
from smoothrep import (Affine, Constant, Cosine, Cutoff, EpsParam, Exponential, Gaussian, Product, Scaled,
                       Sine, TensorRep, eps_pow)

INV_EPS = EpsParam(lambda e: 1.0 / e, "1/eps")
UNIT = Box.interval(-1.0, 1.0)


@pytest.mark.parametrize("rep, tag", [
    (Cutoff(-1.0, 1.0, 0.5), SpaceTag.G_C_INF),
    (Scaled(Cutoff(-1.0, 1.0, 0.5), eps_pow(-1)), SpaceTag.G_C),
    (Gaussian(), SpaceTag.G_S_INF),
    (Affine(Gaussian(), INV_EPS), SpaceTag.G_S),
    (Sine(), SpaceTag.G_TAU),
    (Affine(Sine(), INV_EPS), SpaceTag.G_TAU),
    (Exponential(1.0), SpaceTag.G_INF),
    (Affine(Exponential(1.0), INV_EPS), SpaceTag.G),
])
def test_construction_tags(rep, tag):
    assert construction_tag(rep) is tag


def test_eps_free_compact_rep_gets_its_support():
    u = GenFunction(Cutoff(-1.0, 1.0, 0.5))
    assert u.support.bounds() == (-1.5, 1.5)
    assert u.decaying
    product = u * GenFunction(Sine())
    assert product.support is u.support
    assert product.space_tag is SpaceTag.G_C_INF


def test_seminorm_of_a_growing_cosine():
    u = GenFunction(Scaled(Cosine(), eps_pow(-1)))
    d = estimate_net(seminorm_net(u, UNIT, 0), u.settings)
    assert d.classification is Classification.ORDER
    assert d.slope == pytest.approx(-1.0, abs=0.01)


def test_seminorm_checks_order_and_domain():
    u = GenFunction(Sine(), domain=UNIT)
    with pytest.raises(OrderTooHigh):
        seminorm_net(u, UNIT, 9)
    with pytest.raises(ValueError):
        seminorm_net(u, Box.interval(0.0, 2.0), 0)


def test_tensor_seminorm_multiplies_axis_sups():
    u = GenFunction(TensorRep(Gaussian(), Gaussian()))
    assert u.dim == 2
    assert seminorm_net(u, Box.cube(-1.0, 1.0, 2), 0)(0.5) == pytest.approx(1.0)


def test_point_values():
    u = GenFunction(Affine(Sine(), INV_EPS))
    origin = GenPoint.constant(0.0)
    assert point_value(u, origin).value(0.25) == 0.0
    assert point_derivative(u, origin, 1).value(2.0 ** -30) == pytest.approx(2.0 ** 30)


def test_point_values_respect_the_domain():
    far = GenPoint.from_function(lambda e: 1.0 / e, "1/eps")
    with pytest.raises(PointEscapesDomain):
        point_value(GenFunction(Exponential(1.0)), far)
    with pytest.raises(PointEscapesDomain):
        point_value(GenFunction(Sine(), domain=UNIT, space_tag=SpaceTag.G), GenPoint.constant(3.0))
    # tempered functions take any moderate point
    assert point_value(GenFunction(Sine()), far).value(0.5) == pytest.approx(math.sin(2.0))


def test_compact_integral():
    u = GenFunction(Constant(1.0))
    assert integrate_compact(u, Box.interval(0.0, 2.0)).value(0.1) == pytest.approx(2.0)


def test_global_integral_needs_decay():
    assert integrate_global(GenFunction(Gaussian())).value(0.1) == pytest.approx(math.sqrt(math.pi))
    with pytest.raises(NoCompactSupport):
        integrate_global(GenFunction(Sine()))


def test_pairing_admissibility():
    gauss = GenFunction(Gaussian())
    assert integrate_pair(gauss, GenFunction(Constant(1.0))).value(0.3) == pytest.approx(math.sqrt(math.pi))
    with pytest.raises(NoCompactSupport):
        integrate_pair(GenFunction(Sine()), GenFunction(Exponential(1.0)))


def test_pairing_disjoint_supports_is_zero():
    left = GenFunction(Cutoff(-1.0, 1.0, 0.5))
    right = GenFunction(Cutoff(5.0, 6.0, 0.5))
    d = integrate_pair(left, right).estimate
    assert d.classification is Classification.IDENTICALLY_ZERO


def test_global_sup_of_the_gaussian():
    assert global_sup_net(GenFunction(Gaussian()))(0.5) == pytest.approx(1.0)
    net = schwartz_seminorm_net(GenFunction(Gaussian()), alpha=1)
    assert net(0.5) == pytest.approx(math.exp(-0.5) / math.sqrt(2.0), rel=1e-6)


def test_global_sup_without_decay_is_not_certified():
    with pytest.raises(TailNotCertified):
        global_sup_net(GenFunction(Sine()))(0.5)
    assert global_sup_net(GenFunction(Sine()), certify=False)(0.5) == pytest.approx(1.0)


def test_sobolev_norm_of_the_gaussian():
    assert sobolev_l2_net(GenFunction(Gaussian()))(0.5) == pytest.approx((math.pi / 2.0) ** 0.25)


def test_weighted_defect_of_identical_functions_is_zero():
    u = GenFunction(Gaussian())
    d = estimate_net(weighted_defect_net(u, u, 2.0, 1), u.settings)
    assert d.classification is Classification.IDENTICALLY_ZERO


def test_integration_pieces_split_at_features():
    assert integration_pieces((0.0, 10.0), [(2.0, 1.0)]) == [(-4.5, 5.5), (2.0, 1.0), (6.5, 3.5)]
    assert integration_pieces((0.0, 1.0), [(0.0, 5.0), None]) == [(0.0, 1.0)]


def test_regularity_classifier():
    regular = classify_regular(GenFunction(Gaussian()), UNIT)
    assert regular.kind == "Regular"
    assert regular.N == pytest.approx(0.0, abs=0.05)
    growing = classify_regular(GenFunction(Affine(Sine(), INV_EPS)), UNIT)
    assert growing.kind == "NotRegular"
    assert growing.growth == pytest.approx((0.0, 1.0, 2.0, 3.0, 4.0), abs=0.1)
    with pytest.raises(ValueError):
        classify_regular(GenFunction(Gaussian()), UNIT, m_max=2)


def test_regularity_classifier_reports_negligible_inputs():
    flat = EpsParam(lambda e: math.exp(-1.0 / e), "exp(-1/eps)")
    result = classify_regular(GenFunction(Scaled(Affine(Sine(), INV_EPS), flat)), UNIT)
    assert result.kind == "Negligible"
    assert result.N is None
    assert str(result) == "Negligible"


def test_ultra_pseudo_seminorm_reads_the_order():
    u = GenFunction(Scaled(Cosine(), eps_pow(-1)))
    assert ultra_pseudo_seminorm(u, UNIT, 0) == pytest.approx(math.e, rel=0.05)
    assert ultra_pseudo_seminorm(GenFunction(Constant(0.0)), UNIT, 2) == 0.0


@given(x0=st.floats(min_value=-1.0, max_value=1.0))
@settings(max_examples=25, deadline=None)
def test_point_value_is_multiplicative(x0):
    x = GenPoint.from_function(lambda e: x0 + e, "x0+eps")
    u, v = GenFunction(Sine()), GenFunction(Gaussian())
    uv = GenFunction(Product(Sine(), Gaussian()))
    defect = (point_value(u, x) * point_value(v, x) - point_value(uv, x)).estimate
    assert defect.classification is Classification.IDENTICALLY_ZERO


@given(split=st.floats(min_value=-0.9, max_value=0.9))
@settings(max_examples=15, deadline=None)
def test_integrate_compact_adds_over_adjacent_boxes(split):
    u = GenFunction(Scaled(Product(Cosine(), Gaussian()), eps_pow(-1)))
    left = integrate_compact(u, Box.interval(-1.0, split))
    right = integrate_compact(u, Box.interval(split, 1.0))
    whole = integrate_compact(u, UNIT)
    assert (left + right - whole).estimate.negligible


@given(a=st.integers(min_value=-3, max_value=3), b=st.integers(min_value=-3, max_value=3))
@settings(max_examples=8, deadline=None)
def test_sup_seminorm_is_submultiplicative(a, b):
    u = GenFunction(Scaled(Cosine(), eps_pow(a)))
    v = GenFunction(Scaled(Gaussian(), eps_pow(b)))
    uv = GenFunction(Product(u.rep, v.rep))
    bound = ultra_pseudo_seminorm(u, UNIT, 0) * ultra_pseudo_seminorm(v, UNIT, 0)
    assert ultra_pseudo_seminorm(uv, UNIT, 0) <= bound * 1.15
