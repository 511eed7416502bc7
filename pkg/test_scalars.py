"""
Tests for boxes, generalized numbers and generalized points.
"""

import pytest
from hypothesis import given, settings, strategies as st

from asymptotics import Classification, EpsNet, power_net
from errors import NonModerateNet, WindowEmpty
from scalars import (Box, GenNumber, GenPoint, dyadic_valuation, gn_equal, is_compactly_supported, point_support,
                     support_samples)


def test_box_geometry():
    box = Box.interval(-1.0, 3.0)
    assert box.dim == 1
    assert box.center == (1.0,)
    assert box.contains(2.5)
    assert not box.contains(3.5)
    assert box.contains_box(Box.interval(0.0, 1.0))
    assert Box.cube(0.0, 1.0, 2).dim == 2
    assert Box.interval(1.0, 0.0).is_empty


def test_box_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        Box((0.0, 0.0), (1.0,))


def test_non_moderate_number_is_rejected():
    with pytest.raises(NonModerateNet):
        GenNumber(power_net(-20.0))


def test_number_arithmetic():
    a = GenNumber(power_net(1.0))
    b = GenNumber(power_net(2.0))
    assert (a * b).estimate.slope == pytest.approx(3.0, abs=0.05)
    assert (a - a).estimate.classification is Classification.IDENTICALLY_ZERO
    assert a.scale_pow(2.0).estimate.slope == pytest.approx(3.0, abs=0.05)


def test_numbers_equal_up_to_negligible_nets():
    a = GenNumber(EpsNet(lambda e: 1.0 + e ** 15))
    b = GenNumber(EpsNet(lambda e: 1.0))
    assert gn_equal(a, b)
    assert not gn_equal(a, GenNumber(EpsNet(lambda e: 1.0 + e)))


@given(st.integers(min_value=0, max_value=10 ** 9))
@settings(max_examples=200, deadline=None)
def test_dyadic_valuation_divides(n):
    v = dyadic_valuation(n)
    if n == 0:
        assert v == 0
    else:
        assert n % (2 ** v) == 0
        assert (n // 2 ** v) % 2 == 1


def test_constant_point():
    x = GenPoint.constant(0.3)
    assert x.at(1e-5)[0] == 0.3
    assert x.dimension == 1
    two = GenPoint.constant((0.3, -0.2))
    assert two.dimension == 2
    assert two.coordinate(1)(0.1) == -0.2


def test_piecewise_point_follows_the_interval_rule():
    x = GenPoint.piecewise([5.0, 6.0, 7.0])
    assert x.at(1.0)[0] == 5.0
    assert x.at(0.4)[0] == 6.0
    assert x.at(0.3)[0] == 7.0
    assert x.at(0.01)[0] == 7.0


def test_diverging_point_is_not_compactly_supported():
    assert is_compactly_supported(GenPoint.from_function(lambda e: 1.0 / e, "1/eps")) is None
    box = is_compactly_supported(GenPoint.from_function(lambda e: 0.3 + e, "0.3+eps"))
    assert box is not None and box.contains(0.3, tol=1e-12)


def test_support_samples_sit_inside_piecewise_intervals():
    for level in support_samples(GenPoint.constant(0.0).settings, 16):
        for e in level:
            m = 1.0 / e - 0.5
            assert abs(m - round(m)) < 1e-6


def test_support_of_a_constant_point():
    found = point_support(GenPoint.constant(0.3), Box.interval(-1.0, 1.0))
    assert len(found) == 1
    assert abs(next(iter(found)) - 0.3) < 1e-9


def test_support_of_a_diverging_point_is_empty():
    x = GenPoint.from_function(lambda e: 0.5 / e, "0.5/eps")
    assert point_support(x, Box.interval(-10.0, 10.0)) == frozenset()


def test_support_of_the_dyadic_sequence_is_every_natural():
    x = GenPoint.piecewise(dyadic_valuation, "nu_2(n)")
    found = sorted(point_support(x, Box.interval(-0.5, 5.5)))
    assert found == pytest.approx([0.0, 1.0, 2.0, 3.0, 4.0, 5.0])


def test_support_needs_a_bounded_window():
    with pytest.raises(WindowEmpty):
        point_support(GenPoint.constant(0.0), Box.interval(1.0, 0.0))
    with pytest.raises(WindowEmpty):
        point_support(GenPoint.constant(0.0), Box.interval(-float("inf"), 0.0))


@given(a=st.integers(min_value=-3, max_value=3), r=st.floats(min_value=-3.0, max_value=3.0))
@settings(max_examples=40, deadline=None)
def test_scale_pow_round_trip(a, r):
    x = GenNumber(power_net(float(a), 3.0))
    assert gn_equal(x.scale_pow(r).scale_pow(-r), x)


def _power_corpus():
    return [
        GenNumber(power_net(0.0)),
        GenNumber(power_net(0.0) + power_net(15.0)),
        GenNumber(power_net(0.0) + power_net(11.0, 3.0)),
        GenNumber(power_net(0.0) + power_net(1.0)),
        GenNumber(power_net(2.0)),
        GenNumber(power_net(2.0) + power_net(13.0)),
        GenNumber(power_net(-1.0, 0.5)),
    ]


def test_gn_equal_is_an_equivalence_on_power_nets():
    corpus = _power_corpus()
    n = len(corpus)
    eq = [[gn_equal(corpus[i], corpus[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        assert eq[i][i]
        for j in range(n):
            assert eq[i][j] == eq[j][i]
            for k in range(n):
                if eq[i][j] and eq[j][k]:
                    assert eq[i][k]
    assert eq[0][1] and eq[0][2] and eq[4][5]
    assert not eq[0][3] and not eq[0][4]


def test_support_ignores_negligible_perturbations():
    x = GenPoint.constant(0.3)
    window = Box.interval(-1.0, 1.0)
    assert point_support(x.perturbed(10.0), window) == point_support(x, window)
