"""
Tests for the composite Gauss-Legendre rules.
"""

import math

import numpy as np
import pytest

from errors import QuadratureNotConverged
from quadrature import QuadratureSettings, cell_rule, composite_rule, integrate_window


def test_composite_rule_is_read_only_and_sums_to_the_length():
    t, w = composite_rule(8, 4)
    assert t.shape == w.shape == (32,)
    assert w.sum() == pytest.approx(2.0)
    with pytest.raises(ValueError):
        t[0] = 0.0


@pytest.mark.parametrize("degree", [0, 3, 11])
def test_polynomials_are_integrated_exactly(degree):
    result = integrate_window(lambda x: x ** degree, 2.0)
    exact = 0.0 if degree % 2 else 2.0 * 2.0 ** (degree + 1) / (degree + 1)
    assert result.value == pytest.approx(exact, abs=1e-9)


def test_gaussian_mass():
    result = integrate_window(lambda x: np.exp(-x * x), 30.0)
    assert result.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert result.abs_value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_empty_window_integrates_to_zero():
    assert integrate_window(np.cos, -1.0).value == 0.0
    assert integrate_window(np.cos, 0.0).panels == 0


def test_refinement_gives_up_on_wild_integrands():
    tight = QuadratureSettings(order=4, panels=2, max_panels=16)
    with pytest.raises(QuadratureNotConverged):
        integrate_window(lambda x: np.sin(1e4 * x) + 2.0, 1.0, tight, rtol=1e-14)


def test_noise_level_integrands_settle_on_the_absolute_floor():
    tight = QuadratureSettings(order=4, panels=2, max_panels=16)
    result = integrate_window(lambda x: 1e-20 * (np.sin(1e4 * x) + 2.0), 1.0, tight, rtol=1e-14)
    assert result.value == pytest.approx(4e-20, abs=2.1e-20)
    strict = QuadratureSettings(order=4, panels=2, max_panels=16, abs_tol=0.0)
    with pytest.raises(QuadratureNotConverged):
        integrate_window(lambda x: 1e-20 * (np.sin(1e4 * x) + 2.0), 1.0, strict, rtol=1e-14)


def test_cell_rule_spans_each_cell():
    nodes, weights = cell_rule([0.0, 1.0, 3.0], order=3)
    assert len(nodes) == 6
    assert weights[:3].sum() == pytest.approx(1.0)
    assert weights[3:].sum() == pytest.approx(2.0)
    assert np.all((nodes[:3] > 0.0) & (nodes[:3] < 1.0))
