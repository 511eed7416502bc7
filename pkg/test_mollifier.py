"""
Tests for the vanishing-moment kernel and the Gaussian kernel.
"""

import math

import numpy as np
import pytest

from errors import OrderTooHigh
from mollifier import (MASS_TOL, TABLE_ORDERS, GaussianKernel, build_vanishing_moment_mollifier, check_moments,
                       export_table, load_table, scaled_eval)


def test_kernel_carries_its_certificate(phi):
    cert = phi.certificate
    assert cert["mass"] == pytest.approx(1.0, abs=MASS_TOL)
    assert cert["tail_max"] <= 1e-12
    assert cert["parseval_relative"] <= 1e-6
    assert cert["counterexample_constant"] == pytest.approx(phi.norm_sq - phi.value_at_zero)
    assert abs(cert["counterexample_constant"]) >= 1e-3


def test_every_moment_up_to_six_vanishes(phi):
    report = check_moments(phi, 6)
    assert report.passed
    assert len(report.rows) == 7
    frame = report.to_frame()
    assert list(frame.columns) == ["alpha", "order", "moment", "expected", "tolerance", "tail_bound", "passed"]
    assert report.to_dict()["passed"] is True


def test_spectrum_is_flat_on_the_inner_disc(phi):
    assert np.all(phi.hat(np.linspace(-1.0, 1.0, 21)) == 1.0)
    assert np.all(phi.hat(np.array([-2.5, 2.0, 3.0])) == 0.0)


def test_kernel_vanishes_outside_its_table(phi):
    assert np.all(phi.derivatives([-50.0, 41.0], 3) == 0.0)
    with pytest.raises(OrderTooHigh):
        phi.derivatives(0.0, 9)


def test_unskewed_kernel_is_even(phi):
    assert phi(0.7)[0] == pytest.approx(phi(-0.7)[0], abs=1e-12)
    assert abs(phi.square_moment(1)) < 1e-9


def test_skewed_kernel_breaks_the_symmetry(phi_skew):
    assert phi_skew.label == "phi_skew1"
    assert abs(phi_skew.square_moment(1)) > 1e-6
    assert check_moments(phi_skew, 6).passed
    assert np.abs(phi_skew.hat(np.linspace(-1.0, 1.0, 9))) == pytest.approx(np.ones(9))


def test_gaussian_kernel_moments(rho):
    assert rho.moment(0) == pytest.approx(1.0)
    assert rho.moment(1) == pytest.approx(0.0, abs=1e-12)
    assert rho.moment(2) == pytest.approx(1.0)
    assert rho.square_moment(0) == pytest.approx(rho.norm_sq)
    assert rho.counterexample_constant == pytest.approx(0.5 / math.sqrt(math.pi) - 1.0 / math.sqrt(2.0 * math.pi))
    assert not check_moments(rho, 2).passed


def test_tensor_moment_rows_factorize():
    report = check_moments(GaussianKernel(2), 2)
    assert [r.alpha for r in report.rows] == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert report.rows[0].passed
    assert {r.alpha for r in report.failures} == {(0, 2), (2, 0)}


def test_scaled_eval_concentrates_mass():
    rho = GaussianKernel()
    assert scaled_eval(rho, 0.5, 0.0) == pytest.approx(2.0 / math.sqrt(2.0 * math.pi))
    assert scaled_eval(rho, 0.5, 0.0, 1) == pytest.approx(0.0)


@pytest.mark.parametrize("kwargs", [{"r_in": 2.0, "r_out": 1.0}, {"fft_size": 1000}, {"n": 3}])
def test_builder_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        build_vanishing_moment_mollifier(**kwargs)


@pytest.mark.slow
def test_exported_table_reloads_with_the_same_certificate(phi, tmp_path):
    path = tmp_path / "phi_table.txt"
    export_table(phi, path)
    with open(path, encoding="utf-8") as f:
        header = [next(f) for _ in range(3)]
    assert header[2].strip() == "# columns=x," + ",".join(f"d{k}" for k in range(TABLE_ORDERS))
    loaded = load_table(path)
    assert loaded.params == phi.params
    assert loaded.counterexample_constant == pytest.approx(phi.counterexample_constant, rel=1e-12)


def test_table_without_header_is_rejected(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 1 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_table(path)
