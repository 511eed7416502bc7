"""
Shared fixtures: default settings, the built kernels and a check context.

Kernel synthesis runs an FFT over 2^16 samples, so every kernel is built once
per session.
"""

import copy

import pytest

from config import DEFAULTS, settings_from_config
from genfun import DEFAULT_NUMERICS
from mollifier import MollifierParams, gaussian_rho
from verify import CheckContext


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs a full check suite or other long measurements")


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for var in ("COLOMBEAU_CONFIG", "COLOMBEAU_QMAX", "COLOMBEAU_EPS_KMAX", "COLOMBEAU_JOBS"):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture(scope="session")
def lab():
    return settings_from_config(copy.deepcopy(DEFAULTS))


@pytest.fixture(scope="session")
def numerics():
    return DEFAULT_NUMERICS


@pytest.fixture(scope="session")
def settings(numerics):
    return numerics.valuation


@pytest.fixture(scope="session")
def phi():
    return MollifierParams().build()


@pytest.fixture(scope="session")
def phi_skew():
    return MollifierParams().build(skewed=True)


@pytest.fixture(scope="session")
def rho():
    return gaussian_rho(1)


@pytest.fixture(scope="session")
def ctx(lab, phi, phi_skew, rho):
    context = CheckContext(lab)
    # reuse the session kernels instead of building them again
    context._cache.update({"phi": phi, "phi_skew": phi_skew, "rho": rho})
    return context


@pytest.fixture
def default_config():
    return copy.deepcopy(DEFAULTS)
