import math

import numpy as np
import pytest

from hypwave.hopf import hopf_summary
from hypwave.model import builtin_model, validate
from hypwave.orbit import find_periodic_orbit
from hypwave.spectrum import build_coefficients, constant_coefficients

TAUS = (0.2, 0.9)
EPSILONS = (0.005, 0.01, 0.02)

_cache = {}


def burgers_fisher(tau):
    if ("model", tau) not in _cache:
        m = validate(builtin_model("burgers-fisher", tau))
        _cache["model", tau] = (m, hopf_summary(m))
    return _cache["model", tau]


def orbit_for(tau, eps):
    if ("orbit", tau, eps) not in _cache:
        m, h = burgers_fisher(tau)
        _cache["orbit", tau, eps] = find_periodic_orbit(m, h, eps)
    return _cache["orbit", tau, eps]


def coeffs_for(tau, eps):
    if ("coeffs", tau, eps) not in _cache:
        m, h = burgers_fisher(tau)
        c = constant_coefficients(m, h) if eps == 0 else build_coefficients(orbit_for(tau, eps), m, h)
        _cache["coeffs", tau, eps] = c
    return _cache["coeffs", tau, eps]


@pytest.fixture
def bf02():
    return burgers_fisher(0.2)


@pytest.fixture
def poly_model():
    from hypwave.model import polynomial_model
    return validate(polynomial_model([0, 1, 0.5], [0, 1, -1], 0.2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


TWO_PI = 2.0 * math.pi


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
