import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypwave.hopf import equilibrium_eigenvalues, hopf_summary
from hypwave.errors import DegenerateHopf
from hypwave.model import PhaseState, jacobian, polynomial_model, rhs, tau_thresholds, validate
from hypwave.orbit import trig_eval, trig_resample
from hypwave.spectrum import evans_values, matrix_D, monodromy

from conftest import burgers_fisher, coeffs_for

finite = dict(allow_nan=False, allow_infinity=False)


def fd_jacobian(state, c, model, h=1e-6):
    J = np.empty((2, 2))
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        p = rhs(PhaseState(*(state.as_array() + e)), c, model).as_array()
        m = rhs(PhaseState(*(state.as_array() - e)), c, model).as_array()
        J[:, j] = (p - m) / (2 * h)
    return J


@settings(max_examples=100, deadline=None)
@given(u=st.floats(-0.5, 1.5, **finite), v=st.floats(-1, 1, **finite), c=st.floats(-2.0, 2.0, **finite))
def test_jacobian_matches_finite_differences(u, v, c):
    m, _ = burgers_fisher(0.2)
    s = PhaseState(u, v)
    J = jacobian(s, c, m)
    err = np.max(np.abs(J - fd_jacobian(s, c, m)))
    assert err <= 1e-6 * max(1.0, np.max(np.abs(J)))


@settings(max_examples=50, deadline=None)
@given(c=st.floats(-2.2, 2.2, **finite))
def test_rest_states_are_equilibria(c):
    m, _ = burgers_fisher(0.2)
    for u in (0.0, 1.0):
        r = rhs(PhaseState(u, m.spec.f(u)), c, m)
        assert abs(r.U) <= 1e-12 and abs(r.V) <= 1e-12


@st.composite
def logistic_models(draw):
    # g = u (1 - u)(1 + b u) stays positive on (0,1) for b > -1
    b = draw(st.floats(-0.9, 3.0, **finite))
    f1 = draw(st.floats(-1.5, 1.5, **finite))
    f2 = draw(st.floats(-2.0, 2.0, **finite))
    f3 = draw(st.floats(-1.0, 1.0, **finite))
    g = [0.0, 1.0, b - 1.0, -b]
    spec = polynomial_model([0.0, f1, f2, f3], g, 1.0)
    _, _, tau_bar = tau_thresholds(spec)
    frac = draw(st.floats(0.05, 0.95))
    return validate(spec.with_tau(frac * tau_bar))


@settings(max_examples=60, deadline=None)
@given(logistic_models())
def test_hopf_invariants(model):
    try:
        h = hopf_summary(model)
    except DegenerateHopf:
        return
    assert h.c0 ** 2 * model.tau < 1 and h.omega0 > 0 and h.d0 < 0
    e = equilibrium_eigenvalues(model, h.c0)
    assert abs(e.alpha) <= 1e-12 and abs(e.beta - h.omega0) <= 1e-10
    assert (h.side.value == "above_c0") == (h.a0 > 0)


@settings(max_examples=30, deadline=None)
@given(f0=st.floats(-5, 5, **finite), f1=st.floats(-1, 1, **finite))
def test_tau_one_invariant_under_flux_shift(f0, f1):
    a = tau_thresholds(polynomial_model([0.0, f1, 0.3], [0, 1, -1], 0.1))[1]
    b = tau_thresholds(polynomial_model([f0, f1, 0.3], [0, 1, -1], 0.1))[1]
    assert a == b


@settings(max_examples=40, deadline=None)
@given(n=st.sampled_from([8, 9, 16, 33]), m_factor=st.sampled_from([2, 4]),
       seed=st.integers(0, 2 ** 32 - 1))
def test_trig_resample_preserves_interpolant(n, m_factor, seed):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(n)
    fine = trig_resample(vals, n * m_factor)
    coeffs = np.fft.fft(vals) / n
    phase = np.arange(n * m_factor) * 2 * np.pi / (n * m_factor)
    np.testing.assert_allclose(fine, trig_eval(coeffs, phase).real, atol=1e-12)


def test_liouville_identity(rng):
    c = coeffs_for(0.2, 0.01)
    lam = rng.uniform(-5, 10, 200) + 1j * rng.uniform(-5, 5, 200)
    theta = rng.uniform(-math.pi, math.pi, 200)
    for z, th in zip(lam, theta):
        F = monodromy(z, th, c)
        # periodic trapezoid rule for the integral of tr D over [0, pi]
        trace = np.trace(matrix_D(c.grid, z, th, c), axis1=1, axis2=2)
        ref = np.exp(np.mean(trace) * np.pi)
        assert abs(np.linalg.det(F) - ref) <= 1e-8 * abs(ref)


def test_conjugation_symmetry(rng):
    c = coeffs_for(0.9, 0.02)
    for _ in range(20):
        z = complex(rng.uniform(-3, 8), rng.uniform(-4, 4))
        th = rng.uniform(-3.0, 3.0)
        a = evans_values(np.array([z]), th, c)[0]
        b = evans_values(np.array([z.conjugate()]), -th, c)[0]
        assert abs(b - a.conjugate()) <= 1e-10 * max(1.0, abs(a))
