import math

import numpy as np
import pytest

from hypwave.errors import NoOrbitFound
from hypwave.hopf import Side
from hypwave.model import PhaseState, jacobian
from hypwave.orbit import (
    find_periodic_orbit, integrate, orbit_diagnostics, resample_profile, rhs_defect,
    trig_resample, winding_number,
)

from conftest import EPSILONS, burgers_fisher, orbit_for


def test_integrate_rest_state(bf02):
    m, _ = bf02
    tr = integrate(m, 0.0, PhaseState(0.0, 0.0), 10.0)
    assert np.max(np.abs(tr.U)) == 0.0 and np.max(np.abs(tr.V)) == 0.0


def test_linear_center_returns(bf02):
    m, _ = bf02
    tr = integrate(m, 0.0, PhaseState(1e-3, 0.0), 2 * math.pi)
    assert math.hypot(tr.U[-1] - 1e-3, tr.V[-1]) <= 1e-5


def test_tighter_tolerance_does_not_drift(bf02):
    m, _ = bf02
    start = PhaseState(0.05, 0.0)
    ref = integrate(m, 0.01, start, 6.0, tol=1e-13)
    errs = [abs(integrate(m, 0.01, start, 6.0, tol=t).U[-1] - ref.U[-1]) for t in (1e-6, 1e-8, 1e-10)]
    assert errs[0] >= errs[1] >= errs[2]


def test_orbit_at_reference_parameters():
    o = orbit_for(0.2, 0.01)
    assert abs(o.period - 2 * math.pi) < 0.1
    assert 0.05 < o.amplitude_u < 0.5
    assert o.closure_residual <= 1e-9
    assert o.speed ** 2 * o.tau < 1
    assert o.samples[0, 1] == 0.0 and o.samples[0, 0] > 0


def test_wrong_side_has_no_orbit(bf02):
    m, h = bf02
    with pytest.raises(NoOrbitFound):
        find_periodic_orbit(m, h, 0.01, side=Side.BELOW)


def test_no_orbit_at_bifurcation_point(bf02):
    m, h = bf02
    with pytest.raises(NoOrbitFound):
        find_periodic_orbit(m, h, 0.0)


def test_square_root_amplitude_law(bf02):
    m, h = bf02
    small = find_periodic_orbit(m, h, 0.0025)
    ratio = orbit_for(0.2, 0.01).amplitude_u / small.amplitude_u
    assert 1.5 <= ratio <= 2.5


@pytest.mark.parametrize("tau", [0.2, 0.9])
def test_diagnostics_sequence(tau):
    _, h = burgers_fisher(tau)
    diags = [orbit_diagnostics(orbit_for(tau, e), h) for e in EPSILONS]
    shifts = [d["period_shift"] for d in diags]
    scaled = [d["amplitude_u_scaled"] for d in diags]
    assert max(abs(s) for s in shifts) < 20.0
    assert max(scaled) / min(scaled) <= 1.3
    assert all(d["margin"] > 0 for d in diags)


def test_resample_round_trips():
    o = orbit_for(0.2, 0.01)
    fine = resample_profile(o, 1024)
    again = resample_profile(fine, 1024)
    assert np.max(np.abs(again.samples - fine.samples)) <= 1e-10
    back = fine.evaluate(o.xi)
    assert np.max(np.abs(back.T - o.samples)) <= 1e-8


def test_mean_is_small_but_nonzero():
    o = orbit_for(0.2, 0.01)
    mean = float(np.mean(o.U))
    # second-order drift: O(eps) while the amplitude is O(sqrt(eps))
    assert 1e-6 < abs(mean) < 5 * o.epsilon < o.amplitude_u


@pytest.mark.parametrize("tau,eps", [(0.2, 0.01), (0.9, 0.02)])
def test_profile_solves_the_ode(tau, eps):
    o = resample_profile(orbit_for(tau, eps), 1024)
    assert rhs_defect(o) <= 1e-5


def test_restart_from_sample_reproduces_orbit():
    o = orbit_for(0.2, 0.02)
    m = o.model
    for j in (37, 200, 411):
        tr = integrate(m, o.speed, PhaseState(*o.samples[j]), o.period, tol=1e-12, t_eval=o.xi)
        pts = np.column_stack([tr.U, tr.V])
        assert np.max(np.abs(pts - np.roll(o.samples, -j, axis=0))) <= 1e-6


def test_orbit_encloses_rest_state():
    assert winding_number(orbit_for(0.2, 0.01).samples) in (1, -1)


def test_trig_resample_exact_for_band_limited():
    y = np.arange(16) * 2 * np.pi / 16
    vals = np.cos(y) + 0.3 * np.sin(3 * y)
    fine = trig_resample(vals, 64)
    yf = np.arange(64) * 2 * np.pi / 64
    np.testing.assert_allclose(fine, np.cos(yf) + 0.3 * np.sin(3 * yf), atol=1e-14)
    np.testing.assert_allclose(trig_resample(fine, 16), vals, atol=1e-14)


def test_limit_period_for_nonzero_critical_speed(poly_model):
    # the Jacobian at the rest state carries an extra 1/(1 - c0^2 tau) factor
    # relative to the printed frequency, so small orbits approach T0 (1 - c0^2 tau)
    from hypwave.hopf import hopf_summary
    h = hopf_summary(poly_model)
    J = jacobian(PhaseState(0.0, 0.0), h.c0, poly_model)
    true_period = 2 * math.pi / abs(np.linalg.eigvals(J)[0].imag)
    assert true_period == pytest.approx(h.T0 * (1 - h.c0 ** 2 * poly_model.tau), rel=1e-12)
    periods = [find_periodic_orbit(poly_model, h, e).period for e in (0.00125, 0.0025)]
    # linear extrapolation to eps = 0
    assert 2 * periods[0] - periods[1] == pytest.approx(true_period, abs=2e-3)
