"""Small-amplitude periodic orbits of the traveling-wave system.

Orbits are computed by Newton iteration on the Poincare return map of the
section ``{V = f(0), U > 0}`` crossed with ``V`` increasing. The derivative
of the return map comes from the first-variation equations integrated
alongside the state.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    NonFiniteState,
    NoOrbitFound,
    StepSizeUnderflow,
    SubcharacteristicViolated,
)
from .hopf import HopfData, Side
from .model import PhaseState, ValidatedModel, rhs, vector_field

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 512
#: Newton stops when the return-map defect drops below this
NEWTON_TOL = 1e-12
#: integration tolerance used while shooting
SHOOTING_TOL = 1e-12
#: integration tolerance used for the stored profile
PROFILE_TOL = 1e-13
CLOSURE_TOL = 1e-9
#: accepted periods lie within this fraction of T0
PERIOD_GUARD = 0.5


@dataclass(frozen=True, eq=False)
class Trajectory:
    xi: np.ndarray
    U: np.ndarray
    V: np.ndarray
    steps: int
    rejected: int
    dense: Optional[object] = field(default=None, repr=False)

    def __call__(self, xi):
        """Dense-output state at ``xi`` (shape ``(2, ...)``)."""
        if self.dense is None:
            raise ValueError("trajectory was integrated without dense output")
        return self.dense(xi)


def _raise_on_failure(sol):
    if sol.status == -1:
        if "step size" in sol.message.lower():
            raise StepSizeUnderflow(sol.message)
        raise NonFiniteState(sol.message)
    if not np.all(np.isfinite(sol.y)):
        raise NonFiniteState("integration produced non-finite values")


def _solve(model, c, y0, span, tol, variational=False, **kw):
    fun = vector_field(model, c, variational=variational)
    with np.errstate(over="raise", invalid="raise"):
        try:
            sol = solve_ivp(fun, (0.0, span), y0, method="RK45", rtol=tol, atol=tol, **kw)
        except FloatingPointError as exc:
            raise NonFiniteState(str(exc)) from exc
    _raise_on_failure(sol)
    return sol


def integrate(model: ValidatedModel, c: float, start: PhaseState, span: float,
              tol: float = 1e-10, t_eval=None) -> Trajectory:
    """Integrate the traveling-wave system with the Dormand-Prince 5(4) pair.

    Returns the accepted steps (or ``t_eval`` samples) together with a dense
    interpolant.
    """
    if not 1e-14 <= tol <= 1e-3:
        raise ValueError(f"tol must lie in [1e-14, 1e-3], got {tol!r}")
    if not c * c * model.tau < 1:
        from .errors import CharacteristicSpeed
        raise CharacteristicSpeed(c, model.tau)
    y0 = start.as_array()
    sol = _solve(model, c, y0, span, tol, dense_output=True, t_eval=t_eval)
    accepted = len(sol.t) - 1 if t_eval is None else max(len(sol.sol.ts) - 1, 0)
    # RK45 costs two evaluations to start and six per attempted step (FSAL)
    attempts = max((sol.nfev - 2) // 6, accepted)
    return Trajectory(sol.t, sol.y[0], sol.y[1], accepted, attempts - accepted, sol.sol)


@dataclass(frozen=True, eq=False)
class PeriodicOrbit:
    """One period of the wave profile sampled on a uniform grid in xi.

    ``samples[j]`` is ``(U, V)`` at ``xi = j * period / n``; ``samples[0]``
    lies on the Poincare section.
    """

    epsilon: float
    speed: float
    tau: float
    period: float
    samples: np.ndarray
    amplitude_u: float
    amplitude_v: float
    closure_residual: float
    model: Optional[ValidatedModel] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def xi(self) -> np.ndarray:
        return np.arange(self.n) * (self.period / self.n)

    @property
    def U(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def V(self) -> np.ndarray:
        return self.samples[:, 1]

    @cached_property
    def fourier(self) -> np.ndarray:
        """Discrete Fourier coefficients of U and V, shape ``(2, n)``."""
        return np.fft.fft(self.samples.T, axis=1) / self.n

    def evaluate(self, xi) -> np.ndarray:
        """Trigonometric interpolant of the profile; returns shape ``(2, len(xi))``."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        return trig_eval(self.fourier, xi * (2.0 * np.pi / self.period))


def trig_eval(coeffs: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """Evaluate real trigonometric interpolants given DFT coefficients.

    ``coeffs`` has shape ``(m, n)`` (rows are independent signals) and
    ``phase`` is the angle in ``[0, 2 pi)`` per period. The Nyquist mode of
    an even-length transform is split evenly between ``+-n/2``.
    """
    n = coeffs.shape[-1]
    k = np.fft.fftfreq(n, d=1.0 / n)
    w = np.ones(n)
    if n % 2 == 0:
        w[n // 2] = 0.0
    E = np.exp(1j * np.outer(k, phase))
    out = (coeffs * w) @ E
    if n % 2 == 0:
        out = out + coeffs[..., n // 2, None] * np.cos(0.5 * n * phase)
    return out.real


def trig_resample(values: np.ndarray, m: int) -> np.ndarray:
    """Trigonometric interpolation of uniform periodic samples onto ``m`` uniform points."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    if m == n:
        return values.copy()
    if m < n:
        if n % m:
            raise ValueError("downsampling only supported by integer factors")
        return values[..., :: n // m].copy()
    c = np.fft.fft(values, axis=-1)
    out = np.zeros(values.shape[:-1] + (m,), dtype=complex)
    half = n // 2
    if n % 2:
        out[..., : half + 1] = c[..., : half + 1]
        out[..., m - half:] = c[..., n - half:]
    else:
        out[..., :half] = c[..., :half]
        out[..., m - half + 1:] = c[..., half + 1:]
        out[..., half] = 0.5 * c[..., half]
        out[..., m - half] = 0.5 * c[..., half]
    return np.fft.ifft(out, axis=-1).real * (m / n)


def _speed_for(hopf: HopfData, epsilon: float, side: Optional[Side]):
    side = hopf.side if side is None else Side(side)
    return (hopf.c0 + epsilon) if side is Side.ABOVE else (hopf.c0 - epsilon)


class _ShootingFailure(Exception):
    pass


def _return_map(model, c, u, v0, T0, tol):
    """Return ``(P(u), T(u), P'(u))`` for the section ``V = v0``."""
    def section(t, y):
        return y[1] - v0
    section.direction = 1.0

    y0 = np.array([u, v0, 1.0, 0.0, 0.0, 1.0])
    try:
        sol = _solve(model, c, y0, (1.0 + PERIOD_GUARD) * T0 + 1.0, tol, variational=True,
                     events=section)
    except (NonFiniteState, StepSizeUnderflow) as exc:
        raise _ShootingFailure(str(exc)) from exc
    for t, y in zip(sol.t_events[0], sol.y_events[0]):
        if t > 0.25 * T0 and y[0] > 0:
            break
    else:
        raise _ShootingFailure("trajectory did not return to the section")
    F, G = vector_field(model, c)(t, y[:2])
    if not G > 0:
        raise _ShootingFailure("crossing is not transversal")
    dT = -y[4] / G
    dP = y[2] + F * dT
    return y[0], t, dP


def _newton(model, c, r0, v0, T0, max_iter=40):
    u = r0
    for it in range(max_iter):
        P, T, dP = _return_map(model, c, u, v0, T0, SHOOTING_TOL)
        defect = P - u
        if abs(defect) <= NEWTON_TOL * max(1.0, abs(u)):
            return u, T, it
        slope = dP - 1.0
        if slope == 0.0 or not math.isfinite(slope):
            raise _ShootingFailure("singular Newton step")
        step = -defect / slope
        # keep the iterate on the positive half of the section
        while u + step <= 0.1 * u:
            step *= 0.5
        u = u + step
        if u < 1e-3 * r0:
            raise _ShootingFailure("orbit collapsed onto the equilibrium")
        if u > 20.0 * r0:
            raise _ShootingFailure("Newton iteration diverged")
    raise _ShootingFailure("Newton iteration did not converge")


def _sample_orbit(model, c, start, period, n, tol=PROFILE_TOL):
    xi = np.arange(n) * (period / n)
    sol = _solve(model, c, start, period, tol, t_eval=xi)
    samples = sol.y.T.copy()
    samples[0] = start
    end = _solve(model, c, start, period, tol).y[:, -1]
    return samples, float(np.linalg.norm(end - start))


def _make_orbit(model, epsilon, c, start, period, n):
    samples, closure = _sample_orbit(model, c, start, period, n)
    v0 = float(model.spec.f(0.0))
    return PeriodicOrbit(
        epsilon=float(epsilon),
        speed=float(c),
        tau=model.tau,
        period=float(period),
        samples=samples,
        amplitude_u=float(np.max(np.abs(samples[:, 0]))),
        amplitude_v=float(np.max(np.abs(samples[:, 1] - v0))),
        closure_residual=closure,
        model=model,
    )


def find_periodic_orbit(model: ValidatedModel, hopf: HopfData, epsilon: float,
                        n_samples: int = DEFAULT_SAMPLES, side: Optional[Side] = None) -> PeriodicOrbit:
    """Periodic orbit for ``c = c0 +- epsilon``.

    ``side`` overrides the bifurcation side chosen from the sign of ``a0``;
    on the wrong side no small orbit exists and :class:`NoOrbitFound` is
    raised.
    """
    if not epsilon > 0:
        raise NoOrbitFound(f"epsilon must be positive to leave the Hopf point (got {epsilon!r})")
    c = _speed_for(hopf, epsilon, side)
    if not c * c * model.tau < 1:
        raise SubcharacteristicViolated(f"c(eps)={c!r} violates c^2 tau < 1 for tau={model.tau!r}")
    v0 = float(model.spec.f(0.0))
    r0 = math.sqrt(abs(hopf.d0 * epsilon / hopf.a0))
    reasons = []
    for r in (r0, 0.5 * r0, 2.0 * r0):
        try:
            u, T, iters = _newton(model, c, r, v0, hopf.T0)
        except _ShootingFailure as exc:
            reasons.append(f"r={r:.3g}: {exc}")
            continue
        if abs(T - hopf.T0) > PERIOD_GUARD * hopf.T0:
            reasons.append(f"r={r:.3g}: period {T:.6g} too far from T0={hopf.T0:.6g}")
            continue
        orbit = _make_orbit(model, epsilon, c, np.array([u, v0]), T, n_samples)
        if orbit.closure_residual > CLOSURE_TOL:
            reasons.append(f"r={r:.3g}: closure residual {orbit.closure_residual:.2e}")
            continue
        log.debug("orbit eps=%g c=%g found after %d Newton steps", epsilon, c, iters)
        return orbit
    raise NoOrbitFound(f"no periodic orbit for c={c!r}: " + "; ".join(reasons))


def resample_profile(orbit: PeriodicOrbit, n: int) -> PeriodicOrbit:
    """Re-integrate ``orbit`` once at tight tolerance keeping ``n`` uniform samples."""
    if n < 64 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 64, got {n}")
    if orbit.model is None:
        raise ValueError("orbit carries no model; cannot re-integrate")
    return _make_orbit(orbit.model, orbit.epsilon, orbit.speed, orbit.samples[0].copy(),
                       orbit.period, n)


def orbit_diagnostics(orbit: PeriodicOrbit, hopf: HopfData) -> dict:
    eps = orbit.epsilon
    root = math.sqrt(eps)
    return {
        "epsilon": eps,
        "speed": orbit.speed,
        "period": orbit.period,
        "period_shift": (orbit.period - hopf.T0) / eps,
        "amplitude_u": orbit.amplitude_u,
        "amplitude_v": orbit.amplitude_v,
        "amplitude_u_scaled": orbit.amplitude_u / root,
        "amplitude_v_scaled": orbit.amplitude_v / root,
        "closure_residual": orbit.closure_residual,
        "margin": 1.0 - orbit.speed ** 2 * orbit.tau,
    }


def rhs_defect(orbit: PeriodicOrbit) -> float:
    """Max deviation between a fourth-order difference of the samples and the vector field."""
    h = orbit.period / orbit.n
    S = orbit.samples
    d = (-np.roll(S, -2, 0) + 8 * np.roll(S, -1, 0) - 8 * np.roll(S, 1, 0) + np.roll(S, 2, 0)) / (12 * h)
    F = np.array([rhs(PhaseState(u, v), orbit.speed, orbit.model).as_array() for u, v in S])
    return float(np.max(np.abs(d - F)))


def winding_number(points: np.ndarray, center=(0.0, 0.0)) -> int:
    """Winding number of the closed polygon ``points`` (shape ``(n, 2)``) around ``center``."""
    z = (points[:, 0] - center[0]) + 1j * (points[:, 1] - center[1])
    dphi = np.angle(np.roll(z, -1) / z)
    return int(round(dphi.sum() / (2 * np.pi)))
