"""Bloch-rescaled coefficients of the linearized operator about a periodic wave.

In the rescaled variable ``y = pi xi / T`` the wave has period ``pi`` and the
Bloch operator reads ``B^-1 (A (i theta + pi d/dy) + Cbar(y))`` with
``Cbar(y) = [[b1(y), 0], [a1(y), -T]]``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import CharacteristicSpeed
from ..hopf import HopfData
from ..model import ValidatedModel
from ..orbit import PeriodicOrbit, trig_eval, trig_resample

log = logging.getLogger(__name__)

DEFAULT_GRID = 128


@dataclass(frozen=True, eq=False)
class BlochCoefficients:
    """Sampled coefficients on ``y_j = j pi / n`` plus the small-amplitude split.

    ``a1 = a1_0 + sqrt(eps) * a1_1`` and ``b1 = b1_0 + sqrt(eps) * b1_1``
    hold by construction; for ``eps = 0`` the perturbation parts are zero.
    """

    period: float
    speed: float
    tau: float
    epsilon: float
    grid: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    c0: float
    T0: float
    a1_0: float
    b1_0: float
    T1: float
    c1: float
    a1_1: np.ndarray
    b1_1: np.ndarray
    _fine: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.grid)

    @property
    def A(self) -> np.ndarray:
        return np.array([[self.speed, -1.0], [-1.0, self.speed * self.tau]])

    @property
    def B(self) -> np.ndarray:
        return np.diag([1.0, self.tau])

    @property
    def A0(self) -> np.ndarray:
        return np.array([[self.c0, -1.0], [-1.0, self.c0 * self.tau]])

    @property
    def Cbar0(self) -> np.ndarray:
        return np.array([[self.b1_0, 0.0], [self.a1_0, -self.T0]])

    def Cbar(self, y) -> np.ndarray:
        """``Cbar(y)`` at arbitrary points, shape ``(len(y), 2, 2)``."""
        a, b = self.interpolate(y)
        out = np.zeros((len(a), 2, 2))
        out[:, 0, 0] = b
        out[:, 1, 0] = a
        out[:, 1, 1] = -self.period
        return out

    def interpolate(self, y):
        """Trigonometric interpolants ``(a1(y), b1(y))``."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        coeffs = np.fft.fft(np.vstack([self.a1, self.b1]), axis=1) / self.n
        a, b = trig_eval(coeffs, 2.0 * y)
        return a, b

    def on_grid(self, m: int):
        """``(a1, b1)`` trigonometrically interpolated onto ``m`` uniform points of ``[0, pi)``."""
        if m not in self._fine:
            self._fine[m] = trig_resample(np.vstack([self.a1, self.b1]), m)
        return self._fine[m]

    def fourier(self) -> np.ndarray:
        """DFT coefficients of ``a1``, ``b1`` in the basis ``exp(2 i k y)``; shape ``(2, n)``."""
        return np.fft.fft(np.vstack([self.a1, self.b1]), axis=1) / self.n

    def is_case_one(self, rtol=1e-12) -> bool:
        """Whether ``a1_0 == c0 (b1_0 tau + T0)`` (only possible when f'(0) = 0)."""
        rhs = self.c0 * (self.b1_0 * self.tau + self.T0)
        return abs(self.a1_0 - rhs) <= rtol * max(1.0, abs(rhs))


def _check_subcharacteristic(c, tau):
    if not c * c * tau < 1:
        raise CharacteristicSpeed(c, tau)


def _vec(fun, u):
    out = np.asarray(fun(u), dtype=float)
    if out.shape != np.shape(u):
        out = np.array([float(fun(x)) for x in u])
    return out


def _profile_on_grid(orbit: PeriodicOrbit, n: int) -> np.ndarray:
    if orbit.n % n == 0:
        return orbit.U[:: orbit.n // n].copy()
    xi = np.arange(n) * (orbit.period / n)
    return orbit.evaluate(xi)[0]


def build_coefficients(orbit: PeriodicOrbit, model: ValidatedModel, hopf: HopfData,
                       n: int = DEFAULT_GRID) -> BlochCoefficients:
    """Coefficients ``a1 = T f'(U)``, ``b1 = T g'(U)`` on the Bloch grid."""
    if n < 128 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 128, got {n}")
    _check_subcharacteristic(orbit.speed, model.tau)
    fp0, gp0 = model.derivs[0], model.derivs[3]
    T = orbit.period
    U = _profile_on_grid(orbit, n)
    a1 = T * _vec(model.spec.f_prime, U)
    b1 = T * _vec(model.spec.g_prime, U)
    a1_0, b1_0 = hopf.T0 * fp0, hopf.T0 * gp0
    root = math.sqrt(orbit.epsilon)
    if root > 0:
        T1 = (T - hopf.T0) / root
        c1 = (orbit.speed - hopf.c0) / root
        a1_1 = (a1 - a1_0) / root
        b1_1 = (b1 - b1_0) / root
    else:
        T1 = c1 = 0.0
        a1_1 = np.zeros(n)
        b1_1 = np.zeros(n)
    return BlochCoefficients(
        period=T, speed=orbit.speed, tau=model.tau, epsilon=orbit.epsilon,
        grid=np.arange(n) * (np.pi / n), a1=a1, b1=b1,
        c0=hopf.c0, T0=hopf.T0, a1_0=a1_0, b1_0=b1_0, T1=T1, c1=c1, a1_1=a1_1, b1_1=b1_1,
    )


def constant_coefficients(model: ValidatedModel, hopf: HopfData,
                          n: int = DEFAULT_GRID) -> BlochCoefficients:
    """Coefficients of the linearization about the rest state (``eps = 0``)."""
    zero = PeriodicOrbit(
        epsilon=0.0, speed=hopf.c0, tau=model.tau, period=hopf.T0,
        samples=np.tile([0.0, float(model.spec.f(0.0))], (n, 1)),
        amplitude_u=0.0, amplitude_v=0.0, closure_residual=0.0, model=model,
    )
    return build_coefficients(zero, model, hopf, n)


def matrix_D(y, lambda_hat: complex, theta: float, coeffs: BlochCoefficients) -> np.ndarray:
    """First-order form ``(1/pi) A^-1 (lambda B - i theta A - Cbar(y))``.

    Scalar ``y`` gives a 2x2 matrix; array ``y`` gives shape ``(len(y), 2, 2)``.
    """
    A = coeffs.A
    if np.linalg.det(A) == 0:
        raise CharacteristicSpeed(coeffs.speed, coeffs.tau)
    scalar = np.ndim(y) == 0
    Cb = coeffs.Cbar(y)
    M = lambda_hat * coeffs.B - 1j * theta * A - Cb
    D = np.linalg.solve(A, M) / np.pi
    return D[0] if scalar else D
