"""Monodromy matrices and the periodic Evans function of the Bloch problem."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import CharacteristicSpeed, NonFiniteState
from .coefficients import BlochCoefficients

log = logging.getLogger(__name__)

#: default RK4 steps per coefficient grid point
STEP_FACTOR = 32
#: batch size in lambda for the vectorized integration
_CHUNK = 32


@dataclass(frozen=True, eq=False)
class EvansEvaluation:
    """``value = det(monodromy - exp(i theta) I)``.

    ``monodromy`` is the period map of the quasi-periodic problem in the
    original (untwisted) frame, i.e. ``exp(i theta)`` times the period map
    of the Bloch system ``u_y = D(y, lambda_hat, theta) u``.
    """

    lambda_hat: complex
    theta: float
    value: complex
    monodromy: np.ndarray


def default_steps(coeffs: BlochCoefficients) -> int:
    return STEP_FACTOR * coeffs.n


def _stage_matrices(coeffs, steps):
    """``P = A^-1 B / pi`` and ``Q(y) = A^-1 Cbar(y) / pi`` on the half-step grid."""
    A = coeffs.A
    if np.linalg.det(A) == 0:
        raise CharacteristicSpeed(coeffs.speed, coeffs.tau)
    Ainv = np.linalg.inv(A)
    P = Ainv @ coeffs.B / np.pi
    a, b = coeffs.on_grid(2 * steps)
    a = np.append(a, a[0])
    b = np.append(b, b[0])
    # Ainv @ [[b, 0], [a, -T]]
    Q = np.empty((2 * steps + 1, 2, 2))
    Q[:, 0, 0] = Ainv[0, 0] * b + Ainv[0, 1] * a
    Q[:, 0, 1] = -Ainv[0, 1] * coeffs.period
    Q[:, 1, 0] = Ainv[1, 0] * b + Ainv[1, 1] * a
    Q[:, 1, 1] = -Ainv[1, 1] * coeffs.period
    return P, Q / np.pi


def _tree_product(S):
    """Ordered product ``S[-1] @ ... @ S[0]`` along axis -3."""
    while S.shape[-3] > 1:
        if S.shape[-3] % 2:
            last = S[..., -1:, :, :]
            head = S[..., :-1, :, :]
            S = np.concatenate([head[..., 1::2, :, :] @ head[..., 0::2, :, :], last], axis=-3)
        else:
            S = S[..., 1::2, :, :] @ S[..., 0::2, :, :]
    return S[..., 0, :, :]


def _monodromy_batch(lams, theta, coeffs, steps):
    P, Q = _stage_matrices(coeffs, steps)
    h = np.pi / steps
    eye = np.eye(2)
    shift = -1j * theta / np.pi
    out = np.empty((len(lams), 2, 2), dtype=complex)
    dets = np.empty(len(lams), dtype=complex)
    for s in range(0, len(lams), _CHUNK):
        lam = lams[s:s + _CHUNK, None, None, None]
        Dall = lam * P - Q[None] + shift * eye
        D1 = Dall[:, 0:-1:2]
        D2 = Dall[:, 1::2]
        D3 = Dall[:, 2::2]
        K1 = D1
        K2 = D2 @ (eye + 0.5 * h * K1)
        K3 = D2 @ (eye + 0.5 * h * K2)
        K4 = D3 @ (eye + h * K3)
        S = eye + (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4)
        out[s:s + _CHUNK] = _tree_product(S)
        # det of the product without cancellation among huge entries
        step_det = S[..., 0, 0] * S[..., 1, 1] - S[..., 0, 1] * S[..., 1, 0]
        dets[s:s + _CHUNK] = np.prod(step_det, axis=-1)
    if not (np.all(np.isfinite(out)) and np.all(np.isfinite(dets))):
        raise NonFiniteState("monodromy matrix overflowed")
    return out, dets


def monodromy(lambda_hat, theta: float, coeffs: BlochCoefficients, steps: int | None = None):
    """Period map ``F(pi)`` of ``F_y = D(y, lambda_hat, theta) F``, ``F(0) = I``.

    Classical fixed-step RK4 with trigonometrically interpolated
    coefficients. ``lambda_hat`` may be an array; the result then has shape
    ``lambda_hat.shape + (2, 2)``.
    """
    return _monodromy_with_det(lambda_hat, theta, coeffs, steps)[0]


def _monodromy_with_det(lambda_hat, theta, coeffs, steps):
    steps = default_steps(coeffs) if steps is None else int(steps)
    if steps < 4 * coeffs.n:
        raise ValueError(f"steps={steps} below 4x the coefficient grid ({coeffs.n})")
    lam = np.asarray(lambda_hat, dtype=complex)
    F, det = _monodromy_batch(lam.reshape(-1), float(theta), coeffs, steps)
    return F.reshape(lam.shape + (2, 2)), det.reshape(lam.shape)


def _evans_from(F, det, theta):
    # det(F - I) = det F - tr F + 1, stable when F has huge entries
    z = np.exp(1j * theta)
    return z * z * (det - F[..., 0, 0] - F[..., 1, 1] + 1.0)


def evans_values(lambda_hat, theta: float, coeffs: BlochCoefficients, steps: int | None = None):
    """Vectorized Evans function values ``D(lambda_hat, theta)``."""
    F, det = _monodromy_with_det(lambda_hat, theta, coeffs, steps)
    return _evans_from(F, det, theta)


def evans(lambda_hat: complex, theta: float, coeffs: BlochCoefficients,
          steps: int | None = None) -> EvansEvaluation:
    """Periodic Evans function at a single point.

    Zeros in ``lambda_hat`` are exactly the eigenvalues of the Bloch
    operator with parameter ``theta``.
    """
    if not -np.pi < theta <= np.pi:
        raise ValueError(f"theta must lie in (-pi, pi], got {theta!r}")
    F, det = _monodromy_with_det(lambda_hat, theta, coeffs, steps)
    value = _evans_from(F, det, theta)
    return EvansEvaluation(complex(lambda_hat), float(theta), complex(value), np.exp(1j * theta) * F)


def dispersion(lam, coeffs: BlochCoefficients):
    """Coefficients ``(q, p)`` of the rest-state dispersion relation ``z^2 + q z + p``.

    ``z`` here is ``pi (1 - c0^2 tau)`` times an eigenvalue of the
    constant-coefficient matrix ``D(lambda)``.
    """
    lam = np.asarray(lam, dtype=complex)
    c0, tau, T0 = coeffs.c0, coeffs.tau, coeffs.T0
    a, b = coeffs.a1_0, coeffs.b1_0
    q = c0 * (lam * tau + T0) - c0 * tau * (b - lam) - a
    p = (1.0 - c0 * c0 * tau) * (b - lam) * (lam * tau + T0)
    return q, p


def constant_evans(lam, theta: float, coeffs: BlochCoefficients):
    """Closed-form Evans function of the rest-state (``eps = 0``) Bloch problem."""
    q, p = dispersion(lam, coeffs)
    s = np.sqrt(q * q - 4.0 * p + 0j)
    scale = np.pi * (1.0 - coeffs.c0 ** 2 * coeffs.tau)
    zeta1 = (-q - s) / (2.0 * scale)
    zeta2 = (-q + s) / (2.0 * scale)
    z = np.exp(1j * theta)
    return (np.exp(np.pi * zeta1) - z) * (np.exp(np.pi * zeta2) - z)


class Eigenpair(NamedTuple):
    lambda0: float
    u0: np.ndarray
    residual: float


def unperturbed_eigenpair(coeffs: BlochCoefficients) -> Eigenpair:
    """Unstable eigenvalue ``b1_0 = T0 g'(0)`` of the rest-state operator and its constant eigenvector."""
    tau, T0 = coeffs.tau, coeffs.T0
    lam0 = coeffs.b1_0
    u0 = np.array([1.0, coeffs.a1_0 / tau / (lam0 + T0 / tau)])
    B = np.diag([1.0, tau])
    res = float(np.linalg.norm(np.linalg.solve(B, coeffs.Cbar0 @ u0) - lam0 * u0))
    if res > 1e-12 * max(1.0, abs(lam0)):
        raise AssertionError(f"eigenpair residual {res:.3e}")
    case = "i" if coeffs.is_case_one() else "ii"
    log.debug("unperturbed eigenvalue %.15g (case %s)", lam0, case)
    return Eigenpair(float(lam0), u0, res)
