"""Fourier-Galerkin discretization of the Bloch operator, an independent check on Evans roots."""
from __future__ import annotations

import numpy as np

from .coefficients import BlochCoefficients


def _symbol(c_hat, n):
    """Map integer offsets to DFT coefficients, splitting the Nyquist mode evenly."""
    def get(j):
        j = np.asarray(j)
        out = c_hat[..., j % n].copy()
        if n % 2 == 0:
            nyq = np.abs(j) == n // 2
            out[..., nyq] *= 0.5
            out[..., np.abs(j) > n // 2] = 0.0
        else:
            out[..., np.abs(j) > n // 2] = 0.0
        return out
    return get


def bloch_matrix(theta: float, coeffs: BlochCoefficients, modes: int) -> np.ndarray:
    """Dense matrix of ``B^-1 (A (i theta + pi d/dy) + Cbar(y))`` on ``exp(2 i k y)``, ``|k| <= M``.

    Unknowns are ordered ``(u_k, v_k)`` for ``k = -M .. M``.
    """
    if modes < 8:
        raise ValueError("modes must be >= 8")
    k = np.arange(-modes, modes + 1)
    size = 2 * k.size
    tau, T = coeffs.tau, coeffs.period
    A = coeffs.A
    get = _symbol(coeffs.fourier(), coeffs.n)
    conv = get(k[:, None] - k[None, :])  # (2, K, K): a_hat, b_hat
    a_hat, b_hat = conv
    L = np.zeros((size, size), dtype=complex)
    # B^-1 Cbar: row u gets b1 * u, row v gets (a1 * u - T v) / tau
    L[0::2, 0::2] = b_hat
    L[1::2, 0::2] = a_hat / tau
    diag = np.arange(k.size)
    L[2 * diag + 1, 2 * diag + 1] -= T / tau
    sym = 1j * (theta + 2.0 * np.pi * k)
    Binv = np.array([1.0, 1.0 / tau])
    for r in range(2):
        for c in range(2):
            L[2 * diag + r, 2 * diag + c] += Binv[r] * A[r, c] * sym
    return L


def collocation_spectrum(theta: float, coeffs: BlochCoefficients, modes: int = 32) -> np.ndarray:
    """All eigenvalues of the truncated Bloch operator, sorted by decreasing real part."""
    ev = np.linalg.eigvals(bloch_matrix(theta, coeffs, modes))
    return ev[np.argsort(-ev.real, kind="stable")]
