"""Locating zeros of the periodic Evans function: counting, refining, continuing in theta."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import BranchLost, ContourTooClose, NoConvergence
from .coefficients import BlochCoefficients
from .evans import evans_values

log = logging.getLogger(__name__)

CONTOUR_FLOOR = 1e-6
MIN_CONTOUR = 256
ROOT_TOL = 1e-10
CURVE_TOL = 1e-8
MAX_SECANT = 50
#: phase jump between contour neighbours that triggers bisection
PHASE_JUMP = np.pi / 2
_MAX_REFINE = 12
#: absolute floor on the median step in the branch-jump test
_STEP_FLOOR = 1e-6


class Window(NamedTuple):
    """Closed rectangle ``[re0, re1] x [im0, im1]`` in the lambda_hat plane."""

    re0: float
    re1: float
    im0: float
    im1: float

    @classmethod
    def around(cls, center: complex, half_width: float) -> "Window":
        return cls(center.real - half_width, center.real + half_width,
                   center.imag - half_width, center.imag + half_width)

    def contains(self, z: complex) -> bool:
        return self.re0 <= z.real <= self.re1 and self.im0 <= z.imag <= self.im1

    def corners(self):
        return [complex(self.re0, self.im0), complex(self.re1, self.im0),
                complex(self.re1, self.im1), complex(self.re0, self.im1)]


class RootEstimate(NamedTuple):
    lambda_hat: complex
    residual: float
    iterations: int


@dataclass(frozen=True)
class CurvePoint:
    theta: float
    lambda_hat: complex
    lam: complex
    residual: float


@dataclass
class SpectrumCurve:
    period: float
    points: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def theta(self):
        return np.array([p.theta for p in self.points])

    @property
    def lambda_hat(self):
        return np.array([p.lambda_hat for p in self.points])

    @property
    def residual(self):
        return np.array([p.residual for p in self.points])


def _contour(window: Window, per_side: int) -> np.ndarray:
    c = window.corners()
    t = np.arange(per_side) / per_side
    sides = [c[k] + t * (c[(k + 1) % 4] - c[k]) for k in range(4)]
    return np.concatenate(sides + [np.array([c[0]])])


def count_roots(window, theta: float, coeffs: BlochCoefficients,
                n_contour: int = MIN_CONTOUR, steps: int | None = None) -> int:
    """Number of zeros of ``D(., theta)`` inside ``window`` (argument principle).

    The rectangle is traversed counter-clockwise with ``n_contour`` samples per
    side; any pair of neighbours whose phases differ by more than pi/2 gets a
    midpoint inserted until the phase is resolved.
    """
    window = Window(*window)
    if not (window.re1 > window.re0 and window.im1 > window.im0):
        raise ValueError(f"degenerate window {tuple(window)}")
    if n_contour < MIN_CONTOUR:
        raise ValueError(f"n_contour must be >= {MIN_CONTOUR}")
    z = _contour(window, n_contour)
    d = evans_values(z, theta, coeffs, steps)
    for _ in range(_MAX_REFINE):
        if np.min(np.abs(d)) < CONTOUR_FLOOR:
            k = int(np.argmin(np.abs(d)))
            raise ContourTooClose(f"|D| = {abs(d[k]):.3e} at lambda_hat = {z[k]}")
        jump = np.abs(np.angle(d[1:] / d[:-1]))
        bad = np.flatnonzero(jump > PHASE_JUMP)
        if bad.size == 0:
            break
        mid = 0.5 * (z[bad] + z[bad + 1])
        dm = evans_values(mid, theta, coeffs, steps)
        z = np.insert(z, bad + 1, mid)
        d = np.insert(d, bad + 1, dm)
    else:
        log.warning("phase still under-resolved after %d refinements", _MAX_REFINE)
    total = np.sum(np.angle(d[1:] / d[:-1]))
    return int(round(total / (2.0 * np.pi)))


def refine_root(guess: complex, theta: float, coeffs: BlochCoefficients,
                tol: float = ROOT_TOL, max_iter: int = MAX_SECANT,
                steps: int | None = None) -> RootEstimate:
    """Secant iteration for a zero of ``D(., theta)`` starting from ``guess``."""
    def D(z):
        return complex(evans_values(np.array([z]), theta, coeffs, steps)[0])

    z1 = complex(guess)
    d1 = D(z1)
    if not np.isfinite(d1):
        raise NoConvergence(f"D is not finite at {z1}")
    if abs(d1) <= tol:
        return RootEstimate(z1, abs(d1), 0)
    z0 = z1 + 1e-4 * max(1.0, abs(z1))
    d0 = D(z0)
    for it in range(1, max_iter + 1):
        denom = d1 - d0
        if denom == 0:
            break
        z0, d0, z1 = z1, d1, z1 - d1 * (z1 - z0) / denom
        d1 = D(z1)
        if not np.isfinite(d1):
            break
        if abs(d1) <= tol:
            return RootEstimate(z1, abs(d1), it)
    raise NoConvergence(f"secant stalled at {z1} with |D| = {abs(d1):.3e}")


def _continue(seed, thetas, coeffs, tol, steps):
    roots = []
    z = complex(seed)
    moves = []
    for th in thetas:
        r = refine_root(z, th, coeffs, tol=tol, steps=steps)
        if roots:
            move = abs(r.lambda_hat - roots[-1][1].lambda_hat)
            if len(moves) >= 2:
                ref = max(float(np.median(moves)), _STEP_FLOOR)
                if move > 10.0 * ref:
                    raise BranchLost(f"jump {move:.3e} at theta={th:.6g} exceeds 10x median step {ref:.3e}")
            moves.append(move)
        roots.append((th, r))
        z = r.lambda_hat
    return roots


def trace_curve(seed_root: complex, theta_grid, coeffs: BlochCoefficients,
                tol: float = ROOT_TOL, steps: int | None = None) -> SpectrumCurve:
    """Follow a Floquet eigenvalue branch over an increasing theta grid.

    ``seed_root`` must be a root at ``theta_grid[0]``.
    """
    thetas = np.asarray(theta_grid, dtype=float)
    if thetas.size > 1 and np.any(np.diff(thetas) <= 0):
        raise ValueError("theta_grid must be strictly increasing")
    return _to_curve(_continue(seed_root, thetas, coeffs, tol, steps), coeffs)


def trace_symmetric(seed_root: complex, theta_grid, coeffs: BlochCoefficients,
                    theta0: float = 0.0, tol: float = ROOT_TOL,
                    steps: int | None = None) -> SpectrumCurve:
    """Continue outwards from a root at ``theta0`` in both directions of the grid."""
    thetas = np.unique(np.append(np.asarray(theta_grid, dtype=float), theta0))
    up = thetas[thetas >= theta0]
    down = thetas[thetas <= theta0][::-1]
    right = _continue(seed_root, up, coeffs, tol, steps)
    left = _continue(seed_root, down, coeffs, tol, steps)
    return _to_curve(left[:0:-1] + right, coeffs)


def _to_curve(pairs, coeffs):
    curve = SpectrumCurve(coeffs.period)
    for th, r in pairs:
        if r.residual > CURVE_TOL:
            raise NoConvergence(f"residual {r.residual:.3e} at theta={th}")
        curve.points.append(CurvePoint(float(th), r.lambda_hat, r.lambda_hat / coeffs.period, r.residual))
    return curve
