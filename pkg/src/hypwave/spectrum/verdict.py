"""Certify spectral instability of a periodic wave with two independent spectral methods."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import ContourTooClose, NoConvergence, OracleDisagreement
from ..hopf import HopfData
from ..model import ValidatedModel
from ..orbit import PeriodicOrbit
from .coefficients import DEFAULT_GRID, BlochCoefficients, build_coefficients, constant_coefficients
from .collocation import collocation_spectrum
from .evans import unperturbed_eigenpair
from .roots import CURVE_TOL, MIN_CONTOUR, ROOT_TOL, Window, count_roots, refine_root

log = logging.getLogger(__name__)

RE_THRESHOLD = 1e-6
AGREEMENT_TOL = 1e-5
DISAGREEMENT_TOL = 1e-4
DEFAULT_MODES = 32


class Verdict(str, Enum):
    UNSTABLE = "unstable"
    NO_UNSTABLE_ROOT = "no_unstable_root_found"


@dataclass(frozen=True)
class Witness:
    theta: float
    lambda_hat: complex
    re_lambda: float


@dataclass
class InstabilityReport:
    verdict: Verdict
    witness: Optional[Witness]
    evidence: dict = field(default_factory=dict)
    coefficients: Optional[BlochCoefficients] = field(default=None, repr=False)

    @property
    def unstable(self) -> bool:
        return self.verdict is Verdict.UNSTABLE

    @property
    def certified(self) -> bool:
        """Unstable and confirmed by the collocation oracle."""
        return self.unstable and self.evidence.get("collocation_distance", math.inf) <= AGREEMENT_TOL


def default_half_width(epsilon: float) -> float:
    return max(0.3, 3.0 * math.sqrt(epsilon))


def tolerances() -> dict:
    return {
        "root_residual": ROOT_TOL,
        "curve_residual": CURVE_TOL,
        "re_threshold": RE_THRESHOLD,
        "collocation_agreement": AGREEMENT_TOL,
        "collocation_disagreement": DISAGREEMENT_TOL,
        "n_contour": MIN_CONTOUR,
    }


def _count_with_nudge(window, coeffs):
    try:
        return count_roots(window, 0.0, coeffs), window
    except ContourTooClose:
        # a root sits on the boundary: grow the rectangle by 10 percent once
        w = Window(*window)
        dr, di = 0.05 * (w.re1 - w.re0), 0.05 * (w.im1 - w.im0)
        grown = Window(w.re0 - dr, w.re1 + dr, w.im0 - di, w.im1 + di)
        log.info("contour too close to a root, retrying on %s", tuple(grown))
        return count_roots(grown, 0.0, coeffs), grown


def instability_verdict(orbit: Optional[PeriodicOrbit], model: ValidatedModel, hopf: HopfData,
                        n: int = DEFAULT_GRID, modes: int = DEFAULT_MODES,
                        window=None) -> InstabilityReport:
    """Look for the unstable Floquet eigenvalue that continues ``lambda0 = T0 g'(0)``.

    ``orbit=None`` analyses the rest state (zero-amplitude limit). The root is
    seeded at ``lambda0`` with ``theta = 0``, refined, counted inside a
    rectangle and matched against the collocation eigenvalues. When no
    window is given, the square of half-width ``max(0.3, 3 sqrt(eps))``
    around ``lambda0`` is used, moved onto the refined root if the root has
    drifted out of it.
    """
    coeffs = (constant_coefficients(model, hopf, n) if orbit is None
              else build_coefficients(orbit, model, hopf, n))
    eps = coeffs.epsilon
    lam0, _, _ = unperturbed_eigenpair(coeffs)
    evidence = {
        "epsilon": eps,
        "tau": coeffs.tau,
        "period": coeffs.period,
        "lambda0": lam0,
        "case": "i" if coeffs.is_case_one() else "ii",
    }
    report = InstabilityReport(Verdict.NO_UNSTABLE_ROOT, None, evidence, coeffs)

    try:
        root = refine_root(complex(lam0), 0.0, coeffs)
    except NoConvergence as exc:
        evidence["failure"] = str(exc)
        return report
    lam_hat = root.lambda_hat
    evidence["evans_residual"] = root.residual
    evidence["secant_iterations"] = root.iterations
    evidence["drift"] = abs(lam_hat - lam0)

    if window is None:
        hw = default_half_width(eps)
        win = Window.around(complex(lam0), hw)
        if not win.contains(lam_hat):
            log.info("root %s drifted out of the window around lambda0; recentring", lam_hat)
            win = Window.around(lam_hat, hw)
            evidence["window_recentred"] = True
    else:
        win = Window(*window)
    count, win = _count_with_nudge(win, coeffs)
    evidence["window"] = list(win)
    evidence["root_count"] = count

    ev = collocation_spectrum(0.0, coeffs, modes)
    dist = float(np.min(np.abs(ev - lam_hat)))
    evidence["collocation_modes"] = modes
    evidence["collocation_distance"] = dist
    if dist > DISAGREEMENT_TOL:
        raise OracleDisagreement(
            f"Evans root {lam_hat} has no collocation eigenvalue within {DISAGREEMENT_TOL} (nearest at {dist:.3e})")
    if dist > AGREEMENT_TOL:
        log.warning("collocation distance %.3e above the agreement tolerance", dist)

    lam = lam_hat / coeffs.period
    ok = (lam_hat.real > RE_THRESHOLD and count == 1 and win.contains(lam_hat)
          and root.residual <= CURVE_TOL)
    if ok:
        report.verdict = Verdict.UNSTABLE
        report.witness = Witness(0.0, lam_hat, lam.real)
    return report
