"""Hopf bifurcation data of the traveling-wave system at the rest state P0 = (0, f(0))."""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum

from .errors import CharacteristicSpeed, DegenerateHopf
from .model import ValidatedModel

log = logging.getLogger(__name__)

#: |a0| below this is treated as a degenerate (non-generic) Hopf point
DEGENERACY_TOL = 1e-12
#: required agreement between the reduced and the expanded a0 formulas
CROSS_CHECK_TOL = 1e-10


class Side(str, Enum):
    ABOVE = "above_c0"
    BELOW = "below_c0"


class Criticality(str, Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class HopfData:
    c0: float
    omega0: float
    a0: float
    d0: float
    T0: float
    side: Side
    criticality: Criticality

    def speed(self, epsilon: float) -> float:
        """Wave speed ``c(epsilon)`` on the bifurcating side."""
        return self.c0 + epsilon if self.side is Side.ABOVE else self.c0 - epsilon

    def to_dict(self) -> dict:
        d = asdict(self)
        d["side"] = self.side.value
        d["criticality"] = self.criticality.value
        return d


@dataclass(frozen=True)
class EquilibriumEigen:
    c: float
    alpha: float
    beta: float
    zeta_plus: complex
    zeta_minus: complex


def critical_speed(model: ValidatedModel) -> float:
    fp0, gp0 = model.derivs[0], model.derivs[3]
    return fp0 / (1.0 - model.tau * gp0)


def hopf_frequency(model: ValidatedModel) -> float:
    c0 = critical_speed(model)
    return math.sqrt((1.0 - c0 * c0 * model.tau) * model.derivs[3])


def transversality(model: ValidatedModel) -> float:
    """``d alpha / dc`` at ``c0``; negative for every admissible tau."""
    return 0.5 * (model.tau * model.derivs[3] - 1.0)


def equilibrium_eigenvalues(model: ValidatedModel, c: float) -> EquilibriumEigen:
    """Eigenvalues of the Jacobian at P0 for speed ``c``."""
    tau = model.tau
    if not c * c * tau < 1.0:
        raise CharacteristicSpeed(c, tau)
    fp0, gp0 = model.derivs[0], model.derivs[3]
    # roots of zeta^2 - (f' + c tau g' - c) zeta + (1 - c^2 tau) g' = 0
    s = fp0 + c * tau * gp0 - c
    disc = s * s - 4.0 * (1.0 - c * c * tau) * gp0
    alpha = 0.5 * (fp0 + c * (tau * gp0 - 1.0))
    if disc < 0:
        beta = 0.5 * math.sqrt(-disc)
        return EquilibriumEigen(c, alpha, beta, complex(alpha, beta), complex(alpha, -beta))
    r = 0.5 * cmath.sqrt(disc)
    return EquilibriumEigen(c, alpha, 0.0, alpha + r, alpha - r)


def second_partials(model: ValidatedModel) -> dict:
    """Closed-form partials of F and G at ``(P0, c0)`` up to third order.

    F_V and G_V are constant, so every partial involving V twice or more, or
    a mixed UV partial, vanishes.
    """
    fp0, fpp, fppp, gp0, gpp, gppp = model.derivs
    tau = model.tau
    c0 = critical_speed(model)
    k = 1.0 / (1.0 - c0 * c0 * tau)
    zero = 0.0
    return {
        "F_UU": k * (c0 * tau * gpp + fpp),
        "F_UUU": k * (c0 * tau * gppp + fppp),
        "G_UU": k * (gpp + c0 * fpp),
        "G_UUU": k * (gppp + c0 * fppp),
        "F_UV": zero, "F_VV": zero, "F_UVV": zero,
        "G_UV": zero, "G_VV": zero, "G_UUV": zero, "G_VVV": zero,
    }


def lyapunov_expanded(model: ValidatedModel) -> float:
    """First Lyapunov coefficient from the general planar formula in F, G partials."""
    p = second_partials(model)
    w0 = hopf_frequency(model)
    cubic = p["F_UUU"] + p["F_UVV"] + p["G_UUV"] + p["G_VVV"]
    quad = ((p["F_UU"] + p["F_VV"]) * p["F_UV"] - (p["G_UU"] + p["G_VV"]) * p["G_UV"]
            - p["F_UU"] * p["G_UU"] + p["F_VV"] * p["G_VV"])
    return cubic / 16.0 + quad / (16.0 * w0)


def _lyapunov_reduced(model: ValidatedModel) -> tuple:
    fp0, fpp, fppp, gp0, gpp, gppp = model.derivs
    tau = model.tau
    c0 = critical_speed(model)
    w0 = hopf_frequency(model)
    k = 1.0 / (1.0 - c0 * c0 * tau)
    cubic = c0 * tau * gppp + fppp
    quad = -(c0 * tau * gpp + fpp) * (gpp + c0 * fpp) / w0
    return k / 16.0 * (cubic + quad), k, cubic, quad


def lyapunov_coefficient(model: ValidatedModel) -> float:
    """First Lyapunov coefficient ``a0`` (closed form in derivatives at 0).

    Cross-checked against :func:`lyapunov_expanded`. The two expressions
    coincide when ``c0 = 0``; for ``c0 != 0`` the expanded form carries one
    extra factor ``k = 1/(1 - c0^2 tau)`` on the quadratic term, which is
    checked instead of equality.
    """
    a0, k, cubic, quad = _lyapunov_reduced(model)
    expanded = lyapunov_expanded(model)
    predicted = k / 16.0 * (cubic + k * quad)
    scale = max(1.0, abs(expanded))
    if abs(expanded - predicted) > CROSS_CHECK_TOL * scale:
        raise AssertionError(f"Lyapunov cross-check failed: {expanded!r} vs {predicted!r}")
    if abs(expanded - a0) > CROSS_CHECK_TOL * scale:
        log.debug("a0 closed form %r differs from expanded %r by the k factor", a0, expanded)
    if abs(a0) <= DEGENERACY_TOL:
        raise DegenerateHopf(f"first Lyapunov coefficient vanishes (a0={a0!r})")
    return a0


def hopf_summary(model: ValidatedModel) -> HopfData:
    c0 = critical_speed(model)
    w0 = hopf_frequency(model)
    a0 = lyapunov_coefficient(model)
    d0 = transversality(model)
    side = Side.ABOVE if a0 > 0 else Side.BELOW
    # d0 < 0 always, so a0 > 0 means the orbits live where P0 is stable
    crit = Criticality.SUBCRITICAL if a0 > 0 else Criticality.SUPERCRITICAL
    return HopfData(c0, w0, a0, d0, 2.0 * math.pi / w0, side, crit)
