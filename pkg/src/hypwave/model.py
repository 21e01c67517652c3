"""Model data for the hyperbolic diffusion-advection system with logistic source.

The system is

    u_t + v_x = g(u),
    tau v_t + u_x = f(u) - v,

and traveling waves ``(u, v)(x, t) = (U, V)(x - c t)`` solve the planar system
``U' = F(U, V; c)``, ``V' = G(U, V; c)`` implemented by :func:`rhs`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar

from .errors import (
    CharacteristicSpeed,
    EvaluationError,
    HypothesisViolation,
    TauOutOfRange,
    UnknownModel,
)

ScalarMap = Callable[[float], float]

#: absolute tolerance for the monostable endpoint conditions g(0) = g(1) = 0
HYPOTHESIS_TOL = 1e-12
#: interior sample count for the positivity check of g on (0, 1)
POSITIVITY_SAMPLES = 1000
#: sample count for the supremum of |g'| on (-delta, 1)
SUP_SAMPLES = 10_000

BUILTIN_MODELS = ("burgers-fisher", "polynomial")


@dataclass(frozen=True)
class ModelSpec:
    """Flux ``f``, source ``g`` and relaxation time ``tau``.

    ``derivs`` holds ``(f'(0), f''(0), f'''(0), g'(0), g''(0), g'''(0))`` when
    known in closed form; otherwise they are estimated by finite differences.
    ``f_poly``/``g_poly`` keep the ascending coefficients of polynomial models
    so that the model can be written back to a configuration file.
    """

    name: str
    f: ScalarMap
    f_prime: ScalarMap
    g: ScalarMap
    g_prime: ScalarMap
    tau: float
    delta: float = 0.0
    derivs: Optional[tuple] = None
    f_poly: Optional[tuple] = None
    g_poly: Optional[tuple] = None

    def with_tau(self, tau: float) -> "ModelSpec":
        return ModelSpec(self.name, self.f, self.f_prime, self.g, self.g_prime, float(tau),
                         self.delta, self.derivs, self.f_poly, self.g_poly)

    def to_config(self) -> dict:
        if self.name != "burgers-fisher" and (self.f_poly is None or self.g_poly is None):
            raise ValueError("only built-in and polynomial models can be serialized")
        cfg = {"name": self.name, "tau": self.tau, "delta": self.delta}
        if self.name != "burgers-fisher":
            cfg["f_poly"] = list(self.f_poly)
            cfg["g_poly"] = list(self.g_poly)
        return cfg


@dataclass(frozen=True)
class ValidatedModel:
    spec: ModelSpec
    tau_max: float
    tau_one: float
    tau_bar: float
    admissible: bool
    derivs: tuple = field(repr=False)

    @property
    def tau(self) -> float:
        return self.spec.tau

    @property
    def name(self) -> str:
        return self.spec.name


@dataclass(frozen=True)
class PhaseState:
    U: float
    V: float

    def __post_init__(self):
        if not (math.isfinite(self.U) and math.isfinite(self.V)):
            raise ValueError(f"non-finite phase state ({self.U}, {self.V})")

    def as_array(self) -> np.ndarray:
        return np.array([self.U, self.V])


def _poly_derivs(coeffs: Sequence[float]) -> tuple:
    c = list(coeffs) + [0.0] * 4
    return (c[1], 2.0 * c[2], 6.0 * c[3])


def polynomial_model(f_poly, g_poly, tau, delta=0.0, name="polynomial") -> ModelSpec:
    """Model with polynomial flux and source given by ascending coefficients."""
    f_poly = tuple(float(x) for x in f_poly)
    g_poly = tuple(float(x) for x in g_poly)
    if not f_poly or not g_poly:
        raise ValueError("polynomial coefficient lists must be non-empty")
    fp, gp = Polynomial(f_poly), Polynomial(g_poly)
    dfp, dgp = fp.deriv(), gp.deriv()
    derivs = _poly_derivs(f_poly) + _poly_derivs(g_poly)
    return ModelSpec(
        name=name,
        f=lambda u: fp(u),
        f_prime=lambda u: dfp(u),
        g=lambda u: gp(u),
        g_prime=lambda u: dgp(u),
        tau=float(tau),
        delta=float(delta),
        derivs=derivs,
        f_poly=f_poly,
        g_poly=g_poly,
    )


def builtin_model(name: str, tau: float, f_poly=None, g_poly=None, delta: float = 0.0) -> ModelSpec:
    """Return one of the built-in models.

    ``"burgers-fisher"`` is ``f(u) = u**2/2``, ``g(u) = u(1-u)``;
    ``"polynomial"`` requires ``f_poly`` and ``g_poly``.
    """
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    if name == "burgers-fisher":
        return ModelSpec(
            name="burgers-fisher",
            f=lambda u: 0.5 * u * u,
            f_prime=lambda u: u,
            g=lambda u: u * (1.0 - u),
            g_prime=lambda u: 1.0 - 2.0 * u,
            tau=float(tau),
            delta=float(delta),
            derivs=(0.0, 1.0, 0.0, 1.0, -2.0, 0.0),
            f_poly=(0.0, 0.0, 0.5),
            g_poly=(0.0, 1.0, -1.0),
        )
    if name == "polynomial":
        if f_poly is None or g_poly is None:
            raise UnknownModel("polynomial model needs f_poly and g_poly")
        return polynomial_model(f_poly, g_poly, tau, delta)
    raise UnknownModel(f"unknown model {name!r}; expected one of {BUILTIN_MODELS}")


def model_from_config(cfg) -> ModelSpec:
    """Build a :class:`ModelSpec` from a config mapping or a JSON file path."""
    if isinstance(cfg, (str, Path)):
        cfg = json.loads(Path(cfg).read_text())
    name = cfg.get("name", "polynomial")
    tau = cfg["tau"]
    delta = cfg.get("delta", 0.0)
    if name == "burgers-fisher":
        return builtin_model(name, tau, delta=delta)
    if "f_poly" not in cfg or "g_poly" not in cfg:
        raise UnknownModel(f"model {name!r} is not built in and has no polynomial coefficients")
    return polynomial_model(cfg["f_poly"], cfg["g_poly"], tau, delta, name=name)


def _checked(fun, u):
    val = float(fun(u))
    if not math.isfinite(val):
        raise EvaluationError(f"non-finite model value at u={u!r}")
    return val


def _richardson(stencil, h0=0.1, levels=4):
    # central stencils have even error expansions starting at h**4
    table = [[stencil(h0 / 2**k)] for k in range(levels)]
    for j in range(1, levels):
        factor = 4.0 ** (j + 1)
        for k in range(j, levels):
            table[k].append((factor * table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0))
    return table[-1][-1]


def _first_derivative(fun, h0=0.1):
    def stencil(h):
        return (-_checked(fun, 2 * h) + 8 * _checked(fun, h) - 8 * _checked(fun, -h)
                + _checked(fun, -2 * h)) / (12 * h)
    return _richardson(stencil, h0)


def _second_derivative(fun, h0=0.1):
    def stencil(h):
        return (-_checked(fun, 2 * h) + 16 * _checked(fun, h) - 30 * _checked(fun, 0.0)
                + 16 * _checked(fun, -h) - _checked(fun, -2 * h)) / (12 * h * h)
    return _richardson(stencil, h0)


def derivs_at_zero(spec: ModelSpec) -> tuple:
    """``(f'(0), f''(0), f'''(0), g'(0), g''(0), g'''(0))``.

    Uses the closed-form values when the model carries them, otherwise
    fourth-order central differences of ``f'`` and ``g'`` refined by
    Richardson extrapolation.
    """
    if spec.derivs is not None:
        return tuple(float(x) for x in spec.derivs)
    out = []
    for d in (spec.f_prime, spec.g_prime):
        out.extend((_checked(d, 0.0), _first_derivative(d), _second_derivative(d)))
    return tuple(out)


def sup_abs_g_prime(spec: ModelSpec) -> float:
    """Supremum of ``|g'|`` over ``[-delta, 1]`` by sampling plus local refinement."""
    lo, hi = -spec.delta, 1.0
    us = np.linspace(lo, hi, SUP_SAMPLES)
    vals = np.abs([_checked(spec.g_prime, u) for u in us])
    i = int(np.argmax(vals))
    best = float(vals[i])
    a, b = us[max(i - 1, 0)], us[min(i + 1, SUP_SAMPLES - 1)]
    res = minimize_scalar(lambda u: -abs(_checked(spec.g_prime, u)), bounds=(a, b),
                          method="bounded", options={"xatol": 1e-12})
    return max(best, float(-res.fun))


def tau_thresholds(spec: ModelSpec) -> tuple:
    """Return ``(tau_max, tau_one, tau_bar)``."""
    fp0, _, _, gp0, _, _ = derivs_at_zero(spec)
    if not gp0 > 0:
        raise HypothesisViolation("g'(0)>0", f"g'(0)={gp0}")
    sup = sup_abs_g_prime(spec)
    tau_max = math.inf if sup == 0 else 1.0 / sup
    s = fp0 * fp0 + 2.0 * gp0
    disc = max(s * s - 4.0 * gp0 * gp0, 0.0)
    tau_one = (s - math.sqrt(disc)) / (2.0 * gp0 * gp0)
    return tau_max, tau_one, min(tau_max, tau_one)


def validate(spec: ModelSpec, strict: bool = True) -> ValidatedModel:
    """Check the logistic-type hypotheses on ``g`` and attach the tau thresholds.

    With ``strict=True`` (the default) a relaxation time outside
    ``(0, tau_bar)`` raises :class:`TauOutOfRange`; otherwise the returned
    model simply has ``admissible=False``.
    """
    if not spec.tau > 0:
        raise HypothesisViolation("tau>0", f"tau={spec.tau}")
    g0, g1 = _checked(spec.g, 0.0), _checked(spec.g, 1.0)
    if abs(g0) > HYPOTHESIS_TOL:
        raise HypothesisViolation("g(0)=0", f"g(0)={g0}")
    if abs(g1) > HYPOTHESIS_TOL:
        raise HypothesisViolation("g(1)=0", f"g(1)={g1}")
    derivs = derivs_at_zero(spec)
    if not derivs[3] > 0:
        raise HypothesisViolation("g'(0)>0", f"g'(0)={derivs[3]}")
    gp1 = _checked(spec.g_prime, 1.0)
    if not gp1 < 0:
        raise HypothesisViolation("g'(1)<0", f"g'(1)={gp1}")
    interior = np.linspace(0.0, 1.0, POSITIVITY_SAMPLES + 2)[1:-1]
    gi = np.array([_checked(spec.g, u) for u in interior])
    if np.any(gi <= 0):
        u_bad = float(interior[np.argmax(gi <= 0)])
        raise HypothesisViolation("g>0 on (0,1)", f"g({u_bad})<=0")
    if spec.delta > 0:
        left = np.linspace(-spec.delta, 0.0, POSITIVITY_SAMPLES + 2)[1:-1]
        if any(_checked(spec.g, u) >= 0 for u in left):
            raise HypothesisViolation("g<0 on (-delta,0)")
    tau_max, tau_one, tau_bar = tau_thresholds(spec)
    admissible = 0.0 < spec.tau < tau_bar
    if strict and not admissible:
        raise TauOutOfRange(spec.tau, tau_bar)
    return ValidatedModel(spec, tau_max, tau_one, tau_bar, admissible, derivs)


def _gamma(c, tau):
    den = 1.0 - c * c * tau
    if not den > 0:
        raise CharacteristicSpeed(c, tau)
    return 1.0 / den


def rhs(state: PhaseState, c: float, model: ValidatedModel) -> PhaseState:
    """Right-hand side ``(F, G)`` of the traveling-wave system at ``state``."""
    k = _gamma(c, model.tau)
    spec = model.spec
    g = spec.g(state.U)
    w = spec.f(state.U) - state.V
    return PhaseState(k * (c * model.tau * g + w), k * (g + c * w))


def jacobian(state: PhaseState, c: float, model: ValidatedModel) -> np.ndarray:
    k = _gamma(c, model.tau)
    spec = model.spec
    gp, fp = spec.g_prime(state.U), spec.f_prime(state.U)
    return k * np.array([[c * model.tau * gp + fp, -1.0], [gp + c * fp, -c]])


def vector_field(model: ValidatedModel, c: float, variational: bool = False):
    """Return ``fun(t, y)`` for :func:`scipy.integrate.solve_ivp`.

    With ``variational=True`` the state carries the 2x2 first-variation
    matrix (row-major) after ``(U, V)``.
    """
    k = _gamma(c, model.tau)
    spec, tau = model.spec, model.tau
    f, g, fp, gp = spec.f, spec.g, spec.f_prime, spec.g_prime

    if not variational:
        def fun(t, y):
            U, V = y[0], y[1]
            gu = g(U)
            w = f(U) - V
            return np.array([k * (c * tau * gu + w), k * (gu + c * w)])
        return fun

    def fun_var(t, y):
        U, V = y[0], y[1]
        gu = g(U)
        w = f(U) - V
        gpu, fpu = gp(U), fp(U)
        j00, j01 = k * (c * tau * gpu + fpu), -k
        j10, j11 = k * (gpu + c * fpu), -k * c
        m00, m01, m10, m11 = y[2], y[3], y[4], y[5]
        return np.array([
            k * (c * tau * gu + w), k * (gu + c * w),
            j00 * m00 + j01 * m10, j00 * m01 + j01 * m11,
            j10 * m00 + j11 * m10, j10 * m01 + j11 * m11,
        ])
    return fun_var
