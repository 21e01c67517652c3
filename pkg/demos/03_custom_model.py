#!/usr/bin/env python3
# Same pipeline for a polynomial model with a nonzero critical speed:
# f(u) = u + u^2/2, g(u) = u - u^2.
#
# With c0 != 0 the closed-form omega0 is the rotation rate of (1 - c0^2 tau) J,
# so the orbits actually approach the shorter period T0 (1 - c0^2 tau), and the
# unstable root sits near that period times g'(0) rather than near lambda0.

import math

import numpy as np

from hypwave.hopf import hopf_summary
from hypwave.model import PhaseState, jacobian, polynomial_model, validate
from hypwave.orbit import find_periodic_orbit
from hypwave.spectrum import instability_verdict

spec = polynomial_model([0.0, 1.0, 0.5], [0.0, 1.0, -1.0], tau=0.2, name="quadratic-flux")
model = validate(spec)
hopf = hopf_summary(model)

print(f"tau_max = {model.tau_max:.6f}, tau_one = {model.tau_one:.6f}")
print(f"c0 = {hopf.c0}, omega0 = {hopf.omega0:.10f}, T0 = {hopf.T0:.10f}")
J = jacobian(PhaseState(0.0, 0.0), hopf.c0, model)
print(f"period from the Jacobian at P0: {2 * math.pi / abs(np.linalg.eigvals(J)[0].imag):.10f}")
print(f"a0 = {hopf.a0:.10f} -> waves with c {'>' if hopf.a0 > 0 else '<'} c0")

for eps in (0.005, 0.01):
    orbit = find_periodic_orbit(model, hopf, eps)
    report = instability_verdict(orbit, model, hopf)
    lam = report.witness.lambda_hat if report.witness else float("nan")
    print(f"eps={eps}: c={orbit.speed:.4f}, T={orbit.period:.6f}, amp={orbit.amplitude_u:.5f}, "
          f"{report.verdict.value}, lambda_hat={lam:.6f} (lambda0={hopf.T0 * model.derivs[3]:.6f}), "
          f"case {report.evidence['case']}")

print("\nc(eps)^2 tau stays below 1:", all(
    (hopf.c0 + e) ** 2 * model.tau < 1 for e in (0.005, 0.01)), f"(1/sqrt(tau) = {1 / math.sqrt(0.2):.4f})")
