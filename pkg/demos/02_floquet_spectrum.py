#!/usr/bin/env python3
# Spectral instability of a small periodic wave.
#
# At eps = 0 the linearized operator has the eigenvalue lambda0 = T0 g'(0) > 0
# with a constant eigenfunction. For small eps it persists, so the wave is
# unstable. Here we find it with the Evans function and check it against a
# Fourier discretization.

import math

import numpy as np

from hypwave.hopf import hopf_summary
from hypwave.model import builtin_model, validate
from hypwave.orbit import find_periodic_orbit
from hypwave.spectrum import (
    Window, build_coefficients, collocation_spectrum, constant_coefficients, count_roots,
    evans, instability_verdict, refine_root, trace_symmetric,
)

model = validate(builtin_model("burgers-fisher", 0.2))
hopf = hopf_summary(model)

rest = constant_coefficients(model, hopf)
print("rest state: D(2pi, 0) =", evans(2 * math.pi, 0.0, rest).value)
print("            D(2pi, pi) =", evans(2 * math.pi, math.pi, rest).value)
print("            roots in [2pi +- 0.3]:", count_roots(Window.around(2 * math.pi, 0.3), 0.0, rest))

orbit = find_periodic_orbit(model, hopf, 0.01)
coeffs = build_coefficients(orbit, model, hopf)
print("\ntranslation mode |D(0, 0)| =", abs(evans(0.0, 0.0, coeffs).value))

root = refine_root(2 * math.pi, 0.0, coeffs)
print(f"unstable root lambda_hat = {root.lambda_hat:.10f} "
      f"(|D| = {root.residual:.1e}, {root.iterations} secant steps)")

ev = collocation_spectrum(0.0, coeffs, 32)
print("nearest collocation eigenvalue off by", np.min(np.abs(ev - root.lambda_hat)))

# Follow the eigenvalue as the Bloch parameter moves away from 0.
thetas = np.linspace(-math.pi, math.pi, 17)[1:]
curve = trace_symmetric(root.lambda_hat, thetas, coeffs)
print("\n  theta    Re lambda_hat   Im lambda_hat")
for p in curve:
    print(f"{p.theta:7.3f} {p.lambda_hat.real:15.10f} {p.lambda_hat.imag:15.10f}")

report = instability_verdict(orbit, model, hopf)
print("\nverdict:", report.verdict.value, "| certified:", report.certified)
print("Re lambda (unscaled) =", report.witness.re_lambda)
