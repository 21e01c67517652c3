#!/usr/bin/env python3
# Small periodic waves of the Burgers-Fisher relaxation model.
#
# The traveling-wave ODE has a Hopf point at the critical speed c0. Just past
# it a small limit cycle appears, and that cycle is a periodic wave profile.

import math

import numpy as np

from hypwave.hopf import hopf_summary
from hypwave.model import builtin_model, validate
from hypwave.orbit import find_periodic_orbit, orbit_diagnostics

tau = 0.2
model = validate(builtin_model("burgers-fisher", tau))
hopf = hopf_summary(model)

print(f"tau = {tau}, admissible up to tau_bar = {model.tau_bar}")
print(f"c0 = {hopf.c0}, omega0 = {hopf.omega0}, a0 = {hopf.a0}, d0 = {hopf.d0}")
print(f"orbits live on the {hopf.side.value} side ({hopf.criticality.value})\n")

# Amplitude should grow like sqrt(eps), period should move by O(eps).
print(f"{'eps':>8} {'period':>12} {'T-2pi':>10} {'amp_u':>9} {'amp_u/sqrt(eps)':>16}")
for eps in (0.0025, 0.005, 0.01, 0.02, 0.04):
    orbit = find_periodic_orbit(model, hopf, eps)
    d = orbit_diagnostics(orbit, hopf)
    print(f"{eps:8.4f} {orbit.period:12.8f} {orbit.period - 2 * math.pi:10.5f} "
          f"{orbit.amplitude_u:9.5f} {d['amplitude_u_scaled']:16.5f}")

# The profile is almost a sine wave; most energy sits in the first harmonic.
orbit = find_periodic_orbit(model, hopf, 0.01)
power = np.abs(orbit.fourier[0, : orbit.n // 2]) ** 2
print("\nshare of U variance in harmonics 1..4:",
      np.round(power[1:5] / power[1:].sum(), 6))
