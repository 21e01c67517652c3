"""Spectral stability of periodic traveling waves via Bloch decomposition."""
from .coefficients import BlochCoefficients, build_coefficients, constant_coefficients, matrix_D
from .collocation import bloch_matrix, collocation_spectrum
from .evans import (
    EvansEvaluation, constant_evans, dispersion, evans, evans_values, monodromy,
    unperturbed_eigenpair,
)
from .roots import (
    CurvePoint, RootEstimate, SpectrumCurve, Window, count_roots, refine_root, trace_curve,
    trace_symmetric,
)
from .verdict import InstabilityReport, Verdict, Witness, instability_verdict
