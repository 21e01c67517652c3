"""Flat-file formats: orbit JSON/CSV, spectrum CSV and run reports.

Floats are written with ``repr`` (shortest round-trip form, at most 17
significant digits) so that files re-read bit-exactly and identical runs
produce identical bytes.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import __version__
from .hopf import HopfData
from .model import ModelSpec, ValidatedModel, model_from_config, validate
from .orbit import PeriodicOrbit
from .spectrum.roots import SpectrumCurve
from .spectrum.verdict import InstabilityReport, tolerances

SPECTRUM_COLUMNS = ("theta", "re_lambda_hat", "im_lambda_hat", "re_lambda", "im_lambda", "residual")


def _plain(obj):
    """Recursively convert numpy scalars/arrays and complex numbers to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def write_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def model_block(model) -> dict:
    spec = model.spec if isinstance(model, ValidatedModel) else model
    return spec.to_config()


def orbit_to_dict(orbit: PeriodicOrbit) -> dict:
    d = {
        "epsilon": orbit.epsilon,
        "tau": orbit.tau,
        "speed": orbit.speed,
        "period": orbit.period,
        "closure_residual": orbit.closure_residual,
        "amplitude_u": orbit.amplitude_u,
        "amplitude_v": orbit.amplitude_v,
        "samples": orbit.samples.tolist(),
    }
    if orbit.model is not None:
        d["model"] = model_block(orbit.model)
    return d


def orbit_from_dict(d: dict, model: ValidatedModel | None = None) -> PeriodicOrbit:
    if model is None and "model" in d:
        model = validate(model_from_config(d["model"]))
    samples = np.asarray(d["samples"], dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise ValueError("orbit samples must be a list of [U, V] pairs")
    v0 = float(model.spec.f(0.0)) if model is not None else 0.0
    return PeriodicOrbit(
        epsilon=float(d["epsilon"]), speed=float(d["speed"]), tau=float(d["tau"]),
        period=float(d["period"]), samples=samples,
        amplitude_u=float(d.get("amplitude_u", np.max(np.abs(samples[:, 0])))),
        amplitude_v=float(d.get("amplitude_v", np.max(np.abs(samples[:, 1] - v0)))),
        closure_residual=float(d["closure_residual"]), model=model,
    )


def write_orbit_json(orbit: PeriodicOrbit, path) -> Path:
    return write_json(orbit_to_dict(orbit), path)


def read_orbit_json(path, model: ValidatedModel | None = None) -> PeriodicOrbit:
    return orbit_from_dict(json.loads(Path(path).read_text()), model)


def _rows_to_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) for x in row])
    return path


def write_orbit_csv(orbit: PeriodicOrbit, path) -> Path:
    return _rows_to_csv(path, ("xi", "U", "V"), zip(orbit.xi, orbit.U, orbit.V))


def read_orbit_csv(path) -> np.ndarray:
    """Columns ``xi, U, V`` as an ``(n, 3)`` array."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_spectrum_csv(curve: SpectrumCurve, path) -> Path:
    rows = ((p.theta, p.lambda_hat.real, p.lambda_hat.imag, p.lam.real, p.lam.imag, p.residual)
            for p in curve)
    return _rows_to_csv(path, SPECTRUM_COLUMNS, rows)


def read_spectrum_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def report_to_dict(report: InstabilityReport) -> dict:
    w = report.witness
    witness = None if w is None else {
        "theta": w.theta,
        "re_lambda_hat": w.lambda_hat.real,
        "im_lambda_hat": w.lambda_hat.imag,
        "re_lambda": w.re_lambda,
    }
    return {
        "verdict": report.verdict.value,
        "certified": report.certified,
        "witness": witness,
        "evidence": report.evidence,
        "version": __version__,
        "tolerances": tolerances(),
    }


def hopf_to_dict(model: ValidatedModel, hopf: HopfData) -> dict:
    return {
        "model": model_block(model),
        "tau_max": model.tau_max,
        "tau_one": model.tau_one,
        "tau_bar": model.tau_bar,
        "hopf": hopf.to_dict(),
    }


def load_model(path) -> ModelSpec:
    return model_from_config(path)
