"""``hypwave`` command line: hopf, orbit, spectrum and verify stages.

Exit codes: 0 success, 1 usage or configuration error, 2 hypothesis or tau
violation, 3 degenerate Hopf point, 4 no orbit, 5 no unstable root,
6 disagreement between the two spectral methods.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BranchLost, CharacteristicSpeed, ContourTooClose, DegenerateHopf, EvaluationError,
    HypothesisViolation, HypwaveError, NoConvergence, NonFiniteState, NoOrbitFound,
    OracleDisagreement, StepSizeUnderflow, SubcharacteristicViolated, TauOutOfRange, UnknownModel,
)
from .hopf import hopf_summary
from .io import (
    dumps, hopf_to_dict, model_block, read_orbit_json, report_to_dict,
    write_json, write_orbit_csv, write_orbit_json, write_spectrum_csv,
)
from .model import builtin_model, model_from_config, validate
from .orbit import DEFAULT_SAMPLES, find_periodic_orbit, orbit_diagnostics
from .spectrum import Window, instability_verdict, trace_symmetric

log = logging.getLogger("hypwave")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_DEGENERATE = 3
EXIT_NO_ORBIT = 4
EXIT_NO_ROOT = 5
EXIT_ORACLE = 6

_EXIT_FOR = (
    (UnknownModel, EXIT_USAGE),
    ((HypothesisViolation, TauOutOfRange, CharacteristicSpeed, EvaluationError), EXIT_HYPOTHESIS),
    (DegenerateHopf, EXIT_DEGENERATE),
    ((NoOrbitFound, SubcharacteristicViolated, StepSizeUnderflow, NonFiniteState), EXIT_NO_ORBIT),
    ((NoConvergence, BranchLost, ContourTooClose), EXIT_NO_ROOT),
    (OracleDisagreement, EXIT_ORACLE),
)


def exit_code_for(exc: BaseException) -> int:
    for cls, code in _EXIT_FOR:
        if isinstance(exc, cls):
            return code
    return EXIT_USAGE


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which is reserved for hypothesis violations here
    def error(self, message):
        raise UsageError(message)


def worker_count() -> int:
    raw = os.environ.get("HYPWAVE_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"HYPWAVE_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise UsageError("HYPWAVE_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _epsilons(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --epsilon list {text!r}")
    if not vals:
        raise UsageError("--epsilon needs at least one value")
    return vals


def _window(text):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 4:
        raise UsageError("--window expects r0,r1,i0,i1")
    return Window(*vals)


def _power_of_two(n, least, flag):
    if n < least or n & (n - 1):
        raise UsageError(f"{flag} must be a power of two >= {least}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypwave", description="Periodic waves of a hyperbolic balance law with relaxation.")
    p.add_argument("--version", action="version", version=f"hypwave {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, helptext in (("hopf", "Hopf constants and tau thresholds"),
                           ("orbit", "periodic orbits for each epsilon"),
                           ("spectrum", "Floquet spectrum and instability report"),
                           ("verify", "full pipeline, exit 0 iff every wave is certified unstable")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--model", default="burgers-fisher", help="built-in model name")
        s.add_argument("--config", type=Path, help="model configuration JSON")
        s.add_argument("--tau", type=float, help="relaxation time (overrides the config)")
        s.add_argument("--json", type=Path, help="write the JSON report here")
        s.add_argument("-v", "--verbose", action="count", default=0)
        if name == "hopf":
            continue
        s.add_argument("--epsilon", default="0.01", help="comma-separated list")
        s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        s.add_argument("--out", type=Path, default=Path("."))
        if name in ("spectrum", "verify"):
            s.add_argument("--window", help="counting rectangle r0,r1,i0,i1")
            s.add_argument("--grid", type=int, default=128, help="coefficient grid size")
            s.add_argument("--modes", type=int, default=32, help="collocation modes")
        if name == "spectrum":
            s.add_argument("--orbit", type=Path, help="orbit JSON written by `hypwave orbit`")
            s.add_argument("--theta-grid", type=int, default=33)
    return p


def _load_model(args):
    if args.config is not None:
        try:
            spec = model_from_config(args.config)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read model config {args.config}: {exc}")
        if args.tau is not None:
            spec = spec.with_tau(args.tau)
    else:
        if args.tau is None:
            raise UsageError("--tau is required without --config")
        spec = builtin_model(args.model, args.tau)
    return validate(spec)


def _emit(obj, args):
    text = dumps(obj)
    if args.json is not None:
        write_json(obj, args.json)
    sys.stdout.write(text)
    sys.stdout.flush()


def _timed(label, fun, *a, **kw):
    t = time.perf_counter()
    out = fun(*a, **kw)
    print(f"[time] {label}: {time.perf_counter() - t:.3f} s", file=sys.stderr)
    return out


def _fan_out(fun, items):
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fun(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fun, items))


def _tag(eps):
    return f"eps{eps!r}"


def cmd_hopf(args) -> int:
    model = _load_model(args)
    hopf = hopf_summary(model)
    _emit(hopf_to_dict(model, hopf), args)
    return EXIT_OK


def cmd_orbit(args) -> int:
    _power_of_two(args.samples, 64, "--samples")
    model = _load_model(args)
    hopf = hopf_summary(model)
    eps_list = _epsilons(args.epsilon)

    def run(eps):
        orbit = _timed(f"orbit eps={eps!r}", find_periodic_orbit, model, hopf, eps, args.samples)
        write_orbit_json(orbit, args.out / f"orbit_{_tag(eps)}.json")
        write_orbit_csv(orbit, args.out / f"orbit_{_tag(eps)}.csv")
        return orbit

    orbits = _fan_out(run, eps_list)
    print(f"{'epsilon':>10} {'period':>14} {'amplitude_u':>12} {'residual':>10} {'margin':>8}", file=sys.stderr)
    rows = []
    for o in orbits:
        d = orbit_diagnostics(o, hopf)
        rows.append(d)
        print(f"{o.epsilon:10.4g} {o.period:14.10f} {o.amplitude_u:12.6f} "
              f"{o.closure_residual:10.2e} {d['margin']:8.4f}", file=sys.stderr)
    _emit({"model": model_block(model), "hopf": hopf.to_dict(), "orbits": rows,
           "version": __version__}, args)
    return EXIT_OK


def _theta_grid(n):
    if n < 1:
        raise UsageError("--theta-grid must be positive")
    # uniform Bloch grid 2 pi k / n on (-pi, pi], always containing 0
    k = np.arange(-((n - 1) // 2), n // 2 + 1)
    return 2.0 * np.pi * k / n


def _spectrum_for(orbit, model, hopf, args, thetas):
    window = _window(args.window) if args.window else None
    report = instability_verdict(orbit, model, hopf, n=args.grid, modes=args.modes, window=window)
    curve = None
    if report.witness is not None and thetas is not None:
        curve = trace_symmetric(report.witness.lambda_hat, thetas, report.coefficients)
    return report, curve


def _exit_for_reports(reports):
    for r in reports:
        if not r.unstable:
            return EXIT_NO_ROOT
        if not r.certified:
            return EXIT_ORACLE
    return EXIT_OK


def cmd_spectrum(args) -> int:
    _power_of_two(args.grid, 128, "--grid")
    thetas = _theta_grid(args.theta_grid)
    if args.orbit is not None:
        try:
            orbit = read_orbit_json(args.orbit)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read orbit file {args.orbit}: {exc}")
        if orbit.model is None:
            if args.config is None and args.tau is None:
                raise UsageError("orbit file has no model block; pass --config or --tau")
            orbit = read_orbit_json(args.orbit, _load_model(args))
        model = orbit.model
        hopf = hopf_summary(model)
        orbits = [orbit]
    else:
        _power_of_two(args.samples, 64, "--samples")
        model = _load_model(args)
        hopf = hopf_summary(model)
        orbits = [find_periodic_orbit(model, hopf, eps, args.samples) for eps in _epsilons(args.epsilon)]

    results = _fan_out(lambda o: _timed(f"spectrum eps={o.epsilon!r}", _spectrum_for, o, model, hopf, args, thetas),
                       orbits)
    out = []
    for o, (report, curve) in zip(orbits, results):
        if curve is not None:
            write_spectrum_csv(curve, args.out / f"spectrum_{_tag(o.epsilon)}.csv")
        d = report_to_dict(report)
        if args.json is None:
            write_json(d, args.out / f"report_{_tag(o.epsilon)}.json")
        out.append(d)
    _emit(out[0] if len(out) == 1 else out, args)
    return _exit_for_reports([r for r, _ in results])


def cmd_verify(args) -> int:
    _power_of_two(args.samples, 64, "--samples")
    _power_of_two(args.grid, 128, "--grid")
    model = _load_model(args)
    hopf = hopf_summary(model)
    eps_list = _epsilons(args.epsilon)
    window = _window(args.window) if args.window else None

    def run(eps):
        orbit = _timed(f"orbit eps={eps!r}", find_periodic_orbit, model, hopf, eps, args.samples)
        report = _timed(f"verdict eps={eps!r}", instability_verdict, orbit, model, hopf,
                        n=args.grid, modes=args.modes, window=window)
        return orbit, report

    results = _fan_out(run, eps_list)
    summary = {
        "version": __version__,
        "model": model_block(model),
        "tau_bar": model.tau_bar,
        "hopf": hopf.to_dict(),
        "waves": [{"orbit": orbit_diagnostics(o, hopf), "report": report_to_dict(r)} for o, r in results],
    }
    _emit(summary, args)
    return _exit_for_reports([r for _, r in results])


COMMANDS = {"hopf": cmd_hopf, "orbit": cmd_orbit, "spectrum": cmd_spectrum, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        level = logging.WARNING - 10 * min(args.verbose, 2)
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hypwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypwaveError as exc:
        print(f"hypwave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
