"""Command-line front end: ``mch {classify,roots,profile,peakon,simulate,verify}``.

Reports are JSON with a top-level ``"schema"`` key, written with sorted keys
so identical inputs give byte-identical output.  Exit codes: 0 ok, 1 runtime
error, 2 domain or ambiguity error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import pde
from .classify import ClassificationError, classify
from .elliptic import EllipticDomainError
from .profile import (SCHEMA, CategoryMismatch, ProfileError, WaveProfile, build_quadrature,
                      compare_profiles, decay_peakon_constants, decay_peakon_parameters,
                      explicit_decay_peakon, explicit_periodic_peakon, peakon_constants,
                      periodic_peakon_parameters)
from .quartic import (ConstraintViolation, DegenerateRootsError, TravelingWavePolynomial,
                      WaveParameters, find_roots)
from .weakform import TestFunctionFamily, tw_conditions, weak_residual

EXIT_OK, EXIT_RUNTIME, EXIT_DOMAIN = 0, 1, 2

DOMAIN_ERRORS = (ClassificationError, ConstraintViolation, DegenerateRootsError, ProfileError,
                 CategoryMismatch, EllipticDomainError, pde.NoInflectionPoint, pde.CFLViolation)


class UsageError(ValueError):
    pass


def _clean(obj):
    """Make numpy scalars, arrays and non-finite floats JSON friendly."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean({"schema": SCHEMA, **report}), indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    d = json.loads(Path(path).read_text())
    if d.get("schema") != SCHEMA:
        raise UsageError(f"{path}: expected schema {SCHEMA!r}, found {d.get('schema')!r}")
    return d


# ---------------------------------------------------------------------------
# parameters

def _add_param_flags(p):
    p.add_argument("--input", help="JSON report carrying a 'params' object")
    p.add_argument("--family", choices=["two-real", "four-real", "double-real",
                                        "hyperboloid", "ellipsoid"])
    p.add_argument("--m", type=float)
    p.add_argument("--M", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--r", type=float, help="second-lowest real root (four-real family)")
    p.add_argument("--imz", type=float, help="imaginary part of the complex root")


def params_from_args(args) -> WaveParameters:
    if args.input:
        d = _load_json(args.input)
        return WaveParameters.from_dict(d["params"])
    fam = args.family
    if fam is None or args.m is None:
        raise UsageError("give --input or --family with --m")
    if fam in ("four-real", "ellipsoid"):
        if args.M is None or args.r is None:
            raise UsageError("four-real needs --M and --r")
        return WaveParameters.four_real(args.m, args.M, args.r, args.c)
    if fam in ("two-real", "hyperboloid"):
        if args.M is None:
            raise UsageError("two-real needs --M")
        if args.c is None and args.imz is None:
            raise UsageError("two-real needs --c or --imz")
        return WaveParameters.two_real(args.m, args.M, args.c, args.imz)
    if args.c is None:
        raise UsageError("double-real needs --c")
    return WaveParameters.double_real(args.m, args.c)


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args) -> int:
    params = params_from_args(args)
    category = classify(params)
    report = {"command": "classify", "params": params.to_dict(),
              "category": category.to_dict(), "label": str(category),
              "constraint_residual": params.residual(),
              "roots": [complex(z) for z in params.roots()]}
    _emit(dumps(report), args.output)
    return EXIT_OK


def cmd_roots(args) -> int:
    poly = TravelingWavePolynomial(args.c, args.a, args.d)
    s = find_roots(poly)
    report = {"command": "roots", "polynomial": {"c": args.c, "a": args.a, "d": args.d},
              "structure": s.kind, "roots": [complex(z) for z in s.roots()],
              "real_roots": list(s.real_roots)}
    params = WaveParameters.from_structure(s, args.c)
    report["params"] = params.to_dict()
    report["constraint_residual"] = params.residual()
    try:
        report["category"] = classify(params).to_dict()
    except ClassificationError as err:
        report["category"] = None
        report["note"] = str(err)
    _emit(dumps(report), args.output)
    return EXIT_OK


def cmd_profile(args) -> int:
    params = params_from_args(args)
    prof = build_quadrature(params, n_samples=args.samples)
    if args.output and args.output.endswith(".csv"):
        _emit(prof.to_csv(), args.output)
    else:
        _emit(json.dumps(_clean(prof.to_dict()), indent=1, sort_keys=True) + "\n", args.output)
    return EXIT_OK


def cmd_peakon(args) -> int:
    if args.decay:
        params = decay_peakon_parameters(args.c)
        explicit = explicit_decay_peakon(params, args.samples)
        constants = decay_peakon_constants(params)
        alt = explicit_decay_peakon(params, xi=explicit.xi, uncorrected=True)
    else:
        params = periodic_peakon_parameters(args.c, args.m)
        explicit = explicit_periodic_peakon(params, args.samples)
        constants = peakon_constants(params)
        alt = explicit_periodic_peakon(params, xi=explicit.xi, uncorrected=True)
    quad = build_quadrature(params, n_samples=args.samples)
    dev = compare_profiles(explicit, quad)
    with np.errstate(invalid="ignore"):
        alt_dev = float(np.nanmax(np.abs(alt.phi - quad.phi_at(explicit.xi))))
    report = {"command": "peakon", "kind": "decay" if args.decay else "periodic",
              "params": params.to_dict(), "category": classify(params).to_dict(),
              "constants": constants, "sup_deviation": dev,
              "uncorrected_sup_deviation": alt_dev, "tolerance": args.tol,
              "passed": bool(dev < args.tol)}
    if not args.decay:
        report["quadrature_period"] = quad.period
    _emit(dumps(report), args.output)
    return EXIT_OK if dev < args.tol else EXIT_RUNTIME


def _initial_state(args) -> pde.SimulationState:
    if args.input:
        d = _load_json(args.input)
        if "samples" in d and (d.get("plateaus") or len(d.get("pieces", [])) > 1):
            prof = WaveProfile.from_dict(d)   # composite: interpolate its samples
        else:
            prof = build_quadrature(WaveParameters.from_dict(d["params"]))
        if prof.period is None:
            raise UsageError("simulate --input needs a periodic profile")
        L = prof.period
        return pde.SimulationState(prof.phi_at(np.arange(args.n) * L / args.n), L)
    L, A, w = args.length, args.amplitude, args.width
    return pde.SimulationState.from_function(
        lambda x: A * np.exp(-(((x - 0.5 * L) / w) ** 2)), L, args.n)


def _run_one(config):
    A, w, L, n, t_end = config
    st = pde.SimulationState.from_function(lambda x: A * np.exp(-(((x - 0.5 * L) / w) ** 2)), L, n)
    res = pde.simulate(st, t_end, trace_stride=max(1, n // 16))
    return {"amplitude": A, "width": w, "blew_up": res.blew_up, "max_slope": res.max_slope,
            "final_invariants": res.trace[-1, 1:4].tolist()}


def num_threads() -> int:
    try:
        return max(1, int(os.environ.get("MCH_NUM_THREADS", "1")))
    except ValueError:
        return 1


def cmd_simulate(args) -> int:
    if args.amplitudes:
        amps = [float(a) for a in args.amplitudes.split(",")]
        configs = [(A, args.width, args.length, args.n, args.t_end) for A in amps]
        workers = min(num_threads(), len(configs))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                runs = list(ex.map(_run_one, configs))
        else:
            runs = [_run_one(c) for c in configs]
        _emit(dumps({"command": "simulate", "sweep": runs}), args.output)
        return EXIT_OK

    if args.breaking_demo:
        args.amplitude, args.width, args.length = 1.0, 0.3, 10.0
        args.n = max(args.n, 2048)
    state = _initial_state(args)

    if args.breaking_demo:
        run = pde.simulate_breaking(state, args.t_end, blow_up_cap=args.blow_up_cap)
        trace = run.trace
        report = {"command": "simulate", "scenario": "breaking", **run.to_dict(),
                  "blow_up_before_tau_bound": bool(run.blew_up and
                                                   run.blow_up_time <= run.monitor.tau_bound)}
    else:
        res = pde.simulate(state, args.t_end, monitor=args.monitor,
                           blow_up_cap=args.blow_up_cap, trace_stride=args.trace_stride,
                           snapshot_stride=args.snapshot_stride)
        trace = res.trace
        report = {"command": "simulate", "scenario": "evolve", "blew_up": res.blew_up,
                  "blow_up_time": res.blow_up_time, "max_slope": res.max_slope,
                  "t_final": res.state.t, "n": state.n, "length": state.length,
                  "monitor": res.monitor.to_dict() if res.monitor else None}
        if args.snapshots:
            out = Path(args.snapshots)
            out.mkdir(parents=True, exist_ok=True)
            x = state.x
            for i, (t, u) in enumerate(res.snapshots):
                np.savetxt(out / f"snapshot_{i:05d}.dat", np.column_stack([x, u]),
                           header=f"t = {t!r}\nx u", fmt="%.12e")
    if args.trace:
        buf = ",".join(pde.TRACE_COLUMNS) + "\n"
        buf += "\n".join(",".join(f"{v:.12e}" for v in row) for row in trace) + "\n"
        Path(args.trace).write_text(buf)
    _emit(dumps(report), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    prof = WaveProfile.from_dict(_load_json(args.input))
    lo, hi = float(prof.xi[0]), float(prof.xi[-1])
    fam = TestFunctionFamily.spread(lo, hi, args.tests)
    res = weak_residual(prof, fam)
    tw = tw_conditions(prof)
    ok = bool(res < args.tol and tw.passed)
    report = {"command": "verify", "category": prof.category.to_dict(),
              "weak_residual": res, "tolerance": args.tol, "test_functions": len(fam),
              "tw": tw.to_dict(), "passed": ok}
    _emit(dumps(report), args.output)
    return EXIT_OK if ok else EXIT_DOMAIN


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="category of a root configuration")
    _add_param_flags(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("roots", help="roots of P(phi) = phi^2 (c - phi^2/2) + a phi + d")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("profile", help="traveling-wave profile by quadrature")
    _add_param_flags(p)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--output", help="*.json or *.csv; stdout JSON if omitted")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("peakon", help="closed-form peakon against quadrature")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--periodic", action="store_true")
    g.add_argument("--decay", action="store_true")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--m", type=float, help="trough of the periodic peakon")
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--output")
    p.set_defaults(func=cmd_peakon)

    p = sub.add_parser("simulate", help="time evolution of the PDE")
    p.add_argument("--input", help="profile or params JSON used as initial data")
    p.add_argument("--breaking-demo", action="store_true",
                   help="steep Gaussian followed along characteristics to the slope cap")
    p.add_argument("--amplitude", type=float, default=0.1)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--amplitudes", help="comma-separated sweep over Gaussian amplitudes")
    p.add_argument("--length", type=float, default=40.0)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--t-end", type=float, default=5.0)
    p.add_argument("--blow-up-cap", type=float, default=pde.BLOW_UP_CAP)
    p.add_argument("--monitor", action="store_true")
    p.add_argument("--trace", help="CSV trace path (t, E, F, V, min_ux, xbar, rho)")
    p.add_argument("--trace-stride", type=int, default=1)
    p.add_argument("--snapshots", help="directory for two-column snapshot files")
    p.add_argument("--snapshot-stride", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="weak-form certification of a profile JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--tests", type=int, default=24)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("tol", "blow_up_cap"):
        v = getattr(args, name, None)
        if v is not None and not v > 0:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    try:
        return args.func(args)
    except (UsageError, *DOMAIN_ERRORS) as err:
        print(f"mch {args.command}: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as err:  # noqa: BLE001
        print(f"mch {args.command}: error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
