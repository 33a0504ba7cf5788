"""Command-line entry point: ``quietlaser {analytic,simulate,design,validate}``.

Every output file carries ``schema_version`` and the effective
configuration, so a run is reproducible from its own output. Flags override
values read from ``--config FILE`` (plain ``key = value`` lines).

Exit codes: 0 success, 1 validation failure, 2 usage or parameter error,
3 no steady state.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import secrets
import sys
from pathlib import Path

import numpy as np

from . import analytics, design, renewal, validation
from .core import InsufficientDataError, NoSteadyStateError, ParameterError, RateParams

SCHEMA_VERSION = 1
SEED_ENV = "QUIETLASER_SEED"
THREADS_ENV = "QUIETLASER_THREADS"

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NO_STEADY_STATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(spec: str) -> np.ndarray:
    """``start:stop:<count>log`` or ``start:stop:<count>lin``; a bare count means lin."""
    try:
        start_s, stop_s, tail = spec.split(":")
        start, stop = float(start_s), float(stop_s)
        kind = "lin"
        for suffix in ("log", "lin"):
            if tail.endswith(suffix):
                kind, tail = suffix, tail[: -len(suffix)]
        count = int(tail)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}; expected start:stop:<count>log|lin") from exc
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)) or stop < start:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}")
    if kind == "log":
        if start <= 0:
            raise argparse.ArgumentTypeError("log grid needs start > 0")
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = val
    return values


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _env_echo() -> dict:
    return {SEED_ENV: os.environ.get(SEED_ENV), THREADS_ENV: os.environ.get(THREADS_ENV)}


def _header(command: str, config: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": config, "env": _env_echo()}


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: dict, columns: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    buf.write("# " + json.dumps({k: v for k, v in header.items() if k != "schema_version"}, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    path.write_text(buf.getvalue())


def _effective_config(args: argparse.Namespace) -> dict:
    skip = {"func", "config", "command", "inject_fault", "out_dir"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _params(args) -> RateParams:
    if args.gamma is None or args.rabi is None:
        raise UsageError("--gamma and --rabi are required")
    return RateParams(args.gamma, args.rabi)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analytic(args) -> int:
    params = _params(args)
    omega = parse_grid(args.omega_grid)
    config = _effective_config(args)
    header = _header("analytic", config)
    curve = analytics.analytic_curve(params, omega)
    loop = analytics.closed_loop_noise(params)
    summary = dict(header)
    summary.update(
        a=params.a,
        mean_tau=analytics.mean_waiting_time(params),
        rate=analytics.mean_jump_rate(params),
        fano0=analytics.zero_frequency_fano(params),
        A=loop.feedback_gain,
        detected_level=loop.detected_level,
        regime=params.regime.value,
    )
    out = _out_dir(args)
    _write_csv(out / "spectrum.csv", header, ["omega", "s_over_r"], zip(curve.omega, curve.values))
    _write_json(out / "summary.json", summary)
    print(json.dumps({k: summary[k] for k in ("a", "mean_tau", "fano0", "A", "detected_level")}, sort_keys=True))
    return EXIT_OK


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return secrets.randbits(63)


def _resolve_workers(args) -> int:
    if args.workers is not None:
        return max(1, int(args.workers))
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def cmd_simulate(args) -> int:
    params = _params(args)
    args.seed = _resolve_seed(args)
    workers = _resolve_workers(args)
    omega = parse_grid(args.omega_grid) if args.omega_grid else np.geomspace(0.1, 10.0, 30) * params.gamma
    length = args.segment if args.segment is not None else args.horizon
    if omega[0] < 20 * math.pi / length:
        raise ParameterError(f"omega grid starts below the guard 20*pi/L = {20 * math.pi / length:.6g}")
    config = _effective_config(args)
    config.pop("workers")  # output must not depend on parallelism
    header = _header("simulate", config)

    ens = renewal.generate_ensemble(
        params, args.horizon, args.n_traj, args.seed, workers=workers, poisson_control=args.poisson_control
    )
    curve = renewal.periodogram(ens, omega, args.segment)
    fano = renewal.fano_factor(ens, args.window)
    rate = sum(tr.events.size for tr in ens) / (len(ens) * args.horizon)

    out = _out_dir(args)
    _write_csv(
        out / "spectrum_estimated.csv",
        header,
        ["omega", "s_over_r", "stderr"],
        zip(curve.omega, curve.values, curve.stderr),
    )
    report = dict(header)
    report.update(
        seed=args.seed,
        fano=fano.fano,
        fano_stderr=fano.stderr,
        mean_count=fano.mean_count,
        variance=fano.variance,
        window=fano.window,
        n_windows=fano.n_windows,
        fano0_analytic=analytics.zero_frequency_fano(params) if not args.poisson_control else 1.0,
        rate=rate,
        rate_analytic=analytics.mean_jump_rate(params),
    )
    _write_json(out / "fano.json", report)
    print(json.dumps({"seed": args.seed, "fano": fano.fano, "fano_stderr": fano.stderr}, sort_keys=True))
    return EXIT_OK


def _root_report(root: design.SteadyStateRoot) -> dict:
    p = RateParams(root.gamma, math.sqrt(2.0 * root.gamma**2 / root.a))
    return {
        "gamma": root.gamma,
        "a": root.a,
        "fano0": analytics.zero_frequency_fano(p),
        "feedback_gain": analytics.pump_feedback_gain(p),
        "detected_level": analytics.detected_noise_level(p),
    }


def cmd_design(args) -> int:
    config = _effective_config(args)
    report = _header("design", config)
    report["units"] = design.UNITS
    report["b"] = design.coupling_constant()
    if args.paper_example:
        if args.tau_p is None:
            raise UsageError("--tau-p is required")
        preset = design.paper_design_example(args.tau_p, args.nu)
        pump, tau_p, volume = preset.pump_rate, preset.tau_p, preset.volume
    else:
        if None in (args.pump_rate, args.tau_p, args.volume):
            raise UsageError("give --pump-rate, --tau-p and --volume, or --paper-example")
        pump, tau_p, volume = args.pump_rate, args.tau_p, args.volume
    ss = design.steady_state_solve(pump, tau_p, volume)
    report["mu"] = ss.mu
    report["rabi"] = ss.rabi
    report["root_count"] = len(ss.roots)
    report["roots"] = [_root_report(r) for r in ss.roots]
    report["designs"] = [
        design.design_from_steady_state(args.nu, tau_p, volume, pump, r, ss.rabi).to_dict() for r in ss.roots
    ]
    if args.paper_example:
        report["paper_example"] = preset.to_dict()
    out = _out_dir(args)
    _write_json(out / "design.json", report)
    first = report["designs"][0]
    print(json.dumps({"root_count": len(ss.roots), "volume_over_tau2": volume / tau_p**2, "plate_side_m": first["plate_side"]}, sort_keys=True))
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validation.run_checks(quick=args.quick, inject_fault=args.inject_fault)
    width = max(len(r.name) for r in results)
    print(f"{'check':<{width}}  {'value':>12}  {'tolerance':>12}  result")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {r.value:>12.6g}  {r.tolerance:>12.6g}  {status}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _truthy(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in {"1", "true", "yes", "on"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quietlaser", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key = value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def rates(p):
        p.add_argument("--gamma", type=float, help="jump half-rate")
        p.add_argument("--rabi", type=float, help="Rabi angular frequency")
        p.add_argument("--out-dir", default="quietlaser-out")

    p = sub.add_parser("analytic", help="closed-form spectra and noise levels")
    rates(p)
    p.add_argument("--omega-grid", default="0.01:20:200log")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="Monte Carlo ensemble, Fano factor and periodogram")
    rates(p)
    p.add_argument("--n-traj", type=int, default=50)
    p.add_argument("--horizon", type=float, default=40200.0)
    p.add_argument("--window", type=float, default=200.0)
    p.add_argument("--segment", type=float, default=None, help="Bartlett segment length (default: horizon)")
    p.add_argument("--omega-grid", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--poisson-control", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("design", help="steady-state cavity design in SI units")
    p.add_argument("--paper-example", action="store_true")
    p.add_argument("--pump-rate", type=float, help="J [1/s]")
    p.add_argument("--tau-p", type=float, help="photon lifetime [s]")
    p.add_argument("--volume", type=float, help="capacitance volume [m^3]")
    p.add_argument("--nu", type=float, default=design.HYDROGEN_LINE_HZ, help="transition frequency [Hz]")
    p.add_argument("--out-dir", default="quietlaser-out")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("validate", help="run the oracle suite")
    p.add_argument("--quick", action="store_true", help="analytic checks only")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        args = parser.parse_args(argv)
        if known.config:
            file_values = read_config(known.config)
            sub = parser._subparsers._group_actions[0].choices[args.command]
            for action in sub._actions:
                if action.dest in file_values and isinstance(action, argparse._StoreTrueAction):
                    file_values[action.dest] = _truthy(file_values[action.dest])
            unknown = set(file_values) - {a.dest for a in sub._actions}
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
            sub.set_defaults(**file_values)
            args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"quietlaser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSteadyStateError as exc:
        print(f"quietlaser: {exc}", file=sys.stderr)
        return EXIT_NO_STEADY_STATE
    except (ParameterError, InsufficientDataError, argparse.ArgumentTypeError) as exc:
        print(f"quietlaser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
