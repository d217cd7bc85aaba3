"""Command-line front end.

Subcommands: simulate, scan, resonance, trajectory, elliptic, frame.
All tabular output is CSV with '#'-prefixed metadata lines (schema version,
resolved configuration, artifact version); floats are serialized with 17
significant digits so rereading them reproduces the doubles bit for bit.
An optional JSON mirror (--json) and rendered figures (--plot) are written
alongside the CSV.

Exit codes: 0 success, 2 configuration or usage error, 3 numeric regime
error.  Errors go to stderr as machine-parsable "code: message" lines.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import (RunConfig, apply_overrides, config_to_dict,
                     validate_config)
from .effective_field import effective_field
from .elliptic import classify_modulus, complete_k, jacobi_eval
from .errors import ConfigError, RegimeError
from .params import build_model, solve_average_rest_frame
from .scans import ScanSettings, find_resonance, scan_eta
from .spin import propagate, rabi_solution
from .trajectory import acceleration, position, velocity, wave_phase

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_REGIME = 3


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_table(out: str | None, meta: dict, columns, rows,
                 json_mirror: bool) -> None:
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")
    if json_mirror:
        payload = {
            "meta": meta,
            "columns": list(columns),
            "rows": [[(float(v) if isinstance(v, (float, np.floating)) else
                       int(v) if isinstance(v, (int, np.integer)) else v)
                      for v in row] for row in rows],
        }
        Path(out).with_suffix(".json").write_text(
            json.dumps(payload, sort_keys=True, indent=1) + "\n", newline="\n")


def _meta(command: str, cfg: RunConfig | None, **extra) -> dict:
    meta = {
        "schema_version": 1,
        "artifact": f"spinflip {__version__}",
        "command": command,
    }
    if cfg is not None:
        meta["config"] = json.dumps(config_to_dict(cfg), sort_keys=True,
                                    separators=(",", ":"))
    meta.update(extra)
    return meta


def _load_config(args) -> RunConfig:
    if not args.config:
        raise ConfigError(["--config is required for this subcommand"])
    try:
        raw = json.loads(Path(args.config).read_text())
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {args.config}"])
    except json.JSONDecodeError as exc:
        raise ConfigError(
            [f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"])
    if args.set:
        raw = apply_overrides(raw, args.set)
    return validate_config(raw)


def _check_out_flags(args) -> None:
    if getattr(args, "json", False) and not args.out:
        raise ConfigError(["--json requires --out"])
    if getattr(args, "plot", False) and not args.out:
        raise ConfigError(["--plot requires --out"])


def _plot_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    _check_out_flags(args)
    model = build_model(cfg.wave, cfg.particle, cfg.frame)
    t_end = cfg.sim.t_end * 2.0 * np.pi / cfg.wave.omega_l
    result = propagate(model, t_end, cfg.sim.steps_per_period)
    try:
        p_analytic = rabi_solution(model).probability(result.t)
    except RegimeError:
        p_analytic = np.full_like(result.p_flip, np.nan)
    field = effective_field(model, result.t)
    norm_err = result.norm_error
    columns = ["t", "p_flip", "p_flip_analytic", "bx", "by", "bz", "norm_err"]
    rows = [
        (result.t[i], result.p_flip[i], p_analytic[i],
         field.b_eff[i, 0], field.b_eff[i, 1], field.b_eff[i, 2], norm_err[i])
        for i in range(result.t.size)
    ]
    _write_table(args.out, _meta("simulate", cfg), columns, rows, args.json)

    field_path = args.dump_field
    if field_path is None and "field" in cfg.sim.outputs and args.out:
        field_path = str(Path(args.out).with_name(Path(args.out).stem + "_field.csv"))
    if field_path:
        fcolumns = ["t"] + [f"{part}_{ax}" for part in ("b_rest", "b_thomas", "b_eff")
                            for ax in "xyz"]
        frows = [
            [result.t[i]]
            + [field.b_rest[i, k] for k in range(3)]
            + [field.b_thomas[i, k] for k in range(3)]
            + [field.b_eff[i, k] for k in range(3)]
            for i in range(result.t.size)
        ]
        _write_table(field_path, _meta("simulate --dump-field", cfg),
                     fcolumns, frows, False)

    if args.plot:
        from . import report
        fig = report.figure_simulation(result.t, result.p_flip, p_analytic,
                                       field.b_eff, model)
        report.save_figure(fig, _plot_path(args.out))
    return _EXIT_OK


def _require_circular_rest_frame(cfg: RunConfig, what: str) -> None:
    """Amplitude extraction only has an analytic reference in the circular
    average-rest regime; elsewhere the scan refuses instead of guessing."""
    circular = abs(cfg.wave.epsilon_sq - 0.5) < 1e-12
    at_rest = cfg.frame.mode == "average_rest_frame" or cfg.frame.gamma_z == 1.0
    if not (circular and at_rest):
        raise RegimeError(
            f"{what} requires circular polarization (epsilon_sq = 0.5) in the "
            "average rest frame; use `simulate` for raw elliptical time series")


def _cmd_scan(args) -> int:
    cfg = _load_config(args)
    _check_out_flags(args)
    _require_circular_rest_frame(cfg, "scan")
    if cfg.scan is None:
        raise ConfigError(["scan: missing required section for the scan subcommand"])
    grid = np.linspace(cfg.scan.eta_min, cfg.scan.eta_max, cfg.scan.points)
    settings = ScanSettings(steps_per_period=cfg.sim.steps_per_period,
                            omega_l=cfg.wave.omega_l,
                            charge_sign=cfg.particle.charge_sign,
                            workers=args.workers)
    records = scan_eta(grid, cfg.particle.g, settings)
    columns = ["eta", "g", "amp_num", "amp_ana", "omega_s_num", "omega_s_ana",
               "residual", "steps"]
    rows = [
        (r.eta, r.g, r.amplitude_numeric, r.amplitude_analytic,
         r.omega_s_numeric, r.omega_s_analytic, r.residual, r.steps_per_period)
        for r in records
    ]
    _write_table(args.out, _meta("scan", cfg), columns, rows, args.json)
    if args.plot:
        from . import report
        fig = report.figure_scan(records, cfg.particle.g)
        report.save_figure(fig, _plot_path(args.out))
    return _EXIT_OK


def _cmd_resonance(args) -> int:
    cfg = _load_config(args)
    _check_out_flags(args)
    _require_circular_rest_frame(cfg, "resonance search")
    settings = ScanSettings(steps_per_period=cfg.sim.steps_per_period,
                            omega_l=cfg.wave.omega_l,
                            charge_sign=cfg.particle.charge_sign,
                            workers=args.workers)
    res = find_resonance(cfg.particle.g, settings)
    columns = ["g", "eta_peak", "eta_star", "amp_peak", "bracket_width", "steps"]
    rows = [(res.g, res.eta_peak, res.eta_star, res.amplitude_peak,
             res.bracket_width, cfg.sim.steps_per_period)]
    _write_table(args.out, _meta("resonance", cfg), columns, rows, args.json)
    if args.plot:
        from . import report
        fig = report.figure_resonance(res)
        report.save_figure(fig, _plot_path(args.out))
    return _EXIT_OK


def _cmd_trajectory(args) -> int:
    cfg = _load_config(args)
    _check_out_flags(args)
    model = build_model(cfg.wave, cfg.particle, cfg.frame)
    t_end = cfg.sim.t_end * 2.0 * np.pi / cfg.wave.omega_l
    n = max(2, int(round(cfg.sim.t_end * cfg.sim.steps_per_period)) + 1)
    t = np.linspace(0.0, t_end, n)
    pos = position(model, t)
    vel = velocity(model, t)
    acc = acceleration(model, t)
    phase = wave_phase(model, t)
    columns = ["t", "x", "y", "z", "vx", "vy", "vz", "ax", "ay", "az", "phase"]
    rows = [
        (t[i], pos[i, 0], pos[i, 1], pos[i, 2],
         vel[i, 0], vel[i, 1], vel[i, 2],
         acc[i, 0], acc[i, 1], acc[i, 2], phase[i])
        for i in range(n)
    ]
    _write_table(args.out, _meta("trajectory", cfg), columns, rows, args.json)
    if args.plot:
        from . import report
        fig = report.figure_trajectory(t, pos, vel)
        report.save_figure(fig, _plot_path(args.out))
    return _EXIT_OK


def _cmd_elliptic(args) -> int:
    _check_out_flags(args)
    m = args.m
    classify_modulus(m)  # raises on non-finite input
    if args.u is not None:
        u = np.asarray(args.u, dtype=float)
    else:
        u = np.linspace(args.u_min, args.u_max, args.points)
    tri = jacobi_eval(u, m)
    extra = {}
    if m < 1.0:
        extra["k_complete"] = _fmt(complete_k(m))
    columns = ["u", "m", "sn", "cn", "dn", "am"]
    sn, cn, dn, am = (np.atleast_1d(np.asarray(x)) for x in
                      (tri.sn, tri.cn, tri.dn, tri.am))
    uu = np.atleast_1d(u)
    rows = [(uu[i], m, sn[i], cn[i], dn[i], am[i]) for i in range(uu.size)]
    _write_table(args.out, _meta("elliptic", None, **extra), columns, rows,
                 args.json)
    if args.plot:
        from . import report
        fig = report.figure_elliptic(uu, tri, m)
        report.save_figure(fig, _plot_path(args.out))
    return _EXIT_OK


def _cmd_frame(args) -> int:
    cfg = _load_config(args)
    _check_out_flags(args)
    gamma = solve_average_rest_frame(cfg.wave)
    mu_sq = cfg.wave.eta ** 2 * (1.0 - 2.0 * cfg.wave.epsilon_sq) / gamma ** 2
    residual = abs(gamma - 2.0 * complete_k(mu_sq) / np.pi)
    columns = ["eta", "epsilon_sq", "omega_l", "gamma_z", "mu_sq", "residual"]
    rows = [(cfg.wave.eta, cfg.wave.epsilon_sq, cfg.wave.omega_l,
             gamma, mu_sq, residual)]
    _write_table(args.out, _meta("frame", cfg), columns, rows, args.json)
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinflip",
        description="Semiclassical spin-flip resonance simulator for a charged "
                    "spin-1/2 particle in an intense plane wave.")
    parser.add_argument("--version", action="version",
                        version=f"spinflip {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True, plot=True):
        if needs_config:
            p.add_argument("--config", metavar="PATH",
                           help="JSON run configuration")
            p.add_argument("--set", action="append", default=[],
                           metavar="KEY.PATH=VALUE",
                           help="override a configuration entry (repeatable)")
        p.add_argument("--out", metavar="PATH",
                       help="output CSV path (default: stdout)")
        p.add_argument("--json", action="store_true",
                       help="also write a JSON mirror next to the CSV")
        if plot:
            p.add_argument("--plot", action="store_true",
                           help="render a figure next to the CSV")

    p = sub.add_parser("simulate", help="propagate the spin and dump the series")
    common(p)
    p.add_argument("--dump-field", metavar="PATH",
                   help="also write the effective-field decomposition CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("scan", help="flip amplitude/frequency versus eta")
    common(p)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: SPINFLIP_THREADS or all cores)")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("resonance", help="locate the resonant field strength")
    common(p)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: SPINFLIP_THREADS or all cores)")
    p.set_defaults(func=_cmd_resonance)

    p = sub.add_parser("trajectory", help="sample the classical orbit")
    common(p)
    p.set_defaults(func=_cmd_trajectory)

    p = sub.add_parser("elliptic", help="evaluate the Jacobi kernel ad hoc")
    common(p, needs_config=False)
    p.add_argument("--m", type=float, required=True, help="squared modulus")
    p.add_argument("--u", type=float, action="append",
                   help="argument value (repeatable; overrides the grid)")
    p.add_argument("--u-min", type=float, default=0.0)
    p.add_argument("--u-max", type=float, default=6.283185307179586)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=_cmd_elliptic)

    p = sub.add_parser("frame", help="solve the average-rest-frame gamma_z")
    common(p, plot=False)
    p.set_defaults(func=_cmd_frame)

    return parser


def run_cli(argv) -> int:
    """Parse argv, dispatch, and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage/help; normalize the code
        return _EXIT_OK if exc.code in (0, None) else _EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"config_error: {violation}", file=sys.stderr)
        return _EXIT_CONFIG
    except RegimeError as exc:
        print(f"regime_error: {exc}", file=sys.stderr)
        return _EXIT_REGIME
    except ValueError as exc:
        print(f"value_error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
