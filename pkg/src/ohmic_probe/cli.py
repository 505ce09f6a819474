"""Command-line front end: ``ohmic-probe <command> [options]``.

Every command writes a table. CSV output starts with a comment line
``# ohmic-probe v<version> config=<canonical config>``, followed by the
header row and one row per record; floats use the shortest repr that
round-trips. All quantities are in units of the probe frequency.

Exit status: 0 success, 2 bad configuration, 3 numerical failure (or a
failed ``validate`` suite), 4 boundary maximum under ``--strict``.
"""
import argparse
import io
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .decoherence import BathSpec, dgamma_domegac, gamma, gamma_values
from .errors import BoundaryMaximumWarning, OhmicProbeError
from .estimation import fi_sigma1, qfi_closed
from .optimizer import maximize_qsnr, scan_cutoff
from .validation import SUITES

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_BOUNDARY = 4

FIG1_S = (0.5, 1.0, 3.0)
FIG1_OMEGA_C = (1e-2, 1.0, 1e2)
FIG1_TAU = dict(tau_min=1e-2, tau_max=1e2, tau_points=41)
FIG2_T = (0.1, 0.5, 1.0, 5.0, 10.0)
FIG2_OMEGA_C = dict(omega_c_min=1e-3, omega_c_max=1e3, omega_c_points=37)
PRESETS = {"fig1-left": 1e2, "fig1-right": 1e-2, "fig2": None}
UNITS_NOTE = "_w0units"


class ConfigError(Exception):
    pass


def fmt(x):
    """Shortest round-trip text for one table cell."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, np.integer):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _grid(lo, hi, n, name):
    if lo is None or hi is None:
        raise ConfigError(f"--{name}-min and --{name}-max are required")
    if n < 1 or not (0 < lo <= hi) or (n == 1 and lo != hi):
        raise ConfigError(f"invalid {name} range")
    return [float(v) for v in np.geomspace(lo, hi, n)]


def _taus(args):
    if args.tau is not None:
        if args.tau < 0 or not math.isfinite(args.tau):
            raise ConfigError("--tau must be finite and >= 0")
        return [args.tau]
    return _grid(args.tau_min, args.tau_max, args.tau_points, "tau")


def _bath(args):
    if args.s is None or args.omega_c is None:
        raise ConfigError("--s and --omega-c are required")
    try:
        return BathSpec(args.s, args.omega_c, args.temp)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_gamma(args):
    bath = _bath(args)
    rows = []
    for t in _taus(args):
        r = gamma(t, bath, method=args.method, tol=args.tol)
        rows.append({"tau": t, "gamma": r.value, "method": r.method.value, "err": r.err_estimate})
    return rows, False


def cmd_qfi(args):
    bath = _bath(args)
    rows = []
    for t in _taus(args):
        h = qfi_closed(t, bath)
        rows.append({"tau": t, "qfi": h, "fi_sigma1": fi_sigma1(t, bath), "qsnr": bath.omega_c**2 * h})
    return rows, False


def _opt_row(bath, res, error=None):
    row = {"s": bath.s, "omega_c": bath.omega_c, "temperature": bath.temperature}
    if res is None:
        row.update(tau_opt=None, q_opt=None, n_evals=None, bracket_lo=None, bracket_hi=None, converged=False)
    else:
        row.update(
            tau_opt=res.tau_opt,
            q_opt=res.q_opt,
            n_evals=res.n_evals,
            bracket_lo=res.bracket[0],
            bracket_hi=res.bracket[1],
            converged=res.converged,
        )
    row["at_boundary"] = bool(res is not None and res.at_boundary)
    row["error"] = "" if error is None else type(error).__name__
    return row


def cmd_optimize(args):
    bath = _bath(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryMaximumWarning)
        res = maximize_qsnr(bath)
    return [_opt_row(bath, res)], res.at_boundary


def _scan_rows(s_values, temps, grid, workers):
    rows, boundary = [], False
    for s in s_values:
        for temp in temps:
            for pt in scan_cutoff(s, temp, grid, workers=workers):
                boundary |= pt.result is not None and pt.result.at_boundary
                if pt.result is None:
                    raise pt.error
                rows.append(_opt_row(BathSpec(s, pt.omega_c, temp), pt.result))
    return rows, boundary


def cmd_scan(args):
    s_values = [args.s] if args.s is not None else list(FIG1_S)
    temps = [args.temp] if args.temp_given else list(FIG2_T)
    if args.omega_c_min is None and args.omega_c_max is None:
        grid = _grid(FIG2_OMEGA_C["omega_c_min"], FIG2_OMEGA_C["omega_c_max"], FIG2_OMEGA_C["omega_c_points"], "omega-c")
    else:
        grid = _grid(args.omega_c_min, args.omega_c_max, args.omega_c_points, "omega-c")
    return _scan_rows(s_values, temps, grid, args.workers)


def _fig1_rows(preset):
    temp = PRESETS[preset]
    tau = _grid(FIG1_TAU["tau_min"], FIG1_TAU["tau_max"], FIG1_TAU["tau_points"], "tau")
    rows = []
    for s in FIG1_S:
        for wc in FIG1_OMEGA_C:
            g = gamma_values(np.array(tau), BathSpec(s, wc, temp))
            rows.extend(
                {"preset": preset, "s": s, "omega_c": wc, "temperature": temp, "tau": t, "gamma": float(v)}
                for t, v in zip(tau, g)
            )
    return rows


def cmd_figures(args):
    presets = [args.preset] if args.preset else list(PRESETS)
    rows, boundary = [], False
    for p in presets:
        if p == "fig2":
            grid = _grid(FIG2_OMEGA_C["omega_c_min"], FIG2_OMEGA_C["omega_c_max"], FIG2_OMEGA_C["omega_c_points"], "omega-c")
            r, b = _scan_rows(FIG1_S, FIG2_T, grid, args.workers)
            rows.extend({"preset": p, **row} for row in r)
            boundary |= b
        else:
            rows.extend(_fig1_rows(p))
    return rows, boundary


def cmd_validate(args):
    rows = []
    for name, suite in SUITES.items():
        rep = suite()
        rows.append(
            {"suite": name, "checked": rep.n_checked, "failed": rep.n_failed, "worst_rel": rep.worst, "passed": rep.passed}
        )
    return rows, False


COMMANDS = {
    "gamma": cmd_gamma,
    "qfi": cmd_qfi,
    "optimize": cmd_optimize,
    "scan": cmd_scan,
    "figures": cmd_figures,
    "validate": cmd_validate,
}

_CONFIG_KEYS = (
    "s", "omega_c", "temp", "tau", "tau_min", "tau_max", "tau_points",
    "omega_c_min", "omega_c_max", "omega_c_points", "method", "tol", "preset", "strict",
)


def canonical_config(args):
    """``key=value`` pairs joined by ``;`` in a fixed order; unset keys omitted."""
    parts = [f"command={args.command}"]
    for k in _CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is None or (k == "strict" and not v):
            continue
        if k == "tau_points" and args.tau_min is None and args.tau_max is None:
            continue
        if k == "omega_c_points" and args.omega_c_min is None and args.omega_c_max is None:
            continue
        if k == "temp" and not args.temp_given and args.command in ("scan", "figures", "validate"):
            continue
        parts.append(f"{k}={fmt(v)}")
    return ";".join(parts)


def render_csv(rows, config):
    buf = io.StringIO()
    buf.write(f"# ohmic-probe v{__version__} config={config} units={UNITS_NOTE}\n")
    if rows:
        cols = list(rows[0])
        buf.write(",".join(cols) + "\n")
        for r in rows:
            buf.write(",".join(fmt(r[c]) for c in cols) + "\n")
    return buf.getvalue()


def render_json(rows, config, args):
    meta = {
        "program": "ohmic-probe",
        "version": __version__,
        "config": config,
        "units": UNITS_NOTE,
        "tolerance": args.tol,
        "method": args.method,
    }
    return json.dumps({"metadata": meta, "rows": rows}, indent=2, allow_nan=False) + "\n"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", type=float, help="ohmicity exponent s > 0")
    common.add_argument("--omega-c", type=float, help="cutoff frequency")
    common.add_argument("--temp", type=float, default=None, help="temperature (default 0)")
    common.add_argument("--tau", type=float, help="single interaction time")
    common.add_argument("--tau-min", type=float)
    common.add_argument("--tau-max", type=float)
    common.add_argument("--tau-points", type=int, default=50)
    common.add_argument("--omega-c-min", type=float)
    common.add_argument("--omega-c-max", type=float)
    common.add_argument("--omega-c-points", type=int, default=25)
    common.add_argument("--method", choices=("auto", "closed", "series", "quadrature"), default="auto")
    common.add_argument("--tol", type=float, default=None, help="evaluator tolerance (series/quadrature)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--preset", choices=tuple(PRESETS), help="figure dataset (figures command)")
    common.add_argument("--strict", action="store_true", help="exit 4 on a boundary maximum")
    common.add_argument("--workers", type=int, default=1, help="threads for cutoff scans")

    parser = argparse.ArgumentParser(prog="ohmic-probe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ohmic-probe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "gamma": "decoherence function rows (tau, gamma, method, err)",
        "qfi": "Fisher information rows (tau, qfi, fi_sigma1, qsnr)",
        "optimize": "optimal interaction time for one bath",
        "scan": "optimal time and QSNR against the cutoff",
        "figures": "datasets behind the figure presets",
        "validate": "run the self-check suites",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.temp_given = args.temp is not None
    if args.temp is None:
        args.temp = 0.0
    try:
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be > 0")
        if args.preset and args.command != "figures":
            raise ConfigError("--preset only applies to the figures command")
        rows, boundary = COMMANDS[args.command](args)
    except (ConfigError, OhmicProbeError, ValueError) as exc:
        if isinstance(exc, (ConfigError, ValueError)) and not isinstance(exc, ArithmeticError):
            print(f"ohmic-probe: error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"ohmic-probe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ArithmeticError as exc:
        print(f"ohmic-probe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    config = canonical_config(args)
    text = render_csv(rows, config) if args.format == "csv" else render_json(rows, config, args)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.command == "validate" and not all(r["passed"] for r in rows):
        return EXIT_NUMERIC
    if boundary:
        print("ohmic-probe: warning: QSNR maximum on the search-domain edge", file=sys.stderr)
        if args.strict:
            return EXIT_BOUNDARY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
