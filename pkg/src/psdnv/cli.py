"""Command-line entry point: ``psdnv {qwp-sweep,power-sweep,map,fit} --config FILE --out FILE``.

Exit status is 0 on success, 2 for invalid input (bad config, bad data file,
wrong sweep kind) and 1 for failures during the computation.
"""
import argparse
import json
import math
import sys

import numpy as np

from . import runner
from .scenario import ScenarioError, dump_scenario, load_scenario

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


def _print_meta(table, stream):
    for key, val in table.meta.items():
        print(f"{key}={val:.17g}", file=stream)


def _cmd_sweep(run):
    def cmd(args, scenario):
        table = run(scenario)
        runner.emit_csv(table, args.out)
        _print_meta(table, sys.stdout)
        return table
    return cmd


def _fit_table(args, scenario):
    """Sine fit of theta/B data (from ``--data`` or a fresh qwp sweep), or a line fit of power data."""
    if args.data:
        data = runner.read_csv(args.data)
    else:
        data = runner.run_qwp_sweep(scenario)
    cols = data.columns
    table = runner.Table(["parameter", "value", "unit"])
    if "P_mW" in cols and "B_m11_nT" in cols:
        fit = runner.linear_fit(data.column("P_mW"), data.column("B_m11_nT"))
        table.rows = [("slope", fit.slope, "nT/mW"), ("intercept", fit.intercept, "nT"),
                      ("r_squared", fit.r_squared, "1")]
        return table
    ycol = next((c for c in ("B_m11_exact_nT", "B_est_nT", "B_nT") if c in cols), None)
    if "theta_deg" not in cols or ycol is None:
        raise ScenarioError(f"{args.data}: fit needs columns theta_deg and B_m11_exact_nT (or B_est_nT, B_nT), "
                            f"or P_mW and B_m11_nT; found {cols}")
    fit = runner.sine_fit(np.radians(data.column("theta_deg")), data.column(ycol))
    table.rows = [("amplitude", fit.amplitude, "nT"), ("offset", fit.offset, "nT"),
                  ("phase", math.degrees(fit.phase), "deg"), ("rms_residual", fit.rms_residual, "nT"),
                  ("angle_offset", math.degrees(fit.angle_offset), "deg")]
    return table


def _cmd_fit(args, scenario):
    table = _fit_table(args, scenario)
    runner.emit_csv(table, args.out)
    for name, val, unit in table.rows:
        print(f"{name}={val:.17g} {unit}")
    return table


COMMANDS = {
    "qwp-sweep": (_cmd_sweep(runner.run_qwp_sweep), "Effective field and XY8 readout versus quarter-wave-plate angle."),
    "power-sweep": (_cmd_sweep(runner.run_power_sweep), "Effective field versus beam power, with a line fit."),
    "map": (_cmd_sweep(runner.run_spatial_map), "Effective-field map over a plane near an SPP, slab or fiber."),
    "fit": (_cmd_fit, "Sine fit of QWP data (or line fit of power data)."),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="psdnv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--verbose", action="store_true", help="print the resolved scenario, defaults included")
        if name == "fit":
            p.add_argument("--data", help="CSV from qwp-sweep or power-sweep; default: run the config's qwp sweep")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        scenario = load_scenario(args.config)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.verbose:
        print(dump_scenario(scenario), end="", file=sys.stderr)
    handler = COMMANDS[args.command][0]
    try:
        handler(args, scenario)
    except (ScenarioError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
