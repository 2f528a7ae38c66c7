"""Command line for magnolink.

Exit status: 0 success, 1 error, 2 well-formed but dynamically unstable point.
"""

import argparse
import csv
import dataclasses
import json
import math
import sys

import magnolink
from magnolink.calibration import required_powers
from magnolink.config import Config, baseline_document
from magnolink.constants import C_LIGHT, TWO_PI
from magnolink.errors import ConfigError, MagnolinkError
from magnolink.sweep import FIGURES, figure_preset, run_sweep, unit_factor

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSTABLE = 2

FIGURE_COLUMNS = ("E_ca", "E_cm", "E_ab", "E_mb", "n_b_eff", "stable", "max_re")


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for unstable points
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _fmt(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".9g")


def write_csv(result, path, columns=FIGURE_COLUMNS):
    """Axis columns then ``columns``, one row per grid point in row-major order."""
    header = [a.column for a in result.spec.axes] + list(columns)
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for record in result.records:
            row = [_fmt(v) for v in record.coords]
            row += [_fmt(getattr(record.result, c)) for c in columns]
            writer.writerow(row)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True)


def _load(args):
    return Config.from_file(args.config, angular=args.angular)


def cmd_point(args):
    config = _load(args)
    op = config.operating_point()
    result = magnolink.evaluate_point(op)
    out = result.as_dict(spectrum=args.spectrum)
    out["operating_point"] = dataclasses.asdict(op)
    if config.mode != "coupling-specified":
        state = config.steady_state()
        out["steady_state"] = {
            "m_amp": [state.m_amp.real, state.m_amp.imag],
            "c_amp": [state.c_amp.real, state.c_amp.imag],
            "q_disp": state.q_disp,
            "phase_diagnostic": state.phase_diagnostic,
            "iterations": state.iterations,
        }
    print(_json(out))
    return EXIT_OK if result.stable else EXIT_UNSTABLE


def cmd_sweep(args):
    config = _load(args)
    spec = config.sweep_spec()
    path = args.output or config.doc.get("output", {}).get("path")
    if not path:
        raise ConfigError("sweep needs an output path (-o or output.path)")
    result = run_sweep(spec)
    columns = tuple(spec.outputs) + ("stable", "max_re")
    _write(result, path, columns)
    print(_json({"path": path, "rows": len(result.records), **result.meta}))
    return EXIT_OK


def _write(result, path, columns=FIGURE_COLUMNS):
    try:
        write_csv(result, path, columns)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}") from None


def _parse_override(text, base, angular):
    """``name=value`` with ``value`` in Hz (rad/s with --angular), K or a ratio."""
    name, sep, raw = text.partition("=")
    if not sep:
        raise ConfigError(f"--set expects name=value, got {text!r}")
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"--set {name}: {raw!r} is not a number") from None
    for unit in ("rad/s" if angular else "Hz", "K", "1"):
        try:
            factor = unit_factor(name, unit, base)
        except ConfigError as exc:
            if "unknown sweep parameter" in str(exc):
                raise
            continue
        return name, value * factor
    raise ConfigError(f"--set {name}: cannot determine units")


def cmd_figure(args):
    spec = figure_preset(args.name)
    base = spec.base
    for text in args.set or ():
        name, value = _parse_override(text, base, args.angular)
        base = base.with_value(name, value)
    spec = dataclasses.replace(spec, base=base)
    result = run_sweep(spec)
    _write(result, args.output)
    print(_json({"path": args.output, "rows": len(result.records), **result.meta}))
    return EXIT_OK


def cmd_calibrate(args):
    config = _load(args)
    params = config.system_params()
    target_Gm, target_Gc = config.calibration_targets()
    lambda_c = config.drives_doc.get("lambda_c")
    if lambda_c is None:
        lambda_c = TWO_PI * C_LIGHT / params.omega_c
    delta_m = config.system_value("delta_m")
    delta_c = config.system_value("delta_c")
    if delta_m is None or delta_c is None:
        raise ConfigError("calibrate needs system.delta_m and system.delta_c (effective detunings)")
    result = required_powers(
        target_Gm,
        target_Gc,
        params,
        config.geometry(),
        delta_m,
        delta_c,
        delta_a=config.system_value("delta_a"),
        lambda_c=lambda_c,
        gamma_gyro=config.gamma_gyro(),
    )
    out = result.as_dict()
    out["lambda_c"] = lambda_c
    print(_json(out))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="magnolink", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"magnolink {magnolink.__version__}")
    parser.add_argument(
        "--dump-config",
        nargs="?",
        const="-",
        metavar="CONFIG",
        help="print the normalized config (the baseline when no file is given) and exit",
    )
    parser.add_argument("--angular", action="store_true", help="config frequencies are angular (rad/s)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--angular", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("point", parents=[common], help="evaluate one operating point")
    p.add_argument("config")
    p.add_argument("--spectrum", action="store_true", help="include drift eigenvalues")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", parents=[common], help="run the sweep section of a config, write CSV")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", parents=[common], help="regenerate a figure dataset as CSV")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("output")
    p.add_argument("--set", action="append", metavar="NAME=VALUE", help="override a base parameter")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("calibrate", parents=[common], help="drive powers for target effective couplings")
    p.add_argument("config")
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.dump_config is not None:
            if args.dump_config == "-":
                config = Config(baseline_document(), angular=False)
            else:
                config = Config.from_file(args.dump_config, angular=args.angular)
            sys.stdout.write(config.dump())
            return EXIT_OK
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_ERROR
        return args.func(args)
    except MagnolinkError as exc:
        step = getattr(exc, "step", None)
        prefix = f"calibration step '{step}': " if step else ""
        print(f"magnolink: error: {prefix}{exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
