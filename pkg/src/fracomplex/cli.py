"""Command line: ``fracomplex ops apply``, ``fracomplex simulate {1d|2d}`` and
``fracomplex regions``.

Every option can also come from a ``key = value`` file given with
``--config`` (``#`` starts a comment, keys use underscores); flags win.
Exit status is 0 on success, 2 for invalid flags or configuration and 3 for
mathematical domain errors, whose class name is printed on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .csvio import read_signal_csv, write_signal_csv
from .errors import DomainError, FracomplexError, UsageError
from .multiplier import PRESETS, OperatorParams, preset
from .operators import (
    UniformGrid,
    apply_adjoint_integration,
    apply_derivative,
    apply_integration,
    gaussian,
)
from .process import (
    ProcessSpec,
    SimulationConfig,
    region_map,
    simulate_1d,
    simulate_2d_separable,
    worker_count,
    write_realization_csv,
)
from .render import render_complex_png


def complex_arg(text: str) -> complex:
    """``RE,IM``, ``RE`` or a Python complex literal such as ``1.3-0.7j``."""
    text = text.strip()
    try:
        if "," in text:
            re_, im_ = text.split(",")
            value = complex(float(re_), float(im_))
        else:
            value = complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def read_config(path) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    with fh:
        for number, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise UsageError(f"{path}:{number}: expected 'key = value'")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


# ---------------------------------------------------------------------------
# parser


def _params_args(p):
    p.add_argument("--gamma", type=complex_arg, help="order gamma as RE,IM")
    p.add_argument("--a", type=complex_arg, help="multiplier weight for omega > 0 (default 1)")
    p.add_argument("--b", type=complex_arg, help="multiplier weight for omega < 0 (default 1)")
    p.add_argument("--preset", choices=PRESETS, help="take a and b from a named preset")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracomplex", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"fracomplex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ops = sub.add_parser("ops", help="apply an operator to a signal")
    ops_sub = ops.add_subparsers(dest="action", required=True)
    apply_ = ops_sub.add_parser("apply", help="D, I or I* applied to a CSV signal or a Gaussian")
    apply_.add_argument("--config", help="key = value file")
    apply_.add_argument("--op", choices=("d", "i", "iadj"))
    _params_args(apply_)
    apply_.add_argument("--k", type=nonneg_int, help="Taylor correction order (default floor(Re gamma))")
    apply_.add_argument("--input", help="'gaussian' or a signal CSV path")
    apply_.add_argument("--n", type=positive_int, help="samples of the Gaussian input (default 4096)")
    apply_.add_argument("--dx", type=positive_float, help="spacing of the Gaussian input (default 1/16)")
    apply_.add_argument("--center", type=float, help="Gaussian centre (default 0)")
    apply_.add_argument("--width", type=positive_float, help="Gaussian width (default 1)")
    apply_.add_argument("--detrend", type=nonneg_int,
                        help="derivative of a non-decaying input: polynomial trend degree")
    apply_.add_argument("--out", help="output CSV path")

    sim = sub.add_parser("simulate", help="realizations of S = I^(gamma;k) W_alpha")
    sim.add_argument("dim", choices=("1d", "2d"))
    sim.add_argument("--config", help="key = value file")
    sim.add_argument("--alpha", type=positive_float)
    _params_args(sim)
    sim.add_argument("--k", type=nonneg_int, help="override k(alpha, gamma)")
    sim.add_argument("--n", type=positive_int, help="samples along x (default 512)")
    sim.add_argument("--ny", type=positive_int, help="samples along y in 2D (default n)")
    sim.add_argument("--dx", type=positive_float, help="grid spacing (default 1/64)")
    sim.add_argument("--seed", type=nonneg_int, help="RNG seed (default 0)")
    sim.add_argument("--stream", type=nonneg_int, help="RNG stream in 1D (default 0)")
    sim.add_argument("--refine", type=positive_int, help="noise cells per output cell (default 4)")
    sim.add_argument("--pad", type=float, help="noise padding fraction per side (default 0.5)")
    sim.add_argument("--out", help="output prefix: PREFIX.csv (and PREFIX.png in 2D)")

    reg = sub.add_parser("regions", help="k(alpha, gamma) and whitenability over a grid")
    reg.add_argument("--config", help="key = value file")
    reg.add_argument("--n-alpha", type=positive_int, help="alpha samples in (0, 2] (default 100)")
    reg.add_argument("--n-gamma", type=positive_int, help="Re gamma samples in (0, gamma-max] (default 100)")
    reg.add_argument("--gamma-max", type=positive_float, help="largest Re gamma (default 3)")
    reg.add_argument("--out", help="output CSV path")
    return parser


DEFAULTS = {
    "apply": {"a": 1.0, "b": 1.0, "input": "gaussian", "n": 4096, "dx": 1.0 / 16, "center": 0.0,
              "width": 1.0},
    "simulate": {"a": 1.0, "b": 1.0, "n": 512, "dx": 1.0 / 64, "seed": 0, "stream": 0,
                 "refine": 4, "pad": 0.5},
    "regions": {"n_alpha": 100, "n_gamma": 100, "gamma_max": 3.0},
}
REQUIRED = {"apply": ("op", "gamma", "out"), "simulate": ("alpha", "gamma", "out"), "regions": ("out",)}


def _subparser(parser, args):
    sub = parser._subparsers._group_actions[0].choices[args.command]
    if args.command == "ops":
        sub = sub._subparsers._group_actions[0].choices[args.action]
    return sub


def _resolve(parser, argv) -> argparse.Namespace:
    """Parse flags, then fill unset options from --config, then built-in defaults."""
    args = parser.parse_args(argv)
    name = "apply" if args.command == "ops" else args.command
    if args.config:
        sub = _subparser(parser, args)
        known = {a.dest: a for a in sub._actions}
        for key, text in read_config(args.config).items():
            action = known.get(key)
            if action is None or key in ("config", "help", "dim"):
                raise UsageError(f"unknown config key {key!r}")
            if getattr(args, key) is not None:
                continue  # flags win
            try:
                value = action.type(text) if action.type else text
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config key {key}: {exc}") from None
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"config key {key}: {value!r} is not one of {list(action.choices)}")
            setattr(args, key, value)
    for key, value in DEFAULTS[name].items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    missing = [key for key in REQUIRED[name] if getattr(args, key) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return args


def _params(args) -> OperatorParams:
    if args.preset is not None:
        return preset(args.preset, args.gamma)
    return OperatorParams(args.a, args.b, args.gamma)


def _resolved(args) -> dict:
    skip = {"command", "action", "config", "dim"}
    out = {key: value for key, value in sorted(vars(args).items()) if key not in skip}
    out["version"] = __version__
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_ops_apply(args) -> int:
    params = _params(args)
    if args.input == "gaussian":
        # nodes at odd multiples of dx/2: x = 0 is avoided, where I* phi may be singular
        grid = UniformGrid(args.n, args.dx, (0.5 - args.n // 2) * args.dx)
        signal = gaussian(grid, args.center, args.width)
    else:
        try:
            signal, _ = read_signal_csv(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read input {args.input}: {exc.strerror}") from None
    k = math.floor(params.gamma.real) if args.k is None else args.k
    if args.op == "d":
        out = apply_derivative(params, signal, detrend=args.detrend)
    elif args.op == "i":
        out = apply_integration(params, k, signal)
    else:
        out = apply_adjoint_integration(params, k, signal)
    header = _resolved(args)
    header.update({"a": params.a, "b": params.b, "gamma": params.gamma, "k": k if args.op != "d" else None})
    write_signal_csv(args.out, out, header={f"run.{key}": value for key, value in header.items()})
    return 0


def cmd_simulate(args) -> int:
    params = _params(args)
    spec = ProcessSpec(args.alpha, params.gamma, params.a, params.b, k_override=args.k)
    header = {f"run.{key}": value for key, value in _resolved(args).items()}
    if args.dim == "1d":
        config = SimulationConfig(refine=args.refine, pad=args.pad)
        real = simulate_1d(spec, UniformGrid.centered(args.n, args.dx), args.seed, args.stream, config)
        write_realization_csv(f"{args.out}.csv", spec, real, header=header)
    else:
        config = SimulationConfig(refine=args.refine, pad=args.pad, far_ratio=1.0)
        ny = args.n if args.ny is None else args.ny
        grids = (UniformGrid.centered(args.n, args.dx), UniformGrid.centered(ny, args.dx))
        real = simulate_2d_separable(spec, grids, args.seed, config)
        write_realization_csv(f"{args.out}.csv", spec, real, header=header)
        render_complex_png(real.values, f"{args.out}.png")
    return 0


def cmd_regions(args) -> int:
    alphas = 2.0 * np.arange(1, args.n_alpha + 1) / args.n_alpha
    gammas = args.gamma_max * np.arange(1, args.n_gamma + 1) / args.n_gamma
    with open(args.out, "w") as fh:
        fh.write("# fracomplex regions v1\n")
        for key, value in _resolved(args).items():
            fh.write(f"# {key} = {value!r}\n")
        fh.write("alpha,re_gamma,k,whitenable,forbidden\n")
        for row in region_map(alphas, gammas):
            k = "" if row["k"] is None else str(row["k"])
            fh.write(f"{row['alpha']!r},{row['re_gamma']!r},{k},{int(row['whitenable'])},{int(row['forbidden'])}\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        worker_count()
    except DomainError as exc:
        print(f"fracomplex: UsageError: {exc}", file=sys.stderr)
        return 2
    try:
        args = _resolve(parser, argv)
    except SystemExit as exc:  # argparse usage errors and --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"fracomplex: UsageError: {exc}", file=sys.stderr)
        return 2
    handler = {"ops": cmd_ops_apply, "simulate": cmd_simulate, "regions": cmd_regions}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"fracomplex: UsageError: {exc}", file=sys.stderr)
        return 2
    except FracomplexError as exc:
        print(f"fracomplex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"fracomplex: UsageError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
