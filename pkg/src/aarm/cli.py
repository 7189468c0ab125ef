"""Command-line entry point: ``aarm run|compare|kernel|signal``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import PRESETS, SOLVERS, ConfigError, build_config, parse_config_text
from .experiment import ExperimentError, emit_csv, run_experiment
from .problems import SIGNAL_NAMES, KernelKind, KernelSpec, benchmark_signal, grid, kernel_function

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("aarm")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aarm", description="Adaptive augmented regularization for 1-D deconvolution."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("run", "run the solver(s) selected in the configuration"),
        ("compare", "run AARM, Tikhonov and TV on one problem"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", nargs="?", help="configuration file (key = value lines)")
        p.add_argument("--preset", choices=tuple(PRESETS))
        p.add_argument("--seed", type=int)
        p.add_argument("--out-dir", default=".", help="directory for the CSV files")
        p.add_argument("--quiet", action="store_true")
        p.add_argument("--timing", action="store_true",
                       help="record wall times in summary.csv (output no longer reproducible)")

    k = sub.add_parser("kernel", help="dump kernel samples K(j/n)")
    k.add_argument("--kind", choices=[kk.value for kk in KernelKind], required=True)
    k.add_argument("--kappa", type=float, default=1000.0)
    k.add_argument("--amplitude", type=float, default=500.0)
    k.add_argument("--peak-freq", type=float, default=50.0)
    k.add_argument("--n", type=int, default=500)
    k.add_argument("--half-width", type=int, default=50, help="lags j = -w..w")
    k.add_argument("--out-dir")
    k.add_argument("--quiet", action="store_true")

    s = sub.add_parser("signal", help="dump a benchmark signal on the grid j/n")
    s.add_argument("--name", choices=SIGNAL_NAMES, required=True)
    s.add_argument("--n", type=int, default=500)
    s.add_argument("--out-dir")
    s.add_argument("--quiet", action="store_true")
    return parser


def _load(args, force_all: bool):
    if args.config is not None:
        path = Path(args.config)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
        values = parse_config_text(text)
    else:
        values = {}
    if force_all:
        values = {**values, "solver": SOLVERS}
    return build_config(values, preset=args.preset, seed=args.seed)


def _dump(header, columns, out_dir, filename):
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer)) else "%.17g" % v for v in row))
    text = "\n".join(lines) + "\n"
    if out_dir is None:
        sys.stdout.write(text)
        return None
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    path = path / filename
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _cmd_experiment(args, force_all: bool) -> int:
    config = _load(args, force_all)
    report = run_experiment(config)
    paths = emit_csv(report, args.out_dir, timing=args.timing)
    if not args.quiet:
        for s in report.solvers:
            line = f"{s:9s} rel_l2_error={report.errors[s]:.6g}"
            if s == "aarm" and report.trace is not None:
                line += f" outer_iters={len(report.trace) - 1} stop={report.trace.stop_reason.value}"
            print(line)
        for p in paths:
            print(f"wrote {p}")
    return EXIT_OK


def _cmd_kernel(args) -> int:
    if args.n < 1 or args.half_width < 0:
        raise ConfigError("kernel: need n >= 1 and half-width >= 0")
    spec = KernelSpec(KernelKind(args.kind), args.kappa, args.amplitude, args.peak_freq)
    lags = np.arange(-args.half_width, args.half_width + 1)
    t = lags / args.n
    path = _dump(("lag", "t", "k"), (lags, t, kernel_function(spec)(t)), args.out_dir, "kernel.csv")
    if path is not None and not args.quiet:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_signal(args) -> int:
    if args.n < 1:
        raise ConfigError("signal: need n >= 1")
    t = grid(0.0, 1.0, args.n)
    f = benchmark_signal(args.name, t)
    path = _dump(("index", "t", "f"), (np.arange(t.shape[0]), t, f), args.out_dir, "signal.csv")
    if path is not None and not args.quiet:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return _cmd_experiment(args, force_all=False)
        if args.command == "compare":
            return _cmd_experiment(args, force_all=True)
        if args.command == "kernel":
            return _cmd_kernel(args)
        return _cmd_signal(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ExperimentError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
