"""Benchmark experiments: build a problem, run solvers, tabulate and emit CSV."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import solve_tikhonov, solve_tv
from .config import ExperimentConfig
from .outer import IterationTrace, default_init, run_aarm
from .prior import HyperState
from .problems import ForwardModel, add_noise, benchmark_signal, build_convolution_matrix, grid

__all__ = [
    "Problem",
    "ExperimentReport",
    "ExperimentError",
    "build_problem",
    "relative_error",
    "run_experiment",
    "emit_csv",
    "SAMPLES_HEADER",
    "ITERATIONS_HEADER",
    "SUMMARY_HEADER",
]

log = logging.getLogger(__name__)

SAMPLES_HEADER = ("index", "t", "f_true", "f_aarm", "f_tikhonov", "f_tv", "theta", "gamma", "p_theta")
ITERATIONS_HEADER = ("k", "misfit", "objective_T", "delta_f", "delta_theta", "delta_gamma", "stop_reason")
SUMMARY_HEADER = ("solver", "rel_l2_error", "wall_time_s", "outer_iters", "seed")


class ExperimentError(RuntimeError):
    """A solver failed numerically; the message names the experiment."""


@dataclass
class Problem:
    t: np.ndarray
    f_true: np.ndarray
    data: np.ndarray
    forward: ForwardModel


@dataclass
class ExperimentReport:
    """Per-sample, per-iteration and summary tables of one experiment.

    ``wall_times`` holds measured seconds per solver; they are only written
    to CSV on request so that repeated runs produce identical files.
    """

    t: np.ndarray
    f_true: np.ndarray
    seed: int
    estimates: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    outer_iters: dict = field(default_factory=dict)
    wall_times: dict = field(default_factory=dict)
    hyper: HyperState | None = None
    trace: IterationTrace | None = None

    @property
    def solvers(self) -> tuple[str, ...]:
        return tuple(self.estimates)


def relative_error(f_est, f_true) -> float:
    """``||f_est - f_true|| / ||f_true||``."""
    f_true = np.asarray(f_true, dtype=float)
    den = np.linalg.norm(f_true)
    if den == 0:
        raise ValueError("relative error undefined for a zero reference signal")
    return float(np.linalg.norm(np.asarray(f_est, dtype=float) - f_true) / den)


def build_problem(config: ExperimentConfig) -> Problem:
    t = grid(0.0, 1.0, config.n)
    f_true = benchmark_signal(config.signal, t)
    G = build_convolution_matrix(config.kernel, config.m, config.n)
    data, S = add_noise(G @ f_true, config.noise, reference=f_true)
    return Problem(t, f_true, data, ForwardModel(G, S))


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every configured solver on the configured problem."""
    problem = build_problem(config)
    report = ExperimentReport(t=problem.t, f_true=problem.f_true, seed=config.seed)
    for name in config.solvers:
        start = time.perf_counter()
        try:
            if name == "aarm":
                f0, init = default_init(
                    problem.t.shape[0], config.solver.threshold, config.theta0, config.gamma0
                )
                f, hyper, trace = run_aarm(problem.data, problem.forward, config.solver, init, f0)
                report.hyper, report.trace = hyper, trace
                report.outer_iters[name] = len(trace) - 1
            elif name == "tikhonov":
                f = solve_tikhonov(problem.data, problem.forward, config.lambda_tik)
                report.outer_iters[name] = 1
            elif name == "tv":
                f = solve_tv(problem.data, problem.forward, config.lambda_tv, config.tv_bregman)
                report.outer_iters[name] = config.tv_bregman.n_max
            else:
                raise ValueError(f"unknown solver {name!r}")
        except (np.linalg.LinAlgError, ArithmeticError, RuntimeError) as exc:
            raise ExperimentError(
                f"{name} failed on signal={config.signal} n={config.n} m={config.m} "
                f"seed={config.seed}: {type(exc).__name__}: {exc}"
            ) from exc
        report.wall_times[name] = time.perf_counter() - start
        if not np.all(np.isfinite(f)):
            raise ExperimentError(f"{name} produced non-finite values (seed={config.seed})")
        report.estimates[name] = f
        report.errors[name] = relative_error(f, problem.f_true)
        log.info("%s: rel_l2_error=%.6g", name, report.errors[name])
    return report


def _fmt(x) -> str:
    if isinstance(x, (str, np.str_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def _write(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(report: ExperimentReport, out_dir, timing: bool = False) -> list[Path]:
    """Write ``samples.csv``, ``iterations.csv`` and ``summary.csv``.

    Floats carry 17 significant digits. Wall times are written as ``nan``
    unless ``timing`` is set.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cols = ["index", "t", "f_true"] + [f"f_{s}" for s in ("aarm", "tikhonov", "tv") if s in report.estimates]
    hyper = report.hyper
    if hyper is not None:
        cols += ["theta", "gamma", "p_theta"]
    size = report.t.shape[0]
    sample_rows = []
    for i in range(size):
        row = [i, report.t[i], report.f_true[i]]
        row += [report.estimates[s][i] for s in ("aarm", "tikhonov", "tv") if s in report.estimates]
        if hyper is not None:
            row += [hyper.theta[i], hyper.gamma[i], int(hyper.p_theta[i])]
        sample_rows.append(row)

    iter_rows = []
    if report.trace is not None:
        last = len(report.trace) - 1
        for e in report.trace.entries:
            reason = report.trace.stop_reason.value if e.k == last else "continue"
            iter_rows.append(
                [e.k, e.misfit, e.objective, e.delta_f, e.delta_theta, e.delta_gamma, reason]
            )

    summary_rows = [
        [s, report.errors[s], report.wall_times.get(s, np.nan) if timing else np.nan,
         report.outer_iters.get(s, 0), report.seed]
        for s in report.estimates
    ]

    paths = [out / "samples.csv", out / "iterations.csv", out / "summary.csv"]
    _write(paths[0], cols, sample_rows)
    _write(paths[1], ITERATIONS_HEADER, iter_rows)
    _write(paths[2], SUMMARY_HEADER, summary_rows)
    return paths
