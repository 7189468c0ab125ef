"""Alternating minimization over the signal, the weights and the variances,
with the discrepancy / relative-change stopping rules."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .objective import ObjectiveContext, eval_T, mixed_norm
from .prior import (
    HyperPriorParams,
    HyperState,
    ThresholdParams,
    build_difference_operator,
    combine_operators,
)
from .problems import ForwardModel
from .solver_f import BregmanParams, bregman_solve_f
from .solver_gamma import update_gamma
from .solver_theta import bregman_solve_theta

__all__ = [
    "StopReason",
    "SolverConfig",
    "TraceEntry",
    "IterationTrace",
    "relative_change",
    "check_stopping",
    "first_stop",
    "build_context",
    "default_init",
    "run_aarm",
    "outer_bound",
]

log = logging.getLogger(__name__)


class StopReason(enum.Enum):
    CONTINUE = "continue"
    STOP_MISFIT = "misfit"
    STOP_REL_CHANGE = "rel_change"
    MAX_OUTER = "max_outer"


@dataclass(frozen=True)
class SolverConfig:
    """All knobs of the alternating solver.

    ``tau`` bounds the whitened misfit norm directly; since the whitened
    noise has norm close to ``sqrt(rows)``, useful values scale with the
    data length (the CLI default is ``1.5 * sqrt(rows)``).
    """

    bregman: BregmanParams = field(default_factory=BregmanParams)
    hyper_params: HyperPriorParams = field(default_factory=HyperPriorParams)
    threshold: ThresholdParams = field(default_factory=ThresholdParams)
    tau: float = 1.5
    delta: float = 1e-3
    max_outer: int = 50
    ar_orders: tuple[int, int] = (2, 0)

    def __post_init__(self):
        if not self.tau > 1:
            raise ValueError(f"outer.tau must exceed 1, got {self.tau}")
        if not self.delta > 0:
            raise ValueError(f"outer.delta must be positive, got {self.delta}")
        if self.max_outer < 1:
            raise ValueError("outer.max_outer must be at least 1")
        p, q = self.ar_orders
        if p not in (0, 1, 2) or q not in (0, 1, 2) or not p > q:
            raise ValueError(f"AR orders need p > q within {{0, 1, 2}}, got p={p}, q={q}")
        self.hyper_params.check_solvable()


@dataclass
class TraceEntry:
    k: int
    misfit: float
    objective: float
    delta_f: float
    delta_theta: float
    delta_gamma: float
    theta: np.ndarray
    gamma: np.ndarray
    p_theta: np.ndarray
    bregman_misfits: np.ndarray | None = None

    @property
    def rel_change(self) -> float:
        return float(np.sqrt(self.delta_f + self.delta_theta + self.delta_gamma))


@dataclass
class IterationTrace:
    """One entry for the initial state plus one per completed outer iteration."""

    entries: list[TraceEntry] = field(default_factory=list)
    stop_reason: StopReason = StopReason.CONTINUE

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def misfits(self) -> np.ndarray:
        return np.array([e.misfit for e in self.entries])

    @property
    def objectives(self) -> np.ndarray:
        return np.array([e.objective for e in self.entries])

    def hyper_state(self, k: int) -> HyperState:
        e = self.entries[k]
        return HyperState(e.theta, e.gamma, e.p_theta)


def relative_change(new, old) -> float:
    """``||new - old||^2 / ||new||^2`` with ``0/0 = 0`` and ``x/0 = inf``."""
    num = float(np.sum((np.asarray(new) - np.asarray(old)) ** 2))
    den = float(np.sum(np.asarray(new) ** 2))
    if den == 0.0:
        return 0.0 if num == 0.0 else np.inf
    return num / den


def check_stopping(trace: IterationTrace, config: SolverConfig) -> StopReason:
    """Classify the latest trace entry.

    The discrepancy rule needs one entry, the relative-change rule two; if
    both fire on the same entry the discrepancy rule is reported.
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    last = trace[-1]
    if last.misfit <= config.tau:
        return StopReason.STOP_MISFIT
    if len(trace) >= 2 and last.rel_change <= config.delta:
        return StopReason.STOP_REL_CHANGE
    return StopReason.CONTINUE


def first_stop(trace: IterationTrace, config: SolverConfig):
    """Earliest index at which the combined rule fires, with its reason,
    or ``(None, StopReason.CONTINUE)``."""
    for k in range(1, len(trace) + 1):
        reason = check_stopping(IterationTrace(trace.entries[:k]), config)
        if reason is not StopReason.CONTINUE:
            return k - 1, reason
    return None, StopReason.CONTINUE


def build_context(data, forward: ForwardModel, config: SolverConfig) -> ObjectiveContext:
    n = forward.shape[1] - 1
    p, q = config.ar_orders
    return ObjectiveContext(
        forward=forward,
        data=data,
        Lp=build_difference_operator(p, n),
        Lq=build_difference_operator(q, n),
        L1=build_difference_operator(1, n),
        hyper_params=config.hyper_params,
        threshold=config.threshold,
    )


def default_init(size: int, threshold: ThresholdParams, theta0: float = 0.5, gamma0: float = 1.0):
    """``f = 0``, ``theta = theta0`` and ``gamma = gamma0`` everywhere."""
    hyper = HyperState.from_theta(np.full(size, theta0), np.full(size, gamma0), threshold)
    return np.zeros(size), hyper


def run_aarm(data, forward: ForwardModel, config: SolverConfig, init: HyperState | None = None,
             f_init=None):
    """Alternate the three block updates until a stopping rule fires.

    Parameters
    ----------
    data : ndarray, shape (rows,)
        Measured data.
    forward : ForwardModel
        Linear forward map and whitening.
    config : SolverConfig
    init : HyperState, optional
        Initial weights and variances; defaults to ``theta = 0.5``,
        ``gamma = 1``.
    f_init : ndarray, optional
        Initial signal, zero by default.

    Returns
    -------
    f : ndarray
        Final signal estimate.
    hyper : HyperState
        Final weights, variances and exponents.
    trace : IterationTrace
        Initial state plus one entry per outer iteration.
    """
    ctx = build_context(data, forward, config)
    size = ctx.size
    f0, hyper0 = default_init(size, config.threshold)
    f = f0 if f_init is None else np.asarray(f_init, dtype=float).copy()
    hyper = hyper0 if init is None else init.copy()
    if hyper.p_theta is None:
        hyper = HyperState.from_theta(hyper.theta, hyper.gamma, config.threshold)

    trace = IterationTrace()
    trace.entries.append(
        TraceEntry(
            k=0,
            misfit=forward.whitened_misfit(ctx.data, f),
            objective=eval_T(f, hyper.gamma, hyper.theta, ctx, hyper.p_theta),
            delta_f=0.0,
            delta_theta=0.0,
            delta_gamma=0.0,
            theta=hyper.theta.copy(),
            gamma=hyper.gamma.copy(),
            p_theta=hyper.p_theta.copy(),
        )
    )

    for k in range(1, config.max_outer + 1):
        f_new, bregman_misfits = bregman_solve_f(f, ctx, hyper, config.bregman)
        theta_new = bregman_solve_theta(hyper.theta, f_new, hyper.gamma, ctx, config.bregman)
        p_new = ctx.p_theta(theta_new)
        F = combine_operators(ctx.Lp, ctx.Lq, theta_new) @ f_new
        gamma_new = update_gamma(F, p_new, config.hyper_params)
        new_hyper = HyperState(theta_new, gamma_new, p_new)

        entry = TraceEntry(
            k=k,
            misfit=forward.whitened_misfit(ctx.data, f_new),
            objective=eval_T(f_new, gamma_new, theta_new, ctx, p_new),
            delta_f=relative_change(f_new, f),
            delta_theta=relative_change(theta_new, hyper.theta),
            delta_gamma=relative_change(gamma_new, hyper.gamma),
            theta=theta_new.copy(),
            gamma=gamma_new.copy(),
            p_theta=p_new.copy(),
            bregman_misfits=bregman_misfits,
        )
        trace.entries.append(entry)
        f, hyper = f_new, new_hyper
        log.debug(
            "outer %d: misfit=%.6g T=%.6g rel_change=%.3g",
            k, entry.misfit, entry.objective, entry.rel_change,
        )
        reason = check_stopping(trace, config)
        if reason is not StopReason.CONTINUE:
            trace.stop_reason = reason
            break
    else:
        trace.stop_reason = StopReason.MAX_OUTER
    return f, hyper, trace


def outer_bound(trace: IterationTrace, f_star, ctx: ObjectiveContext, n_max: int) -> float:
    """Upper bound on the squared final misfit of :func:`run_aarm`.

    Averages ``(2/n_max) F_k(f*)`` over the completed outer iterations, where
    ``F_k`` is the halved mixed norm under the hyperparameters that the
    ``k``-th signal solve used, and adds ``||S(G f* - d)||^2``.
    """
    n_iter = len(trace) - 1
    if n_iter < 1:
        raise ValueError("trace has no completed outer iteration")
    total = 0.0
    for k in range(1, n_iter + 1):
        e = trace[k - 1]
        L_theta = combine_operators(ctx.Lp, ctx.Lq, e.theta)
        total += 2.0 / n_max * 0.5 * mixed_norm((L_theta @ f_star) / np.sqrt(e.gamma), e.p_theta)
    return total / n_iter + ctx.misfit_sq(f_star)
