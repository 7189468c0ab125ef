"""Adaptive augmented regularization (AARM) for 1-D linear inverse problems."""

from .baselines import solve_tikhonov, solve_tv
from .config import ConfigError, ExperimentConfig, build_config, parse_config
from .experiment import ExperimentReport, emit_csv, relative_error, run_experiment
from .objective import ObjectiveContext, eval_T
from .outer import IterationTrace, SolverConfig, StopReason, run_aarm
from .prior import HyperPriorParams, HyperState, ThresholdParams
from .problems import ForwardModel, KernelKind, KernelSpec, NoiseSpec
from .solver_f import BregmanParams

__version__ = "0.1.0"

__all__ = [
    "BregmanParams",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "ForwardModel",
    "HyperPriorParams",
    "HyperState",
    "IterationTrace",
    "KernelKind",
    "KernelSpec",
    "NoiseSpec",
    "ObjectiveContext",
    "SolverConfig",
    "StopReason",
    "ThresholdParams",
    "build_config",
    "emit_csv",
    "eval_T",
    "parse_config",
    "relative_error",
    "run_aarm",
    "run_experiment",
    "solve_tikhonov",
    "solve_tv",
]
