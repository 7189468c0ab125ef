"""Experiment configuration: a line-oriented ``section.key = value`` format.

Blank lines and ``#`` comments are ignored. Omitted keys take the defaults
below, which reproduce the smooth-signal experiment. Presets override a
handful of keys; explicit keys in a file override the preset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .outer import SolverConfig
from .prior import HyperPriorParams, ThresholdParams
from .problems import SIGNAL_NAMES, KernelKind, KernelSpec, NoiseSpec
from .solver_f import BregmanParams

__all__ = [
    "ConfigError",
    "DEFAULTS",
    "PRESETS",
    "SOLVERS",
    "ExperimentConfig",
    "parse_config",
    "parse_config_text",
    "build_config",
]

SOLVERS = ("aarm", "tikhonov", "tv")


class ConfigError(ValueError):
    """Malformed or invalid configuration."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _tau(text: str):
    return None if text.strip().lower() == "auto" else float(text)


def _solvers(text: str) -> tuple[str, ...]:
    names = [s.strip().lower() for s in text.split(",") if s.strip()]
    if names == ["all"]:
        return SOLVERS
    bad = [s for s in names if s not in SOLVERS]
    if bad or not names:
        raise ValueError(f"unknown solver(s) {bad or text!r}; expected {SOLVERS} or 'all'")
    return tuple(s for s in SOLVERS if s in names)


def _choice(options):
    def parse(text: str) -> str:
        low = text.strip().lower()
        if low not in options:
            raise ValueError(f"expected one of {options}, got {text!r}")
        return low

    return parse


# key -> (converter, default)
DEFAULTS = {
    "solver": (_solvers, ("aarm",)),
    "problem.signal": (_choice(SIGNAL_NAMES), "smooth"),
    "problem.n": (_int, 500),
    "problem.m": (_int, 500),
    "kernel.kind": (_choice(("airy", "ricker")), "airy"),
    "kernel.kappa": (float, 1000.0),
    "kernel.amplitude": (float, 500.0),
    "kernel.peak_freq": (float, 50.0),
    "noise.sigma": (float, 0.1),
    "noise.seed": (_int, 0),
    "noise.variance_convention": (_bool, False),
    "noise.abs_max": (_bool, True),
    "hyper.r": (float, 1.0),
    "hyper.beta": (float, 2.0),
    "hyper.gamma_bar": (float, 1.0),
    "hyper.eta": (float, 1.0),
    "threshold.M": (float, 2.0),
    "threshold.m": (float, 0.5),
    "threshold.rho": (float, 0.9),
    "bregman.n_max": (_int, 20),
    "bregman.n_hat_max": (_int, 20),
    "bregman.lambda_tilde": (float, 10.0),
    "outer.tau": (_tau, None),
    "outer.delta": (float, 1e-3),
    "outer.max_outer": (_int, 50),
    "outer.p": (_int, 2),
    "outer.q": (_int, 0),
    "init.theta": (float, 0.5),
    "init.gamma": (float, 1.0),
    "tikhonov.lambda": (float, 1.0),
    "tv.lambda": (float, 1.0),
    "tv.n_max": (_int, 20),
    "tv.n_hat_max": (_int, 20),
    "tv.lambda_tilde": (float, 10.0),
}

PRESETS = {
    "smooth": {"problem.signal": "smooth", "kernel.kind": "airy", "noise.sigma": 0.1},
    "piecewise": {
        "problem.signal": "piecewise",
        "kernel.kind": "ricker",
        "kernel.peak_freq": 50.0,
        "noise.sigma": 0.0005,
    },
    "mixed": {"problem.signal": "mixed", "kernel.kind": "airy", "noise.sigma": 0.02},
}


@dataclass(frozen=True)
class ExperimentConfig:
    signal: str = "smooth"
    n: int = 500
    m: int = 500
    kernel: KernelSpec = field(default_factory=KernelSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    solver: SolverConfig = field(default_factory=lambda: SolverConfig(tau=1.5 * math.sqrt(501)))
    theta0: float = 0.5
    gamma0: float = 1.0
    lambda_tik: float = 1.0
    lambda_tv: float = 1.0
    tv_bregman: BregmanParams = field(default_factory=BregmanParams)
    solvers: tuple[str, ...] = ("aarm",)
    values: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def seed(self) -> int:
        return self.noise.seed


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a dict of converted values."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in DEFAULTS:
            raise ConfigError(f"unknown key {key!r}", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", key=key, line=lineno)
        if not value:
            raise ConfigError(f"missing value for {key!r}", key=key, line=lineno)
        try:
            values[key] = DEFAULTS[key][0](value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}", key=key, line=lineno) from None
    return values


def _validated(key: str, build):
    try:
        return build()
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}", key=key) from None


def build_config(values: dict | None = None, preset: str | None = None,
                 seed: int | None = None) -> ExperimentConfig:
    """Merge defaults, a preset, explicit values and a seed override."""
    merged = {key: default for key, (_, default) in DEFAULTS.items()}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; expected one of {tuple(PRESETS)}")
        merged.update(PRESETS[preset])
    merged.update(values or {})
    if seed is not None:
        merged["noise.seed"] = seed
    v = merged

    n, m = v["problem.n"], v["problem.m"]
    if n < 2:
        raise ConfigError(f"problem.n: need n >= 2, got {n}", key="problem.n")
    if not 0 <= m <= n:
        raise ConfigError(f"problem.m: need 0 <= m <= n, got m={m}, n={n}", key="problem.m")
    kernel = _validated(
        "kernel",
        lambda: KernelSpec(
            kind=KernelKind(v["kernel.kind"]),
            kappa=v["kernel.kappa"],
            amplitude=v["kernel.amplitude"],
            peak_freq=v["kernel.peak_freq"],
        ),
    )
    noise = _validated(
        "noise.sigma",
        lambda: NoiseSpec(
            sigma=v["noise.sigma"],
            seed=v["noise.seed"],
            variance_convention=v["noise.variance_convention"],
            abs_max=v["noise.abs_max"],
        ),
    )
    hyper = _validated(
        "hyper.beta",
        lambda: HyperPriorParams(
            r=v["hyper.r"], beta=v["hyper.beta"], gamma_bar=v["hyper.gamma_bar"], eta=v["hyper.eta"]
        ),
    )
    _validated("hyper.beta", hyper.check_solvable)
    threshold = _validated(
        "threshold",
        lambda: ThresholdParams(M=v["threshold.M"], m=v["threshold.m"], rho=v["threshold.rho"]),
    )
    bregman = _validated(
        "bregman",
        lambda: BregmanParams(v["bregman.n_max"], v["bregman.n_hat_max"], v["bregman.lambda_tilde"]),
    )
    tv_bregman = _validated(
        "tv",
        lambda: BregmanParams(v["tv.n_max"], v["tv.n_hat_max"], v["tv.lambda_tilde"]),
    )
    tau = v["outer.tau"]
    if tau is None:
        tau = 1.5 * math.sqrt(m + 1)
    solver = _validated(
        "outer",
        lambda: SolverConfig(
            bregman=bregman,
            hyper_params=hyper,
            threshold=threshold,
            tau=tau,
            delta=v["outer.delta"],
            max_outer=v["outer.max_outer"],
            ar_orders=(v["outer.p"], v["outer.q"]),
        ),
    )
    if not 0 <= v["init.theta"] <= 1:
        raise ConfigError("init.theta: must lie in [0, 1]", key="init.theta")
    if not v["init.gamma"] > 0:
        raise ConfigError("init.gamma: must be positive", key="init.gamma")
    for key in ("tikhonov.lambda", "tv.lambda"):
        if not v[key] > 0:
            raise ConfigError(f"{key}: must be positive", key=key)
    return ExperimentConfig(
        signal=v["problem.signal"],
        n=n,
        m=m,
        kernel=kernel,
        noise=noise,
        solver=solver,
        theta0=v["init.theta"],
        gamma0=v["init.gamma"],
        lambda_tik=v["tikhonov.lambda"],
        lambda_tv=v["tv.lambda"],
        tv_bregman=tv_bregman,
        solvers=v["solver"],
        values=dict(v),
    )


def parse_config(path, preset: str | None = None, seed: int | None = None) -> ExperimentConfig:
    """Read and validate a configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return build_config(parse_config_text(text), preset=preset, seed=seed)
