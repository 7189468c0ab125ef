"""Deconvolution test bed: kernels, forward matrices, benchmark signals and
the noise model."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .linalg import DimensionError, as_matrix, as_vector

__all__ = [
    "KernelKind",
    "KernelSpec",
    "NoiseSpec",
    "ForwardModel",
    "SIGNAL_NAMES",
    "bessel_j1",
    "airy_kernel",
    "ricker_kernel",
    "kernel_function",
    "sample_function",
    "grid",
    "build_convolution_matrix",
    "benchmark_signal",
    "gaussian_stream",
    "add_noise",
]


class KernelKind(enum.Enum):
    AIRY = "airy"
    RICKER = "ricker"


@dataclass(frozen=True)
class KernelSpec:
    """Convolution kernel. ``kappa``/``amplitude`` apply to the Airy
    pattern, ``peak_freq`` to the Ricker wavelet."""

    kind: KernelKind = KernelKind.AIRY
    kappa: float = 1000.0
    amplitude: float = 500.0
    peak_freq: float = 50.0

    def __post_init__(self):
        if self.kind is KernelKind.AIRY:
            if not (self.kappa > 0 and self.amplitude > 0):
                raise ValueError("Airy kernel needs positive kappa and amplitude")
        elif not self.peak_freq > 0:
            raise ValueError("Ricker kernel needs a positive peak frequency")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise of size ``sigma * max|f|``.

    By default that product is the standard deviation; with
    ``variance_convention`` it is read as the variance instead.
    ``abs_max=False`` uses the signed maximum of the reference signal.
    """

    sigma: float = 0.1
    seed: int = 0
    variance_convention: bool = False
    abs_max: bool = True

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"noise.sigma must be non-negative, got {self.sigma}")

    def std(self, reference) -> float:
        reference = np.asarray(reference, dtype=float)
        peak = np.max(np.abs(reference)) if self.abs_max else np.max(reference)
        level = self.sigma * float(peak)
        if level < 0:
            raise ValueError("noise level sigma * max(f) is negative")
        return math.sqrt(level) if self.variance_convention else level


@dataclass
class ForwardModel:
    """Linear forward map ``d = G f`` with diagonal whitening ``S``."""

    G: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        self.G = as_matrix(self.G, "G")
        self.S = as_matrix(self.S, "S")
        rows = self.G.shape[0]
        if self.S.shape != (rows, rows):
            raise DimensionError(f"S must be {rows}x{rows}, got {self.S.shape}")
        diag = np.diag(self.S)
        if np.any(self.S - np.diag(diag)) or np.any(diag <= 0):
            raise ValueError("S must be diagonal with positive entries")
        self.s = diag.copy()

    @property
    def shape(self):
        return self.G.shape

    def apply(self, f) -> np.ndarray:
        return self.G @ f

    def whitened_misfit(self, data, f) -> float:
        return float(np.linalg.norm(self.s * (data - self.G @ f)))


def bessel_j1(x):
    """Bessel function of the first kind of order one."""
    return special.j1(x)


def _j1_over_x(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    x2 = x * x
    # series J1(x)/x = 1/2 - x^2/16 + x^4/384 - ...
    series = 0.5 - x2 / 16.0 + x2 * x2 / 384.0
    return np.where(small, series, special.j1(safe) / safe)


def airy_kernel(t, spec: KernelSpec):
    """``A * (J1(kappa t) / (kappa t))**2`` with ``K(0) = A/4``."""
    if spec.kind is not KernelKind.AIRY:
        raise ValueError("airy_kernel called with a non-Airy spec")
    r = _j1_over_x(spec.kappa * np.asarray(t, dtype=float))
    out = spec.amplitude * r * r
    return float(out) if np.ndim(out) == 0 else out


def ricker_kernel(t, spec: KernelSpec):
    if spec.kind is not KernelKind.RICKER:
        raise ValueError("ricker_kernel called with a non-Ricker spec")
    a = (math.pi * spec.peak_freq * np.asarray(t, dtype=float)) ** 2
    out = (1.0 - 2.0 * a) * np.exp(-a)
    return float(out) if np.ndim(out) == 0 else out


def kernel_function(spec: KernelSpec) -> Callable:
    if spec.kind is KernelKind.AIRY:
        return lambda t: airy_kernel(t, spec)
    return lambda t: ricker_kernel(t, spec)


def grid(a: float, b: float, n: int) -> np.ndarray:
    """Uniform grid ``a + j (b - a) / n`` for ``j = 0..n``."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    j = np.arange(n + 1, dtype=float)
    return a + (b - a) * j / n


def sample_function(f: Callable, a: float, b: float, n: int) -> np.ndarray:
    x = grid(a, b, n)
    return np.array([f(xj) for xj in x], dtype=float)


def build_convolution_matrix(kernel, m: int, n: int) -> np.ndarray:
    """Toeplitz matrix ``G[i, j] = n * K((i - j) / n)``, ``i = 0..m``, ``j = 0..n``.

    ``kernel`` is a :class:`KernelSpec` or any vectorized callable.
    """
    if m > n:
        raise ValueError(f"need m <= n, got m={m}, n={n}")
    K = kernel_function(kernel) if isinstance(kernel, KernelSpec) else kernel
    lags = np.arange(-n, m + 1)
    values = np.broadcast_to(np.asarray(K(lags / n), dtype=float), lags.shape)
    i = np.arange(m + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    return n * values[i - j + n]


SIGNAL_NAMES = ("smooth", "piecewise", "mixed")


def _smooth(t):
    return np.sin(2.0 * np.pi * t)


def _piecewise(t):
    return np.where((t >= 0.35) & (t < 0.65), 1.0, 0.0)


def _mixed(t):
    return np.select(
        [t < 0.1, t < 0.2, t < 0.3, t < 0.7],
        [0.0, 1.0, 0.0, 0.5 * np.sin(10.0 * np.pi * (t - 0.3))],
        default=0.3 * np.sin(100.0 * np.pi * (t - 0.5)),
    )


_SIGNALS = {"smooth": _smooth, "piecewise": _piecewise, "mixed": _mixed}


def benchmark_signal(name: str, t):
    """Evaluate one of the benchmark signals on ``[0, 1]``.

    Intervals are left-closed and right-open, except that the last piece
    includes ``t = 1``.
    """
    try:
        fn = _SIGNALS[name]
    except KeyError:
        raise ValueError(f"unknown signal {name!r}; expected one of {SIGNAL_NAMES}") from None
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > 1) or not np.all(np.isfinite(t_arr)):
        raise ValueError("benchmark signals are defined on [0, 1] only")
    out = fn(t_arr)
    return float(out) if np.ndim(out) == 0 else out


def gaussian_stream(seed: int, size: int) -> np.ndarray:
    """Deterministic standard normal draws.

    Uniforms come from the Philox4x64 counter-based generator keyed by
    ``seed`` (``numpy.random.Generator.random``, 53-bit doubles in [0, 1)).
    Consecutive pairs ``(u1, u2)`` are mapped by Box-Muller to
    ``sqrt(-2 log(1 - u1)) * (cos(2 pi u2), sin(2 pi u2))``, emitted in that
    order and truncated to ``size``.
    """
    pairs = (size + 1) // 2
    u = np.random.Generator(np.random.Philox(seed)).random(2 * pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:size]


def add_noise(clean, spec: NoiseSpec, reference=None):
    """Add seeded Gaussian noise to ``clean`` data.

    The noise level is taken from ``reference`` (the true signal samples);
    when omitted, ``clean`` itself is used. Returns the noisy data and the
    whitening matrix ``S = I / std`` (identity when the level is zero).
    """
    clean = as_vector(clean, "clean")
    size = clean.shape[0]
    std = spec.std(clean if reference is None else reference)
    if std == 0.0:
        return clean.copy(), np.eye(size)
    noisy = clean + std * gaussian_stream(spec.seed, size)
    return noisy, np.eye(size) / std
