"""Earth-to-space channel: shadowed Rician fading and its Rayleigh limit.

The squared channel gain |H|^2 follows the composite model of a
Nakagami-m shadowed line-of-sight amplitude plus circular Gaussian scatter,
parameterised by (b0, m, omega): 2*b0 is the scatter power, m the shadowing
severity and omega the mean line-of-sight power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .mathkernels import gamma_fn, gauss_2f1

__all__ = ["ChannelParams", "srf_mgf_gain", "srf_log_mgf_gain", "srf_moment", "srf_moments",
           "sample_gain_sq", "sample_cluster_gain_sum"]


@dataclass(frozen=True)
class ChannelParams:
    b0: float = 0.158
    m: float = 0.739
    omega: float = 8.97e-4

    def __post_init__(self):
        if not self.b0 > 0:
            raise ValueError(f"b0 must be positive, got {self.b0!r}")
        if self.m < 0 or self.omega < 0:
            raise ValueError("m and omega must be non-negative")

    def is_rayleigh(self) -> bool:
        return self.omega == 0.0 or self.m == 0.0

    @property
    def scatter_power(self) -> float:
        return 2.0 * self.b0

    @classmethod
    def rayleigh(cls, b0: float) -> "ChannelParams":
        return cls(b0=b0, m=0.0, omega=0.0)


def srf_mgf_gain(eta, p: ChannelParams):
    """MGF E[exp(eta |H|^2)] of the squared gain.

    Accepts real or complex ``eta``. Raises ``ValueError`` for real
    arguments at or beyond the singularity 2*b0*eta = 1.
    """
    eta = np.asarray(eta)
    two_b0 = 2.0 * p.b0
    if not np.iscomplexobj(eta) and np.any(two_b0 * eta >= 1.0):
        raise ValueError("eta is at or beyond the MGF singularity 1/(2 b0)")
    one = 1.0 - two_b0 * eta
    if p.is_rayleigh():
        return 1.0 / one
    k = two_b0 * p.m
    denom = (k + p.omega) * one - p.omega
    if not np.iscomplexobj(eta) and np.any(denom <= 0):
        raise ValueError("eta is beyond the MGF singularity")
    # (k/denom)^m written as a ratio so the m = 0 branch above is the only limit
    return (k / denom) ** p.m * one ** (p.m - 1.0)


def srf_log_mgf_gain(eta, p: ChannelParams):
    """log E[exp(eta |H|^2)], accurate for small ``|eta|`` (log1p form).

    Same domain rules as :func:`srf_mgf_gain`.
    """
    eta = np.asarray(eta)
    x = 2.0 * p.b0 * eta
    if not np.iscomplexobj(eta) and np.any(x >= 1.0):
        raise ValueError("eta is at or beyond the MGF singularity 1/(2 b0)")
    if p.is_rayleigh():
        return -np.log1p(-x)
    c = 1.0 + p.omega / (2.0 * p.b0 * p.m)
    if not np.iscomplexobj(eta) and np.any(c * x >= 1.0):
        raise ValueError("eta is beyond the MGF singularity")
    return (p.m - 1.0) * np.log1p(-x) - p.m * np.log1p(-c * x)


def srf_moment(n: int, p: ChannelParams) -> float:
    """n-th raw moment a_n = E[|H|^(2n)]."""
    if n < 0:
        raise ValueError("moment order must be non-negative")
    return _srf_moment(n, p.b0, p.m, p.omega)


@lru_cache(maxsize=1024)
def _srf_moment(n: int, b0: float, m: float, omega: float) -> float:
    two_b0 = 2.0 * b0
    if n == 0:
        return 1.0
    if omega == 0.0 or m == 0.0:
        return two_b0 ** n * math.factorial(n)
    k = two_b0 * m
    x = omega / (k + omega)
    return (k / (k + omega)) ** m * two_b0 ** n * gamma_fn(n + 1) * gauss_2f1(m, n + 1, 1.0, x)


def srf_moments(n_max: int, p: ChannelParams) -> list[float]:
    """[a_1, ..., a_{n_max}]."""
    return [srf_moment(j, p) for j in range(1, n_max + 1)]


def sample_gain_sq(rng: np.random.Generator, p: ChannelParams, size=None):
    """Draw |H|^2 from the composite complex-envelope construction.

    H = A exp(j phi) + W with A^2 ~ Gamma(m, omega/m), phi uniform and
    W ~ CN(0, 2 b0). In the Rayleigh limit |H|^2 ~ Exp(mean 2 b0).
    """
    if p.is_rayleigh():
        return rng.exponential(2.0 * p.b0, size)
    amp = np.sqrt(rng.gamma(p.m, p.omega / p.m, size))
    phase = rng.uniform(0.0, 2.0 * np.pi, size)
    sd = math.sqrt(p.b0)
    re = amp * np.cos(phase) + rng.normal(0.0, sd, size)
    im = amp * np.sin(phase) + rng.normal(0.0, sd, size)
    return re * re + im * im


def sample_cluster_gain_sum(rng: np.random.Generator, p: ChannelParams, counts):
    """Sum of ``counts[i]`` independent |H|^2 draws, one sum per entry.

    Rotating each scatter term onto its LoS phase gives
    |H|^2 = (A + X)^2 + Y^2 with X, Y ~ N(0, b0), so a sum of N draws is
    b0 times a noncentral chi-square with 2N degrees of freedom and
    noncentrality sum(A^2)/b0, where sum(A^2) ~ Gamma(N m, omega/m).
    Exact in distribution and O(1) per cluster.
    """
    counts = np.asarray(counts)
    out = np.zeros(counts.shape)
    live = counts > 0
    if not np.any(live):
        return out
    n = counts[live].astype(float)
    if p.is_rayleigh():
        out[live] = rng.gamma(n, 2.0 * p.b0)
        return out
    los = rng.gamma(n * p.m, p.omega / p.m)
    out[live] = p.b0 * rng.noncentral_chisquare(2.0 * n, los / p.b0)
    return out
