"""Analytic RFI brightness-temperature statistics on the radiometer.

A cluster at distance x with N ~ Poisson(lambda_bs) co-located base
stations contributes T = g * omega * sum_j |H_j|^2 * x^-alpha Kelvin.
Its MGF has the series

    M_cluster(eta) = sum_n p_n(lambda_bs) (g omega x^-alpha)^n eta^n / n!

and the main- and side-lobe aggregates are Poisson superpositions of
clusters, which makes their cumulants linear in p_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Literal, Sequence

import numpy as np

from .channel import ChannelParams, srf_log_mgf_gain, srf_moments
from .geomodel import (Geometry, distance_bounds, expected_mainlobe_clusters,
                       mainlobe_distance)
from .mathkernels import QuadratureSpec, bell_table, gen_laguerre, integrate
from .propagation import DEFAULT_PROPAGATION, Propagation

__all__ = [
    "Lobe", "RadiometerParams", "NetworkParams", "LobeCumulants",
    "omega_const", "effective_omega", "p_n_rayleigh", "p_n_srf", "p_n",
    "cluster_mgf", "lobe_cumulant", "lobe_stats", "sop_upper_bound",
    "chebyshev_ratio", "mitigate", "heterogeneous_cumulant",
    "log_mgf_mainlobe", "mgf_mainlobe", "log_mgf_sidelobe", "mgf_sidelobe",
    "cumulants_from_series",
]

Lobe = Literal["main", "side"]


@dataclass(frozen=True)
class RadiometerParams:
    g_ml: float = 1.0
    g_sl: float = 1e-5
    bandwidth_hz: float = 24e6
    center_freq_hz: float = 1.413e9
    beamwidth_half_deg: float = 1.2

    def __post_init__(self):
        if not 0.0 <= self.g_sl < self.g_ml:
            raise ValueError("need 0 <= g_sl < g_ml")
        if self.bandwidth_hz <= 0 or self.center_freq_hz <= 0:
            raise ValueError("bandwidth and centre frequency must be positive")
        if self.beamwidth_half_deg <= 0:
            raise ValueError("beamwidth_half_deg must be positive")

    def gain(self, lobe: Lobe) -> float:
        return self.g_ml if lobe == "main" else self.g_sl


@dataclass(frozen=True)
class NetworkParams:
    lambda_c_per_km2: float = 1e-4
    lambda_bs: float = 800.0
    p_tx_w: float = 20.0
    alpha: float = 2.1
    sigma_c_m: float = 4000.0

    def __post_init__(self):
        if self.lambda_c_per_km2 < 0 or self.lambda_bs < 0:
            raise ValueError("intensities must be non-negative")
        if self.p_tx_w <= 0 or self.sigma_c_m <= 0:
            raise ValueError("p_tx_w and sigma_c_m must be positive")
        if not self.alpha > 2:
            raise ValueError(f"Earth-space path-loss exponent must exceed 2, got {self.alpha}")

    @property
    def lambda_c_per_m2(self) -> float:
        return self.lambda_c_per_km2 * 1e-6


@dataclass(frozen=True)
class LobeCumulants:
    """First four cumulants of one lobe's RFI temperature (Kelvin^n)."""

    lobe: str
    k: tuple[float, float, float, float]

    @property
    def mean_k(self) -> float:
        return self.k[0]

    @property
    def var_k2(self) -> float:
        return self.k[1]

    @property
    def std_k(self) -> float:
        return math.sqrt(self.k[1])

    @property
    def mu4_k4(self) -> float:
        return self.k[3] + 3.0 * self.k[1] ** 2


# --------------------------------------------------------------------------
#  Constants and per-cluster series coefficients
# --------------------------------------------------------------------------

def omega_const(net: NetworkParams, rad: RadiometerParams,
                prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """omega = p_tx / (2 k_b beta) * (c / (4 pi f))^2, in K m^2.

    The factor 1/2 is the per-polarisation share of the received power.
    """
    return (net.p_tx_w / (2.0 * prop.boltzmann_j_k * rad.bandwidth_hz)
            * prop.wavelength_factor(rad.center_freq_hz))


def effective_omega(net: NetworkParams, rad: RadiometerParams,
                    prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """omega * d0^(alpha-2): the coefficient of x^-alpha with x in metres."""
    return omega_const(net, rad, prop) * prop.excess_loss_scale(net.alpha)


def p_n_rayleigh(n: int, lambda_bs: float, ch: ChannelParams) -> float:
    """Series coefficient p_n under Rayleigh fading: (2 b0)^n n! L_n^(-1)(-lambda)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1.0
    return (2.0 * ch.b0) ** n * math.factorial(n) * gen_laguerre(n, -1.0, -lambda_bs)


def p_n_srf(n: int, lambda_bs: float, ch: ChannelParams) -> float:
    """Series coefficient p_n under shadowed Rician fading (n >= 1).

    sum_i B_{n,i}(a_1, ..., a_{n-i+1}) lambda^i with a_j the raw moments of
    |H|^2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    table = bell_table(n, srf_moments(n, ch))
    return float(sum(table[n, i] * lambda_bs ** i for i in range(1, n + 1)))


def p_n(n: int, lambda_bs: float, ch: ChannelParams) -> float:
    if n == 0:
        return 1.0
    if ch.is_rayleigh():
        return p_n_rayleigh(n, lambda_bs, ch)
    return p_n_srf(n, lambda_bs, ch)


def cluster_mgf(eta, x_m, gain: float, lambda_bs: float, ch: ChannelParams, *,
                omega: float, alpha: float):
    """MGF of one cluster's RFI temperature at slant range ``x_m``.

    ``omega`` is the effective coefficient (see :func:`effective_omega`).
    """
    return 1.0 + _cluster_mgf_m1(eta, x_m, gain, lambda_bs, ch, omega=omega, alpha=alpha)


def _cluster_mgf_m1(eta, x_m, gain, lambda_bs, ch, *, omega, alpha):
    # M_cluster - 1 without cancellation near eta = 0
    scale = gain * omega * np.asarray(x_m, dtype=float) ** (-alpha)
    return np.expm1(lambda_bs * np.expm1(srf_log_mgf_gain(np.asarray(eta) * scale, ch)))


# --------------------------------------------------------------------------
#  Lobe MGFs
# --------------------------------------------------------------------------

def log_mgf_mainlobe(eta, geo: Geometry, rad: RadiometerParams, net: NetworkParams,
                     ch: ChannelParams, prop: Propagation = DEFAULT_PROPAGATION):
    """Log-MGF of the main-lobe RFI: Lambda (M_cluster(eta; d_ml, g_ml) - 1)."""
    lam = expected_mainlobe_clusters(geo, net.lambda_c_per_km2)
    if lam == 0.0:
        return 0.0 * np.asarray(eta)
    return lam * _cluster_mgf_m1(eta, mainlobe_distance(geo), rad.g_ml, net.lambda_bs, ch,
                                 omega=effective_omega(net, rad, prop), alpha=net.alpha)


def mgf_mainlobe(eta, geo, rad, net, ch, prop: Propagation = DEFAULT_PROPAGATION):
    return np.exp(log_mgf_mainlobe(eta, geo, rad, net, ch, prop))


_SIDE_QUAD = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300, max_subdivisions=500)


def log_mgf_sidelobe(eta, geo: Geometry, rad: RadiometerParams, net: NetworkParams,
                     ch: ChannelParams, prop: Propagation = DEFAULT_PROPAGATION,
                     quad: QuadratureSpec = _SIDE_QUAD):
    """Log-MGF of the side-lobe RFI via the PGFL of the visible cap.

    -2 pi (r_e/h) lambda_c int_{d_min}^{d_max} (1 - M_cluster(eta; x, g_sl)) x dx,
    evaluated by adaptive quadrature. Complex ``eta`` is supported; the
    real and imaginary parts are integrated separately.
    """
    if net.lambda_c_per_km2 == 0.0:
        return 0.0 * eta
    d_min, d_max = distance_bounds(geo)
    om = effective_omega(net, rad, prop)
    # the integrand is dominated by the near edge; integrate in log x
    lo, hi = math.log(d_min), math.log(d_max)

    def integrand(logx, part):
        x = math.exp(logx)
        v = -_cluster_mgf_m1(eta, x, rad.g_sl, net.lambda_bs, ch, omega=om, alpha=net.alpha)
        v = complex(v)
        return (v.real if part == 0 else v.imag) * x * x

    re = integrate(lambda t: integrand(t, 0), lo, hi, quad).value
    im = integrate(lambda t: integrand(t, 1), lo, hi, quad).value if np.iscomplexobj(eta) else 0.0
    pref = -2.0 * math.pi * geo.earth_radius_m / geo.sat_center_distance_m * net.lambda_c_per_m2
    val = pref * (re + 1j * im)
    return val if np.iscomplexobj(eta) else val.real


def mgf_sidelobe(eta, geo, rad, net, ch, prop: Propagation = DEFAULT_PROPAGATION):
    return np.exp(log_mgf_sidelobe(eta, geo, rad, net, ch, prop))


# --------------------------------------------------------------------------
#  Closed-form cumulants
# --------------------------------------------------------------------------

def lobe_cumulant(lobe: Lobe, n: int, geo: Geometry, rad: RadiometerParams,
                  net: NetworkParams, ch: ChannelParams,
                  prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """n-th cumulant (Kelvin^n) of the main- or side-lobe RFI temperature."""
    if not 1 <= n <= 4:
        raise ValueError("cumulant order must be in 1..4")
    om = effective_omega(net, rad, prop)
    a = net.alpha
    pn = p_n(n, net.lambda_bs, ch)
    if lobe == "main":
        lam = expected_mainlobe_clusters(geo, net.lambda_c_per_km2)
        return lam * (rad.g_ml * om) ** n * pn * mainlobe_distance(geo) ** (-n * a)
    if lobe == "side":
        d_min, d_max = distance_bounds(geo)
        e = 2.0 - n * a
        ratio = geo.earth_radius_m / geo.sat_center_distance_m
        return (2.0 * math.pi / e * ratio * (rad.g_sl * om) ** n * net.lambda_c_per_m2
                * pn * (d_max ** e - d_min ** e))
    raise ValueError(f"unknown lobe {lobe!r}")


def lobe_stats(lobe: Lobe, geo: Geometry, rad: RadiometerParams, net: NetworkParams,
               ch: ChannelParams, prop: Propagation = DEFAULT_PROPAGATION) -> LobeCumulants:
    k = tuple(lobe_cumulant(lobe, n, geo, rad, net, ch, prop) for n in range(1, 5))
    return LobeCumulants(lobe=lobe, k=k)


def chebyshev_ratio(stats: LobeCumulants, tau: float) -> float:
    """Unclamped min(mu2 / tau^2, mu4 / tau^4)."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    return min(stats.var_k2 / tau ** 2, stats.mu4_k4 / tau ** 4)


def sop_upper_bound(stats: LobeCumulants, tau: float) -> float:
    """Chebyshev bound on P(|T - E T| > tau) using the 2nd and 4th central moments."""
    return min(1.0, chebyshev_ratio(stats, tau))


def mitigate(measured, expected_sl):
    """Subtract the expected side-lobe RFI from a contaminated measurement."""
    return np.subtract(measured, expected_sl)


def heterogeneous_cumulant(lobe: Lobe, n: int,
                           mixture: Iterable[tuple[float, dict, ChannelParams]],
                           geo: Geometry, rad: RadiometerParams, net: NetworkParams,
                           prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """Cumulant averaged over a discrete distribution of cluster parameters.

    ``mixture`` holds ``(weight, network_overrides, channel)`` triples; the
    overrides are applied to ``net`` with :func:`dataclasses.replace`.
    """
    items = list(mixture)
    total = sum(w for w, _, _ in items)
    if not items or abs(total - 1.0) > 1e-9 or any(w < 0 for w, _, _ in items):
        raise ValueError(f"mixture weights must be non-negative and sum to 1, got {total}")
    return sum(w * lobe_cumulant(lobe, n, geo, rad, replace(net, **ov), ch, prop)
               for w, ov, ch in items)


def cumulants_from_series(coeffs: Sequence[float]) -> list[float]:
    """Cumulants from raw moments m_1..m_4 (standard moment-cumulant relations)."""
    m1, m2, m3, m4 = coeffs[:4]
    k1 = m1
    k2 = m2 - m1 ** 2
    k3 = m3 - 3 * m2 * m1 + 2 * m1 ** 3
    k4 = m4 - 4 * m3 * m1 - 3 * m2 ** 2 + 12 * m2 * m1 ** 2 - 6 * m1 ** 4
    return [k1, k2, k3, k4]
