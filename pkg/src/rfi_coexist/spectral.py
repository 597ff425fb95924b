"""Downlink spectral efficiency inside one cluster.

A typical UE sits at a Rayleigh(sigma_c) distance Z from its cluster
centre and the cluster's base stations are scattered with the same law, so
the UE-to-BS distance is Rician given Z. The nearest BS serves; every other
BS in the cluster interferes, and fading is Rayleigh with unit mean.

Distances are handled internally in units of sigma_c. The received power
from a BS at distance r is ``u * p_tx * H * r^-alpha * d0^(alpha - 2)``
with ``d0`` the propagation reference distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .geomodel import Geometry, exposed_cap_area
from .mathkernels import QuadratureSpec, bessel_i0e, integrate, marcum_p1
from .propagation import DEFAULT_PROPAGATION, Propagation
from .rficumulants import NetworkParams

__all__ = ["IntraClusterParams", "Throughput", "ue_center_distance_pdf", "bs_ue_distance_pdf",
           "bs_ue_distance_cdf", "serving_distance_pdf", "laplace_total_power",
           "laplace_interference", "spectral_efficiency", "sum_throughput",
           "simulate_spectral_efficiency", "received_power_scale", "with_lambda"]


@dataclass(frozen=True)
class IntraClusterParams:
    lambda_bs: float = 150.0
    sigma_c_m: float = 4000.0
    p_tx_w: float = 20.0
    alpha_intra: float = 4.0
    noise_density_dbm_hz: float = -174.0
    bandwidth_hz: float = 24e6
    carrier_hz: float = 1.413e9

    def __post_init__(self):
        if self.lambda_bs < 0:
            raise ValueError("lambda_bs must be non-negative")
        for name in ("sigma_c_m", "p_tx_w", "bandwidth_hz", "carrier_hz"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.alpha_intra > 2:
            raise ValueError("alpha_intra must exceed 2")

    @property
    def noise_power_w(self) -> float:
        """N0 * bandwidth in watts."""
        return 10.0 ** ((self.noise_density_dbm_hz - 30.0) / 10.0) * self.bandwidth_hz


def received_power_scale(params: IntraClusterParams, prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """K such that the mean received power at distance r is K * (r/sigma_c)^-alpha."""
    a = params.alpha_intra
    return (prop.wavelength_factor(params.carrier_hz) * params.p_tx_w
            * params.sigma_c_m ** (-a) * prop.excess_loss_scale(a))


# --------------------------------------------------------------------------
#  Distance laws
# --------------------------------------------------------------------------

def ue_center_distance_pdf(z, sigma_c: float):
    """Rayleigh density of the UE-to-centre distance."""
    z = np.asarray(z, dtype=float)
    return z / sigma_c ** 2 * np.exp(-0.5 * (z / sigma_c) ** 2)


def bs_ue_distance_pdf(r, z, sigma_c: float):
    """Rician density of the BS-to-UE distance given UE offset ``z``."""
    r = np.asarray(r, dtype=float)
    a, b = np.asarray(z, dtype=float) / sigma_c, r / sigma_c
    # exp(-(a^2+b^2)/2) I0(ab) = exp(-(a-b)^2/2) i0e(ab)
    return b / sigma_c * np.exp(-0.5 * (a - b) ** 2) * bessel_i0e(a * b)


def bs_ue_distance_cdf(r, z, sigma_c: float):
    """1 - Q1(z/sigma, r/sigma)."""
    return marcum_p1(np.asarray(z, dtype=float) / sigma_c, np.asarray(r, dtype=float) / sigma_c)


def serving_distance_pdf(q, z, lambda_bs: float, sigma_c: float):
    """Density of the nearest-BS distance; total mass is 1 - exp(-lambda_bs)."""
    return (lambda_bs * bs_ue_distance_pdf(q, z, sigma_c)
            * np.exp(-lambda_bs * bs_ue_distance_cdf(q, z, sigma_c)))


# --------------------------------------------------------------------------
#  Laplace transforms
# --------------------------------------------------------------------------

_N_Z = 48          # Gauss-Laguerre nodes for the UE offset
_N_R = 1201        # log-spaced distance grid (odd for Simpson)
_RHO_MIN = 1e-6


@lru_cache(maxsize=8)
def _grid(n_z: int = _N_Z, n_r: int = _N_R):
    """Per-offset distance grids with density and CDF, in sigma units.

    The offset average uses v = z^2/2 ~ Exp(1), so plain Gauss-Laguerre
    nodes apply.
    """
    v, wz = np.polynomial.laguerre.laggauss(n_z)
    zeta = np.sqrt(2.0 * v)
    u = np.linspace(0.0, 1.0, n_r)
    log_rho = np.log(_RHO_MIN) + np.outer(np.log((zeta + 13.0) / _RHO_MIN), u)
    rho = np.exp(log_rho)
    zc = zeta[:, None]
    f = rho * np.exp(-0.5 * (rho - zc) ** 2) * bessel_i0e(rho * zc)
    cdf = marcum_p1(np.broadcast_to(zc, rho.shape), rho)
    return wz, zeta, log_rho, rho, f, cdf


def _transforms(s: float, params: IntraClusterParams, prop: Propagation):
    """(L_I(s), L_P(s)) averaged over the UE offset."""
    lam = params.lambda_bs
    if s < 0:
        raise ValueError("s must be non-negative")
    atom = math.exp(-lam)
    if lam == 0.0 or s == 0.0:
        return 1.0, 1.0
    wz, _, log_rho, rho, f, cdf = _grid()
    sk = s * received_power_scale(params, prop)
    # w = sK r^-a / (1 + sK r^-a) = E[1 - exp(-s P)] for unit-mean Rayleigh fading
    with np.errstate(over="ignore"):
        w = 1.0 / (1.0 + np.exp(params.alpha_intra * np.log(rho) - math.log(sk)))
    g = f * w * rho                               # d(rho) = rho d(log rho)
    head = cdf[:, :1]                             # mass below the grid, where w ~ 1
    cum = cumulative_simpson(g, x=log_rho, axis=1, initial=0.0)
    total = cum[:, -1:] + head
    tail = total - head - cum                     # integral of f*w over (q, inf)
    l_p = np.exp(-lam * total[:, 0])
    serv = lam * f * rho * np.exp(-lam * (cdf + tail))
    l_i = simpson(serv, x=log_rho, axis=1) + lam * head[:, 0] * np.exp(-lam * total[:, 0])
    return float(wz @ l_i) + atom, float(wz @ l_p)


def laplace_total_power(s: float, params: IntraClusterParams,
                        prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """E[exp(-s P)] with P the total received power at the typical UE."""
    return _transforms(s, params, prop)[1]


def laplace_interference(s: float, params: IntraClusterParams,
                         prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """E[exp(-s I)] with I the power from all non-serving BSs.

    Includes the empty-cluster atom exp(-lambda_bs), where I = 0.
    """
    return _transforms(s, params, prop)[0]


_SE_QUAD = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-10, max_subdivisions=400)


def spectral_efficiency(params: IntraClusterParams, prop: Propagation = DEFAULT_PROPAGATION) -> float:
    """E[ln(1 + SINR)] in nats via Hamdi's lemma.

    s_e = int_0^inf exp(-s N) / s * (L_I(s) - L_P(s)) ds, integrated in
    t = ln s. Below s_min = 1e-12 / K the integrand behaves like
    sqrt(s K) and is dropped.
    """
    if params.lambda_bs == 0.0:
        return 0.0
    k = received_power_scale(params, prop)
    noise = params.noise_power_w
    t_lo = math.log(1e-12 / k)
    t_hi = math.log(60.0 / noise)
    if t_hi <= t_lo:
        return 0.0

    def integrand(t):
        s = math.exp(t)
        l_i, l_p = _transforms(s, params, prop)
        return math.exp(-s * noise) * max(l_i - l_p, 0.0)

    # split at the scale where the noise cut-off starts to bite
    t_mid = min(max(math.log(1.0 / noise), t_lo), t_hi)
    return (integrate(integrand, t_lo, t_mid, _SE_QUAD).value
            + integrate(integrand, t_mid, t_hi, _SE_QUAD).value)


@dataclass(frozen=True)
class Throughput:
    nats_per_s: float
    bits_per_s: float


def sum_throughput(s_e: float, geo: Geometry, net: NetworkParams, bandwidth_hz: float) -> Throughput:
    """Network sum rate beta * s_e * lambda_bs * lambda_c * cap area.

    The reference trade-off curve pairs a nats-based s_e with a "b/s" label, so both
    unit readings are returned.
    """
    if s_e < 0 or bandwidth_hz < 0:
        raise ValueError("s_e and bandwidth must be non-negative")
    n_bs = net.lambda_bs * net.lambda_c_per_m2 * exposed_cap_area(geo)
    nats = bandwidth_hz * s_e * n_bs
    return Throughput(nats, nats / math.log(2.0))


# --------------------------------------------------------------------------
#  Direct simulation oracle
# --------------------------------------------------------------------------

def simulate_spectral_efficiency(params: IntraClusterParams, trials: int, rng: np.random.Generator,
                                 prop: Propagation = DEFAULT_PROPAGATION) -> tuple[float, float]:
    """Sample mean and standard error of ln(1 + SINR) from direct cluster draws.

    Each trial draws a Poisson number of BSs and a UE around the same
    centre, serves from the nearest BS and counts the rest as interference.
    Empty clusters give SINR = 0. Trials are processed in chunks of about
    two million stations.
    """
    chunk = max(1, int(2e6 / max(params.lambda_bs, 1.0)))
    vals = np.concatenate([_sinr_chunk(params, min(chunk, trials - i), rng, prop)
                           for i in range(0, trials, chunk)])
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(trials))


def _sinr_chunk(params, trials, rng, prop):
    n = rng.poisson(params.lambda_bs, trials)
    total = int(n.sum())
    ue = rng.normal(0.0, 1.0, (trials, 2))
    bs = rng.normal(0.0, 1.0, (total, 2))
    owner = np.repeat(np.arange(trials), n)
    rho = np.hypot(*(bs - ue[owner]).T)
    power = received_power_scale(params, prop) * rng.exponential(1.0, total) * rho ** (-params.alpha_intra)

    out = np.zeros(trials)
    live = n > 0
    if total:
        starts = np.concatenate([[0], np.cumsum(n)[:-1]])[live]
        rmin = np.minimum.reduceat(rho, starts)
        # first index attaining the per-trial minimum
        first = np.flatnonzero(rho == np.repeat(rmin, n[live]))
        first = first[np.concatenate([[True], owner[first][1:] != owner[first][:-1]])]
        signal = power[first]
        interf = np.maximum(np.bincount(owner, weights=power, minlength=trials)[live] - signal, 0.0)
        out[live] = np.log1p(signal / (params.noise_power_w + interf))
    return out


def with_lambda(params: IntraClusterParams, lambda_bs: float) -> IntraClusterParams:
    return replace(params, lambda_bs=float(lambda_bs))
