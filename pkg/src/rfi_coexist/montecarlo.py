"""Monte Carlo oracle for the aggregate RFI temperature.

Each round samples the parent Poisson process of cluster centres on the
visible cap, a Poisson number of base stations per cluster and their
channel gains, and sums the resulting brightness temperatures separately
for the main and side lobes.

Reproducibility: rounds are grouped in fixed-size blocks and block ``b``
draws from ``SeedSequence(seed, spawn_key=(b,))``. Results therefore do
not depend on the number of worker processes.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .channel import ChannelParams, sample_cluster_gain_sum, sample_gain_sq
from .geomodel import (Geometry, distance_bounds, expected_mainlobe_clusters,
                       exposed_cap_area, mainlobe_distance)
from .propagation import DEFAULT_PROPAGATION, Propagation
from .rficumulants import (NetworkParams, RadiometerParams, lobe_cumulant,
                           omega_const)

__all__ = ["SimControls", "RfiSample", "MomentAccumulator", "LobeSummary",
           "SimResult", "SopEstimate", "run_round", "simulate", "estimate_sop",
           "wilson_interval", "write_samples_csv"]

LOBES = ("main", "side")


@dataclass(frozen=True)
class SimControls:
    """Monte Carlo settings.

    ``bs_offsets_enabled`` places every base station at a Rayleigh(sigma_c)
    great-circle offset from its cluster centre; otherwise all stations
    sit at the centre. With offsets disabled and ``aggregate_fading`` set,
    each cluster's fading sum is drawn in one exact step instead of per
    station, which is what makes 10^4-round sweeps cheap.
    """

    rounds: int = 10_000
    seed: int = 20240601
    bs_offsets_enabled: bool = False
    workers: int = 1
    block_size: int = 500
    aggregate_fading: bool = True

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.workers < 1 or self.block_size < 1:
            raise ValueError("workers and block_size must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def per_station(self) -> bool:
        return self.bs_offsets_enabled or not self.aggregate_fading


@dataclass(frozen=True)
class RfiSample:
    t_ml_k: float
    t_sl_k: float

    def __post_init__(self):
        for v in (self.t_ml_k, self.t_sl_k):
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"RFI temperatures must be finite and >= 0, got {v}")


# --------------------------------------------------------------------------
#  Streaming central moments
# --------------------------------------------------------------------------

@dataclass
class MomentAccumulator:
    """Count, mean and central sums M2..M4, elementwise over a trailing axis."""

    n: int
    mean: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    m4: np.ndarray

    @classmethod
    def from_samples(cls, x: np.ndarray) -> "MomentAccumulator":
        x = np.asarray(x, dtype=float)
        if x.shape[0] == 0:
            z = np.zeros(x.shape[1:])
            return cls(0, z, z.copy(), z.copy(), z.copy())
        mean = x.mean(axis=0)
        d = x - mean
        d2 = d * d
        return cls(x.shape[0], mean, d2.sum(axis=0), (d2 * d).sum(axis=0), (d2 * d2).sum(axis=0))

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """Pairwise combination (Pebay's update formulas)."""
        na, nb = self.n, other.n
        if na == 0:
            return other
        if nb == 0:
            return self
        n = na + nb
        delta = other.mean - self.mean
        mean = self.mean + delta * nb / n
        m2 = self.m2 + other.m2 + delta ** 2 * na * nb / n
        m3 = (self.m3 + other.m3 + delta ** 3 * na * nb * (na - nb) / n ** 2
              + 3.0 * delta * (na * other.m2 - nb * self.m2) / n)
        m4 = (self.m4 + other.m4
              + delta ** 4 * na * nb * (na * na - na * nb + nb * nb) / n ** 3
              + 6.0 * delta ** 2 * (na * na * other.m2 + nb * nb * self.m2) / n ** 2
              + 4.0 * delta * (na * other.m3 - nb * self.m3) / n)
        return MomentAccumulator(n, mean, m2, m3, m4)

    @property
    def var(self) -> np.ndarray:
        return self.m2 / max(self.n - 1, 1)

    @property
    def std(self) -> np.ndarray:
        return np.sqrt(self.var)

    @property
    def mu4(self) -> np.ndarray:
        return self.m4 / self.n

    @property
    def mean_stderr(self) -> np.ndarray:
        return self.std / math.sqrt(self.n)

    @property
    def std_stderr(self) -> np.ndarray:
        # delta method: Var(s) ~ (mu4 - sigma^4) / (4 sigma^2 n)
        pop_var = self.m2 / self.n
        with np.errstate(invalid="ignore", divide="ignore"):
            se = np.sqrt(np.maximum(self.mu4 - pop_var ** 2, 0.0) / (4.0 * pop_var * self.n))
        return np.where(pop_var > 0, se, 0.0)


# --------------------------------------------------------------------------
#  Sampling
# --------------------------------------------------------------------------

def _cos_after_offset(cos_c, rng, sigma_m, r_e, size):
    """Polar-angle cosine after a Rayleigh(sigma) great-circle step.

    Only the angle to the sub-satellite axis matters for the slant range,
    so the step direction is drawn relative to the local meridian.
    """
    delta = rng.rayleigh(sigma_m, size) / r_e
    psi = rng.uniform(0.0, 2.0 * np.pi, size)
    sin_c = np.sqrt(np.clip(1.0 - cos_c * cos_c, 0.0, None))
    return np.cos(delta) * cos_c - np.sin(delta) * sin_c * np.cos(psi)


def _streams(ss: np.random.SeedSequence):
    """Independent generators for (main, side) x (counts, positions, fading, offsets)."""
    out = {}
    for lobe, child in zip(LOBES, ss.spawn(2)):
        cnt, pos, fade, off = (np.random.default_rng(s) for s in child.spawn(4))
        out[lobe] = dict(counts=cnt, positions=pos, fading=fade, offsets=off)
    return out


class _Model:
    """Pre-computed constants shared by every block of one simulation."""

    def __init__(self, geo, rad, net, ch, controls, prop, alphas):
        self.geo, self.rad, self.net, self.ch, self.controls = geo, rad, net, ch, controls
        self.alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
        r_e, h = geo.earth_radius_m, geo.sat_center_distance_m
        self.r_e, self.h = r_e, h
        omega = omega_const(net, rad, prop)
        self.omega_eff = omega * prop.reference_distance_m ** (self.alphas - 2.0)
        self.cap_clusters = exposed_cap_area(geo) * net.lambda_c_per_m2
        self.ml_clusters = expected_mainlobe_clusters(geo, net.lambda_c_per_km2)
        d_ml = mainlobe_distance(geo)
        self.cos_ml = (r_e * r_e + h * h - d_ml * d_ml) / (2.0 * h * r_e)
        self.cos_min = r_e / h

    def x2(self, cos_theta):
        return self.r_e ** 2 + self.h ** 2 - 2.0 * self.h * self.r_e * cos_theta

    def temps(self, gain, g_sum, x2, round_idx, n_rounds):
        """Per-round totals of gain*omega*|H|^2*x^-alpha for every alpha."""
        out = np.empty((n_rounds, self.alphas.size))
        logx2 = np.log(x2)
        for k, (a, om) in enumerate(zip(self.alphas, self.omega_eff)):
            w = gain * om * g_sum * np.exp(-0.5 * a * logx2)
            out[:, k] = np.bincount(round_idx, weights=w, minlength=n_rounds)
        return out

    def lobe_block(self, lobe, n_rounds, st):
        net, ch, ctl = self.net, self.ch, self.controls
        gain = self.rad.g_ml if lobe == "main" else self.rad.g_sl
        mean_clusters = self.ml_clusters if lobe == "main" else self.cap_clusters
        m = st["counts"].poisson(mean_clusters, n_rounds)
        total = int(m.sum())
        round_idx = np.repeat(np.arange(n_rounds), m)
        if lobe == "main":
            cos_c = np.full(total, self.cos_ml)
        else:
            cos_c = st["positions"].uniform(self.cos_min, 1.0, total)
        n_bs = st["counts"].poisson(net.lambda_bs, total)

        if not ctl.per_station:
            g_sum = sample_cluster_gain_sum(st["fading"], ch, n_bs)
            return self.temps(gain, g_sum, self.x2(cos_c), round_idx, n_rounds), m

        # one round at a time keeps the per-station arrays bounded
        out = np.zeros((n_rounds, self.alphas.size))
        bounds = np.concatenate([[0], np.cumsum(m)])
        for r in range(n_rounds):
            sl = slice(bounds[r], bounds[r + 1])
            counts = n_bs[sl]
            n_tot = int(counts.sum())
            if n_tot == 0:
                continue
            cos_bs = np.repeat(cos_c[sl], counts)
            g = sample_gain_sq(st["fading"], ch, n_tot)
            if ctl.bs_offsets_enabled:
                cos_bs = _cos_after_offset(cos_bs, st["offsets"], net.sigma_c_m, self.r_e, n_tot)
            out[r] = self.temps(gain, g, self.x2(cos_bs), np.zeros(n_tot, dtype=int), 1)[0]
        return out, m


@dataclass
class _BlockResult:
    acc: dict
    cluster_acc: MomentAccumulator
    exceed: dict
    samples: dict | None


def _run_block(args):
    model, block, n_rounds, lobes, centers, taus, keep = args
    st = _streams(np.random.SeedSequence(model.controls.seed, spawn_key=(block,)))
    acc, exceed, samples = {}, {}, {} if keep else None
    cluster_acc = MomentAccumulator.from_samples(np.zeros((0, 1)))
    for lobe in LOBES:
        if lobe not in lobes:
            continue
        t, m = model.lobe_block(lobe, n_rounds, st[lobe])
        acc[lobe] = MomentAccumulator.from_samples(t)
        if lobe == "side":
            cluster_acc = MomentAccumulator.from_samples(m[:, None].astype(float))
        if lobe in centers and taus:
            dev = np.abs(t - centers[lobe])
            exceed[lobe] = np.stack([(dev > tau).sum(axis=0) for tau in taus])
        if keep:
            samples[lobe] = t
    return _BlockResult(acc, cluster_acc, exceed, samples)


# --------------------------------------------------------------------------
#  Public API
# --------------------------------------------------------------------------

@dataclass
class LobeSummary:
    alphas: np.ndarray
    moments: MomentAccumulator
    samples: np.ndarray | None = None

    @property
    def mean(self):
        return self.moments.mean

    @property
    def std(self):
        return self.moments.std

    @property
    def mu4(self):
        return self.moments.mu4


@dataclass
class SimResult:
    rounds: int
    alphas: np.ndarray
    lobes: dict = field(default_factory=dict)
    exceed: dict = field(default_factory=dict)
    taus: tuple = ()
    side_cluster_counts: MomentAccumulator | None = None


def run_round(geo: Geometry, rad: RadiometerParams, net: NetworkParams, ch: ChannelParams,
              controls: SimControls, stream: np.random.SeedSequence,
              prop: Propagation = DEFAULT_PROPAGATION) -> RfiSample:
    """One realisation of (T_ml, T_sl) at ``net.alpha`` from ``stream``."""
    model = _Model(geo, rad, net, ch, controls, prop, [net.alpha])
    st = _streams(stream)
    t_ml, _ = model.lobe_block("main", 1, st["main"])
    t_sl, _ = model.lobe_block("side", 1, st["side"])
    return RfiSample(float(t_ml[0, 0]), float(t_sl[0, 0]))


def _block_sizes(rounds, block_size):
    full, rest = divmod(rounds, block_size)
    return [block_size] * full + ([rest] if rest else [])


def simulate(geo: Geometry, rad: RadiometerParams, net: NetworkParams, ch: ChannelParams,
             controls: SimControls, prop: Propagation = DEFAULT_PROPAGATION, *,
             alphas: Sequence[float] | None = None, lobes: Sequence[str] = LOBES,
             taus: Sequence[float] = (), keep_samples: bool = False) -> SimResult:
    """Empirical RFI statistics over ``controls.rounds`` rounds.

    The same realisations are evaluated for every exponent in ``alphas``
    (default ``[net.alpha]``). When ``taus`` is given, exceedances of
    |T - E[T]| > tau around the analytic mean are counted per lobe.
    """
    alphas = [net.alpha] if alphas is None else list(alphas)
    model = _Model(geo, rad, net, ch, controls, prop, alphas)
    centers = {}
    if taus:
        for lobe in lobes:
            centers[lobe] = np.array([
                lobe_cumulant(lobe, 1, geo, rad, _with_alpha(net, a), ch, prop) for a in alphas])
    sizes = _block_sizes(controls.rounds, controls.block_size)
    jobs = [(model, b, n, tuple(lobes), centers, tuple(taus), keep_samples)
            for b, n in enumerate(sizes)]
    if controls.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=controls.workers) as ex:
            results = list(ex.map(_run_block, jobs))
    else:
        results = [_run_block(j) for j in jobs]

    res = SimResult(rounds=controls.rounds, alphas=np.asarray(alphas, dtype=float), taus=tuple(taus))
    clusters = None
    for lobe in lobes:
        acc = results[0].acc[lobe]
        for r in results[1:]:
            acc = acc.merge(r.acc[lobe])
        samples = np.concatenate([r.samples[lobe] for r in results]) if keep_samples else None
        res.lobes[lobe] = LobeSummary(res.alphas, acc, samples)
        if lobe in centers and taus:
            res.exceed[lobe] = sum(r.exceed[lobe] for r in results)
    if "side" in lobes:
        clusters = results[0].cluster_acc
        for r in results[1:]:
            clusters = clusters.merge(r.cluster_acc)
        res.side_cluster_counts = clusters
    return res


def _with_alpha(net: NetworkParams, alpha: float) -> NetworkParams:
    from dataclasses import replace
    return replace(net, alpha=float(alpha))


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion k/n."""
    if n <= 0:
        raise ValueError("n must be positive")
    z = norm.ppf(0.5 + confidence / 2.0)
    p = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = (p + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class SopEstimate:
    tau: float
    exceedances: int
    rounds: int
    ci_low: float
    ci_high: float

    @property
    def p(self) -> float:
        return self.exceedances / self.rounds


def estimate_sop(geo: Geometry, rad: RadiometerParams, net: NetworkParams, ch: ChannelParams,
                 controls: SimControls, tau, center: str = "analytic",
                 prop: Propagation = DEFAULT_PROPAGATION, *,
                 alphas: Sequence[float] | None = None, confidence: float = 0.95):
    """Empirical P(|T_sl - centre| > tau) with a Wilson interval.

    ``tau`` may be a scalar or a sequence; ``alphas`` defaults to
    ``[net.alpha]``. Returns a nested list ``[alpha][tau]`` of
    :class:`SopEstimate` unless both are scalar, in which case a single
    estimate is returned.
    """
    scalar = np.isscalar(tau) and alphas is None
    taus = [float(tau)] if np.isscalar(tau) else [float(t) for t in tau]
    if any(not t > 0 for t in taus):
        raise ValueError("tau must be positive")
    alist = [net.alpha] if alphas is None else list(alphas)
    if center == "analytic":
        sim = simulate(geo, rad, net, ch, controls, prop, alphas=alist, lobes=("side",), taus=taus)
        counts = sim.exceed["side"]                     # (n_tau, n_alpha)
    elif center == "empirical":
        sim = simulate(geo, rad, net, ch, controls, prop, alphas=alist, lobes=("side",),
                       keep_samples=True)
        t = sim.lobes["side"].samples
        dev = np.abs(t - t.mean(axis=0))
        counts = np.stack([(dev > tt).sum(axis=0) for tt in taus])
    else:
        raise ValueError("center must be 'analytic' or 'empirical'")
    n = controls.rounds
    out = [[SopEstimate(tt, int(counts[j, i]), n, *wilson_interval(int(counts[j, i]), n, confidence))
            for j, tt in enumerate(taus)] for i in range(len(alist))]
    return out[0][0] if scalar else out


def write_samples_csv(path, samples_ml: np.ndarray, samples_sl: np.ndarray) -> None:
    """Raw per-round dump with header ``round,t_ml_k,t_sl_k``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "t_ml_k", "t_sl_k"])
        for i, (a, b) in enumerate(zip(samples_ml, samples_sl)):
            w.writerow([i, repr(float(a)), repr(float(b))])
