import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from rfi_coexist.geomodel import Geometry
from rfi_coexist.rficumulants import NetworkParams
from rfi_coexist.spectral import (IntraClusterParams, bs_ue_distance_cdf, bs_ue_distance_pdf,
                                  laplace_interference, laplace_total_power, received_power_scale,
                                  serving_distance_pdf, simulate_spectral_efficiency,
                                  spectral_efficiency, sum_throughput, ue_center_distance_pdf,
                                  with_lambda)

SIG = 4000.0


@pytest.fixture(scope="module")
def params():
    return IntraClusterParams()


# ---- distance laws ------------------------------------------------------

def test_ue_distance_pdf():
    total, _ = quad(lambda z: float(ue_center_distance_pdf(z, SIG)), 0, np.inf)
    assert total == pytest.approx(1.0, abs=1e-10)
    zs = np.linspace(0, 4 * SIG, 4001)
    assert zs[np.argmax(ue_center_distance_pdf(zs, SIG))] == pytest.approx(SIG, rel=1e-3)
    mean, _ = quad(lambda z: z * float(ue_center_distance_pdf(z, SIG)), 0, np.inf)
    assert mean == pytest.approx(5013.3, abs=0.1)


def test_rician_reduces_to_rayleigh():
    r = np.linspace(0, 5 * SIG, 50)
    assert np.allclose(bs_ue_distance_pdf(r, 0.0, SIG), ue_center_distance_pdf(r, SIG), rtol=1e-13)


def test_rician_normalisation_and_cdf():
    z = 2 * SIG
    total, _ = quad(lambda r: float(bs_ue_distance_pdf(r, z, SIG)), 0, 20 * SIG, points=[z])
    assert total == pytest.approx(1.0, abs=1e-9)
    assert float(bs_ue_distance_cdf(0.0, z, SIG)) == 0.0
    assert float(bs_ue_distance_cdf(1e3 * SIG, z, SIG)) == pytest.approx(1.0)
    part, _ = quad(lambda r: float(bs_ue_distance_pdf(r, z, SIG)), 0, 1.7 * SIG)
    assert float(bs_ue_distance_cdf(1.7 * SIG, z, SIG)) == pytest.approx(part, rel=1e-9)


@pytest.mark.parametrize("lam,z", [(1.0, 0.5 * SIG), (150.0, SIG), (1500.0, 3 * SIG)])
def test_serving_pdf_mass(lam, z):
    pts = [z * 0.5, z, z * 1.5]
    mass, _ = quad(lambda q: float(serving_distance_pdf(q, z, lam, SIG)), 0, 20 * SIG,
                   points=pts, limit=400, epsabs=1e-13, epsrel=1e-12)
    assert mass + math.exp(-lam) == pytest.approx(1.0, abs=1e-8)


def test_serving_pdf_concentrates_for_dense_networks():
    q = np.linspace(0, SIG, 2001)
    med = []
    for lam in (10.0, 1000.0):
        pdf = serving_distance_pdf(q, SIG, lam, SIG)
        cdf = np.cumsum(pdf) * (q[1] - q[0])
        med.append(q[np.searchsorted(cdf, 0.5 * cdf[-1])])
    assert med[1] < 0.2 * med[0]


def test_serving_pdf_matches_nearest_bs_simulation():
    rng = np.random.default_rng(21)
    lam, trials = 150.0, 100_000
    n = rng.poisson(lam, trials)
    live = n > 0
    n = n[live]
    owner = np.repeat(np.arange(n.size), n)
    ue = np.array([SIG, 0.0])
    bs = rng.normal(0.0, SIG, (n.sum(), 2))
    d = np.hypot(*(bs - ue).T)
    nearest = np.minimum.reduceat(d, np.concatenate([[0], np.cumsum(n)[:-1]]))
    grid = np.linspace(0, 3 * SIG, 30001)
    pdf = serving_distance_pdf(grid, SIG, lam, SIG)
    cdf = np.concatenate([[0], np.cumsum((pdf[1:] + pdf[:-1]) / 2 * np.diff(grid))])
    cdf /= 1 - math.exp(-lam)
    res = stats.kstest(nearest, lambda x: np.interp(x, grid, cdf))
    assert res.pvalue > 1e-3


# ---- Laplace transforms -------------------------------------------------

def test_laplace_edges(params):
    assert laplace_total_power(0.0, params) == 1.0
    assert laplace_interference(0.0, params) == 1.0
    empty = with_lambda(params, 0.0)
    assert laplace_total_power(1e10, empty) == 1.0
    assert laplace_interference(1e10, empty) == 1.0
    with pytest.raises(ValueError):
        laplace_total_power(-1.0, params)


def test_laplace_ordering_and_monotone(params):
    k = received_power_scale(params)
    s = np.logspace(-6, 4, 21) / k
    lp = np.array([laplace_total_power(v, params) for v in s])
    li = np.array([laplace_interference(v, params) for v in s])
    assert np.all(lp > 0) and np.all(li <= 1 + 1e-12)
    assert np.all(lp <= li)
    assert np.all(np.diff(lp) <= 1e-12) and np.all(np.diff(li) <= 1e-12)


def _total_power_samples(params, trials, seed):
    rng = np.random.default_rng(seed)
    out = np.empty(trials)
    step = 10_000
    for a in range(0, trials, step):
        m = min(step, trials - a)
        n = rng.poisson(params.lambda_bs, m)
        own = np.repeat(np.arange(m), n)
        ue = rng.normal(0, 1, (m, 2))
        bs = rng.normal(0, 1, (n.sum(), 2))
        rho = np.hypot(*(bs - ue[own]).T)
        w = rng.exponential(1.0, n.sum()) * rho ** (-params.alpha_intra)
        out[a:a + m] = np.bincount(own, weights=w, minlength=m)
    return out * received_power_scale(params)


def test_total_power_laplace_against_simulation(params):
    p = _total_power_samples(params, 1_000_000, 5)
    k = received_power_scale(params)
    for sk in (1e-2, 1.0):
        v = np.exp(-(sk / k) * p)
        se = v.std() / math.sqrt(v.size)
        tol = max(0.01 * v.mean(), 3.5 * se)
        assert abs(laplace_total_power(sk / k, params) - v.mean()) < tol


# ---- spectral efficiency ------------------------------------------------

@pytest.mark.parametrize("lam", [10.0, 150.0, 1500.0])
def test_hamdi_matches_direct_simulation(params, lam):
    p = with_lambda(params, lam)
    mean, se = simulate_spectral_efficiency(p, 100_000, np.random.default_rng(int(lam)))
    assert spectral_efficiency(p) == pytest.approx(mean, rel=0.03)


def test_spectral_efficiency_saturates(params):
    se = {lam: spectral_efficiency(with_lambda(params, lam)) for lam in (0.0, 0.5, 1.0, 2.0, 150.0, 500.0, 1500.0)}
    assert se[0.0] == 0.0
    assert se[0.5] < se[1.0] < se[2.0]
    flat = [se[150.0], se[500.0], se[1500.0]]
    assert max(flat) - min(flat) < 0.01 * se[1500.0]
    assert se[150.0] == pytest.approx(1.5, rel=0.05)


def test_spectral_efficiency_power_monotone(params):
    lo = spectral_efficiency(replace(params, p_tx_w=1e-12))
    mid = spectral_efficiency(replace(params, p_tx_w=1e-6))
    hi = spectral_efficiency(params)
    assert lo < mid <= hi + 1e-9
    assert lo < 0.05


# ---- throughput ---------------------------------------------------------

def test_sum_throughput():
    geo, net = Geometry(), NetworkParams(lambda_bs=150.0)
    tp = sum_throughput(1.5, geo, net, 24e6)
    assert tp.nats_per_s == pytest.approx(13.4e12, rel=0.01)
    assert tp.bits_per_s == pytest.approx(tp.nats_per_s / math.log(2))
    assert sum_throughput(1.5, geo, replace(net, lambda_c_per_km2=0.0), 24e6).nats_per_s == 0.0
    assert sum_throughput(1.5, geo, net, 48e6).nats_per_s == pytest.approx(2 * tp.nats_per_s)


def test_intra_params_validation():
    with pytest.raises(ValueError):
        IntraClusterParams(alpha_intra=2.0)
    with pytest.raises(ValueError):
        IntraClusterParams(sigma_c_m=0.0)
    with pytest.raises(ValueError):
        IntraClusterParams(lambda_bs=-1.0)
    assert IntraClusterParams().noise_power_w == pytest.approx(10 ** (-20.4) * 24e6)
