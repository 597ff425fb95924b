import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from rfi_coexist.mathkernels import (ConvergenceError, QuadratureError, QuadratureSpec,
                                     bell_table, bessel_i0, bessel_i0e, gamma_fn, gauss_2f1,
                                     gen_binomial, gen_laguerre, integrate, marcum_p1,
                                     marcum_q1, partial_bell)

mp.mp.dps = 30


# ---- gamma and binomials ------------------------------------------------

def test_gamma_small_integers():
    assert gamma_fn(1.0) == 1.0
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)


def test_gamma_shadowing_parameter():
    assert gamma_fn(0.739) == pytest.approx(float(mp.gamma(0.739)), rel=1e-13)
    # frozen mpmath value
    assert gamma_fn(0.739) == pytest.approx(1.2403336218698, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma_fn(x)


@given(st.floats(-3.0, 5.0), st.integers(0, 8))
def test_gen_binomial_against_mpmath(top, k):
    expect = float(mp.binomial(top, k))
    assert gen_binomial(top, k) == pytest.approx(expect, rel=1e-12, abs=1e-12)


# ---- hypergeometric -----------------------------------------------------

def test_2f1_at_zero():
    assert gauss_2f1(0.3, 2.0, 1.0, 0.0) == 1.0


def test_2f1_geometric_series():
    assert gauss_2f1(1.0, 1.0, 1.0, 0.5) == pytest.approx(2.0, rel=1e-14)


@given(st.floats(0.05, 3.0), st.floats(0.5, 6.0), st.floats(0.5, 4.0), st.floats(0.0, 0.95))
def test_2f1_against_mpmath(a, b, c, x):
    expect = float(mp.hyp2f1(a, b, c, x))
    assert gauss_2f1(a, b, c, x) == pytest.approx(expect, rel=1e-10)


@given(st.floats(0.1, 2.0), st.floats(0.5, 4.0), st.floats(1.5, 4.0), st.floats(0.0, 0.9))
def test_2f1_contiguous_relation(a, b, c, x):
    # (c-a) F(a-1) + (2a - c + (b-a) x) F(a) + a (x-1) F(a+1) = 0
    f = lambda aa: gauss_2f1(aa, b, c, x)
    terms = [(c - a) * f(a - 1), (2 * a - c + (b - a) * x) * f(a), a * (x - 1) * f(a + 1)]
    assert abs(sum(terms)) <= 1e-8 * max(abs(t) for t in terms)


def test_2f1_rejects_bad_arguments():
    with pytest.raises(ValueError):
        gauss_2f1(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        gauss_2f1(1.0, 1.0, -2.0, 0.3)


def test_2f1_nonconvergence_reported():
    with pytest.raises(ConvergenceError):
        gauss_2f1(1.5, 2.0, 1.0, 0.9999999, max_terms=50)


# ---- Laguerre -----------------------------------------------------------

def test_laguerre_low_orders():
    assert gen_laguerre(0, 2.3, 7.0) == 1.0
    assert gen_laguerre(1, -1.0, -800.0) == pytest.approx(800.0)
    # L_2^(-1)(-lam) = (lam^2 + 2 lam)/2
    assert gen_laguerre(2, -1.0, -800.0) == pytest.approx((800.0 ** 2 + 1600.0) / 2, rel=1e-14)


@given(st.integers(1, 8), st.floats(-1.0, 3.0), st.floats(-1e3, 1e3))
def test_laguerre_three_term_recurrence(n, a, v):
    lhs = (n + 1) * gen_laguerre(n + 1, a, v)
    t1 = (2 * n + a + 1 - v) * gen_laguerre(n, a, v)
    t2 = (n + a) * gen_laguerre(n - 1, a, v)
    scale = max(abs(lhs), abs(t1), abs(t2), 1e-300)
    assert abs(lhs - (t1 - t2)) <= 1e-10 * scale


@given(st.integers(0, 6), st.floats(-0.9, 3.0), st.floats(-50.0, 50.0))
def test_laguerre_against_mpmath(n, a, v):
    assert gen_laguerre(n, a, v) == pytest.approx(float(mp.laguerre(n, a, v)), rel=1e-9, abs=1e-9)


# ---- partial Bell -------------------------------------------------------

def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _bell_brute(n, k, x):
    total = 0.0
    for part in _set_partitions(list(range(n))):
        if len(part) == k:
            total += math.prod(x[len(b) - 1] for b in part)
    return total


def test_bell_base_cases():
    a = [2.0, 3.0, 5.0]
    assert partial_bell(1, 1, a) == 2.0
    assert partial_bell(2, 1, a) == 3.0
    assert partial_bell(2, 2, a) == 4.0


@pytest.mark.parametrize("n", range(1, 7))
def test_bell_matches_brute_force(n):
    rng = np.random.default_rng(n)
    x = list(rng.uniform(-2, 2, n))
    for k in range(1, n + 1):
        assert partial_bell(n, k, x) == pytest.approx(_bell_brute(n, k, x), rel=1e-12, abs=1e-12)


def test_bell_table_consistent_with_scalar():
    x = [0.3, 1.1, -0.4, 2.0, 0.7]
    tab = bell_table(5, x)
    for n in range(1, 6):
        for k in range(1, n + 1):
            assert tab[n, k] == pytest.approx(partial_bell(n, k, x), rel=1e-14)


def test_bell_arity_error():
    with pytest.raises(ValueError):
        partial_bell(4, 1, [1.0, 2.0])


# ---- Bessel -------------------------------------------------------------

def test_i0_values():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i0(1.0) == pytest.approx(1.2660658777520082, rel=1e-14)


@given(st.floats(0.0, 700.0))
def test_i0e_against_mpmath(x):
    expect = float(mp.besseli(0, x) * mp.exp(-x))
    assert float(bessel_i0e(x)) == pytest.approx(expect, rel=1e-12)


def test_i0e_vectorised_and_domain():
    xs = np.array([0.0, 5.0, 14.9, 15.1, 200.0])
    out = bessel_i0e(xs)
    assert out.shape == xs.shape
    with pytest.raises(ValueError):
        bessel_i0e(-1.0)


# ---- Marcum Q -----------------------------------------------------------

def _marcum_integral(a, b):
    f = lambda t: t * mp.exp(-(t * t + a * a) / 2) * mp.besseli(0, a * t)
    return float(mp.quad(f, [b, b + 10, mp.inf]))


def test_marcum_edges():
    assert float(marcum_q1(1.3, 0.0)) == 1.0
    assert float(marcum_q1(0.0, 1.7)) == pytest.approx(math.exp(-1.7 ** 2 / 2), rel=1e-13)


def test_marcum_frozen_value():
    # frozen from the defining integral evaluated in mpmath at 30 digits
    assert float(marcum_q1(1.0, 2.0)) == pytest.approx(0.26901206003591, rel=1e-12)


@given(st.floats(0.0, 8.0), st.floats(0.0, 12.0))
def test_marcum_against_defining_integral(a, b):
    expect = _marcum_integral(a, b)
    assert abs(float(marcum_q1(a, b)) - expect) <= 1e-8 * max(expect, 1e-300) + 1e-300


@given(st.floats(0.0, 8.0), st.floats(0.0, 12.0))
def test_marcum_complement(a, b):
    assert float(marcum_q1(a, b) + marcum_p1(a, b)) == pytest.approx(1.0, abs=1e-13)


def test_marcum_monotone_on_grid():
    a = np.linspace(0, 6, 25)
    b = np.linspace(0, 9, 40)
    q = marcum_q1(a[:, None], b[None, :])
    assert np.all(np.diff(q, axis=1) <= 1e-13)
    assert np.all(np.diff(q, axis=0) >= -1e-13)


# ---- quadrature ---------------------------------------------------------

def test_integrate_examples():
    assert integrate(lambda t: math.exp(-t), 0.0).value == pytest.approx(1.0, rel=1e-10)
    assert integrate(lambda t: t * math.exp(-t * t / 2), 0.0).value == pytest.approx(1.0, rel=1e-10)
    d_min, d_max = 685e3, 3032.7e3
    assert integrate(lambda x: x, d_min, d_max).value == pytest.approx((d_max ** 2 - d_min ** 2) / 2,
                                                                       rel=1e-12)


def test_integrate_truncated_fast_path():
    spec = QuadratureSpec(truncate_at=40.0)
    assert integrate(lambda t: math.exp(-t), 0.0, math.inf, spec).value == pytest.approx(1.0, rel=1e-12)


def test_integrate_reports_failure():
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14, max_subdivisions=1)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: math.sin(1.0 / t), 1e-4, 1.0, spec)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
