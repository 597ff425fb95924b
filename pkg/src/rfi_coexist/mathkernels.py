"""Special functions and quadrature used by the analytic RFI stack.

Everything here is pure and reentrant. Array-valued functions accept
anything ``numpy.asarray`` understands and broadcast their arguments.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi

__all__ = [
    "ConvergenceError",
    "QuadratureError",
    "QuadratureSpec",
    "QuadResult",
    "gamma_fn",
    "gen_binomial",
    "gauss_2f1",
    "gen_laguerre",
    "partial_bell",
    "bell_table",
    "bessel_i0",
    "bessel_i0e",
    "marcum_q1",
    "marcum_p1",
    "integrate",
]


class ConvergenceError(ArithmeticError):
    """A series failed to reach its tolerance within the term budget."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature could not meet the requested tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to accept them.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


# --------------------------------------------------------------------------
#  Gamma / binomial
# --------------------------------------------------------------------------

def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"gamma_fn is defined here for x > 0, got {x!r}")
    return math.gamma(x)


def gen_binomial(top: float, k: int) -> float:
    """Binomial coefficient C(top, k) for real ``top`` and integer ``k``.

    Uses the falling-factorial product, which stays finite when ``top`` is
    a negative integer (where a ratio of Gamma functions is singular).
    """
    if k < 0:
        return 0.0
    out = 1.0
    for j in range(k):
        out *= (top - j) / (k - j)
    return out


# --------------------------------------------------------------------------
#  Gauss hypergeometric function
# --------------------------------------------------------------------------

def gauss_2f1(a: float, b: float, c: float, x: float, *, tol: float = 1e-15,
              max_terms: int = 100_000) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; x) for 0 <= x < 1.

    Plain power series; when the terms decay slowly the last three partial
    sums are passed through Aitken's delta-squared process and the
    accelerated value is used once it stabilises.
    """
    if c <= 0 and float(c).is_integer():
        raise ValueError("c must not be a non-positive integer")
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    if x == 0.0:
        return 1.0

    term = 1.0
    s0 = s1 = math.nan
    s2 = 1.0
    prev_aitken = math.nan
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        s0, s1, s2 = s1, s2, s2 + term
        if term == 0.0 or abs(term) <= tol * abs(s2):
            return s2
        if k >= 2:
            denom = (s2 - s1) - (s1 - s0)
            if denom != 0.0:
                aitken = s2 - (s2 - s1) ** 2 / denom
                if abs(aitken - prev_aitken) <= tol * abs(aitken):
                    return aitken
                prev_aitken = aitken
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {x}) did not converge in {max_terms} terms")


# --------------------------------------------------------------------------
#  Laguerre and Bell polynomials
# --------------------------------------------------------------------------

def gen_laguerre(n: int, a: float, v: float) -> float:
    """Generalized Laguerre polynomial L_n^(a)(v) by its explicit sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0.0
    power = 1.0   # v**i / i!
    for i in range(n + 1):
        if i:
            power *= v / i
        total += (-1) ** i * gen_binomial(n + a, n - i) * power
    return total


def bell_table(n_max: int, coeffs: Sequence[float]) -> np.ndarray:
    """All partial Bell polynomials B_{n,i} for 0 <= i <= n <= n_max.

    ``coeffs[j-1]`` holds a_j. Entry ``[n, i]`` of the returned array is
    B_{n,i}(a_1, ..., a_{n-i+1}); B_{0,0} = 1.
    """
    if len(coeffs) < n_max:
        raise ValueError(
            f"need at least {n_max} coefficients for n_max={n_max}, got {len(coeffs)}")
    table = np.zeros((n_max + 1, n_max + 1))
    table[0, 0] = 1.0
    for n in range(1, n_max + 1):
        for i in range(1, n + 1):
            acc = 0.0
            for j in range(1, n - i + 2):
                acc += math.comb(n - 1, j - 1) * coeffs[j - 1] * table[n - j, i - 1]
            table[n, i] = acc
    return table


def partial_bell(n: int, i: int, coeffs: Sequence[float]) -> float:
    """Partial (incomplete) Bell polynomial B_{n,i}(a_1, ..., a_{n-i+1})."""
    if n < 1 or not 1 <= i <= n:
        raise ValueError(f"need n >= 1 and 1 <= i <= n, got n={n}, i={i}")
    if len(coeffs) < n - i + 1:
        raise ValueError(
            f"B_{{{n},{i}}} needs {n - i + 1} coefficients, got {len(coeffs)}")
    padded = list(coeffs[: n - i + 1]) + [0.0] * (i - 1)
    return float(bell_table(n, padded)[n, i])


# --------------------------------------------------------------------------
#  Modified Bessel I0 and Marcum Q
# --------------------------------------------------------------------------

_I0_SERIES_MAX = 15.0
_I0_SERIES_TERMS = 80
_I0_ASYMP_TERMS = 40


def bessel_i0e(x) -> np.ndarray:
    """Exponentially scaled modified Bessel function exp(-x) * I0(x), x >= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("bessel_i0e expects x >= 0")
    out = np.empty_like(x)

    small = x <= _I0_SERIES_MAX
    if np.any(small):
        xs = x[small]
        q = 0.25 * xs * xs
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        for k in range(1, _I0_SERIES_TERMS):
            term = term * q / (k * k)
            total += term
        out[small] = total * np.exp(-xs)

    big = ~small
    if np.any(big):
        xb = x[big]
        term = np.ones_like(xb)
        total = np.ones_like(xb)
        live = np.ones(xb.shape, dtype=bool)
        for k in range(_I0_ASYMP_TERMS):
            nxt = term * (2 * k + 1) ** 2 / (8.0 * (k + 1) * xb)
            # stop each element at its smallest term (asymptotic series)
            live &= np.abs(nxt) < np.abs(term)
            term = nxt
            total += np.where(live, term, 0.0)
        out[big] = total / np.sqrt(2.0 * np.pi * xb)
    return out


def bessel_i0(x) -> np.ndarray:
    """Modified Bessel function of the first kind, order zero, x >= 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return bessel_i0e(x) * np.exp(x)


def _log_poisson_pmf(j: np.ndarray, mu: np.ndarray) -> np.ndarray:
    from scipy.special import gammaln
    with np.errstate(divide="ignore", invalid="ignore"):
        logmu = np.where(mu > 0, np.log(np.where(mu > 0, mu, 1.0)), -np.inf)
        jlog = np.where(j == 0, 0.0, j * logmu)
    return -mu + jlog - gammaln(j + 1.0)


def _marcum_terms(a, b, *, chunk_cells: int = 2_000_000):
    """Return (Q1, 1 - Q1), each summed directly from positive terms.

    Q1(a, b) is a Poisson(a^2/2) mixture of Poisson(b^2/2) CDFs:
        Q1 = sum_j Pois(j; a^2/2) * P[Pois(b^2/2) <= j]
    and the complement swaps the CDF for the survival function.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("Marcum Q1 expects a, b >= 0")
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    q = np.empty(a.size)
    p = np.empty(a.size)
    mu_all = 0.5 * a * a
    nu_all = 0.5 * b * b

    def span(m):
        return m + 12.0 * np.sqrt(m) + 40.0

    order = np.argsort(np.maximum(span(mu_all), span(nu_all)))
    start = 0
    while start < a.size:
        top = int(np.ceil(max(span(mu_all[order[start]]), span(nu_all[order[start]]))))
        width = max(1, chunk_cells // (top + 1))
        idx = order[start:start + width]
        mu = mu_all[idx][:, None]
        nu = nu_all[idx][:, None]
        jmax = int(np.ceil(np.max(np.maximum(span(mu), span(nu)))))
        j = np.arange(jmax + 1, dtype=float)[None, :]
        w = np.exp(_log_poisson_pmf(j, mu))
        pmf_nu = np.exp(_log_poisson_pmf(j, nu))
        cdf = np.cumsum(pmf_nu, axis=1)
        sf = np.cumsum(pmf_nu[:, ::-1], axis=1)[:, ::-1]
        sf = np.concatenate([sf[:, 1:], np.zeros((sf.shape[0], 1))], axis=1)
        q[idx] = np.sum(w * np.minimum(cdf, 1.0), axis=1)
        p[idx] = np.sum(w * sf, axis=1)
        start += width
    return q.reshape(shape), p.reshape(shape)


def marcum_q1(a, b) -> np.ndarray:
    """First-order Marcum Q-function Q1(a, b)."""
    q, _ = _marcum_terms(a, b)
    return np.clip(q, 0.0, 1.0)


def marcum_p1(a, b) -> np.ndarray:
    """Complement 1 - Q1(a, b), accurate when Q1 is close to one."""
    _, p = _marcum_terms(a, b)
    return np.clip(p, 0.0, 1.0)


# --------------------------------------------------------------------------
#  Adaptive quadrature
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate`.

    ``truncate_at`` turns a semi-infinite integral into a finite one ending
    at that abscissa (fast path for integrands with a known exponential
    decay scale). ``scale`` sets where the map t = a + scale * u / (1 - u)
    puts u = 1/2 for the untruncated semi-infinite case.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    truncate_at: float | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.scale <= 0:
            raise ValueError("scale must be positive")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float

    def __float__(self) -> float:
        return self.value


DEFAULT_QUADRATURE = QuadratureSpec()


def integrate(f: Callable[[float], float], a: float, b: float = math.inf,
              spec: QuadratureSpec = DEFAULT_QUADRATURE) -> QuadResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over [a, b], b may be inf.

    Raises :class:`QuadratureError` when the achieved error bound exceeds
    ``max(abs_tol, rel_tol * |value|)`` by more than a factor of ten.
    """
    if math.isinf(b) and spec.truncate_at is not None:
        b = spec.truncate_at
    if math.isinf(b):
        s = spec.scale

        def g(u):
            one_minus = 1.0 - u
            return f(a + s * u / one_minus) * s / (one_minus * one_minus)

        lo, hi, fun = 0.0, 1.0, g
    else:
        lo, hi, fun = a, b, f

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        value, err, info = _spi.quad(
            fun, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, full_output=1)[:3]
    target = max(spec.abs_tol, spec.rel_tol * abs(value))
    if not np.isfinite(value) or err > 10.0 * target:
        raise QuadratureError("tolerance not met", value, err)
    return QuadResult(float(value), float(err))
