"""Scalar special functions: the standard normal cdf/quantile and the
regularized lower incomplete gamma function.

Every function has a pure-Python scalar form and a numpy form (``*_array``)
used by the quadrature and sampling code.  Both forms follow the same
algorithms so they agree to rounding.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import DomainError, NumericalError

__all__ = [
    "std_normal_cdf",
    "std_normal_sf",
    "std_normal_pdf",
    "std_normal_logcdf",
    "std_normal_quantile",
    "std_normal_quantile_array",
    "std_normal_cdf_array",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "reg_lower_gamma_array",
    "reg_upper_gamma_array",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def _reject_nan(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value):
        raise DomainError(f"{name} is NaN")
    return value


# ---------------------------------------------------------------------------
# Standard normal distribution
# ---------------------------------------------------------------------------

def std_normal_cdf(x: float) -> float:
    """Phi(x), evaluated through erfc so that the lower tail keeps full
    relative precision."""
    x = _reject_nan("x", x)
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_sf(x: float) -> float:
    """Upper tail 1 - Phi(x) without cancellation."""
    x = _reject_nan("x", x)
    return 0.5 * math.erfc(x / _SQRT2)


def std_normal_logcdf(x: float) -> float:
    """log Phi(x), finite far below the underflow point of Phi."""
    x = _reject_nan("x", x)
    if x > -5.0:
        return math.log(std_normal_cdf(x))
    # Phi(x) = erfcx(-x / sqrt 2) exp(-x^2 / 2) / 2
    return math.log(0.5 * float(_sp.erfcx(-x / _SQRT2))) - 0.5 * x * x


def std_normal_pdf(x: float) -> float:
    x = _reject_nan("x", x)
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


# Acklam's rational approximation (relative error ~1.2e-9), polished below.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _quantile_guess(p: float) -> float:
    # p in (0, 0.5]
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def std_normal_quantile(p: float) -> float:
    """Phi^{-1}(p) for p in (0, 1).

    The rational guess is refined by one Newton step against the exact
    cdf.  Work is done in the lower half; 1 - p is exact for p >= 1/2.
    """
    p = _reject_nan("p", p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile needs 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -std_normal_quantile(1.0 - p)
    x = _quantile_guess(p)
    err = 0.5 * math.erfc(-x / _SQRT2) - p
    dens = _INV_SQRT_2PI * math.exp(-0.5 * x * x)
    if dens > 0.0:
        x -= err / dens
    return x


def std_normal_cdf_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any():
        raise DomainError("x contains NaN")
    return 0.5 * _sp.erfc(-x / _SQRT2)


def std_normal_quantile_array(p) -> np.ndarray:
    """Vectorised twin of :func:`std_normal_quantile` (same guess, same
    Newton step)."""
    p = np.asarray(p, dtype=float)
    if np.isnan(p).any() or (p <= 0.0).any() or (p >= 1.0).any():
        raise DomainError("quantile needs every p in (0, 1)")
    upper = p > 0.5
    lo = np.where(upper, 1.0 - p, p)
    x = np.empty_like(lo)

    tail = lo < _P_LOW
    if tail.any():
        q = np.sqrt(-2.0 * np.log(lo[tail]))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        x[tail] = num / den
    mid = ~tail
    if mid.any():
        q = lo[mid] - 0.5
        r = q * q
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        x[mid] = num / den

    err = 0.5 * _sp.erfc(-x / _SQRT2) - lo
    dens = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    step = np.divide(err, dens, out=np.zeros_like(err), where=dens > 0.0)
    x = x - step
    x[lo == 0.5] = 0.0
    return np.where(upper, -x, x)


# ---------------------------------------------------------------------------
# Regularized incomplete gamma
# ---------------------------------------------------------------------------

def _log1pmx(u: float) -> float:
    """log(1 + u) - u for |u| <= 1/4, by its power series."""
    # -u^2/2 + u^3/3 - u^4/4 + ...
    total = 0.0
    power = u * u
    k = 2
    while True:
        term = power / k
        total += -term if k % 2 == 0 else term
        if abs(term) <= 1e-17 * abs(total):
            return total
        power *= u
        k += 1


def _stirling_tail(s: float) -> float:
    # lgamma(s + 1) - [s log s - s + 0.5 log(2 pi s)] for s >= 10
    r = 1.0 / s
    r2 = r * r
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))))


def _log_prefix(s: float, x: float) -> float:
    """log(x^s e^{-x} / Gamma(s + 1)) without large cancellations."""
    if s < 10.0:
        return s * math.log(x) - x - math.lgamma(s + 1.0)
    u = (x - s) / s
    if abs(u) <= 0.25:
        core = s * _log1pmx(u)
    else:
        # log1p(u) loses digits as u -> -1; log(x / s) rounds only once
        ratio = x / s
        log_ratio = math.log(ratio) if ratio > 0 else math.log(x) - math.log(s)
        core = s * log_ratio - (x - s)
    return core - 0.5 * math.log(s) - _HALF_LOG_2PI - _stirling_tail(s)


def _lower_series(s: float, x: float) -> float:
    total = 1.0
    term = 1.0
    n = 0
    while n < _MAX_ITER:
        n += 1
        term *= x / (s + n)
        total += term
        if term < total * _EPS:
            return total * math.exp(_log_prefix(s, x))
    raise NumericalError("incomplete gamma series did not converge",
                         total * math.exp(_log_prefix(s, x)), term)


def _upper_fraction(s: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for Gamma(s, x)
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    i = 0
    while i < _MAX_ITER:
        i += 1
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            # prefix / Gamma(s) = s * prefix / Gamma(s + 1)
            return s * math.exp(_log_prefix(s, x)) * h
    raise NumericalError("incomplete gamma continued fraction did not converge",
                         s * math.exp(_log_prefix(s, x)) * h, abs(delta - 1.0))


def _check_gamma_args(s: float, x: float) -> tuple[float, float]:
    s = _reject_nan("s", s)
    x = _reject_nan("x", x)
    if s <= 0.0:
        raise DomainError(f"shape s must be positive, got {s!r}")
    if x < 0.0:
        raise DomainError(f"x must be nonnegative, got {x!r}")
    return s, x


def reg_lower_gamma(s: float, x: float) -> float:
    """P(s, x) = gamma(s, x) / Gamma(s), the regularized lower incomplete
    gamma function.

    Series below ``x = s + 1``, continued fraction for the complement above.
    """
    s, x = _check_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < s + 1.0:
        return min(1.0, _lower_series(s, x))
    return max(0.0, 1.0 - _upper_fraction(s, x))


def reg_upper_gamma(s: float, x: float) -> float:
    """1 - P(s, x), computed directly on the side where it is small."""
    s, x = _check_gamma_args(s, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        return max(0.0, 1.0 - _lower_series(s, x))
    return min(1.0, _upper_fraction(s, x))


def _log1pmx_array(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    small = np.abs(u) <= 0.25
    if small.any():
        us = u[small]
        total = np.zeros_like(us)
        power = us * us
        for k in range(2, 40):
            term = power / k
            total += -term if k % 2 == 0 else term
            power = power * us
        out[small] = total
    return out


def _log_ratio_array(x: np.ndarray, s: float) -> np.ndarray:
    ratio = x / s
    safe = ratio > 0
    return np.where(safe, np.log(np.where(safe, ratio, 1.0)), np.log(x) - math.log(s))


def _log_prefix_array(s: float, x: np.ndarray) -> np.ndarray:
    if s < 10.0:
        with np.errstate(divide="ignore"):
            return s * np.log(x) - x - math.lgamma(s + 1.0)
    u = (x - s) / s
    with np.errstate(divide="ignore"):
        core = np.where(np.abs(u) <= 0.25, s * _log1pmx_array(u),
                        s * _log_ratio_array(x, s) - (x - s))
    return core - 0.5 * math.log(s) - _HALF_LOG_2PI - _stirling_tail(s)


def _gamma_pair_array(s: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (P, 1 - P) elementwise for scalar s and array x >= 0."""
    lower = np.zeros_like(x)
    upper = np.ones_like(x)
    pos = x > 0.0
    inf = np.isinf(x)
    lower[inf] = 1.0
    upper[inf] = 0.0
    finite = pos & ~inf

    ser = finite & (x < s + 1.0)
    if ser.any():
        xs = x[ser]
        total = np.ones_like(xs)
        term = np.ones_like(xs)
        active = np.ones(xs.shape, dtype=bool)
        n = 0
        while active.any():
            n += 1
            if n > _MAX_ITER:
                raise NumericalError("incomplete gamma series did not converge")
            term = np.where(active, term * xs / (s + n), 0.0)
            total += term
            active &= term >= total * _EPS
        p = np.minimum(1.0, total * np.exp(_log_prefix_array(s, xs)))
        lower[ser] = p
        upper[ser] = np.maximum(0.0, 1.0 - p)

    cf = finite & ~(x < s + 1.0)
    if cf.any():
        xc = x[cf]
        b = xc + 1.0 - s
        c = np.full_like(xc, 1.0 / _TINY)
        d = 1.0 / b
        h = d.copy()
        active = np.ones(xc.shape, dtype=bool)
        i = 0
        while active.any():
            i += 1
            if i > _MAX_ITER:
                raise NumericalError("incomplete gamma continued fraction did not converge")
            an = -i * (i - s)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _TINY, _TINY, d)
            c = b + an / c
            c = np.where(np.abs(c) < _TINY, _TINY, c)
            d = 1.0 / d
            delta = np.where(active, d * c, 1.0)
            h *= delta
            active &= np.abs(delta - 1.0) >= _EPS
        q = np.minimum(1.0, s * np.exp(_log_prefix_array(s, xc)) * h)
        upper[cf] = q
        lower[cf] = np.maximum(0.0, 1.0 - q)
    return lower, upper


def _check_gamma_array(s: float, x) -> tuple[float, np.ndarray]:
    s = _reject_nan("s", s)
    if s <= 0.0:
        raise DomainError(f"shape s must be positive, got {s!r}")
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any() or (x < 0.0).any():
        raise DomainError("x must be nonnegative and not NaN")
    return s, x


def reg_lower_gamma_array(s: float, x) -> np.ndarray:
    s, x = _check_gamma_array(s, x)
    return _gamma_pair_array(s, np.atleast_1d(x))[0].reshape(x.shape)


def reg_upper_gamma_array(s: float, x) -> np.ndarray:
    s, x = _check_gamma_array(s, x)
    return _gamma_pair_array(s, np.atleast_1d(x))[1].reshape(x.shape)
