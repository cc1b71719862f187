"""Reference computations that share no code with the package.

Each oracle uses a different route to the same quantity: direct numerical
integration with scipy, multiprecision arithmetic with mpmath, or exact
binomial sums.
"""

import math

import mpmath as mp
from scipy import integrate, special


def normal_cdf_by_integration(x):
    density = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
    value, _ = integrate.quad(density, 0.0, x, epsabs=1e-14, epsrel=1e-14)
    return 0.5 + value


def bisect_plain(f, lo, hi, tol=1e-13):
    f_lo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (f_lo > 0):
            lo, f_lo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lower_gamma_by_integration(s, x):
    integrand = lambda t: t ** (s - 1) * math.exp(-t)
    value, _ = integrate.quad(integrand, 0.0, x, epsabs=1e-13, epsrel=1e-13)
    return value / math.gamma(s)


def lower_gamma_mp(s, x, dps=40):
    with mp.workdps(dps):
        s, x = mp.mpf(s), mp.mpf(x)
        if x < s:
            return mp.gammainc(s, 0, x, regularized=True)
        return 1 - mp.gammainc(s, x, mp.inf, regularized=True)


def upper_gamma_mp(s, x, dps=40):
    with mp.workdps(dps):
        return mp.gammainc(mp.mpf(s), mp.mpf(x), mp.inf, regularized=True)


def binomial_tail_sum(k, n, p):
    """P(X >= k) by summing log-space binomial terms."""
    if p <= 0:
        return 0.0 if k > 0 else 1.0
    if p >= 1:
        return 1.0
    lp, lq = math.log(p), math.log1p(-p)
    terms = [math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1) + j * lp + (n - j) * lq
             for j in range(k, n + 1)]
    top = max(terms)
    return math.exp(top) * math.fsum(math.exp(t - top) for t in terms)


def cp_lower_brute(k, n, alpha):
    return bisect_plain(lambda p: binomial_tail_sum(k, n, p) - alpha, 0.0, 1.0, 1e-14)


def ball_axis_scipy(R, d, sigma, a):
    s = 0.5 * (d - 1)

    def integrand(t):
        w = special.gammainc(s, max(R * R - t * t, 0.0) / (2 * sigma * sigma))
        return w * math.exp(-0.5 * ((t - a) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))

    value, _ = integrate.quad(integrand, -R, R, points=[a] if -R < a < R else None,
                              epsabs=1e-13, epsrel=1e-12, limit=500)
    return value


def cone_axis_scipy(theta, d, sigma, a):
    s = 0.5 * (d - 1)
    k = math.tan(theta) ** 2 / (2 * sigma * sigma)

    def integrand(t):
        return (special.gammainc(s, k * t * t)
                * math.exp(-0.5 * ((t - a) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi)))

    lo = a - 12 * sigma
    hi = min(0.0, a + 12 * sigma)
    if lo >= hi:
        return 0.0
    value, _ = integrate.quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=500)
    return value


def mixture_mi_scipy(a, k, eps, sigma):
    """I(X;Y) for the three-point dataset, by scipy quadrature."""
    norm = 1.0 / (sigma * math.sqrt(2 * math.pi))
    g = lambda x, m: norm * math.exp(-0.5 * ((x - m) / sigma) ** 2)

    def integrand(x):
        p1 = 0.5 * g(x, 0.0)
        p2 = (0.5 - eps) * g(x, -a) + eps * g(x, k * a)
        px = p1 + p2
        out = 0.0
        for p, py in ((p1, 0.5), (p2, 0.5)):
            if p > 0:
                out += p * math.log(p / (px * py))
        return out

    lo, hi = -a - 20 * sigma, k * a + 20 * sigma
    value, _ = integrate.quad(integrand, lo, hi, points=[-a, 0.0, k * a],
                              epsabs=1e-12, epsrel=1e-10, limit=1000)
    return value
