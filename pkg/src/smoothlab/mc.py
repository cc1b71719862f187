"""Seeded Monte Carlo estimates of smoothed probabilities.

Normals come from numpy's Philox4x64 counter-based generator, transformed by
the inverse normal CDF. Sample i of dimension d consumes raw words
[i*d, (i+1)*d) of the stream keyed by the seed, so any partition of the
sample range into blocks reproduces the serial stream exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError
from .regions import RegionSpec
from .roots import bisect
from .specfn import std_normal_quantile_array

GENERATOR = f"numpy.random.Philox4x64 (numpy {np.__version__}) + inverse-CDF normals"
DEFAULT_ALPHA = 0.001
_WORDS_PER_COUNTER = 4
_BLOCK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    n: int
    successes: int
    lower_cp: float
    seed: int
    alpha: float = DEFAULT_ALPHA
    generator: str = GENERATOR

    def std_error(self) -> float:
        return math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.n)


def _raw_words(seed: int, first: int, count: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed, counter=[first // _WORDS_PER_COUNTER, 0, 0, 0])
    skip = first % _WORDS_PER_COUNTER
    return bitgen.random_raw(count + skip)[skip:]


def standard_normal_block(seed: int, start: int, count: int, dim: int) -> np.ndarray:
    """Samples start .. start+count-1 of the seeded stream, shape (count, dim)."""
    if seed < 0 or seed >= 1 << 64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    raw = _raw_words(seed, start * dim, count * dim)
    # top 53 bits, centred in their cell so u is never 0 or 1
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    return std_normal_quantile_array(u).reshape(count, dim)


def _blocks(n: int, block: int):
    return [(s, min(block, n - s)) for s in range(0, n, block)]


def _count_hits(regions, point, sigma, seed, start, count):
    z = standard_normal_block(seed, start, count, point.size)
    x = point + sigma * z
    return [int(r.contains_many(x).sum()) for r in regions]


def _run(regions, point, sigma, n, seed, threads):
    point = np.asarray(point, dtype=float)
    for r in regions:
        if point.ndim != 1 or point.size != r.dim:
            raise DomainError(f"point has length {point.size}, region has dim {r.dim}")
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    if n < 1:
        raise DomainError("n must be positive")
    blocks = _blocks(n, _BLOCK)
    work = lambda b: _count_hits(regions, point, sigma, seed, *b)
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    return [sum(p[i] for p in parts) for i in range(len(regions))]


def _estimate(hits, n, seed, alpha) -> McEstimate:
    return McEstimate(hits / n, n, hits, clopper_pearson_lower(hits, n, alpha), seed, alpha)


def mc_smoothed_prob(region: RegionSpec, point, sigma: float, n: int, seed: int,
                     alpha: float = DEFAULT_ALPHA, threads: int = 1) -> McEstimate:
    """Fraction of point + sigma*z, z ~ N(0, I), that lands in the region."""
    (hits,) = _run([region], point, sigma, n, seed, threads)
    return _estimate(hits, n, seed, alpha)


def common_random_containment(region_a: RegionSpec, region_b: RegionSpec, point,
                              sigma: float, n: int, seed: int,
                              alpha: float = DEFAULT_ALPHA,
                              threads: int = 1) -> tuple[McEstimate, McEstimate]:
    """Estimates for two regions from one shared sample stream."""
    hits_a, hits_b = _run([region_a, region_b], point, sigma, n, seed, threads)
    return _estimate(hits_a, n, seed, alpha), _estimate(hits_b, n, seed, alpha)


def binomial_upper_tail(k: int, n: int, p: float) -> float:
    """P(X >= k) for X ~ Binomial(n, p)."""
    if k <= 0:
        return 1.0
    return float(special.betainc(k, n - k + 1, p))


def clopper_pearson_lower(successes: int, n: int, alpha: float = DEFAULT_ALPHA) -> float:
    """One-sided lower confidence bound for a binomial proportion.

    The p at which observing ``successes`` or more has probability alpha.
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if int(successes) != successes or not 0 <= successes <= n:
        raise DomainError("successes must be an integer in [0, n]")
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    k, n = int(successes), int(n)
    if k == 0:
        return 0.0
    if k == n:
        return alpha ** (1.0 / n)
    return bisect(lambda p: binomial_upper_tail(k, n, p) - alpha, 0.0, 1.0, 1e-15, 200)
