"""A three-point dataset on which training with Gaussian noise hurts accuracy.

Class 1 sits at 0 with mass 1/2. Class 2 sits at -a with mass 1/2 - eps and
at k*a with mass eps. Smoothing the inputs with N(0, sigma^2) turns each
class into a Gaussian mixture. The Bayes classifier trained on the smoothed
data then mislabels -a once sigma is large enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .quadrature import adaptive_simpson
from .regions import RegionSpec
from .roots import bisect
from .smoothprob import interval1d_prob

GRID_CELLS = 10_000
SPAN_SIGMAS = 20.0
ROOT_TOL = 1e-9
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SyntheticDataset:
    a: float
    k: float
    eps: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("a must be positive")
        if not self.k > 0:
            raise DomainError("k must be positive")
        if not 0 < self.eps < 0.5:
            raise DomainError("eps must lie in (0, 1/2)")

    @property
    def support(self) -> tuple[tuple[float, int, float], ...]:
        """(location, class, mass) triples."""
        return ((0.0, 1, 0.5), (-self.a, 2, 0.5 - self.eps), (self.k * self.a, 2, self.eps))

    def class_mass(self, y: int) -> float:
        return sum(m for _, cls, m in self.support if cls == y)

    def span(self, sigma: float) -> tuple[float, float]:
        return -self.a - SPAN_SIGMAS * sigma, self.k * self.a + SPAN_SIGMAS * sigma


def _check_class(y: int) -> int:
    if y not in (1, 2):
        raise DomainError("class must be 1 or 2")
    return y


def log_smoothed_density(ds: SyntheticDataset, sigma: float, x, y: int) -> np.ndarray:
    """log psi_sigma(x, y), vectorized over x."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    _check_class(y)
    x = np.asarray(x, dtype=float)
    terms = [math.log(m) - 0.5 * ((x - loc) / sigma) ** 2
             for loc, cls, m in ds.support if cls == y]
    return logsumexp(np.stack(terms), axis=0) - math.log(sigma) - _LOG_SQRT_2PI


def smoothed_density(ds: SyntheticDataset, sigma: float, x: float, y: int) -> float:
    """Joint density psi_sigma(x, y) of the noisy input and its label."""
    return float(np.exp(log_smoothed_density(ds, sigma, x, y)))


@dataclass(frozen=True)
class SmoothedDensity:
    dataset: SyntheticDataset
    sigma: float

    def __call__(self, x, y: int) -> np.ndarray:
        return np.exp(log_smoothed_density(self.dataset, self.sigma, x, y))

    def class_integral(self, y: int, abs_tol: float = 1e-11) -> float:
        lo, hi = self.dataset.span(self.sigma)
        breaks = [loc for loc, _, _ in self.dataset.support]
        value, _ = adaptive_simpson(lambda x: self(x, y), lo, hi, abs_tol, 20000, breaks)
        return value


@dataclass(frozen=True)
class LearnedClassifier1D:
    """Class-1 decision set of the Bayes classifier for smoothed training data."""

    region: RegionSpec
    sigma: float

    @property
    def intervals(self) -> tuple[tuple[float, float], ...]:
        return self.region.intervals

    def predict(self, x: float) -> int:
        return 1 if self.region.contains([x]) else 2


def _log_ratio(ds, sigma):
    return lambda x: (log_smoothed_density(ds, sigma, x, 1)
                      - log_smoothed_density(ds, sigma, x, 2))


def train_classifier(ds: SyntheticDataset, sigma: float) -> LearnedClassifier1D:
    """Bayes classifier for the smoothed data: class 1 wherever psi(x,1) >= psi(x,2)."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    g = _log_ratio(ds, sigma)
    lo, hi = ds.span(sigma)
    xs = np.linspace(lo, hi, GRID_CELLS + 1)
    gs = g(xs)
    inside = gs >= 0.0
    edges = []
    for i in np.nonzero(inside[1:] != inside[:-1])[0]:
        edges.append(bisect(lambda x: float(g(x)), xs[i], xs[i + 1], ROOT_TOL,
                            f_lo=float(gs[i]), f_hi=float(gs[i + 1])))
    # beyond the grid the outermost class-2 components dominate, but keep the
    # end labels as found so the construction stays general
    bounds = ([-math.inf] if inside[0] else []) + edges + ([math.inf] if inside[-1] else [])
    intervals = [(bounds[j], bounds[j + 1]) for j in range(0, len(bounds), 2)]
    return LearnedClassifier1D(RegionSpec.interval1d(intervals), sigma)


def accuracy_original_rule(ds: SyntheticDataset, clf: LearnedClassifier1D) -> float:
    """Accuracy when the learned decision set is applied to clean inputs."""
    return math.fsum(m for loc, cls, m in ds.support if clf.predict(loc) == cls)


def accuracy_smoothing_rule(ds: SyntheticDataset, clf: LearnedClassifier1D,
                            sigma_infer: float) -> float:
    """Accuracy when predicting class 1 iff the smoothed class-1 vote is >= 1/2."""
    if not sigma_infer > 0:
        raise DomainError("sigma_infer must be positive")
    total = []
    for loc, cls, m in ds.support:
        vote = interval1d_prob(clf.intervals, sigma_infer, loc)
        pred = 1 if vote >= 0.5 else 2
        if pred == cls:
            total.append(m)
    return math.fsum(total)


def _discrete_mi(ds: SyntheticDataset) -> float:
    # the three locations are distinct, so the label is a function of the input
    return -math.fsum(ds.class_mass(y) * math.log(ds.class_mass(y)) for y in (1, 2))


def mutual_information(ds: SyntheticDataset, sigma: float, abs_tol: float = 1e-8) -> float:
    """I(X; Y) in nats for the data after smoothing the inputs with sigma."""
    if sigma < 0 or math.isnan(sigma):
        raise DomainError("sigma must be nonnegative")
    if sigma == 0:
        return _discrete_mi(ds)
    log_rho = {y: math.log(ds.class_mass(y)) for y in (1, 2)}

    def integrand(x):
        l1 = log_smoothed_density(ds, sigma, x, 1)
        l2 = log_smoothed_density(ds, sigma, x, 2)
        lx = np.logaddexp(l1, l2)
        return (np.exp(l1) * (l1 - lx - log_rho[1])
                + np.exp(l2) * (l2 - lx - log_rho[2]))

    lo, hi = ds.span(sigma)
    breaks = [loc + f * sigma for loc, _, _ in ds.support for f in (-2, -1, 0, 1, 2)]
    value, _ = adaptive_simpson(integrand, lo, hi, abs_tol, 20000, breaks)
    return max(value, 0.0)


def marginal_label_entropy(ds: SyntheticDataset, sigma: float, abs_tol: float = 1e-10) -> float:
    """H(Y) after smoothing, from the quadrature masses of each class."""
    dens = SmoothedDensity(ds, sigma)
    masses = [dens.class_integral(y, abs_tol) for y in (1, 2)]
    return -math.fsum(m * math.log(m) for m in masses)


def original_rule_sigma_bound(a: float, k: float, eps: float) -> float:
    """Training sigma above which the clean-input rule mislabels -a."""
    return a * math.sqrt(k * (k + 2) / (2.0 * math.log(2.0 * eps * (k + 1) ** 2)))


def smoothing_rule_sigma_bound(a: float, k: float, eps: float) -> float:
    """Sigma above which the smoothed-vote rule mislabels -a."""
    return a * math.sqrt(k * (k + 1) / (2.0 * math.log(2.0 * eps * (k + 1)) - 2.0 * k / (k + 2)))
