"""Gaussian randomized smoothing on canonical decision regions.

Exact and quadrature-based smoothed probabilities, boundary tracking,
certified radii, a seeded Monte Carlo oracle and a synthetic dataset on
which noisy training loses accuracy.
"""

__version__ = "0.1.0"
