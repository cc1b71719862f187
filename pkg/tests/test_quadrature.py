import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smoothlab.errors import DomainError, NumericalError
from smoothlab.quadrature import adaptive_simpson


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.floats(-2, 0), st.floats(0.1, 2))
def test_exact_for_cubics(coef, a, width):
    b = a + width
    poly = np.polynomial.Polynomial(coef)
    value, err = adaptive_simpson(poly, a, b, 1e-12)
    exact = poly.integ()(b) - poly.integ()(a)
    assert abs(value - exact) <= 1e-12 * max(1.0, abs(exact))


def test_gaussian_mass():
    f = lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    value, err = adaptive_simpson(f, -10, 10, 1e-12, breakpoints=[0.0])
    assert abs(value - (1 - math.erfc(10 / math.sqrt(2)))) <= 1e-12


def test_kink_is_localized():
    value, _ = adaptive_simpson(lambda x: np.sqrt(np.abs(x)), -1, 1, 1e-10)
    assert abs(value - 4.0 / 3.0) <= 1e-10


def test_reversed_limits():
    v1, _ = adaptive_simpson(np.exp, 0, 1)
    v2, _ = adaptive_simpson(np.exp, 1, 0)
    assert v1 == -v2


def test_empty_interval():
    assert adaptive_simpson(np.exp, 2.0, 2.0) == (0.0, 0.0)


def test_nonconvergence_carries_estimate():
    with pytest.raises(NumericalError) as info:
        adaptive_simpson(lambda x: np.sin(1.0 / np.maximum(np.abs(x), 1e-300)), 1e-6, 1.0,
                         1e-14, max_subdivisions=50)
    assert math.isfinite(info.value.estimate)
    assert info.value.error_bound > 0


def test_rejects_bad_arguments():
    with pytest.raises(DomainError):
        adaptive_simpson(np.exp, 0, math.inf)
    with pytest.raises(DomainError):
        adaptive_simpson(np.exp, 0, 1, abs_tol=0)
