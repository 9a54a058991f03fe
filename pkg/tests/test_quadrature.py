import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nklab.errors import AccuracyError
from nklab.quadrature import edge, fsum, gauss_legendre, integrate, rectangle, refine_until_stable


@given(st.integers(1, 12))
def test_gauss_legendre_exact_for_polynomials(n):
    x, w = gauss_legendre(n, 0.0, 2.0)
    for k in range(2 * n):
        assert fsum(w * x ** k) == pytest.approx(2.0 ** (k + 1) / (k + 1), rel=1e-12)


def test_rectangle_area_of_sphere():
    g = rectangle((0, np.pi, 0, 2 * np.pi), 16)
    assert integrate(g, np.sin(g.s)) == pytest.approx(4 * np.pi, rel=1e-12)


def test_edge_rule():
    g = edge((0, 1, 0, 2), "s1", 8)
    assert np.all(g.s == 1) and fsum(g.w) == pytest.approx(2.0)


def test_refinement():
    def sine_integral(n):
        x, w = gauss_legendre(n, 0, np.pi)
        return fsum(w * np.sin(x))

    value, n, change = refine_until_stable(sine_integral, 4, 1e-10)
    assert change < 1e-10
    assert value == pytest.approx(2.0)
    with pytest.raises(AccuracyError):
        refine_until_stable(lambda n: float(n), 4, 1e-10, max_doublings=2)
