import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nklab import jets

reals = st.floats(-2, 2, allow_nan=False)


@given(reals, reals)
def test_product_and_chain_rule(s0, t0):
    s, t = jets.variables([s0, t0], 3)
    f = jets.sin(s * t) + jets.exp(s) * t ** 2
    assert f.value == pytest.approx(np.sin(s0 * t0) + np.exp(s0) * t0 ** 2)
    assert f.partial((1, 0)) == pytest.approx(t0 * np.cos(s0 * t0) + np.exp(s0) * t0 ** 2)
    assert f.partial((0, 1)) == pytest.approx(s0 * np.cos(s0 * t0) + 2 * np.exp(s0) * t0)
    assert f.partial((1, 1)) == pytest.approx(np.cos(s0 * t0) - s0 * t0 * np.sin(s0 * t0) + 2 * np.exp(s0) * t0)
    assert f.partial((0, 3)) == pytest.approx(-s0 ** 3 * np.cos(s0 * t0), abs=1e-9)


@given(st.floats(0.2, 3, allow_nan=False))
def test_power_sqrt_reciprocal(x0):
    (x,) = jets.variables([x0], 2)
    assert jets.sqrt(x).partial((1,)) == pytest.approx(0.5 / np.sqrt(x0))
    assert jets.reciprocal(x).partial((2,)) == pytest.approx(2 / x0 ** 3)
    assert jets.power(x, 1.5).partial((2,)) == pytest.approx(0.75 / np.sqrt(x0))


def test_vector_jets_and_norm():
    s, t = jets.variables([0.3, -0.4], 2)
    v = jets.stack([jets.cos(s), jets.sin(s) * jets.cos(t), jets.sin(s) * jets.sin(t)])
    n = jets.norm(v)
    assert np.allclose(n.value, 1.0)
    assert np.allclose(n.partial((1, 0)), 0.0, atol=1e-14)
    assert np.allclose(n.partial((1, 1)), 0.0, atol=1e-14)


def test_vectorized_over_nodes():
    s0 = np.linspace(0, 1, 5)
    s, = jets.variables([s0], 2)
    f = s * s * s
    assert np.allclose(f.partial((1,)), 3 * s0 ** 2)
    assert np.allclose(f.partial((2,)), 6 * s0)


def test_derivative_falls_back_to_differences():
    def f(t):
        return np.asarray(np.sin(t), dtype=float) if not isinstance(t, jets.Jet) else float("nan") + t.foo

    d = jets.derivative(f, 0.3, 2)
    assert d[1] == pytest.approx(np.cos(0.3), abs=1e-7)
    assert d[2] == pytest.approx(-np.sin(0.3), abs=1e-4)


@settings(max_examples=25)
@given(reals, reals)
def test_d_lowers_order(s0, t0):
    s, t = jets.variables([s0, t0], 3)
    f = s ** 2 * t
    g = f.d(0)
    assert g.order == 2
    assert g.value == pytest.approx(2 * s0 * t0)
    assert g.partial((0, 1)) == pytest.approx(2 * s0)
