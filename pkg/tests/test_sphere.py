import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nklab.errors import DomainError
from nklab.sphere import (S6, almost_complex_J, check_curvature_identity, check_structure_equations,
                          exterior_derivative_fd, normalize, omega, random_point, random_tangent, riemann,
                          riemann_derivative, sectional_curvature, su3_frame, torsion_P, torsion_P_closed,
                          torsion_residuals, upsilon)

seeds = st.integers(0, 2 ** 32 - 1)


def _point_and_vectors(seed, k):
    rng = np.random.default_rng(seed)
    p = random_point(rng)
    return p, [normalize(random_tangent(rng, p)) for _ in range(k)]


@given(seeds)
@settings(max_examples=40)
def test_J_is_orthogonal_complex_structure(seed):
    p, (X, Y) = _point_and_vectors(seed, 2)
    JX = almost_complex_J(p, X)
    assert np.allclose(almost_complex_J(p, JX), -X, atol=1e-12)
    assert np.dot(JX, JX) == pytest.approx(np.dot(X, X))
    assert omega(p, X, Y) == pytest.approx(np.dot(JX, Y))


@given(seeds)
@settings(max_examples=40)
def test_torsion_identities(seed):
    p, (X, Y) = _point_and_vectors(seed, 2)
    r = torsion_residuals(p, X, Y)
    assert max(r.values()) < 1e-10
    assert check_curvature_identity(p, X, Y) < 1e-10


def test_torsion_closed_form(rng):
    p = random_point(rng)
    X, Y = (random_tangent(rng, p) for _ in range(2))
    assert np.allclose(torsion_P(p, X, Y), torsion_P_closed(p, X, Y), atol=1e-10)


def test_curvature_constant_one(rng):
    p = random_point(rng)
    v = [random_tangent(rng, p) for _ in range(4)]
    assert riemann_derivative(p, *v) == pytest.approx(riemann(p, *v), abs=1e-9)
    assert sectional_curvature(p, v[0], v[1]) == pytest.approx(1.0)
    assert riemann(p, v[0], v[0], v[1], v[2]) == 0.0


def test_non_tangent_input_rejected(rng):
    p = random_point(rng)
    with pytest.raises(DomainError):
        almost_complex_J(p, p)
    with pytest.raises(DomainError):
        upsilon(p, p, random_tangent(rng, p), random_tangent(rng, p))


@pytest.mark.parametrize("theta", [0.0, 0.4, np.pi / 2, 2.5])
def test_structure_equations(rng, theta):
    r = check_structure_equations(random_point(rng), rng, trials=3, theta=theta)
    assert max(r.values()) < 1e-5


def test_structure_residual_converges_quadratically():
    p = random_point(np.random.default_rng(3))
    res = []
    for h in (2e-2, 1e-2):
        r = check_structure_equations(p, np.random.default_rng(4), trials=2, h=h)
        res.append(r["d_omega"])
    assert 3.0 < res[0] / res[1] < 5.0


def test_exterior_derivative_of_exact_form_vanishes(rng):
    # d(dω) = 0 checked through dReΥ: d of a closed combination
    p = random_point(rng)
    v = [normalize(random_tangent(rng, p)) for _ in range(4)]
    ww = lambda q, a, b, c, d: 2.0 * (omega(q, a, b) * omega(q, c, d) - omega(q, a, c) * omega(q, b, d)
                                      + omega(q, a, d) * omega(q, b, c))
    v5 = v + [normalize(random_tangent(rng, p))]
    assert abs(exterior_derivative_fd(ww, p, v5)) < 1e-6


def test_su3_frame_normalization(rng):
    for _ in range(5):
        f = su3_frame(random_point(rng))
        r = f.residuals()
        assert max(r.values()) < 1e-12
        assert abs(f.upsilon_value()) == pytest.approx(1.0)


def test_upsilon_complex_volume(rng):
    p = random_point(rng)
    f = su3_frame(p).complex_legs
    # Υ is of type (3,0): it vanishes once an antiholomorphic leg is inserted
    assert abs(upsilon(p, f[0], f[1], np.conj(f[2]))) < 1e-12
    assert S6.lam == 1.0
