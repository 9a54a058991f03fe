import numpy as np
import pytest

from nklab import catalog, jets
from nklab.errors import DegenerateInputError
from nklab.lagrangian import LagrangianPatch, validate_lagrangian
from nklab.sphere import sphere_point

E = np.eye(7)


@pytest.fixture
def coassoc():
    return catalog.get("halfsphere-lag").lagrangian


def test_coassociative_link_is_lagrangian(coassoc, rng):
    pts = [coassoc.closest_point(rng.standard_normal(7)) for _ in range(10)]
    assert validate_lagrangian(coassoc, pts) < 1e-12


def test_non_lagrangian_control():
    L = catalog.get("halfsphere-nonlag").lagrangian
    q = sphere_point(E[0] + E[3])
    assert L.lagrangian_residual(q) > 0.1


def test_tangent_space(coassoc, rng):
    q = coassoc.closest_point(rng.standard_normal(7))
    T = coassoc.tangent_basis(q)
    assert np.allclose(T @ T.T, np.eye(3), atol=1e-12)
    assert np.allclose(T @ q, 0, atol=1e-12)
    assert coassoc.tangent_distance(q, T[0] + 2 * T[2]) < 1e-12
    assert coassoc.tangent_distance(q, q) == pytest.approx(1.0)


def test_embedding_matches_plane(coassoc):
    B = coassoc.basis

    def emb(a, b, c):
        cos, sin = jets.cos, jets.sin
        x = [cos(a) * cos(b), sin(a) * cos(b), sin(b) * cos(c), sin(b) * sin(c)]
        return sum(xi * Bi for xi, Bi in zip(x, B))

    L = LagrangianPatch("param", embedding=emb, seed=(0.3, 0.4, 0.5))
    q = emb(0.31, 0.42, 0.48)
    assert np.allclose(L.closest_point(q), q, atol=1e-9)
    P1 = coassoc.tangent_basis(q)
    P2 = L.tangent_basis(q)
    assert np.allclose(P1.T @ P1, P2.T @ P2, atol=1e-8)


def test_off_surface_rejected(coassoc):
    with pytest.raises(DegenerateInputError):
        validate_lagrangian(coassoc, [E[6]] if not coassoc.contains(E[6]) else [sphere_point(E[2] + E[6])])
