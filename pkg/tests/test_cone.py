import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nklab import catalog, cone
from nklab.errors import DomainError
from nklab.octonion import PHI0


def test_cone_point_domain():
    with pytest.raises(DomainError):
        cone.ConePoint(0.0, np.eye(7)[0])
    with pytest.raises(DomainError):
        cone.ConePoint.from_ambient(np.zeros(7))


@given(st.integers(0, 2 ** 31))
@settings(max_examples=30)
def test_cone_phi_matches_flat(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(7)
    cp = cone.ConePoint.from_ambient(x)
    V = rng.standard_normal((3, 7))
    assert cone.cone_phi(cp, *V) == pytest.approx(PHI0(*V), abs=1e-10)
    assert cone.cone_phi(cp, V[0], V[0], V[1]) == pytest.approx(0.0, abs=1e-12)


def test_contractions(rng):
    r = cone.contraction_residuals(rng, 10)
    assert max(r.values()) < 1e-8


def test_torsion_free(rng):
    r = cone.torsion_free_check(rng, samples=4)
    assert max(r.values()) < 1e-5


def test_second_order_convergence():
    r = cone.convergence_ratios(seed=1, samples=3)
    for k in ("d_phi", "d_psi", "phi_primitive", "psi_primitive"):
        assert 3.5 < r[k] < 4.5


def test_orientation_sign():
    assert cone.orientation_sign() in (1, -1)


@pytest.mark.parametrize("cid", catalog.ids())
def test_equivalence(cid):
    e = catalog.get(cid)
    v = cone.equivalence_verdict(e.patch)
    assert v["associative"] == v["holomorphic"] == e.holomorphic
    assert v["pointwise_agree"]


def test_tolerance_mapping():
    for tol in (1e-7, 1e-4, 0.1):
        c = 1 - tol
        assert np.sqrt(1 - c * c) == pytest.approx(cone.holomorphic_tolerance(tol))
