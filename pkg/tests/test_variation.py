import numpy as np
import pytest

from nklab import catalog
from nklab.errors import PreconditionError
from nklab.variation import (NKSecondVariation, VariationFamily, area_second_difference, boundary_term_residual,
                             pointwise_residuals, richardson_change, second_variation_general, second_variation_nk)

NODES = 32


@pytest.fixture(scope="module")
def lag():
    e = catalog.get("halfsphere-lag")
    return e, NKSecondVariation(e.patch, e.lagrangian, NODES)


def test_constant_fields_in_kernel_are_negative(lag):
    e, sv = lag
    for f in e.fields[:2]:
        parts = sv.parts(f)
        assert sv.value(parts) == pytest.approx(-2 * sv.mass(parts), rel=1e-10)
        assert np.max(sv.dbar_norm(parts)) < 1e-12
        assert sv.value(parts) == pytest.approx(-4 * np.pi, rel=1e-10)


@pytest.mark.parametrize("k", range(7))
def test_master_oracle(lag, k):
    e, sv = lag
    f = e.fields[k]
    fam = VariationFamily(e.patch, f)
    nk = sv(f)
    fd = area_second_difference(fam, nodes=NODES)
    gen = second_variation_general(fam, nodes=NODES)
    scale = max(abs(fd), sv.mass(sv.parts(f)))
    assert abs(nk - fd) / scale < 1e-3
    assert abs(nk - gen) / scale < 1e-8


def test_richardson_small():
    e = catalog.get("halfsphere-lag")
    assert richardson_change(VariationFamily(e.patch, e.fields[4]), nodes=NODES) < 1e-4


def test_breakdown_and_frame_rotation(lag):
    e, sv = lag
    parts = sv.parts(e.fields[4])
    b0 = sv.breakdown(parts)
    assert set(b0) == {"dbar", "domega", "mass"}
    assert sv.value(parts, rotation=0.9) == pytest.approx(sv.value(parts), rel=1e-10)


def test_polarization_symmetric_bilinear(lag):
    e, sv = lag
    a, b = sv.parts(e.fields[4]), sv.parts(e.fields[5])
    assert sv.polarization(a, b) == pytest.approx(sv.polarization(b, a), abs=1e-12)
    assert sv.polarization(a, a) == pytest.approx(sv.value(a), rel=1e-12)


def test_closed_boruvka_sphere():
    e = catalog.get("boruvka-s2")
    f = e.fields[2]
    val, parts = second_variation_nk(e.patch, None, f, nodes=NODES, breakdown=True)
    fd = area_second_difference(VariationFamily(e.patch, f), nodes=NODES)
    assert abs(val - fd) / abs(fd) < 1e-3
    assert set(parts) == {"dbar", "domega", "mass"}


@pytest.mark.parametrize("cid", ["boruvka-s2", "halfsphere-lag"])
def test_pointwise_identities(cid):
    e = catalog.get(cid)
    s, t = e.patch.sample_grid(4, cap=0.05)
    for f in e.fields[:3]:
        r = pointwise_residuals(e.patch, s, t, f)
        assert np.max(r["shape_ricci"]) < 1e-5
        assert np.max(r["weitzenbock"]) < 1e-4


def test_boundary_term_on_lagrangian():
    e = catalog.get("halfsphere-lag")
    for f in e.fields:
        assert np.max(boundary_term_residual(VariationFamily(e.patch, f), e.lagrangian, "s1", 32)) < 1e-4


def test_boundary_term_control():
    e = catalog.get("halfsphere-nonlag")
    r = boundary_term_residual(VariationFamily(e.patch, e.fields[0]), e.lagrangian, "s1", 8, check=False)
    assert np.max(r) > 0.5


def test_preconditions():
    with pytest.raises(PreconditionError):
        NKSecondVariation(catalog.get("halfsphere-nonlag").patch, catalog.get("halfsphere-nonlag").lagrangian, 16)
    with pytest.raises(PreconditionError):
        NKSecondVariation(catalog.get("geodesic-s2-nonholo").patch, None, 16)
    e = catalog.get("small-sphere")
    with pytest.raises(PreconditionError):
        second_variation_general(VariationFamily(e.patch, catalog.monomial_field("e7", (0, 0, 0), np.eye(7)[6])),
                                 nodes=16)
    lag_e = catalog.get("halfsphere-lag")
    sv = NKSecondVariation(lag_e.patch, lag_e.lagrangian, 16)
    g = catalog.split_normal_bundle()[1][0]
    with pytest.raises(PreconditionError):
        sv.parts(catalog.monomial_field("g1", (0, 0, 0), g))
