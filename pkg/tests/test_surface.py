import numpy as np
import pytest

from nklab import catalog
from nklab.errors import DegenerateInputError, PreconditionError
from nklab.surface import (LocalGeometry, SurfacePatch, adapt_u2_frame, boundary_orthogonality,
                           holomorphic_defects, holomorphic_symmetry_residuals, holomorphic_verdicts,
                           hopf_coefficients, ricci_equation_residual, rigidity_probe, weingarten_residual)


@pytest.mark.parametrize("cid", catalog.ids())
def test_catalog_patches_are_spherical_immersions(cid):
    e = catalog.get(cid)
    r = e.patch.validate(8, cap=0.05)
    assert r["spherical"] < 1e-10


@pytest.mark.parametrize("cid", catalog.ids())
def test_holomorphic_flags(cid):
    e = catalog.get(cid)
    g = LocalGeometry(e.patch, *e.patch.sample_grid(6, cap=0.05), order=1)
    d = holomorphic_defects(g)
    assert (np.max(d["j_invariance"]) < 1e-8) == e.holomorphic
    assert (np.max(d["calibration"]) < 1e-8) == e.holomorphic


def test_two_holomorphicity_criteria_agree():
    e = catalog.get("small-sphere")
    for pt in [(0.3, 0.2), (1.2, 4.0)]:
        a, b = holomorphic_verdicts(e.patch, pt)
        assert a == b


def test_degenerate_patch_rejected():
    flat = SurfacePatch("collapsed", lambda s, t: catalog.great_sphere(*np.eye(7)[:3])(s, 0 * t),
                        (0.1, 1.0, 0.0, 1.0))
    with pytest.raises(DegenerateInputError):
        LocalGeometry(flat, [0.5], [0.5])


def test_boruvka_geometry(rng):
    e = catalog.get("boruvka-s2")
    s, t = e.patch.sample_grid(6, cap=0.1)
    g = LocalGeometry(e.patch, s, t, order=3)
    eta = g.normal(rng.standard_normal(g.p.shape))
    sym = holomorphic_symmetry_residuals(g, eta)
    assert max(float(np.max(v)) for v in sym.values()) < 1e-9
    assert np.max(np.linalg.norm(g.mean_curvature(), axis=-1)) < 1e-8
    xi = g.normal(rng.standard_normal(g.p.shape))
    assert np.max(ricci_equation_residual(g, e.fields[0], xi)) < 1e-8
    assert np.max(weingarten_residual(g, e.fields[0], g.e1, g.e2)) < 1e-10
    # Gauss curvature 1/6: normal curvature nonzero, so the Ricci check is not trivial
    assert np.max(np.abs(g.normal_curvature(g.field(e.fields[0]), xi))) > 1e-3


def test_hopf_frame_independence():
    e = catalog.get("boruvka-s2")
    pt = (0.9, 1.3)
    h0 = hopf_coefficients(e.patch, pt)
    for rot, seed in [(0.5, 6), (2.0, 4), (4.0, 5)]:
        h = hopf_coefficients(e.patch, pt, adapt_u2_frame(e.patch, pt, rot, normal_seed=np.eye(7)[seed]))
        assert h.magnitude2 == pytest.approx(h0.magnitude2, abs=1e-9)
    assert h0.magnitude2 == pytest.approx(5 / 12, abs=1e-8)
    assert hopf_coefficients(catalog.get("geodesic-s2-assoc").patch, pt).magnitude2 < 1e-20


def test_u2_frame_needs_holomorphic_plane():
    with pytest.raises(PreconditionError):
        adapt_u2_frame(catalog.get("geodesic-s2-nonholo").patch, (0.7, 0.2))


@pytest.mark.parametrize("cid", ["halfsphere-freeboundary", "cap-freeboundary"])
def test_free_boundary_orthogonal_and_umbilic(cid):
    e = catalog.get(cid)
    r = boundary_orthogonality(e.patch, e.ball.center, e.ball.radius, (e.patch.domain[1], 0.4))
    assert r["defect"] < 1e-8
    assert r["umbilicity"] < 1e-6
    assert r["c"] == pytest.approx(1 / np.tan(e.ball.radius))
    probe = rigidity_probe(e.patch, e.ball.center, e.ball.radius)
    assert not probe["flagged"]
    assert max(probe["max_phi_boundary"], probe["max_phi_interior"]) < 1e-6


@pytest.mark.parametrize("cid", ["cap-tilted", "boruvka-cap"])
def test_free_boundary_controls_flagged(cid):
    e = catalog.get(cid)
    r = boundary_orthogonality(e.patch, e.ball.center, e.ball.radius, (e.patch.domain[1], 0.4))
    assert r["defect"] > 0.1
    assert rigidity_probe(e.patch, e.ball.center, e.ball.radius)["flagged"]


def test_boundary_point_off_sphere_rejected():
    e = catalog.get("halfsphere-freeboundary")
    with pytest.raises(PreconditionError):
        boundary_orthogonality(e.patch, e.ball.center, e.ball.radius, (0.5, 0.0))
