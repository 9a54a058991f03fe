import numpy as np
import pytest

from nklab import catalog
from nklab.errors import ConfigError
from nklab.lagrangian import validate_lagrangian
from nklab.octonion import coassociative_residual
from nklab.variation import area


def test_listing_mentions_shipped_entries():
    text = catalog.list_catalog()
    for cid in ("geodesic-s2-assoc", "geodesic-s2-nonholo", "halfsphere-freeboundary", "halfsphere-lag"):
        assert cid in text


def test_unknown_id():
    with pytest.raises(ConfigError):
        catalog.get("nope")


def test_summary_is_serializable():
    import json

    for cid in catalog.ids():
        json.dumps(catalog.get(cid).summary())


@pytest.mark.parametrize("cid,expected", [("geodesic-s2-assoc", 4 * np.pi), ("halfsphere-lag", 2 * np.pi),
                                          ("boruvka-s2", 24 * np.pi)])
def test_areas(cid, expected):
    assert area(catalog.get(cid).patch, 32) == pytest.approx(expected, rel=1e-10)


def test_lagrangian_pair():
    e = catalog.get("halfsphere-lag")
    assert coassociative_residual(catalog.lagrangian_plane()) < 1e-10
    s, t = e.patch.edge_points("s1", 12)
    assert validate_lagrangian(e.lagrangian, e.patch(s, t)) < 1e-10
    F, G = catalog.split_normal_bundle()
    assert np.allclose(np.vstack([F, G]) @ np.vstack([F, G]).T, np.eye(4), atol=1e-12)


def test_nonlagrangian_control():
    e = catalog.get("halfsphere-nonlag")
    q = e.patch(np.array([np.pi / 2]), np.array([0.3]))[0]
    assert e.lagrangian.lagrangian_residual(q) > 0.5
