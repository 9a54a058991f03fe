import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nklab import catalog
from nklab.errors import FrameError, SamplingError
from nklab.octonion import cross
from nklab.maslov import (MaslovLoopData, complex_gram_schmidt, loop_data, maslov_decomposition, maslov_index,
                          riemann_roch_expected, rotate_trivialization)

E = np.eye(7)


def synthetic_loop(k: int, n: int = 200, rank: int = 1):
    """E = C^rank spanned by e2, e4 at p = e1 (J e2 = e3, J e4 = e5); F rotates by e^{ikt/2} in the first slot."""
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    p = np.tile(E[0], (n, 1))
    legs = [E[1], E[3]][:rank]
    jlegs = [E[2], E[4]][:rank]
    frames = np.stack([np.array(legs)] * n)
    lag = np.stack([np.array(legs)] * n).copy()
    lag[:, 0] = np.cos(k * t / 2)[:, None] * legs[0] + np.sin(k * t / 2)[:, None] * jlegs[0]
    return MaslovLoopData(p, frames, lag)


@given(st.integers(-6, 6), st.sampled_from([1, 2]))
@settings(max_examples=20, deadline=None)
def test_synthetic_winding(k, rank):
    assert maslov_index(synthetic_loop(k, rank=rank)) == k


def test_under_sampling_detected():
    with pytest.raises(SamplingError):
        maslov_index(synthetic_loop(6, n=16))


def test_not_totally_real_rejected():
    d = synthetic_loop(0, n=64, rank=2)
    bad = d.lagrangian_frames.copy()
    bad[:, 1] = E[2]  # J e2: F meets JF
    with pytest.raises(FrameError):
        maslov_index(MaslovLoopData(d.points, d.bundle_frames, bad))


def test_complex_gram_schmidt():
    p = E[0]
    f = complex_gram_schmidt(p, [E[1] + E[2], E[1] + E[3]])
    full = np.vstack([f, cross(p, f)])
    assert np.allclose(full @ full.T, np.eye(4), atol=1e-12)


@pytest.fixture(scope="module")
def lag():
    return catalog.get("halfsphere-lag")


def test_decomposition(lag):
    m = maslov_decomposition(lag.patch, lag.lagrangian, n=128, steps=48)
    assert m["tangent"] == 2
    assert m["additive"]
    assert (m["normal"], m["total"]) == (-2, 0)
    assert riemann_roch_expected(m["normal"]) == 0


def test_refinement_and_rotation(lag):
    d1 = loop_data(lag.patch, lag.lagrangian, "normal", 128, 48)
    d2 = loop_data(lag.patch, lag.lagrangian, "normal", 256, 48)
    assert maslov_index(d1) == maslov_index(d2)
    assert d1.unitarity() < 1e-12
    rng = np.random.default_rng(0)
    H = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    H = (H + H.conj().T) / 2
    H /= np.linalg.norm(H, 2)
    t = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    from scipy.linalg import expm

    U = np.stack([expm(1j * np.sin(tk) * H) for tk in t])
    assert maslov_index(rotate_trivialization(d1, U)) == maslov_index(d1)
    # a loop in U(2) with det winding once shifts μ by 2
    W = np.stack([np.diag([np.exp(1j * tk), 1.0]) for tk in t])
    assert maslov_index(rotate_trivialization(d1, W)) == maslov_index(d1) - 2
