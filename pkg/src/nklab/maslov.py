"""Boundary Maslov index of a complex bundle with a totally real boundary subbundle.

A complex rank-r bundle E ⊂ T S^6 along a surface is trivialized by r real
vectors n_1..n_r per point such that {n_k, J n_k} is orthonormal (so n_k is a
unitary frame with i·n = Jn). Along the boundary loop a real orthonormal
frame f_1..f_r of F is expressed as A_kl = <f_l, n_k> + i <f_l, J n_k>; the
Maslov index is the winding number of det(A)² / |det A|².

Trivializations over a disk are produced by radial transport: seed a frame
near the center by Gram–Schmidt and carry it outward along s-lines by
projecting onto each fiber and re-orthonormalizing over C.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FrameError, SamplingError
from .octonion import cross
from .surface import LocalGeometry, SurfacePatch

CONTINUITY_TOL = 0.1
TOTALLY_REAL_TOL = 1e-6


@dataclass(frozen=True)
class MaslovLoopData:
    """Samples of (E, F) along a closed boundary loop (the last sample is not repeated)."""

    points: np.ndarray           # (n, 7)
    bundle_frames: np.ndarray    # (n, r, 7) unitary trivialization of E
    lagrangian_frames: np.ndarray  # (n, r, 7) orthonormal frame of F

    @property
    def rank(self) -> int:
        return self.bundle_frames.shape[1]

    def J(self, v):
        return cross(self.points[:, None, :], v)

    def continuity(self) -> float:
        """Largest jump between consecutive samples (loop closed)."""
        nb = np.roll(self.bundle_frames, -1, axis=0) - self.bundle_frames
        PF = np.einsum("nri,nrj->nij", self.lagrangian_frames, self.lagrangian_frames)
        dF = np.roll(PF, -1, axis=0) - PF
        return float(max(np.max(np.linalg.norm(nb, axis=-1)), np.max(np.linalg.norm(dF, axis=(1, 2), ord=2))))

    def totally_real(self) -> float:
        f = self.lagrangian_frames
        jf = self.J(f)
        return float(np.max(np.abs(np.einsum("nai,nbi->nab", jf, f))))

    def unitarity(self) -> float:
        n = self.bundle_frames
        full = np.concatenate([n, self.J(n)], axis=1)
        gram = np.einsum("nai,nbi->nab", full, full)
        return float(np.max(np.abs(gram - np.eye(2 * self.rank))))


def coefficient_matrix(data: MaslovLoopData) -> np.ndarray:
    n, f = data.bundle_frames, data.lagrangian_frames
    return (np.einsum("nli,nki->nkl", f, n) + 1j * np.einsum("nli,nki->nkl", f, data.J(n)))


def maslov_index(data: MaslovLoopData, check: bool = True) -> int:
    """Winding of det(A)²/|det A|² around the loop."""
    if check:
        jump = data.continuity()
        if jump > CONTINUITY_TOL:
            raise SamplingError(f"frames jump by {jump:.3f} between samples; refine the loop")
        tr = data.totally_real()
        if tr > TOTALLY_REAL_TOL:
            raise FrameError(f"boundary subbundle is not totally real ({tr:.2e})")
    d = np.linalg.det(coefficient_matrix(data)) ** 2
    if np.min(np.abs(d)) < 1e-12:
        raise FrameError("F is not transverse to iF in the trivialization")
    phase = d / np.abs(d)
    steps = np.angle(np.roll(phase, -1) / phase)
    winding = np.sum(steps) / (2 * np.pi)
    k = int(round(winding))
    if abs(winding - k) > 1e-6:
        raise SamplingError(f"non-integer winding {winding:.6f}")
    return k


def rotate_trivialization(data: MaslovLoopData, U: np.ndarray) -> MaslovLoopData:
    """Replace n_j by Σ_k U_kj n_k (complex coefficients act through J); ``U`` is (n, r, r)."""
    n = data.bundle_frames
    jn = data.J(n)
    new = np.einsum("nkj,nki->nji", U.real, n) + np.einsum("nkj,nki->nji", U.imag, jn)
    return MaslovLoopData(data.points, new, data.lagrangian_frames)


# frames -----------------------------------------------------------------------------

def complex_gram_schmidt(p, vectors, seed_order=None) -> np.ndarray:
    """Unitary frame from real representatives: orthonormalize against {n, Jn}."""
    out = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for u in out:
            w = w - np.dot(w, u) * u
            ju = cross(p, u)
            w = w - np.dot(w, ju) * ju
        nrm = np.linalg.norm(w)
        if nrm < 1e-8:
            raise FrameError("complex Gram–Schmidt met a dependent vector")
        out.append(w / nrm)
    return np.array(out)


def fiber_projector(kind: str, geom: LocalGeometry) -> np.ndarray:
    """Orthogonal projectors (N, 7, 7) onto TΣ, NΣ or T S^6 at the sample points."""
    p = geom.p
    eye = np.eye(7)
    e1, e2 = geom.e1, geom.e2
    PT = np.einsum("ni,nj->nij", e1, e1) + np.einsum("ni,nj->nij", e2, e2)
    PM = eye - np.einsum("ni,nj->nij", p, p)
    if kind == "tangent":
        return PT
    if kind == "normal":
        return PM - PT
    if kind == "ambient":
        return PM
    raise ValueError(f"unknown fiber {kind!r}")


RANK = {"tangent": 1, "normal": 2, "ambient": 3}


def radial_trivialization(patch: SurfacePatch, kind: str, t, steps: int = 96,
                          start: float = 1e-3) -> np.ndarray:
    """Unitary frames of the chosen bundle at the boundary points (s1, t).

    The patch must collapse the edge s0 to a center point. Frames are seeded
    by Gram–Schmidt of the ambient basis at s = s0 + start and transported
    along each s-line.
    """
    if "s0" not in patch.poles or "s1" not in patch.boundary:
        raise FrameError(f"{patch.name}: radial transport needs a pole at s0 and boundary at s1")
    s0, s1 = patch.domain[:2]
    r = RANK[kind]
    svals = np.linspace(s0 + start, s1, steps + 1)
    t = np.asarray(t, dtype=float)
    frames = None
    for k, sv in enumerate(svals):
        geom = LocalGeometry(patch, np.full_like(t, sv), t, order=1)
        P = fiber_projector(kind, geom)
        if frames is None:
            frames = np.empty((len(t), r, 7))
            for i in range(len(t)):
                cands = [P[i] @ e for e in np.eye(7)]
                chosen = []
                for c in cands:
                    try:
                        chosen = list(complex_gram_schmidt(geom.p[i], chosen + [c]))
                    except FrameError:
                        continue
                    if len(chosen) == r:
                        break
                frames[i] = np.array(chosen)
            continue
        for i in range(len(t)):
            proj = [P[i] @ v for v in frames[i]]
            frames[i] = complex_gram_schmidt(geom.p[i], proj)
    return frames


def boundary_tangent(patch: SurfacePatch, t) -> tuple[np.ndarray, np.ndarray]:
    geom = LocalGeometry(patch, np.full_like(np.asarray(t, dtype=float), patch.domain[1]), t, order=1)
    T = geom.ut / np.linalg.norm(geom.ut, axis=-1, keepdims=True)
    return geom, T


def lagrangian_split(patch: SurfacePatch, L, t) -> dict:
    """Along the boundary: T, the frame of F = TL ⊖ T∂Σ, and how far F sits from NΣ."""
    geom, T = boundary_tangent(patch, t)
    F = np.empty((len(T), 2, 7))
    TL = np.empty((len(T), 3, 7))
    off = 0.0
    PN = fiber_projector("normal", geom)
    for i, q in enumerate(geom.p):
        B = L.tangent_basis(q)
        TL[i] = B
        c = B @ T[i]
        rest = np.linalg.svd(c[None, :])[2][1:] @ B
        F[i] = rest
        off = max(off, float(np.max(np.linalg.norm(rest - rest @ PN[i].T, axis=-1))))
    return {"geom": geom, "T": T, "F": F, "TL": TL, "normal_offset": off}


def _align_loop(frames: np.ndarray) -> np.ndarray:
    """Make consecutive real frames of a subbundle vary continuously (Procrustes)."""
    out = frames.copy()
    for k in range(1, len(out)):
        M = out[k] @ out[k - 1].T
        u, _, vt = np.linalg.svd(M)
        out[k] = (u @ vt).T @ out[k]
    return out


def loop_data(patch: SurfacePatch, L, kind: str, n: int = 256, steps: int = 96) -> MaslovLoopData:
    """Assemble (E, F) loop samples for E = TΣ, NΣ or T S^6 and F = T∂Σ, F or TL."""
    t0, t1 = patch.domain[2:]
    t = np.linspace(t0, t1, n, endpoint=False)
    split = lagrangian_split(patch, L, t)
    geom = split["geom"]
    frames = radial_trivialization(patch, kind, t, steps=steps)
    if kind == "tangent":
        lag = split["T"][:, None, :]
    elif kind == "normal":
        lag = _align_loop(split["F"])
    else:
        lag = _align_loop(split["TL"])
    return MaslovLoopData(geom.p, frames, lag)


@dataclass(frozen=True)
class MaslovCalibration:
    """Sign making μ(TΣ, T∂Σ) = 2χ(disk) = 2 with the chosen loop orientation."""

    sign: int
    raw_tangent: int


def calibrate(patch: SurfacePatch, L, n: int = 256) -> MaslovCalibration:
    raw = maslov_index(loop_data(patch, L, "tangent", n))
    if abs(raw) != 2:
        raise FrameError(f"tangent Maslov index {raw} cannot be calibrated to 2")
    return MaslovCalibration(int(np.sign(raw)), raw)


def maslov_decomposition(patch: SurfacePatch, L, n: int = 256, steps: int = 96) -> dict:
    """μ(TΣ,T∂Σ), μ(NΣ,F) and μ(TS^6|Σ, TL), each from its own trivialization."""
    cal = calibrate(patch, L, n)
    out = {}
    for kind, key in (("tangent", "tangent"), ("normal", "normal"), ("ambient", "total")):
        data = loop_data(patch, L, kind, n, steps)
        out[key] = cal.sign * maslov_index(data)
        out[f"{key}_continuity"] = data.continuity()
        out[f"{key}_totally_real"] = data.totally_real()
    out["additive"] = out["total"] == out["tangent"] + out["normal"]
    out["calibration_sign"] = cal.sign
    out["normal_offset"] = lagrangian_split(patch, L, np.linspace(0, 2 * np.pi, 16, endpoint=False))["normal_offset"]
    return out


def riemann_roch_expected(mu_normal: int, euler_char: int = 1, rank: int = 2) -> int:
    """Real Fredholm index r·χ(Σ) + μ(NΣ, F) of the boundary problem for 𝒟."""
    return rank * euler_char + mu_normal
