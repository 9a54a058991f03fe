"""SO(3) acting on R^7 through harmonic cubic polynomials, and the orbit sphere.

The 7-dimensional irreducible representation of SO(3) is realized on
harmonic cubics in (x, y, z) with the L^2(S^2) inner product. Its invariant
3-form is unique up to scale and is a G2 3-form; an orthonormal Cayley frame
carries it onto phi0, which conjugates SO(3) into G2. The orbit of the zonal
cubic is a holomorphic sphere of constant curvature 1/6 (area 24π).
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

from . import jets
from .errors import FrameError
from .octonion import PHI0, AltForm, cross

MONOMIALS = [(a, b, 3 - a - b) for a in range(3, -1, -1) for b in range(3 - a, -1, -1)]


def _sphere_moment(a: int, b: int, c: int) -> float:
    """∫_{S^2} x^a y^b z^c dσ."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    g = math.gamma
    return 2.0 * g((a + 1) / 2) * g((b + 1) / 2) * g((c + 1) / 2) / g((a + b + c + 3) / 2)


def _laplacian_matrix() -> np.ndarray:
    """Laplacian from cubics (10 monomials) to linear forms (x, y, z)."""
    lin = {(1, 0, 0): 0, (0, 1, 0): 1, (0, 0, 1): 2}
    L = np.zeros((3, len(MONOMIALS)))
    for j, m in enumerate(MONOMIALS):
        for axis in range(3):
            if m[axis] >= 2:
                r = list(m)
                r[axis] -= 2
                L[lin[tuple(r)], j] += m[axis] * (m[axis] - 1)
    return L


def _rotation_generator(axis: int) -> np.ndarray:
    """Action of x_j ∂_k − x_k ∂_j on cubic monomials ((j, k) cyclic after ``axis``)."""
    j, k = (axis + 1) % 3, (axis + 2) % 3
    index = {m: i for i, m in enumerate(MONOMIALS)}
    G = np.zeros((len(MONOMIALS), len(MONOMIALS)))
    for col, m in enumerate(MONOMIALS):
        if m[k] > 0:  # x_j ∂_k
            r = list(m)
            r[k] -= 1
            r[j] += 1
            G[index[tuple(r)], col] += m[k]
        if m[j] > 0:  # − x_k ∂_j
            r = list(m)
            r[j] -= 1
            r[k] += 1
            G[index[tuple(r)], col] -= m[j]
    return G


def _form_action(A: np.ndarray) -> np.ndarray:
    """Matrix of T ↦ −(T(A·,·,·) + T(·,A·,·) + T(·,·,A·)) on the 35 coefficients of a 3-form."""
    combos = list(itertools.combinations(range(7), 3))
    M = np.zeros((35, 35))
    for col in range(35):
        c = np.zeros(35)
        c[col] = 1.0
        T = AltForm(c, 3).tensor
        dT = -(np.einsum("ajk,ai->ijk", T, A) + np.einsum("iak,aj->ijk", T, A)
               + np.einsum("ija,ak->ijk", T, A))
        M[:, col] = [dT[cb] for cb in combos]
    return M


@lru_cache(maxsize=1)
def representation():
    """Orthonormal harmonic-cubic basis, so(3) generators and the Cayley map.

    Returns a dict with ``generators`` (three 7x7 skew matrices in phi0
    coordinates, obeying [A1, A2] = −A3 cyclically), ``zonal`` (unit vector
    fixed by A3) and diagnostic residuals.
    """
    K = null_space(_laplacian_matrix())  # harmonic cubics, 10 x 7
    gram10 = np.array([[_sphere_moment(*np.add(a, b)) for b in MONOMIALS] for a in MONOMIALS])
    G = K.T @ gram10 @ K
    w, V = np.linalg.eigh(G)
    B = K @ V / np.sqrt(w)  # L2-orthonormal harmonic basis, 10 x 7
    Binv = np.linalg.pinv(B)
    gens = [Binv @ _rotation_generator(a) @ B for a in range(3)]

    inv = null_space(np.vstack([_form_action(A) for A in gens]))
    if inv.shape[1] != 1:
        raise FrameError(f"expected a unique invariant 3-form, found {inv.shape[1]}")
    phi = AltForm(inv[:, 0], 3)
    eye = np.eye(7)
    gram = np.array([[phi.interior(eye[i]).wedge(phi.interior(eye[j])).wedge(phi).top_coefficient()
                      for j in range(7)] for i in range(7)]) / 6.0
    sign = np.sign(np.linalg.eigvalsh(gram)[0])
    if not np.all(np.sign(np.linalg.eigvalsh(gram)) == sign):
        raise FrameError("invariant 3-form is not definite")
    phi = phi * sign
    gram = gram * sign
    # B = g sqrt(det g) and B scales like φ^3, so g = B / det(B)^(1/9) and φ ~ g^(3/2)
    detB = np.linalg.det(gram)
    g = gram / detB ** (1.0 / 9.0)  # det B = det(g)^{9/2}
    scale = np.mean(np.diag(g))
    if np.max(np.abs(g - scale * np.eye(7))) > 1e-8 * scale:
        raise FrameError("invariant 3-form does not induce the L2 metric")
    phi = phi * (1.0 / scale ** 1.5)
    T = phi.tensor

    def vcross(x, y):
        return np.einsum("ijk,i,j->k", T, x, y)

    # Cayley frame: f3 = f1×f2, f5 = f1×f4, f6 = f2×f4, f7 = −f3×f4
    zonal = null_space(gens[2])[:, 0]
    f1 = zonal
    f2 = _first_orthonormal([f1])
    f3 = vcross(f1, f2)
    f4 = _first_orthonormal([f1, f2, f3])
    frame = np.array([f1, f2, f3, f4, vcross(f1, f4), vcross(f2, f4), -vcross(f3, f4)])
    # frame rows are the images of e1..e7, so the coordinate map is x -> frame @ x
    transported = np.einsum("abc,ia,jb,kc->ijk", T, frame, frame, frame)
    frame_res = float(np.max(np.abs(transported - PHI0.tensor)))
    ortho_res = float(np.max(np.abs(frame @ frame.T - np.eye(7))))
    if frame_res > 1e-10 or ortho_res > 1e-10:
        raise FrameError(f"Cayley frame failed (phi {frame_res:.1e}, orthonormality {ortho_res:.1e})")
    gens = [frame @ A @ frame.T for A in gens]
    zonal = frame @ zonal
    return {
        "generators": gens,
        "zonal": zonal,
        "frame_residual": frame_res,
        "invariance_residual": float(max(np.max(np.abs(_form_action(A) @ PHI0.coeffs)) for A in gens)),
    }


def _first_orthonormal(vs) -> np.ndarray:
    for cand in np.eye(7):
        v = cand - sum(np.dot(cand, w) * w for w in vs)
        n = np.linalg.norm(v)
        if n > 1e-3:
            return v / n
    raise FrameError("no orthonormal completion")


@lru_cache(maxsize=None)
def _spectral(axis: int):
    """exp(tA) = Σ_m cos(mt) P_m + sin(mt) Q_m for the generator about ``axis``."""
    A = representation()["generators"][axis]
    H = 1j * A  # Hermitian with eigenvalues −3..3
    w, V = np.linalg.eigh(H)
    parts = []
    for m in range(0, 4):
        idx = np.abs(np.abs(w) - m) < 1e-8
        if not np.any(idx):
            continue
        P = np.real(V[:, idx] @ V[:, idx].conj().T)
        Q = A @ P / m if m else np.zeros_like(P)
        parts.append((m, P, Q))
    return parts


def rotate(axis: int, angle, v):
    """exp(angle · A_axis) v, with ``angle`` a number, array or jet."""
    out = 0.0
    for m, P, Q in _spectral(axis):
        pv = v @ P.T
        if m == 0:
            out = out + pv
            continue
        qv = v @ Q.T
        c, s = jets.cos(m * angle), jets.sin(m * angle)
        if isinstance(c, jets.Jet) or np.ndim(c):
            c, s = c[..., None], s[..., None]
        out = out + c * pv + s * qv
    return out


def orbit_map(s, t):
    """u(s, t) = exp(t A3) exp(s A2) v0 with v0 the zonal cubic."""
    v0 = representation()["zonal"]
    if isinstance(s, jets.Jet):
        base = jets.Jet.constant(np.broadcast_to(v0, s.shape + (7,)), s.nvar, s.order)
    else:
        base = np.broadcast_to(v0, np.shape(s) + (7,))
    return rotate(2, t, rotate(1, s, base))


def orientation_sign() -> float:
    """+1 if (∂_s, ∂_t) is J-positive for :func:`orbit_map` at a generic point."""
    s, t = 1.0, 0.3
    (sj, tj) = jets.variables([s, t], 1)
    u = orbit_map(sj, tj)
    return float(np.sign(np.dot(cross(u.value, u.partial((1, 0))), u.partial((0, 1)))))
