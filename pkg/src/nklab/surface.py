"""Parametrized surfaces in S^6: jets, tangent/normal splitting and the
extrinsic quantities of a holomorphic curve.

A :class:`SurfacePatch` wraps a closed-form map ``(s, t) -> S^6`` written with
the functions of :mod:`nklab.jets`, so value, first, second and third
derivatives come out of one jet evaluation. :class:`LocalGeometry` holds the
jet of a patch at an array of parameter points and derives the frame,
second fundamental form, shape operator, normal connection and normal
curvature from it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import jets
from .errors import DegenerateInputError, JetEvaluationError, ModelViolationError, PreconditionError
from .octonion import cross, phi0
from .sphere import FrameSU3, project_tangent, su3_frame

SPHERICAL_TOL = 1e-10
IMMERSION_TOL = 1e-6
HOLOMORPHIC_TOL = 1e-8
POLAR_CAP = 1e-3


@dataclass(frozen=True)
class SurfacePatch:
    """Map of a parameter rectangle into S^6.

    ``boundary`` lists the rectangle edges (``"s0"``, ``"s1"``, ``"t0"``, ``"t1"``)
    that are genuine boundary of the surface; edges identified by periodicity
    or collapsed to a pole are omitted. ``poles`` lists collapsed edges.
    """

    name: str
    map: Callable
    domain: tuple
    boundary: tuple = ()
    poles: tuple = ()
    description: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, s, t) -> np.ndarray:
        return np.asarray(self.map(np.asarray(s, dtype=float), np.asarray(t, dtype=float)))

    def jet(self, s, t, order: int = 2) -> jets.Jet:
        out, _ = jets.jet_of(self.map, [s, t], order)
        return out

    def variables(self, s, t, order: int = 2):
        """Jet variables (s, t) and the map's jet at the given points."""
        sj, tj = jets.variables([s, t], order)
        try:
            u = self.map(sj, tj)
        except (TypeError, AttributeError, JetEvaluationError):
            u = jets.fd_jet(self.map, s, t, order=min(order, 2))
        return sj, tj, u

    def sample_grid(self, n: int = 16, cap: float = POLAR_CAP):
        """Interior sample points on an n x n grid, staying ``cap`` away from poles."""
        s0, s1, t0, t1 = self.domain
        lo = s0 + (cap if "s0" in self.poles else 0.0)
        hi = s1 - (cap if "s1" in self.poles else 0.0)
        s = np.linspace(lo, hi, n)
        t = np.linspace(t0, t1, n, endpoint=False)
        S, T = np.meshgrid(s, t, indexing="ij")
        return S.ravel(), T.ravel()

    def edge_points(self, edge: str, n: int):
        s0, s1, t0, t1 = self.domain
        if edge in ("s0", "s1"):
            t = np.linspace(t0, t1, n, endpoint=False)
            return np.full(n, s0 if edge == "s0" else s1), t
        s = np.linspace(s0, s1, n)
        return s, np.full(n, t0 if edge == "t0" else t1)

    def validate(self, n: int = 16, cap: float = POLAR_CAP) -> dict:
        """Check the map is spherical and immersed on a sample grid."""
        s, t = self.sample_grid(n, cap)
        u = self.jet(s, t, 1)
        sph = float(np.max(np.abs(np.linalg.norm(u.value, axis=-1) - 1.0)))
        if sph > SPHERICAL_TOL:
            raise DegenerateInputError(f"{self.name}: image leaves the unit sphere by {sph:.2e}")
        d = np.stack([u.partial((1, 0)), u.partial((0, 1))], axis=-1)
        smin = float(np.min(np.linalg.svd(d, compute_uv=False)[:, -1]))
        if smin < IMMERSION_TOL:
            raise DegenerateInputError(f"{self.name}: not immersed (smallest singular value {smin:.2e})")
        return {"spherical": sph, "min_singular_value": smin}


# projections built from the first jet ---------------------------------------------

def _metric(us, ut):
    d = jets.dot
    return d(us, us), d(us, ut), d(ut, ut)


def tangent_part(us, ut, w):
    """Orthogonal projection of w onto span(us, ut) (jets or arrays)."""
    g11, g12, g22 = _metric(us, ut)
    det = g11 * g22 - g12 * g12
    b1, b2 = jets.dot(w, us), jets.dot(w, ut)
    a1 = (g22 * b1 - g12 * b2) / det
    a2 = (g11 * b2 - g12 * b1) / det
    return a1[..., None] * us + a2[..., None] * ut


def normal_part(u, us, ut, w):
    """Component of w orthogonal to u, us and ut."""
    w = project_tangent(u, w)
    return w - tangent_part(us, ut, w)


@dataclass(frozen=True)
class NormalField:
    """Normal field η = (normal projection of) ``ambient(s, t, u)``.

    ``ambient`` must be written with jet-aware operations; the result is
    projected onto NΣ, so any smooth ambient vector field gives a valid η.
    """

    name: str
    ambient: Callable
    description: str = ""

    def scaled(self, c: float) -> "NormalField":
        amb = self.ambient
        return NormalField(f"{c:g}*{self.name}", lambda s, t, u: c * amb(s, t, u))

    def __add__(self, other: "NormalField") -> "NormalField":
        a, b = self.ambient, other.ambient
        return NormalField(f"{self.name}+{other.name}", lambda s, t, u: a(s, t, u) + b(s, t, u))

    def __sub__(self, other: "NormalField") -> "NormalField":
        a, b = self.ambient, other.ambient
        return NormalField(f"{self.name}-{other.name}", lambda s, t, u: a(s, t, u) - b(s, t, u))


ZERO_FIELD = NormalField("zero", lambda s, t, u: 0.0 * u)


class LocalGeometry:
    """Jets of a patch at parameter points, and the quantities derived from them.

    With jet order K the normal fields come out with order K − 1, so K = 2 is
    enough for ∇⊥η and K = 3 for normal curvature and derivatives of 1-forms.
    """

    def __init__(self, patch: SurfacePatch, s, t, order: int = 2):
        self.patch = patch
        self.s = np.atleast_1d(np.asarray(s, dtype=float))
        self.t = np.atleast_1d(np.asarray(t, dtype=float))
        self.order = order
        self.sj, self.tj, self.u = patch.variables(self.s, self.t, order)
        self.p = self.u.value
        self.us = self.u.partial((1, 0))
        self.ut = self.u.partial((0, 1))
        if np.min(np.linalg.norm(self.us, axis=-1)) < IMMERSION_TOL:
            raise DegenerateInputError(f"{patch.name}: degenerate first derivative")
        self.g11, self.g12, self.g22 = _metric(self.us, self.ut)
        det = self.g11 * self.g22 - self.g12 ** 2
        if np.min(det) < IMMERSION_TOL ** 2:
            raise DegenerateInputError(f"{patch.name}: not immersed at a sample point")
        self.area_element = np.sqrt(det)
        e1 = self.us / np.linalg.norm(self.us, axis=-1, keepdims=True)
        e2 = self.ut - np.sum(self.ut * e1, axis=-1, keepdims=True) * e1
        self.e1 = e1
        self.e2 = e2 / np.linalg.norm(e2, axis=-1, keepdims=True)
        self._du = (self.u.d(0), self.u.d(1))

    def __len__(self) -> int:
        return len(self.s)

    # coordinates and projections -------------------------------------------
    def coords(self, X) -> np.ndarray:
        """Coordinate components (a_s, a_t) of tangent vectors X (N, 7)."""
        b1 = np.sum(X * self.us, axis=-1)
        b2 = np.sum(X * self.ut, axis=-1)
        det = self.area_element ** 2
        return np.stack([(self.g22 * b1 - self.g12 * b2) / det,
                         (self.g11 * b2 - self.g12 * b1) / det], axis=-1)

    def normal(self, w):
        """Pointwise projection onto NΣ (values)."""
        return normal_part(self.p, self.us, self.ut, w)

    def tangent(self, w):
        return tangent_part(self.us, self.ut, w)

    def normal_jet(self, w):
        """Projection onto NΣ carried out on jets (loses one order)."""
        us, ut = self._du
        return normal_part(self.u.truncate(us.order), us, ut, w)

    def J(self, v):
        return cross(self.p, v)

    # second fundamental form -----------------------------------------------
    def hessian(self, i: int, j: int) -> np.ndarray:
        alpha = [0, 0]
        alpha[i] += 1
        alpha[j] += 1
        return self.u.partial(tuple(alpha))

    def II_coord(self, i: int, j: int) -> np.ndarray:
        return self.normal(self.hessian(i, j))

    def II(self, X, Y) -> np.ndarray:
        a, b = self.coords(X), self.coords(Y)
        out = 0.0
        for i in range(2):
            for j in range(2):
                out = out + (a[:, i] * b[:, j])[:, None] * self.II_coord(i, j)
        return out

    def mean_curvature(self) -> np.ndarray:
        return self.II(self.e1, self.e1) + self.II(self.e2, self.e2)

    def shape_operator(self, X, eta) -> np.ndarray:
        """Weingarten form W_X η = −Σ_j <II(X, e_j), η> e_j."""
        out = 0.0
        for e in (self.e1, self.e2):
            out = out - np.sum(self.II(X, e) * eta, axis=-1)[:, None] * e
        return out

    # normal fields ------------------------------------------------------------
    def field(self, nf: NormalField):
        """Jet of η (order K − 1) at the sample points."""
        us = self._du[0]
        w = nf.ambient(self.sj.truncate(us.order), self.tj.truncate(us.order), self.u.truncate(us.order))
        if not isinstance(w, jets.Jet):
            w = jets.Jet.constant(np.broadcast_to(w, self.p.shape), 2, us.order)
        return self.normal_jet(w)

    def directional(self, X, jet_field) -> np.ndarray:
        """Ambient derivative X(F) of a jet field along tangent vectors X."""
        a = self.coords(X)
        return a[:, :1] * jet_field.partial((1, 0)) + a[:, 1:] * jet_field.partial((0, 1))

    def nabla_perp(self, X, eta_jet) -> np.ndarray:
        return self.normal(self.directional(X, eta_jet))

    def weingarten_derivative(self, X, eta_jet) -> np.ndarray:
        """Tangential part of the ambient derivative of η (shape operator, derivative path)."""
        d = project_tangent(self.p, self.directional(X, eta_jet))
        return self.tangent(d)

    def nabla_perp_coord_jet(self, i: int, eta_jet):
        """Jet of ∇⊥_{∂_i} η (one order lower than η)."""
        d = eta_jet.d(i)
        us, ut = self._du
        o = d.order
        return normal_part(self.u.truncate(o), us.truncate(o), ut.truncate(o), d)

    def normal_curvature(self, eta_jet, xi) -> np.ndarray:
        """R⊥(e1, e2, η, ξ) from the commutator of ∇⊥ on coordinate fields.

        Needs η as a jet of order ≥ 2 (geometry of order ≥ 3). The result is
        divided by the area element to pass from (∂_s, ∂_t) to (e1, e2); the
        frame (e1, e2) is positively oriented with respect to (∂_s, ∂_t).
        """
        if eta_jet.order < 2:
            raise JetEvaluationError("normal curvature needs η to second order")
        ns = self.nabla_perp_coord_jet(0, eta_jet)
        nt = self.nabla_perp_coord_jet(1, eta_jet)
        st = self.normal(nt.partial((1, 0)))
        ts = self.normal(ns.partial((0, 1)))
        return np.sum((st - ts) * xi, axis=-1) / self.area_element


# pointwise tests --------------------------------------------------------------------

def holomorphic_defects(geom: LocalGeometry) -> dict:
    """Two equivalent holomorphicity measures at every sample point.

    ``j_invariance``: max distance of J e_a from the tangent plane;
    ``calibration``: 1 − |ω(e1, e2)| (ω restricted to TΣ against the area form).
    """
    d1 = geom.J(geom.e1)
    d2 = geom.J(geom.e2)
    jinv = np.maximum(np.linalg.norm(d1 - geom.tangent(d1), axis=-1),
                      np.linalg.norm(d2 - geom.tangent(d2), axis=-1))
    cal = 1.0 - np.abs(phi0(geom.p, geom.e1, geom.e2))
    return {"j_invariance": jinv, "calibration": cal}


def is_holomorphic(patch: SurfacePatch, pt, tol: float = HOLOMORPHIC_TOL) -> bool:
    geom = LocalGeometry(patch, [pt[0]], [pt[1]], order=1)
    return bool(holomorphic_defects(geom)["j_invariance"][0] <= tol)


def holomorphic_verdicts(patch: SurfacePatch, pt, tol: float = HOLOMORPHIC_TOL) -> tuple[bool, bool]:
    """Verdicts of the J-invariance and calibration criteria.

    For a unit tangent pair, 1 − |ω(e1,e2)| = 1 − cos θ where θ is the angle of
    J e1 to the plane, while the J-invariance defect is sin θ; the calibration
    tolerance is therefore mapped to 1 − sqrt(1 − tol²).
    """
    geom = LocalGeometry(patch, [pt[0]], [pt[1]], order=1)
    d = holomorphic_defects(geom)
    jv = d["j_invariance"][0] <= tol
    cal_tol = 1.0 - np.sqrt(max(0.0, 1.0 - tol ** 2))
    cv = d["calibration"][0] <= max(cal_tol, 4 * np.finfo(float).eps)
    return bool(jv), bool(cv)


def adapt_u2_frame(patch: SurfacePatch, pt, rotation: float = 0.0, normal_seed=None) -> FrameSU3:
    """SU(3) frame with e1 ∝ ∂_s u (rotated by ``rotation`` in TΣ) and e2 = J e1.

    ``normal_seed`` optionally selects e3; otherwise the ambient basis seeds it.
    """
    geom = LocalGeometry(patch, [pt[0]], [pt[1]], order=1)
    if holomorphic_defects(geom)["j_invariance"][0] > HOLOMORPHIC_TOL:
        raise PreconditionError(f"{patch.name}: tangent plane at {tuple(pt)} is not J-invariant")
    p = geom.p[0]
    e1 = geom.e1[0]
    e1 = np.cos(rotation) * e1 + np.sin(rotation) * cross(p, e1)
    if normal_seed is None:
        return su3_frame(p, first=e1)
    return su3_frame(p, first=e1, third=normal_seed)


@dataclass(frozen=True)
class HopfCoefficients:
    kappa: complex
    mu: complex
    consistency: float

    @property
    def magnitude2(self) -> float:
        return abs(self.kappa) ** 2 + abs(self.mu) ** 2


def hopf_coefficients(patch: SurfacePatch, pt, frame: Optional[FrameSU3] = None,
                      tol: float = 1e-6) -> HopfCoefficients:
    """Read κ, μ from II(e1, e1) and, independently, from II(e1, e2)."""
    frame = frame if frame is not None else adapt_u2_frame(patch, pt)
    geom = LocalGeometry(patch, [pt[0]], [pt[1]], order=2)
    e = frame.legs
    ii11 = geom.II(e[0][None], e[0][None])[0]
    ii12 = geom.II(e[0][None], e[1][None])[0]
    c11 = ii11 @ e[2:].T
    c12 = ii12 @ e[2:].T
    k_a = complex(c11[0], c11[1])
    m_a = complex(c11[2], -c11[3])
    k_b = complex(c12[1], -c12[0])
    m_b = complex(c12[3], c12[2])
    consistency = max(abs(k_a - k_b), abs(m_a - m_b))
    if consistency > tol:
        raise ModelViolationError(
            f"{patch.name}: Hopf read-offs disagree by {consistency:.2e} (curve not holomorphic/minimal?)")
    return HopfCoefficients(0.5 * (k_a + k_b), 0.5 * (m_a + m_b), float(consistency))


def holomorphic_symmetry_residuals(geom: LocalGeometry, eta) -> dict:
    """II(X,JY) = J II(X,Y), W_{JX} η = −J W_X η, W_X(Jη) = J W_X η at every sample."""
    e1, e2 = geom.e1, geom.e2
    J = geom.J
    r_ii = np.linalg.norm(geom.II(e1, J(e1)) - J(geom.II(e1, e1)), axis=-1)
    r_w1 = np.linalg.norm(geom.shape_operator(J(e1), eta) + J(geom.shape_operator(e1, eta)), axis=-1)
    r_w2 = np.linalg.norm(geom.shape_operator(e1, J(eta)) - J(geom.shape_operator(e1, eta)), axis=-1)
    r_sym = np.linalg.norm(geom.II(e1, e2) - geom.II(e2, e1), axis=-1)
    return {"ii_complex_linear": r_ii, "shape_jx": r_w1, "shape_jeta": r_w2, "ii_symmetric": r_sym}


def weingarten_residual(geom: LocalGeometry, nf: NormalField, X, Y) -> np.ndarray:
    """|<W_X η, Y> + <II(X, Y), η>| with W from the derivative of η."""
    eta = geom.field(nf)
    w = geom.weingarten_derivative(X, eta)
    return np.abs(np.sum(w * Y, axis=-1) + np.sum(geom.II(X, Y) * eta.value, axis=-1))


def ricci_equation_residual(geom: LocalGeometry, nf_eta: NormalField, xi) -> np.ndarray:
    """R̄(e1,e2,η,ξ) − R⊥(e1,e2,η,ξ) − <W_{e1}η, W_{e2}ξ> + <W_{e1}ξ, W_{e2}η>."""
    eta_j = geom.field(nf_eta)
    eta = eta_j.value
    e1, e2 = geom.e1, geom.e2
    d = lambda a, b: np.sum(a * b, axis=-1)
    rbar = d(e1, xi) * d(e2, eta) - d(e1, eta) * d(e2, xi)
    rperp = geom.normal_curvature(eta_j, xi)
    W = geom.shape_operator
    return np.abs(rbar - rperp - d(W(e1, eta), W(e2, xi)) + d(W(e1, xi), W(e2, eta)))


def torsion_normal_residual(geom: LocalGeometry, eta) -> np.ndarray:
    """Tangential component of P(X, η) for X in TΣ, η in NΣ."""
    out = 0.0
    for X in (geom.e1, geom.e2):
        P = project_tangent(geom.p, cross(X, eta))
        out = np.maximum(out, np.linalg.norm(geom.tangent(P), axis=-1))
    return out


# free boundary --------------------------------------------------------------------

def ball_normal(q, center, radius):
    """Outward unit normal of the geodesic sphere of radius ``radius`` about ``center``."""
    return (np.cos(radius) * q - center) / np.sin(radius)


def boundary_orthogonality(patch: SurfacePatch, center, radius: float, pt) -> dict:
    """Angle between ν and TΣ, and the umbilicity defect ‖A − cot(radius) Id‖ at a boundary point."""
    center = np.asarray(center, dtype=float)
    geom = LocalGeometry(patch, [pt[0]], [pt[1]], order=1)
    q = geom.p[0]
    dist = np.arccos(np.clip(np.dot(q, center), -1.0, 1.0))
    if abs(dist - radius) > 1e-8:
        raise PreconditionError(f"{patch.name}: point {tuple(pt)} is at distance {dist:.3e}, not {radius}")
    nu = ball_normal(q, center, radius)
    defect = float(np.linalg.norm(nu - geom.tangent(nu[None])[0]))
    c = 1.0 / np.tan(radius)
    # tangent space of the geodesic sphere at q
    basis = np.linalg.svd(np.stack([q, nu]), full_matrices=True)[2][2:]
    A = np.empty((5, 5))
    for j, X in enumerate(basis):
        (tau,) = jets.variables([0.0], 1)
        curve = (q + tau * X) / jets.norm(q + tau * X)
        dnu = ball_normal(curve, center, radius).partial((1,))
        A[:, j] = basis @ dnu
    umb = float(np.linalg.norm(A - c * np.eye(5), ord=2))
    return {"angle": float(np.arcsin(min(1.0, defect))), "defect": defect,
            "umbilicity": umb, "c": c}


def rigidity_probe(patch: SurfacePatch, center, radius: float, edge: str = "s1",
                   n_boundary: int = 64, n_interior: int = 8, tol: float = 1e-6) -> dict:
    """II(ν, Jν) and the Hopf magnitude along the boundary, plus Φ at interior samples.

    ν is taken as the unit projection of the ball normal onto TΣ; for a
    free-boundary configuration it is the ball normal itself.
    """
    center = np.asarray(center, dtype=float)
    s, t = patch.edge_points(edge, n_boundary)
    geom = LocalGeometry(patch, s, t, order=2)
    nu = ball_normal(geom.p, center, radius)
    e1 = geom.tangent(nu)
    e1 = e1 / np.linalg.norm(e1, axis=-1, keepdims=True)
    ii12 = np.linalg.norm(geom.II(e1, geom.J(e1)), axis=-1)
    phi_b = np.linalg.norm(geom.II(e1, e1), axis=-1)  # |II(e1,e1)|² = |κ|² + |μ|²
    si, ti = patch.sample_grid(n_interior)
    gi = LocalGeometry(patch, si, ti, order=2)
    phi_i = np.linalg.norm(gi.II(gi.e1, gi.e1), axis=-1)
    orth = max(boundary_orthogonality(patch, center, radius, (a, b))["defect"]
               for a, b in zip(s[:: max(1, n_boundary // 8)], t[:: max(1, n_boundary // 8)]))
    out = {
        "max_II12_boundary": float(np.max(ii12)),
        "max_phi_boundary": float(np.max(phi_b)),
        "max_phi_interior": float(np.max(phi_i)),
        "max_orthogonality_defect": float(orth),
    }
    out["orthogonal"] = bool(orth <= 1e-8)
    out["flagged"] = bool(not out["orthogonal"]
                          or max(out["max_II12_boundary"], out["max_phi_boundary"]) > tol)
    return out
