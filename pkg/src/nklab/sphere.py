"""The round unit S^6 in Im(O) with its strict nearly-Kähler structure (type 1).

Points are unit vectors ``p`` in R^7 and tangent vectors are ambient vectors
orthogonal to ``p``. Every pointwise formula accepts batched ``(..., 7)`` arrays
or :class:`~nklab.jets.Jet` values, so the connection and curvature code below
differentiates the same formulas it evaluates.

Conventions::

    J_p v        = p × v
    ω(x, y)      = <J x, y> = phi0(p, x, y)
    Υ_θ(x, y, z) = e^{iθ} (phi0(x, y, z) − i ψ0(p, x, y, z)),   Υ = Υ_{π/2}
    P(X, Y)      = (∇_X J) Y = tangential part of X × Y
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import DegenerateInputError, DomainError
from .octonion import PSI0, _EPS, _PSI_T, cross, phi0

TANGENT_TOL = 1e-10
FD_STEP = 1e-4


# points and tangent vectors -------------------------------------------------

def sphere_point(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n < 1e-14):
        raise DegenerateInputError("zero vector has no direction")
    return v / n


def normalize(v):
    """Unit vector along ``v`` (arrays or jets)."""
    return v / jets.norm(v)[..., None] if isinstance(v, jets.Jet) else sphere_point(v)


def project_tangent(p, v):
    """``v − <v, p> p``."""
    return v - jets.dot(v, p)[..., None] * p


def check_tangent(p, *vectors, tol: float = TANGENT_TOL) -> None:
    p = np.asarray(p, dtype=float)
    for v in vectors:
        if isinstance(v, jets.Jet):
            continue
        v = np.asarray(v, dtype=float)
        scale = max(1.0, float(np.max(np.abs(v), initial=0.0)))
        if np.max(np.abs(np.sum(p * v, axis=-1)), initial=0.0) > tol * scale:
            raise DomainError("vector is not tangent at the given base point")


def random_point(rng: np.random.Generator, size=None) -> np.ndarray:
    shape = (7,) if size is None else (size, 7)
    return sphere_point(rng.normal(size=shape))


def random_tangent(rng: np.random.Generator, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return project_tangent(p, rng.normal(size=p.shape))


# almost-Hermitian structure ---------------------------------------------------

def almost_complex_J(p, v, check: bool = True):
    if check:
        check_tangent(p, v)
    return cross(p, v)


def omega(p, x, y):
    return phi0(p, x, y)


def _complex_phi(x, y, z):
    return np.einsum("ijk,...i,...j,...k->...", _EPS, x, y, z)


def _complex_psi(w, x, y, z):
    return np.einsum("ijkl,...i,...j,...k,...l->...", _PSI_T, w, x, y, z)


def upsilon(p, x, y, z, theta: float = np.pi / 2, check: bool = True):
    """Complex volume Υ_θ evaluated on (possibly complex) tangent vectors.

    The default θ = π/2 is the form ``(∂r ⌟ ∗phi0 + i phi0)|_{S^6}``.
    """
    if check:
        check_tangent(p, *(np.real(v) for v in (x, y, z)), *(np.imag(v) for v in (x, y, z)))
    if any(isinstance(v, jets.Jet) for v in (p, x, y, z)):
        re, im = phi0(x, y, z), -PSI0(p, x, y, z)
        c, s = np.cos(theta), np.sin(theta)
        return c * re - s * im, s * re + c * im
    base = _complex_phi(x, y, z) - 1j * _complex_psi(p, x, y, z)
    return np.exp(1j * theta) * base


def upsilon_from_domega(p, x, y, z, theta: float = 0.0, lam: float = 1.0):
    """Υ_θ built from dω alone: e^{iθ}/(3λ) (dω(x,y,z) − i dω(x,y,Jz)), with dω = 3λ phi0."""
    dw = lambda a, b, c: 3.0 * lam * phi0(a, b, c)
    return np.exp(1j * theta) / (3 * lam) * (dw(x, y, z) - 1j * dw(x, y, cross(p, z)))


def omega_wedge_omega(p, a, b, c, d):
    w = lambda u, v: omega(p, u, v)
    return 2.0 * (w(a, b) * w(c, d) - w(a, c) * w(b, d) + w(a, d) * w(b, c))


# SU(3) frames -------------------------------------------------------------------

@dataclass(frozen=True)
class FrameSU3:
    """Orthonormal frame e1..e6 of T_pS^6 with e2 = Je1, e4 = Je3, e6 = Je5."""

    base: np.ndarray
    legs: np.ndarray  # (6, 7)

    @property
    def complex_legs(self) -> np.ndarray:
        """f_k = ½(e_{2k-1} − i J e_{2k-1}), k = 1, 2, 3."""
        e = self.legs
        return 0.5 * (e[0::2] - 1j * e[1::2])

    def upsilon_value(self) -> complex:
        f = self.complex_legs
        return complex(upsilon(self.base, f[0], f[1], f[2], check=False))

    def residuals(self) -> dict:
        e, p = self.legs, self.base
        je = cross(p, e[0::2])
        return {
            "orthonormal": float(np.max(np.abs(e @ e.T - np.eye(6)))),
            "tangent": float(np.max(np.abs(e @ p))),
            "complex_pairs": float(np.max(np.abs(je - e[1::2]))),
            "upsilon": float(abs(self.upsilon_value() - 1.0)),
        }


def su3_frame(p, first=None, third=None) -> FrameSU3:
    """Deterministic SU(3) frame at ``p``.

    Optional ``first`` / ``third`` seed e1 / e3 (projected and orthonormalized);
    remaining legs come from the ambient basis in order. The third complex leg
    is rotated so that Υ(f1, f2, f3) = 1.
    """
    p = sphere_point(p)
    legs: list[np.ndarray] = []

    def push(v) -> bool:
        v = project_tangent(p, np.asarray(v, dtype=float))
        for u in legs:
            v = v - np.dot(v, u) * u
        n = np.linalg.norm(v)
        if n < 1e-6:
            return False
        v = v / n
        legs.extend([v, cross(p, v)])
        return True

    seeds = [s for s in (first, third) if s is not None]
    for s in seeds:
        if not push(s):
            raise DegenerateInputError("seed vector is degenerate against the frame so far")
    for cand in np.eye(7):
        if len(legs) == 6:
            break
        push(cand)
    e = np.array(legs)
    frame = FrameSU3(p, e)
    val = frame.upsilon_value()
    if abs(abs(val) - 1.0) > 1e-8:
        raise DegenerateInputError(f"frame has |Υ| = {abs(val):.3e}, expected 1")
    alpha = np.angle(val)
    e5 = np.cos(alpha) * e[4] - np.sin(alpha) * e[5]
    e = e.copy()
    e[4], e[5] = e5, cross(p, e5)
    return FrameSU3(p, e)


# connections ---------------------------------------------------------------------

def chart(p, directions, coords):
    """``normalize(p + Σ x_i t_i)``: a chart of S^6 centred at p."""
    q = p
    for x, t in zip(coords, directions):
        q = q + x * np.asarray(t, dtype=float)
    return normalize(q)


def _curve_jet(p, X, order: int = 1):
    (tau,) = jets.variables([0.0], order)
    return tau, chart(p, [X], [tau])


def levi_civita(point_path, field_path, t0: float) -> np.ndarray:
    """∇ of a vector field along a curve: tangential part of the ambient derivative."""
    p = np.asarray(point_path(t0), dtype=float)
    dv = jets.derivative(field_path, t0, 1)[1]
    return project_tangent(p, np.asarray(dv))


def covariant_derivative(p, X, field) -> np.ndarray:
    """∇_X Y for a field ``Y(q)`` given on ambient points (arrays or jets)."""
    _, c = _curve_jet(p, X)
    y = field(c)
    if not isinstance(y, jets.Jet):
        return np.zeros(7)
    return project_tangent(p, y.partial((1,)))


def torsion_P(p, X, Y) -> np.ndarray:
    """(∇_X J) Y = ∇_X(J Ỹ) − J ∇_X Ỹ, Ỹ the projected ambient-constant extension."""
    check_tangent(p, X, Y)
    ext = lambda q: project_tangent(q, Y)
    jy = covariant_derivative(p, X, lambda q: cross(q, ext(q)))
    return jy - cross(p, covariant_derivative(p, X, ext))


def torsion_P_closed(p, X, Y):
    """Closed form of P: the tangential part of X × Y."""
    return project_tangent(p, cross(X, Y))


def nk_connection(p, X, field) -> np.ndarray:
    """D̄_X Y = ∇_X Y + ½ P(X, J Y)."""
    y0 = np.asarray(field(np.asarray(p, dtype=float)), dtype=float)
    return covariant_derivative(p, X, field) + 0.5 * torsion_P_closed(p, X, cross(p, y0))


def riemann(p, X, Y, Z, W):
    """Closed form ⟨X,W⟩⟨Y,Z⟩ − ⟨X,Z⟩⟨Y,W⟩ of the unit round sphere."""
    d = jets.dot
    return d(X, W) * d(Y, Z) - d(X, Z) * d(Y, W)


def riemann_derivative(p, X, Y, Z, W) -> float:
    """⟨[∇_a, ∇_b] Z̃, W⟩ in the chart normalize(p + aX + bY) (coordinate fields commute)."""
    check_tangent(p, X, Y, Z, W)
    a, b = jets.variables([0.0, 0.0], 2)
    sig = chart(p, [X, Y], [a, b])
    z = project_tangent(sig, Z)
    nb = project_tangent(sig, z.d(1))
    na = project_tangent(sig, z.d(0))
    ab = project_tangent(sig.truncate(1), nb.d(0)).value
    ba = project_tangent(sig.truncate(1), na.d(1)).value
    return float(np.dot(ab - ba, W))


def sectional_curvature(p, X, Y) -> float:
    area2 = np.dot(X, X) * np.dot(Y, Y) - np.dot(X, Y) ** 2
    if area2 < 1e-24:
        raise DegenerateInputError("sectional curvature needs independent vectors")
    return float(riemann(p, X, Y, Y, X) / area2)


# identity residuals ---------------------------------------------------------------

def torsion_residuals(p, X, Y) -> dict:
    """Antisymmetry, P(X,JY) = −J P(X,Y) and the constant-type identity (λ = 1)."""
    P = torsion_P(p, X, Y)
    jy = cross(p, Y)
    jx = cross(p, X)
    type_rhs = np.dot(X, X) * np.dot(Y, Y) - np.dot(X, Y) ** 2 - np.dot(jx, Y) ** 2
    return {
        "antisymmetry": float(np.linalg.norm(P + torsion_P(p, Y, X))),
        "diagonal": float(np.linalg.norm(torsion_P(p, X, X))),
        "j_antilinear": float(np.linalg.norm(torsion_P(p, X, jy) + cross(p, P))),
        "constant_type": float(abs(np.dot(P, P) - type_rhs)),
        "closed_form": float(np.linalg.norm(P - torsion_P_closed(p, X, Y))),
    }


def check_curvature_identity(p, X, Y) -> float:
    jx, jy = cross(p, X), cross(p, Y)
    P = torsion_P(p, X, Y)
    lhs = riemann(p, X, Y, Y, X) + riemann(p, X, jy, jy, X) + riemann(p, X, jx, Y, jy)
    return float(abs(lhs - 2.0 * np.dot(P, P)))


def exterior_derivative_fd(form, p, vectors, h: float = FD_STEP) -> float:
    """dα(v_0, ..., v_k) at p by central differences in the chart along the v_i.

    ``form(q, *tangents)`` evaluates the k-form at sphere point q. The
    coordinate fields of the chart commute, so only the derivative terms of
    the invariant formula survive.
    """
    p = np.asarray(p, dtype=float)
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    k1 = len(vecs)

    def coord_fields(x):
        q = p + sum(xi * t for xi, t in zip(x, vecs))
        n = np.linalg.norm(q)
        c = q / n
        return c, [(t - np.dot(c, t) * c) / n for t in vecs]

    total = 0.0
    for i in range(k1):
        vals = []
        for sgn in (1.0, -1.0):
            x = np.zeros(k1)
            x[i] = sgn * h
            c, fields = coord_fields(x)
            vals.append(form(c, *(fields[j] for j in range(k1) if j != i)))
        total += (-1) ** i * (vals[0] - vals[1]) / (2 * h)
    return float(total)


def check_structure_equations(p, rng: np.random.Generator, trials: int = 4,
                              theta: float = np.pi / 2, h: float = FD_STEP, lam: float = 1.0) -> dict:
    """Residuals of the structure equations of (ω, Υ_θ) on random unit tangent tuples.

    dω = 3λ(cos θ ReΥ_θ + sin θ ImΥ_θ), dReΥ_θ = 2λ sin θ ω∧ω,
    dImΥ_θ = −2λ cos θ ω∧ω, plus ∇ω = ⅓ dω.
    """
    p = np.asarray(p, dtype=float)
    ups = lambda q, a, b, c: upsilon(q, a, b, c, theta=theta, check=False)
    out = {"d_omega": 0.0, "d_re_upsilon": 0.0, "d_im_upsilon": 0.0, "nabla_omega": 0.0}
    c, s = np.cos(theta), np.sin(theta)
    for _ in range(trials):
        v = [normalize(random_tangent(rng, p)) for _ in range(4)]
        dw = exterior_derivative_fd(omega, p, v[:3], h)
        u = ups(p, *v[:3])
        out["d_omega"] = max(out["d_omega"], abs(dw - 3 * lam * (c * u.real + s * u.imag)))
        ww = omega_wedge_omega(p, *v)
        dre = exterior_derivative_fd(lambda q, *a: ups(q, *a).real, p, v, h)
        dim = exterior_derivative_fd(lambda q, *a: ups(q, *a).imag, p, v, h)
        out["d_re_upsilon"] = max(out["d_re_upsilon"], abs(dre - 2 * lam * s * ww))
        out["d_im_upsilon"] = max(out["d_im_upsilon"], abs(dim + 2 * lam * c * ww))
        out["nabla_omega"] = max(out["nabla_omega"], abs(nabla_omega(p, *v[:3]) - dw / 3.0))
    return {k: float(v) for k, v in out.items()}


def nabla_omega(p, X, Y, Z) -> float:
    """(∇_X ω)(Y, Z) = X[ω(Ỹ, Z̃)] − ω(∇_X Ỹ, Z) − ω(Y, ∇_X Z̃)."""
    _, c = _curve_jet(p, X)
    y, z = project_tangent(c, Y), project_tangent(c, Z)
    deriv = omega(c, y, z).partial((1,))
    dy = project_tangent(p, y.partial((1,)))
    dz = project_tangent(p, z.partial((1,)))
    return float(deriv - omega(p, dy, Z) - omega(p, Y, dz))


@dataclass(frozen=True)
class RoundSixSphere:
    """Ambient-structure interface used by the surface and variation code."""

    lam: float = 1.0

    J = staticmethod(lambda p, v: cross(p, v))
    omega = staticmethod(omega)
    torsion = staticmethod(torsion_P_closed)
    riemann = staticmethod(riemann)


S6 = RoundSixSphere()
