"""The metric cone over S^6 and its G2 structure built from (ω, Υ₀).

A cone tangent vector at (r, m) is stored as a radial component ``a`` and a
spherical part ``w`` ∈ T_m S^6 (measured in the round metric, so the cone
length is a² + r²|w|²). Ambient vectors V ∈ R^7 at x = r m split as
a = <V, m>, w = (V − a m) / r.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .octonion import PHI0, PSI0, phi0
from .sphere import omega, omega_wedge_omega, random_point, random_tangent, upsilon
from .surface import LocalGeometry, SurfacePatch, holomorphic_defects

log = logging.getLogger(__name__)

CONE_FD_STEP = 1e-4
CONE_TOL = 1e-5
AGREEMENT_TOL = 1e-7
ASSOCIATIVE_TOL = 1e-7


@dataclass(frozen=True)
class ConePoint:
    r: float
    m: np.ndarray

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"cone radius must be positive, got {self.r}")

    @property
    def position(self) -> np.ndarray:
        return self.r * np.asarray(self.m)

    @classmethod
    def from_ambient(cls, x) -> "ConePoint":
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0:
            raise DomainError("the cone vertex is excluded")
        return cls(r, x / r)

    def split(self, V):
        """(a, w) parts of an ambient vector."""
        V = np.asarray(V, dtype=float)
        a = float(np.dot(V, self.m))
        return a, (V - a * self.m) / self.r


def _re_u0(m, x, y, z):
    return float(np.real(upsilon(m, x, y, z, theta=0.0, check=False)))


def _im_u0(m, x, y, z):
    return float(np.imag(upsilon(m, x, y, z, theta=0.0, check=False)))


def phi_split(r, m, parts) -> float:
    """r² dr∧ω + r³ ReΥ₀ on vectors given as (a, w) pairs."""
    (a1, w1), (a2, w2), (a3, w3) = parts
    dr_omega = a1 * omega(m, w2, w3) - a2 * omega(m, w1, w3) + a3 * omega(m, w1, w2)
    return float(r ** 2 * dr_omega + r ** 3 * _re_u0(m, w1, w2, w3))


def psi_split(r, m, parts) -> float:
    """−r³ dr∧ImΥ₀ + ½ r⁴ ω∧ω on vectors given as (a, w) pairs."""
    ws = [w for _, w in parts]
    dr_im = 0.0
    for i, (a, _) in enumerate(parts):
        rest = ws[:i] + ws[i + 1:]
        dr_im += (-1) ** i * a * _im_u0(m, *rest)
    return float(-r ** 3 * dr_im + 0.5 * r ** 4 * omega_wedge_omega(m, *ws))


def cone_phi(cp: ConePoint, u, v, w) -> float:
    """φ on ambient vectors at cp, including the global orientation sign."""
    return orientation_sign() * phi_split(cp.r, cp.m, [cp.split(x) for x in (u, v, w)])


def cone_psi(cp: ConePoint, u, v, w, z) -> float:
    return orientation_sign() * psi_split(cp.r, cp.m, [cp.split(x) for x in (u, v, w, z)])


@lru_cache(maxsize=None)
def orientation_sign() -> int:
    """Match the cone φ to the flat φ₀ on a fixed frame at the base point e1."""
    m = np.eye(7)[0]
    cone = phi_split(1.0, m, [(1.0, 0 * m), (0.0, np.eye(7)[1]), (0.0, np.eye(7)[2])])
    flat = phi0(m, np.eye(7)[1], np.eye(7)[2])
    sign = 1 if cone * flat > 0 else -1
    log.info("cone orientation sign %+d", sign)
    return sign


# checks ---------------------------------------------------------------------------

def _random_cone_point(rng):
    return ConePoint(float(rng.uniform(0.5, 2.0)), random_point(rng))


def _random_split(rng, cp: ConePoint):
    """Random cone tangent vector of unit cone length a² + r²|w|² = 1."""
    a, w = float(rng.standard_normal()), random_tangent(rng, cp.m)
    n = np.sqrt(a * a + cp.r ** 2 * np.dot(w, w))
    return a / n, w / n


def contraction_residuals(rng: np.random.Generator, samples: int = 20) -> dict:
    """At r = 1: ∂r ⌟ φ = ω and φ − i ∂r ⌟ ψ = Υ₀ on spherical vectors."""
    w_err = u_err = 0.0
    for _ in range(samples):
        m = random_point(rng)
        x, y, z = (random_tangent(rng, m) for _ in range(3))
        dr = (1.0, 0 * m)
        w_err = max(w_err, abs(phi_split(1.0, m, [dr, (0, x), (0, y)]) - omega(m, x, y)))
        ups = phi_split(1.0, m, [(0, x), (0, y), (0, z)]) - 1j * psi_split(1.0, m, [dr, (0, x), (0, y), (0, z)])
        u_err = max(u_err, abs(ups - upsilon(m, x, y, z, theta=0.0)))
    return {"omega": w_err, "upsilon0": u_err}


def flat_agreement(rng: np.random.Generator, samples: int = 50) -> dict:
    """Cone φ, ψ against flat φ₀, ∗φ₀ at random points of R^7 ∖ {0}."""
    e_phi = e_psi = 0.0
    for _ in range(samples):
        cp = _random_cone_point(rng)
        V = rng.standard_normal((4, 7))
        e_phi = max(e_phi, abs(cone_phi(cp, *V[:3]) - PHI0(*V[:3])))
        e_psi = max(e_psi, abs(cone_psi(cp, *V) - orientation_sign() * PSI0(*V)))
    return {"phi": e_phi, "psi": e_psi}


def _coordinate_fields(r0, m0, dirs, x):
    """Point and commuting coordinate fields of (r, m) = (r0 + Σ x_i a_i, normalize(m0 + Σ x_i v_i))."""
    r = r0 + sum(xi * a for xi, (a, _) in zip(x, dirs))
    q = m0 + sum(xi * v for xi, (_, v) in zip(x, dirs))
    n = np.linalg.norm(q)
    m = q / n
    return r, m, [(a, (v - np.dot(m, v) * m) / n) for a, v in dirs]


def exterior_derivative_cone(form, r0, m0, dirs, h: float = CONE_FD_STEP) -> float:
    """dα(V_0..V_k) by central differences along commuting coordinate fields."""
    total = 0.0
    k1 = len(dirs)
    for i in range(k1):
        vals = []
        for sgn in (1.0, -1.0):
            x = np.zeros(k1)
            x[i] = sgn * h
            r, m, fields = _coordinate_fields(r0, m0, dirs, x)
            vals.append(form(r, m, [fields[j] for j in range(k1) if j != i]))
        total += (-1) ** i * (vals[0] - vals[1]) / (2 * h)
    return float(total)


def _alpha_omega(r, m, parts):
    (_, w1), (_, w2) = parts
    return r ** 3 / 3.0 * omega(m, w1, w2)


def _beta_im(r, m, parts):
    return -r ** 4 / 4.0 * _im_u0(m, *(w for _, w in parts))


def torsion_free_check(rng: np.random.Generator, samples: int = 10, h: float = CONE_FD_STEP) -> dict:
    """Max |dφ|, |dψ| and primitive mismatches over random points and vectors."""
    out = {"d_phi": 0.0, "d_psi": 0.0, "phi_primitive": 0.0, "psi_primitive": 0.0}
    for _ in range(samples):
        cp = _random_cone_point(rng)
        dirs = [_random_split(rng, cp) for _ in range(5)]
        out["d_phi"] = max(out["d_phi"], abs(exterior_derivative_cone(phi_split, cp.r, cp.m, dirs[:4], h)))
        out["d_psi"] = max(out["d_psi"], abs(exterior_derivative_cone(psi_split, cp.r, cp.m, dirs, h)))
        dprim = exterior_derivative_cone(_alpha_omega, cp.r, cp.m, dirs[:3], h)
        out["phi_primitive"] = max(out["phi_primitive"], abs(dprim - phi_split(cp.r, cp.m, dirs[:3])))
        dprim = exterior_derivative_cone(_beta_im, cp.r, cp.m, dirs[:4], h)
        out["psi_primitive"] = max(out["psi_primitive"], abs(dprim - psi_split(cp.r, cp.m, dirs[:4])))
    return out


def convergence_ratios(seed: int = 0, samples: int = 6, h: float = 1e-2) -> dict:
    """Residual at h over residual at h/2 for each torsion check (≈ 4 for h² truncation)."""
    a = torsion_free_check(np.random.default_rng(seed), samples, h)
    b = torsion_free_check(np.random.default_rng(seed), samples, h / 2)
    return {k: (a[k] / b[k] if b[k] > 0 else float("inf")) for k in a} | {
        f"{k}@h": a[k] for k in a} | {f"{k}@h/2": b[k] for k in b}


def associativity_check(patch: SurfacePatch, n: int = 16) -> dict:
    """1 − |φ(∂r, ê1, ê2)| on C(Σ) at r = 1, paired with the J-invariance defect."""
    s, t = patch.sample_grid(n)
    geom = LocalGeometry(patch, s, t, order=1)
    p, e1, e2 = geom.p, geom.e1, geom.e2
    val = orientation_sign() * phi0(p, e1, e2)
    assoc = np.abs(1.0 - np.abs(val))
    holo = holomorphic_defects(geom)["j_invariance"]
    return {"associativity": assoc, "holomorphic_defect": np.asarray(holo)}


def holomorphic_tolerance(tol: float) -> float:
    """tol′ with (1 − |c| < tol) ⇔ (√(1 − c²) < tol′) for |c| ≤ 1."""
    return float(np.sqrt(2 * tol - tol * tol))


def equivalence_verdict(patch: SurfacePatch, tol: float = ASSOCIATIVE_TOL, n: int = 16) -> dict:
    res = associativity_check(patch, n)
    tol2 = holomorphic_tolerance(tol)
    a = res["associativity"] < tol
    h = res["holomorphic_defect"] < tol2
    return {
        "associative": bool(np.all(a)),
        "holomorphic": bool(np.all(h)),
        "pointwise_agree": bool(np.all(a == h)),
        "max_associativity": float(np.max(res["associativity"])),
        "max_holomorphic_defect": float(np.max(res["holomorphic_defect"])),
        "tol": tol,
        "tol_holomorphic": tol2,
    }
