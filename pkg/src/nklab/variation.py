"""Second variation of area for minimal and holomorphic surfaces in S^6.

Two evaluations of δ²A(η) are provided and compared against a direct
second difference of the area functional:

* the general formula ∫ |∇⊥η|² − |Wη|² − Σ R̄(η,e_i,e_i,η) + ∫_∂ <∇̄_η η, ν>;
* the nearly-Kähler form ∫ |𝒟_e η|² + ⅓ dω(e, Jη, 𝒟_e η) − 2λ²|η|², which has
  no boundary term when η is tangent to a Lagrangian along the boundary.

Variations are families F(s,t,ε) = normalize(u + εη + ½ε²ξ). For a boundary
3-fold L = S^6 ∩ V with V linear, the family stays on L whenever η and ξ lie
in V along the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import jets
from .errors import PreconditionError
from .lagrangian import LagrangianPatch
from .octonion import cross, phi0
from .quadrature import Grid, edge as edge_grid, fsum, integrate, rectangle
from .sphere import S6, normalize, project_tangent, riemann
from .surface import LocalGeometry, NormalField, SurfacePatch, holomorphic_defects

MINIMAL_TOL = 1e-5
ADMISSIBLE_TOL = 1e-6
DEFAULT_NODES = 64
DEFAULT_BOUNDARY_NODES = 256


@dataclass(frozen=True)
class VariationFamily:
    """F(s,t,ε) = normalize(u + εη + ½ε²ξ); ``accel`` gives ξ as ambient(s, t, u)."""

    patch: SurfacePatch
    field: NormalField
    accel: Optional[Callable] = None

    def _xi(self, geom: LocalGeometry, order: int):
        if self.accel is None:
            return 0.0
        s, t, u = geom.sj.truncate(order), geom.tj.truncate(order), geom.u.truncate(order)
        return self.accel(s, t, u)

    def surface_jet(self, geom: LocalGeometry, eps: float):
        """Jet (order 1 in s, t) of F(·,·,ε) at the geometry's sample points."""
        eta = geom.field(self.field).truncate(1)
        pos = geom.u.truncate(1) + eps * eta + 0.5 * eps ** 2 * self._xi(geom, 1)
        return normalize(pos)

    def acceleration(self, geom: LocalGeometry) -> np.ndarray:
        """∇̄_η η: tangential part of ∂²_ε F at ε = 0.

        With η ⟂ u and |u| = 1, ∂²_ε F = ξ − (|η|² + <u, ξ>) u, whose tangential
        part is ξ − <u, ξ> u.
        """
        xi = self._xi(geom, geom.order - 1)
        if np.isscalar(xi):
            return np.zeros_like(geom.p)
        xi = np.broadcast_to(jets.value(xi), geom.p.shape)
        return xi - np.sum(xi * geom.p, axis=-1, keepdims=True) * geom.p


def _area_density(F) -> np.ndarray:
    Fs, Ft = F.partial((1, 0)), F.partial((0, 1))
    g11 = np.sum(Fs * Fs, axis=-1)
    g12 = np.sum(Fs * Ft, axis=-1)
    g22 = np.sum(Ft * Ft, axis=-1)
    return np.sqrt(np.maximum(g11 * g22 - g12 * g12, 0.0))


def area(patch: SurfacePatch, nodes: int = DEFAULT_NODES) -> float:
    grid = rectangle(patch.domain, nodes)
    geom = LocalGeometry(patch, grid.s, grid.t, order=1)
    return integrate(grid, geom.area_element)


def area_second_difference(family: VariationFamily, h: float = 2e-3,
                           nodes: int = DEFAULT_NODES) -> float:
    """Central second difference of ε ↦ Area(F_ε), taken pointwise before summation."""
    grid = rectangle(family.patch.domain, nodes)
    geom = LocalGeometry(family.patch, grid.s, grid.t, order=2)
    a_p = _area_density(family.surface_jet(geom, h))
    a_0 = _area_density(family.surface_jet(geom, 0.0))
    a_m = _area_density(family.surface_jet(geom, -h))
    return integrate(grid, (a_p - 2.0 * a_0 + a_m) / h ** 2)


def richardson_change(family: VariationFamily, h: float = 2e-3, nodes: int = DEFAULT_NODES) -> float:
    """Relative change of the second difference under step halving."""
    a = area_second_difference(family, h, nodes)
    b = area_second_difference(family, h / 2, nodes)
    return abs(a - b) / max(1.0, abs(b))


# pointwise pieces -------------------------------------------------------------------

def holomorphic_frame(geom: LocalGeometry, rotation: float = 0.0):
    """Unit e (rotated from ∂_s by ``rotation``) and Je on a holomorphic patch."""
    e1 = geom.e1
    je1 = geom.J(e1)
    e = np.cos(rotation) * e1 + np.sin(rotation) * je1
    return e, geom.J(e)


def dbar_D(geom: LocalGeometry, X, eta_jet) -> np.ndarray:
    """𝒟_X η = ∇⊥_X η + J ∇⊥_{JX} η."""
    return geom.nabla_perp(X, eta_jet) + geom.J(geom.nabla_perp(geom.J(X), eta_jet))


def alpha_form(geom: LocalGeometry, X, eta_jet) -> np.ndarray:
    """α_η(X) = <∇⊥_X η, Jη>."""
    return np.sum(geom.nabla_perp(X, eta_jet) * geom.J(eta_jet.value), axis=-1)


def d_alpha(geom: LocalGeometry, eta_jet) -> np.ndarray:
    """dα_η(e1, e2) from coordinate derivatives of α_η(∂_s), α_η(∂_t)."""
    if eta_jet.order < 2:
        raise PreconditionError("dα_η needs η to second order (geometry order 3)")
    p1 = geom.u.truncate(1)
    jeta = cross(p1, eta_jet.truncate(1))
    a_s = jets.dot(geom.nabla_perp_coord_jet(0, eta_jet), jeta)
    a_t = jets.dot(geom.nabla_perp_coord_jet(1, eta_jet), jeta)
    return (a_t.partial((1, 0)) - a_s.partial((0, 1))) / geom.area_element


@dataclass(frozen=True)
class FieldParts:
    """Quantities linear in η at the sample points, so δ²A of sums is cheap."""

    eta: np.ndarray
    jeta: np.ndarray
    np1: np.ndarray  # ∇⊥_{e1} η
    np2: np.ndarray  # ∇⊥_{e2} η
    W: np.ndarray    # <II(e_a, e_b), η> stacked as (N, 3): (11, 12, 22)

    def __add__(self, other: "FieldParts") -> "FieldParts":
        return FieldParts(*(a + b for a, b in zip(self._tuple(), other._tuple())))

    def __sub__(self, other: "FieldParts") -> "FieldParts":
        return FieldParts(*(a - b for a, b in zip(self._tuple(), other._tuple())))

    def scaled(self, c: float) -> "FieldParts":
        return FieldParts(*(c * a for a in self._tuple()))

    def _tuple(self):
        return (self.eta, self.jeta, self.np1, self.np2, self.W)


def field_parts(geom: LocalGeometry, nf: NormalField) -> FieldParts:
    e1, e2 = holomorphic_frame(geom)
    eta_jet = geom.field(nf)
    eta = eta_jet.value
    d = lambda a, b: np.sum(a * b, axis=-1)
    W = np.stack([d(geom.II(e1, e1), eta), d(geom.II(e1, e2), eta), d(geom.II(e2, e2), eta)], axis=-1)
    return FieldParts(eta, geom.J(eta), geom.nabla_perp(e1, eta_jet), geom.nabla_perp(e2, eta_jet), W)


def nk_terms(geom: LocalGeometry, parts: FieldParts, rotation: float = 0.0, lam: float = S6.lam) -> dict:
    """Pointwise terms of the nearly-Kähler integrand with unit e (frame angle ``rotation``)."""
    e, _ = holomorphic_frame(geom, rotation)
    c, s = np.cos(rotation), np.sin(rotation)
    # ∇⊥ is linear in the direction: e = c e1 + s e2, Je = c e2 − s e1
    D = (c * parts.np1 + s * parts.np2) + geom.J(c * parts.np2 - s * parts.np1)
    return {
        "dbar": np.sum(D * D, axis=-1),
        "domega": phi0(e, parts.jeta, D),
        "mass": -2.0 * lam ** 2 * np.sum(parts.eta * parts.eta, axis=-1),
    }


def general_terms(geom: LocalGeometry, parts: FieldParts) -> dict:
    eta = parts.eta
    W2 = parts.W[:, 0] ** 2 + 2 * parts.W[:, 1] ** 2 + parts.W[:, 2] ** 2
    e1, e2 = geom.e1, geom.e2
    ric = riemann(geom.p, eta, e1, e1, eta) + riemann(geom.p, eta, e2, e2, eta)
    return {
        "grad": np.sum(parts.np1 ** 2, axis=-1) + np.sum(parts.np2 ** 2, axis=-1),
        "shape": -W2,
        "curvature": -ric,
    }


# boundary data -----------------------------------------------------------------------

def boundary_frame(geom: LocalGeometry, edge: str):
    """Outward conormal ν and positively oriented unit tangent T along an edge.

    (ν, T) is positively oriented with respect to (∂_s, ∂_t).
    """
    if edge in ("s0", "s1"):
        along, sgn = geom.ut, (1.0 if edge == "s1" else -1.0)
    else:
        along, sgn = geom.us, (1.0 if edge == "t0" else -1.0)
    T = sgn * along / np.linalg.norm(along, axis=-1, keepdims=True)
    across = geom.us if edge in ("s0", "s1") else geom.ut
    nu = across - np.sum(across * T, axis=-1, keepdims=True) * T
    nu = nu / np.linalg.norm(nu, axis=-1, keepdims=True)
    if edge in ("s0", "t0"):
        nu = -nu
    return T, nu


def boundary_term(family: VariationFamily, edge: str, n: int = DEFAULT_BOUNDARY_NODES) -> float:
    """∫_{edge} <∇̄_η η, ν> dℓ."""
    grid = edge_grid(family.patch.domain, edge, n)
    geom = LocalGeometry(family.patch, grid.s, grid.t, order=2)
    _, nu = boundary_frame(geom, edge)
    acc = family.acceleration(geom)
    speed = np.linalg.norm(geom.ut if edge in ("s0", "s1") else geom.us, axis=-1)
    return integrate(grid, np.sum(acc * nu, axis=-1) * speed)


# second variation --------------------------------------------------------------------

def mean_curvature_max(patch: SurfacePatch, grid: Grid) -> float:
    geom = LocalGeometry(patch, grid.s, grid.t, order=2)
    return float(np.max(np.linalg.norm(geom.mean_curvature(), axis=-1)))


def second_variation_general(family: VariationFamily, nodes: int = DEFAULT_NODES,
                             boundary_nodes: int = DEFAULT_BOUNDARY_NODES,
                             breakdown: bool = False):
    patch = family.patch
    grid = rectangle(patch.domain, nodes)
    geom = LocalGeometry(patch, grid.s, grid.t, order=2)
    H = float(np.max(np.linalg.norm(geom.mean_curvature(), axis=-1)))
    if H > MINIMAL_TOL:
        raise PreconditionError(f"{patch.name}: not minimal (|H| up to {H:.2e})")
    # the general formula only uses an orthonormal frame, so GS frame is fine here
    parts = _parts_orthonormal(geom, family.field)
    terms = general_terms(geom, parts)
    out = {k: integrate(grid, v * geom.area_element) for k, v in terms.items()}
    out["boundary"] = fsum([boundary_term(family, e, boundary_nodes) for e in patch.boundary])
    total = fsum(list(out.values()))
    return (total, out) if breakdown else total


def _parts_orthonormal(geom: LocalGeometry, nf: NormalField) -> FieldParts:
    eta_jet = geom.field(nf)
    eta = eta_jet.value
    e1, e2 = geom.e1, geom.e2
    d = lambda a, b: np.sum(a * b, axis=-1)
    W = np.stack([d(geom.II(e1, e1), eta), d(geom.II(e1, e2), eta), d(geom.II(e2, e2), eta)], axis=-1)
    return FieldParts(eta, geom.J(eta), geom.nabla_perp(e1, eta_jet), geom.nabla_perp(e2, eta_jet), W)


def check_holomorphic(patch: SurfacePatch, geom: LocalGeometry, tol: float = 1e-8) -> None:
    d = holomorphic_defects(geom)
    if np.max(d["j_invariance"]) > tol:
        raise PreconditionError(f"{patch.name}: not holomorphic")
    orient = phi0(geom.p, geom.us, geom.ut)
    if np.min(orient) <= 0:
        raise PreconditionError(f"{patch.name}: parametrization is not J-positive")


def admissibility_residual(patch: SurfacePatch, L: LagrangianPatch, nf: NormalField,
                           n: int = 32) -> float:
    """Max distance of η from TL along the boundary edges."""
    worst = 0.0
    for e in patch.boundary:
        grid = edge_grid(patch.domain, e, n)
        geom = LocalGeometry(patch, grid.s, grid.t, order=1)
        eta = geom.field(nf).value
        for q, v in zip(geom.p, eta):
            worst = max(worst, L.tangent_distance(q, v))
    return worst


def validate_boundary(patch: SurfacePatch, L: LagrangianPatch, n: int = 32) -> dict:
    from .lagrangian import LAGRANGIAN_TOL
    on, lag = 0.0, 0.0
    for e in patch.boundary:
        s, t = patch.edge_points(e, n)
        for q in patch(s, t):
            on = max(on, float(np.linalg.norm(L.closest_point(q) - q)))
            lag = max(lag, L.lagrangian_residual(q))
    if on > 1e-8:
        raise PreconditionError(f"{patch.name}: boundary leaves {L.name} by {on:.2e}")
    if lag > LAGRANGIAN_TOL:
        raise PreconditionError(f"{L.name}: not Lagrangian along the boundary ({lag:.2e})")
    return {"on_lagrangian": on, "lagrangian": lag}


class NKSecondVariation:
    """δ²A on admissible fields for a holomorphic patch with Lagrangian boundary.

    Geometry is evaluated once per node count; fields are reduced to their
    :class:`FieldParts`, so polarization and matrix assembly reuse them.
    """

    def __init__(self, patch: SurfacePatch, L: Optional[LagrangianPatch] = None,
                 nodes: int = DEFAULT_NODES, lam: float = S6.lam, validate: bool = True):
        self.patch, self.L, self.nodes, self.lam = patch, L, nodes, lam
        self.grid = rectangle(patch.domain, nodes)
        self.geom = LocalGeometry(patch, self.grid.s, self.grid.t, order=2)
        if validate:
            check_holomorphic(patch, self.geom)
            if patch.boundary:
                if L is None:
                    raise PreconditionError(f"{patch.name}: boundary needs a Lagrangian")
                validate_boundary(patch, L)

    def parts(self, nf: NormalField, check: bool = True) -> FieldParts:
        if check and self.patch.boundary:
            r = admissibility_residual(self.patch, self.L, nf)
            if r > ADMISSIBLE_TOL:
                raise PreconditionError(f"field {nf.name} is not tangent to {self.L.name} ({r:.2e})")
        return field_parts(self.geom, nf)

    def breakdown(self, parts: FieldParts, rotation: float = 0.0) -> dict:
        terms = nk_terms(self.geom, parts, rotation, self.lam)
        return {k: integrate(self.grid, v * self.geom.area_element) for k, v in terms.items()}

    def value(self, parts: FieldParts, rotation: float = 0.0) -> float:
        return fsum(list(self.breakdown(parts, rotation).values()))

    def __call__(self, nf: NormalField) -> float:
        return self.value(self.parts(nf))

    def polarization(self, a: FieldParts, b: FieldParts) -> float:
        return 0.25 * (self.value(a + b) - self.value(a - b))

    def dbar_norm(self, parts: FieldParts) -> np.ndarray:
        """Pointwise |𝒟_{e1} η| (= ‖𝒟η‖/√2)."""
        D = parts.np1 + self.geom.J(parts.np2)
        return np.linalg.norm(D, axis=-1)

    def mass(self, parts: FieldParts) -> float:
        return integrate(self.grid, np.sum(parts.eta ** 2, axis=-1) * self.geom.area_element)


def second_variation_nk(patch: SurfacePatch, L: Optional[LagrangianPatch], nf: NormalField,
                        nodes: int = DEFAULT_NODES, breakdown: bool = False):
    sv = NKSecondVariation(patch, L, nodes)
    parts = sv.parts(nf)
    b = sv.breakdown(parts)
    total = fsum(list(b.values()))
    return (total, b) if breakdown else total


# pointwise identity residuals --------------------------------------------------------

def pointwise_residuals(patch: SurfacePatch, s, t, nf: NormalField, lam: float = S6.lam) -> dict:
    """Residuals of the two pointwise identities behind the nearly-Kähler formula.

    ``shape_ricci``: |Wη|² + Σ R̄(η,e_i,e_i,η) = −R⊥(e1,e2,η,Jη) + 2λ²|η|²
    ``weitzenbock``: |∇⊥η|² + R⊥(e1,e2,η,Jη) = ½|𝒟η|² + <P(e1,Jη), 𝒟_{e1}η> + dα_η(e1,e2)
    """
    geom = LocalGeometry(patch, s, t, order=3)
    check_holomorphic(patch, geom)
    eta_jet = geom.field(nf)
    parts = field_parts(geom, nf)
    eta, jeta = parts.eta, parts.jeta
    e1 = geom.e1
    g = general_terms(geom, parts)
    rperp = geom.normal_curvature(eta_jet, jeta)
    mass = np.sum(eta * eta, axis=-1)
    shape_ric = np.abs((-g["shape"] - g["curvature"]) - (-rperp + 2 * lam ** 2 * mass))
    D = parts.np1 + geom.J(parts.np2)
    P = project_tangent(geom.p, cross(e1, jeta))
    rhs = np.sum(D * D, axis=-1) + np.sum(P * D, axis=-1) + d_alpha(geom, eta_jet)
    weitz = np.abs(g["grad"] + rperp - rhs)
    return {"shape_ricci": shape_ric, "weitzenbock": weitz, "normal_curvature": rperp}


def boundary_term_residual(family: VariationFamily, L: LagrangianPatch, edge: str, n: int = 64,
                           check: bool = True) -> np.ndarray:
    """|<∇̄_η η, ν> + <∇⊥_T η, Jη>| at boundary points along ``edge``."""
    patch = family.patch
    if check:
        r = admissibility_residual(patch, L, family.field)
        if r > ADMISSIBLE_TOL:
            raise PreconditionError(f"field {family.field.name} is not tangent to {L.name}")
    s, t = patch.edge_points(edge, n)
    geom = LocalGeometry(patch, s, t, order=2)
    T, nu = boundary_frame(geom, edge)
    eta_jet = geom.field(family.field)
    acc = family.acceleration(geom)
    term = np.sum(geom.nabla_perp(T, eta_jet) * geom.J(eta_jet.value), axis=-1)
    return np.abs(np.sum(acc * nu, axis=-1) + term)
