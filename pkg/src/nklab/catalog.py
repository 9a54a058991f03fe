"""Named test configurations: patches, boundary 3-folds, balls and normal fields.

Entries are built lazily (the Lagrangian of ``halfsphere-lag`` comes from a
coassociative-plane search, the Borůvka sphere from a representation
computation) and cached.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import boruvka, jets
from .errors import ConfigError
from .lagrangian import LagrangianPatch
from .octonion import complement_basis, find_coassociative_plane
from .surface import NormalField, SurfacePatch

E = np.eye(7)


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    @property
    def c(self) -> float:
        """Umbilicity constant cot(radius) of the boundary geodesic sphere."""
        return float(np.cos(self.radius) / np.sin(self.radius))


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    models: str
    patch: SurfacePatch
    holomorphic: bool
    totally_geodesic: bool = False
    lagrangian: Optional[LagrangianPatch] = None
    ball: Optional[Ball] = None
    fields: tuple = ()
    control: bool = False
    expect: dict = field(default_factory=dict)

    def summary(self) -> dict:
        out = {
            "id": self.id,
            "description": self.description,
            "models": self.models,
            "domain": [float(x) for x in self.patch.domain],
            "boundary_edges": list(self.patch.boundary),
            "poles": list(self.patch.poles),
            "holomorphic": self.holomorphic,
            "totally_geodesic": self.totally_geodesic,
            "control": self.control,
            "fields": [f.name for f in self.fields],
            "expect": {k: v for k, v in self.expect.items()},
        }
        if self.lagrangian is not None:
            out["lagrangian"] = {"name": self.lagrangian.name,
                                 "plane": np.round(self.lagrangian.basis, 15).tolist()}
        if self.ball is not None:
            out["ball"] = {"center": self.ball.center.tolist(), "radius": self.ball.radius}
        return out


# maps ------------------------------------------------------------------------------

def great_sphere(a, b, c) -> Callable:
    """u(s,t) = sin s cos t·a + sin s sin t·b + cos s·c."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))

    def u(s, t):
        ss, cs = jets.sin(s), jets.cos(s)
        st, ct = jets.sin(t), jets.cos(t)
        x = (ss * ct, ss * st, cs)
        if isinstance(s, jets.Jet) or isinstance(t, jets.Jet):
            return x[0][..., None] * a + x[1][..., None] * b + x[2][..., None] * c
        return (np.asarray(x[0])[..., None] * a + np.asarray(x[1])[..., None] * b
                + np.asarray(x[2])[..., None] * c)

    return u


def small_sphere(a, b, c, d, radius: float) -> Callable:
    """Non-great 2-sphere cos(r)·d + sin(r)·(great sphere in span(a, b, c))."""
    g = great_sphere(a, b, c)
    d = np.asarray(d, dtype=float)
    return lambda s, t: np.sin(radius) * g(s, t) + np.cos(radius) * d


def boruvka_map(s, t):
    sign = boruvka.orientation_sign()
    return boruvka.orbit_map(s, sign * t)


# coordinates x_k = <u, e_k> for field recipes -----------------------------------------

def _coord(u, k: int):
    return u[..., k]


def monomial_field(name: str, exponents, direction, description: str = "") -> NormalField:
    """η = normal projection of x1^a x2^b x3^c · direction."""
    direction = np.asarray(direction, dtype=float)
    a, b, c = exponents

    def amb(s, t, u):
        out = None
        for k, n in enumerate((a, b, c)):
            for _ in range(n):
                out = _coord(u, k) if out is None else out * _coord(u, k)
        if out is None:
            return 0.0 * u + direction
        return out[..., None] * direction

    return NormalField(name, amb, description)


def combine(name: str, *terms) -> NormalField:
    fields = list(terms)
    return NormalField(name, lambda s, t, u: sum_fields(fields, s, t, u))


def sum_fields(fields, s, t, u):
    out = fields[0].ambient(s, t, u)
    for f in fields[1:]:
        out = out + f.ambient(s, t, u)
    return out


# the Lagrangian pair ------------------------------------------------------------------

@lru_cache(maxsize=None)
def lagrangian_plane() -> np.ndarray:
    """Coassociative 4-plane containing span(e1, e2), found by search."""
    return find_coassociative_plane(E[0], E[1])


def split_normal_bundle():
    """(F, F⊥) inside NΣ = span(e4..e7) of the upper hemisphere of span(e1, e2, e3)."""
    V = lagrangian_plane()
    F = V[2:]
    G = complement_basis(np.vstack([E[0], E[1], E[2], F]))
    return F, G


def lagrangian_fields() -> tuple:
    F, G = split_normal_bundle()
    f1, f2 = F
    g1, g2 = G
    m = monomial_field
    return (
        m("f1", (0, 0, 0), f1, "constant, tangent to L"),
        m("f2", (0, 0, 0), f2, "constant, tangent to L"),
        m("x1*f2", (1, 0, 0), f2),
        m("x3*g1", (0, 0, 1), g1, "vanishes on the boundary"),
        combine("x2*f1+x1x3*g2", m("x2*f1", (0, 1, 0), f1), m("x1x3*g2", (1, 0, 1), g2)),
        combine("x1x2*f2+x2x3*g1", m("x1x2*f2", (1, 1, 0), f2), m("x2x3*g1", (0, 1, 1), g1)),
        combine("x1^2*f1-x3^2*g2", m("x1^2*f1", (2, 0, 0), f1), m("x3^2*g2", (0, 0, 2), -g2)),
    )


# entries ----------------------------------------------------------------------------

def _hemisphere(name: str, upper: float = np.pi / 2) -> SurfacePatch:
    return SurfacePatch(name, great_sphere(E[0], E[1], E[2]), (0.0, upper, 0.0, 2 * np.pi),
                        boundary=("s1",), poles=("s0",))


@lru_cache(maxsize=None)
def _entries() -> dict:
    full = (0.0, np.pi, 0.0, 2 * np.pi)
    entries = []
    entries.append(CatalogEntry(
        "geodesic-s2-assoc", "great 2-sphere S^6 ∩ span(e1,e2,e3); associative, holomorphic, totally geodesic",
        "holomorphic curve test bed (J-invariance, minimality, Hopf data, associative cone)",
        SurfacePatch("geodesic-s2-assoc", great_sphere(E[0], E[1], E[2]), full, poles=("s0", "s1")),
        holomorphic=True, totally_geodesic=True,
        fields=(monomial_field("N(e4)", (0, 0, 0), E[3]), monomial_field("x1*N(e5)", (1, 0, 0), E[4]),
                combine("x2*e6+x3*e7", monomial_field("x2*e6", (0, 1, 0), E[5]),
                        monomial_field("x3*e7", (0, 0, 1), E[6]))),
        expect={"area": 4 * np.pi}))
    entries.append(CatalogEntry(
        "geodesic-s2-nonholo", "great 2-sphere S^6 ∩ span(e1,e2,e4); totally geodesic, not holomorphic",
        "control: minimal but not J-invariant, its cone is not associative",
        SurfacePatch("geodesic-s2-nonholo", great_sphere(E[0], E[1], E[3]), full, poles=("s0", "s1")),
        holomorphic=False, totally_geodesic=True, control=True, expect={"area": 4 * np.pi}))
    entries.append(CatalogEntry(
        "halfsphere-freeboundary", "upper half of the associative great sphere in the ball of radius π/2 about e3",
        "free-boundary holomorphic disk meeting a geodesic sphere orthogonally (rigidity test bed)",
        _hemisphere("halfsphere-freeboundary"), holomorphic=True, totally_geodesic=True,
        ball=Ball(E[2], np.pi / 2), expect={"area": 2 * np.pi}))
    entries.append(CatalogEntry(
        "cap-freeboundary", "cap of the associative great sphere in the ball of radius 1 about e3",
        "free-boundary disk with umbilicity constant cot(1)",
        _hemisphere("cap-freeboundary", 1.0), holomorphic=True, totally_geodesic=True,
        ball=Ball(E[2], 1.0)))
    beta, rho = 0.3, 1.0
    sb = float(np.arccos(np.cos(rho) / np.cos(beta)))
    entries.append(CatalogEntry(
        "cap-tilted", "cap of the associative great sphere cut by a ball whose center is tilted towards e6",
        "control: boundary lies on the geodesic sphere but the surface meets it at an angle",
        _hemisphere("cap-tilted", sb), holomorphic=True, totally_geodesic=True,
        ball=Ball(np.cos(beta) * E[2] + np.sin(beta) * E[5], rho), control=True))
    entries.append(CatalogEntry(
        "halfsphere-lag", "upper half of the associative great sphere with boundary on a totally geodesic Lagrangian",
        "half great 2-sphere, boundary on totally geodesic Lagrangian (Morse index bound test bed)",
        _hemisphere("halfsphere-lag"), holomorphic=True, totally_geodesic=True,
        lagrangian=LagrangianPatch("coassociative-link", plane=np.vstack([E[0], E[1], lagrangian_plane()[2:]]),
                                   description="S^6 ∩ V, V a coassociative 4-plane containing e1, e2"),
        fields=lagrangian_fields(), expect={"area": 2 * np.pi}))
    entries.append(CatalogEntry(
        "halfsphere-nonlag", "upper half of the associative great sphere with boundary on S^6 ∩ span(e1,e2,e4,e5)",
        "control: boundary 3-fold is not Lagrangian",
        _hemisphere("halfsphere-nonlag"), holomorphic=True, totally_geodesic=True,
        lagrangian=LagrangianPatch("non-lagrangian", plane=np.vstack([E[0], E[1], E[3], E[4]])),
        fields=(combine("x1*e4+x2*e5", monomial_field("x1*e4", (1, 0, 0), E[3]),
                        monomial_field("x2*e5", (0, 1, 0), E[4])),),
        control=True))
    bor = SurfacePatch("boruvka-s2", boruvka_map, full, poles=("s0", "s1"))
    entries.append(CatalogEntry(
        "boruvka-s2", "SO(3)-orbit sphere of constant curvature 1/6 (principal SO(3) in G2)",
        "holomorphic, not totally geodesic; exercises II, Hopf data, normal curvature and the Ricci equation",
        bor, holomorphic=True,
        fields=(monomial_field("N(e1)", (0, 0, 0), E[0]), monomial_field("N(e4)", (0, 0, 0), E[3]),
                monomial_field("x2*N(e6)", (0, 1, 0), E[5]),
                combine("N(e2)+x1*N(e7)", monomial_field("N(e2)", (0, 0, 0), E[1]),
                        monomial_field("x1*N(e7)", (1, 0, 0), E[6]))),
        expect={"area": 24 * np.pi}))
    cap_s = 1.0
    v0 = bor(0.0, 0.0)
    radius = float(np.arccos(np.clip(np.dot(bor(cap_s, 0.0), v0), -1, 1)))
    entries.append(CatalogEntry(
        "boruvka-cap", "cap of the Borůvka sphere inside a geodesic ball about its pole",
        "control: boundary on a geodesic sphere, not orthogonal, Hopf data nonzero",
        SurfacePatch("boruvka-cap", boruvka_map, (0.0, cap_s, 0.0, 2 * np.pi), boundary=("s1",), poles=("s0",)),
        holomorphic=True, ball=Ball(v0, radius), control=True))
    entries.append(CatalogEntry(
        "small-sphere", "non-great 2-sphere cos(1)e4 + sin(1)(S^2 in span(e1,e2,e3))",
        "control: not minimal (nonzero mean curvature)",
        SurfacePatch("small-sphere", small_sphere(E[0], E[1], E[2], E[3], 1.0), full, poles=("s0", "s1")),
        holomorphic=False, control=True))
    return {e.id: e for e in entries}


def ids() -> list[str]:
    return list(_entries())


def get(entry_id: str) -> CatalogEntry:
    try:
        return _entries()[entry_id]
    except KeyError:
        raise ConfigError(f"unknown catalog id {entry_id!r}; known: {', '.join(ids())}") from None


def list_catalog() -> str:
    lines = []
    for e in _entries().values():
        lines.append(f"{e.id:26s} {e.description}")
        lines.append(f"{'':26s}   models: {e.models}")
    return "\n".join(lines)
