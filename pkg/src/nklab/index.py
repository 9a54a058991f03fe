"""Finite-dimensional Morse index lower bounds and the Maslov comparison.

Admissible fields are built from monomials in the ambient coordinates times
fixed ambient directions, projected onto NΣ, cut down to the linear span
that stays tangent to the boundary 3-fold, then L²-orthonormalized. The
second variation is assembled by polarization and diagonalized against the
L² Gram matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .catalog import CatalogEntry, monomial_field
from .errors import PreconditionError
from .maslov import maslov_decomposition, riemann_roch_expected
from .quadrature import edge as edge_grid
from .surface import LocalGeometry, NormalField
from .variation import ADMISSIBLE_TOL, FieldParts, NKSecondVariation, admissibility_residual, field_parts

KERNEL_TOL = 1e-5
GRAM_TOL = 1e-10


@dataclass
class IndexConfig:
    degree: int = 2
    nodes: int = 48
    boundary_nodes: int = 48
    maslov_samples: int = 256
    maslov_steps: int = 64
    eig_tol: Optional[float] = None   # default 1e-6·‖Q‖∞
    kernel_tol: float = KERNEL_TOL


@dataclass
class AdmissibleBasis:
    """L²-orthonormal admissible fields as combinations of raw fields."""

    raw: list                 # NormalField
    coeffs: np.ndarray        # (n_raw, k)
    parts: list               # FieldParts per basis field
    admissibility: float      # worst boundary residual of the combinations

    def __len__(self) -> int:
        return self.coeffs.shape[1]

    def field(self, k: int) -> NormalField:
        c = self.coeffs[:, k]
        live = [(w, f) for w, f in zip(c, self.raw) if abs(w) > 1e-14]

        def amb(s, t, u):
            out = 0.0 * u
            for w, f in live:
                out = out + w * f.ambient(s, t, u)
            return out

        return NormalField(f"basis[{k}]", amb)


def _stack(parts: Sequence[FieldParts]):
    return [np.stack(a) for a in zip(*(p._tuple() for p in parts))]


def _combine(stacked, c) -> FieldParts:
    return FieldParts(*(np.tensordot(c, a, axes=(0, 0)) for a in stacked))


def raw_monomial_fields(degree: int, directions=None) -> list:
    """x1^a x2^b x3^c · w for a+b+c ≤ degree and w in ``directions`` (default e1..e7)."""
    directions = np.eye(7) if directions is None else np.atleast_2d(directions)
    out = []
    for d in range(degree + 1):
        for a, b in itertools.product(range(d + 1), repeat=2):
            c = d - a - b
            if c < 0:
                continue
            for k, w in enumerate(directions):
                out.append(monomial_field(f"x^{(a, b, c)}*w{k}", (a, b, c), w))
    return out


def boundary_constraints(sv: NKSecondVariation, fields, n: int) -> np.ndarray:
    """Rows (I − Π_TL) η_j sampled on the boundary, one column per field."""
    patch, L = sv.patch, sv.L
    blocks = []
    for e in patch.boundary:
        g = edge_grid(patch.domain, e, n)
        geom = LocalGeometry(patch, g.s, g.t, order=1)
        vals = np.stack([geom.field(f).value for f in fields], axis=-1)  # (n, 7, m)
        for q, V in zip(geom.p, vals):
            T = L.tangent_basis(q)
            blocks.append(V - T.T @ (T @ V))
    return np.concatenate(blocks, axis=0) if blocks else np.zeros((0, len(fields)))


def _orthonormalize(sv: NKSecondVariation, raw, raw_parts, Z, name: str):
    stacked = _stack(raw_parts)
    eta = stacked[0]
    wa = sv.grid.w * sv.geom.area_element
    Graw = np.einsum("ink,jnk,n->ij", eta, eta, wa)
    G = Z.T @ Graw @ Z
    lam, V = np.linalg.eigh(G)
    if lam[-1] <= 0:
        raise PreconditionError(f"{name}: no admissible field survives")
    keep = lam > GRAM_TOL * lam[-1]
    C = Z @ V[:, keep] / np.sqrt(lam[keep])
    parts = [_combine(stacked, C[:, k]) for k in range(C.shape[1])]
    return C, parts


def admissible_basis(sv: NKSecondVariation, degree: int, directions=None,
                     boundary_nodes: int = 48) -> AdmissibleBasis:
    """Monomial fields of degree ≤ ``degree`` restricted to the admissible subspace."""
    raw = raw_monomial_fields(degree, directions)
    raw_parts = [field_parts(sv.geom, f) for f in raw]
    if sv.patch.boundary:
        A = boundary_constraints(sv, raw, boundary_nodes)
        _, sig, vt = np.linalg.svd(A, full_matrices=True)
        rank = int(np.sum(sig > 1e-9 * max(sig[0], 1.0)))
        Z = vt[rank:].T
    else:
        Z = np.eye(len(raw))
    C, parts = _orthonormalize(sv, raw, raw_parts, Z, f"degree {degree}")
    basis = AdmissibleBasis(raw, C, parts, 0.0)
    if sv.patch.boundary:
        A = boundary_constraints(sv, raw, boundary_nodes // 2 + 1)
        basis.admissibility = float(np.max(np.abs(A @ C))) if A.size else 0.0
    return basis


def basis_from_fields(sv: NKSecondVariation, fields: Sequence[NormalField]) -> AdmissibleBasis:
    """Orthonormalize an explicit list of fields (each must already be admissible)."""
    fields = list(fields)
    worst = 0.0
    if sv.patch.boundary:
        for f in fields:
            r = admissibility_residual(sv.patch, sv.L, f)
            if r > ADMISSIBLE_TOL:
                raise PreconditionError(f"field {f.name} is not tangent to {sv.L.name} ({r:.2e})")
            worst = max(worst, r)
    raw_parts = [field_parts(sv.geom, f) for f in fields]
    C, parts = _orthonormalize(sv, fields, raw_parts, np.eye(len(fields)), "explicit basis")
    return AdmissibleBasis(fields, C, parts, worst)


def restrict_basis(basis: AdmissibleBasis, vectors: np.ndarray) -> AdmissibleBasis:
    """Sub-basis spanned by coefficient vectors (columns) in the given basis."""
    stacked = _stack(basis.parts)
    vectors = np.atleast_2d(vectors.T).T
    parts = [_combine(stacked, vectors[:, k]) for k in range(vectors.shape[1])]
    return AdmissibleBasis(basis.raw, basis.coeffs @ vectors, parts, basis.admissibility)


def positive_subbasis(basis: AdmissibleBasis, Q, Gram, tol: float) -> AdmissibleBasis:
    """Restriction to the span of generalized eigenvectors with eigenvalue > tol."""
    ev, V = scipy.linalg.eigh(Q, Gram)
    return restrict_basis(basis, V[:, ev > tol])


def quadratic_form_matrix(sv: NKSecondVariation, basis: AdmissibleBasis):
    """(Q, Gram) with Q_ij = ¼(δ²A(η_i+η_j) − δ²A(η_i−η_j)) and Gram_ij = ∫<η_i, η_j>."""
    k = len(basis)
    Q = np.empty((k, k))
    for i in range(k):
        Q[i, i] = sv.value(basis.parts[i])
        for j in range(i + 1, k):
            Q[i, j] = Q[j, i] = sv.polarization(basis.parts[i], basis.parts[j])
    eta = np.stack([p.eta for p in basis.parts])
    Gram = np.einsum("ink,jnk,n->ij", eta, eta, sv.grid.w * sv.geom.area_element)
    return Q, Gram


def negative_count(Q, Gram, eig_tol: Optional[float] = None):
    """Number of generalized eigenvalues of (Q, Gram) below −eig_tol, and the spectrum."""
    if eig_tol is None:
        eig_tol = 1e-6 * max(float(np.max(np.abs(Q))), 1.0)
    try:
        ev = scipy.linalg.eigh(Q, Gram, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError(f"Gram matrix is not positive definite: {exc}") from exc
    return int(np.sum(ev < -eig_tol)), ev


def dbar_kernel(sv: NKSecondVariation, basis: AdmissibleBasis, tol: float = KERNEL_TOL) -> dict:
    """Kernel of 𝒟 inside the span of the basis, and δ²A/‖η‖² on it."""
    wa = np.sqrt(2.0 * sv.grid.w * sv.geom.area_element)
    cols = []
    for p in basis.parts:
        D = p.np1 + sv.geom.J(p.np2)
        cols.append((D * wa[:, None]).ravel())
    M = np.stack(cols, axis=1)
    _, sig, vt = np.linalg.svd(M, full_matrices=False)
    ker = vt[sig < tol]
    quotients = []
    stacked = _stack(basis.parts)
    for v in ker:
        parts = _combine(stacked, v)
        quotients.append(sv.value(parts) / sv.mass(parts))
    return {"dimension": int(len(ker)), "singular_values": sig, "quotients": np.array(quotients),
            "expected_quotient": -2.0 * sv.lam ** 2}


@dataclass
class IndexReport:
    entry: str
    degree: int
    basis_size: int
    negative_count: int
    eigenvalues: list
    eig_tol: float
    maslov_tangent: int
    maslov_normal: int
    maslov_total: int
    maslov_additive: bool
    kernel_dimension: int
    riemann_roch_index: int
    bound_satisfied: bool
    basis_insufficient: bool
    verdict: str
    admissibility: float = 0.0
    kernel_quotients: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def index_verdict(neg: int, mu_total: int) -> tuple[bool, str]:
    """Compare a lower bound on the index with μ(u*TM, TL)."""
    if mu_total <= 0:
        return True, "bound vacuous"
    if neg >= mu_total:
        return True, "bound satisfied"
    return False, "basis insufficient"


def verify_index_bound(entry: CatalogEntry, config: IndexConfig = IndexConfig(),
                       basis: Optional[AdmissibleBasis] = None,
                       sv: Optional[NKSecondVariation] = None) -> IndexReport:
    if entry.lagrangian is None:
        raise PreconditionError(f"{entry.id}: index comparison needs a Lagrangian boundary")
    sv = sv or NKSecondVariation(entry.patch, entry.lagrangian, config.nodes)
    basis = basis or admissible_basis(sv, config.degree, boundary_nodes=config.boundary_nodes)
    Q, Gram = quadratic_form_matrix(sv, basis)
    tol = config.eig_tol if config.eig_tol is not None else 1e-6 * max(float(np.max(np.abs(Q))), 1.0)
    neg, ev = negative_count(Q, Gram, tol)
    mas = maslov_decomposition(entry.patch, entry.lagrangian, config.maslov_samples, config.maslov_steps)
    ker = dbar_kernel(sv, basis, config.kernel_tol)
    ok, verdict = index_verdict(neg, mas["total"])
    return IndexReport(
        entry=entry.id, degree=config.degree, basis_size=len(basis), negative_count=neg,
        eigenvalues=[float(x) for x in ev], eig_tol=tol,
        maslov_tangent=mas["tangent"], maslov_normal=mas["normal"], maslov_total=mas["total"],
        maslov_additive=bool(mas["additive"]), kernel_dimension=ker["dimension"],
        riemann_roch_index=riemann_roch_expected(mas["normal"]),
        bound_satisfied=ok, basis_insufficient=neg == 0, verdict=verdict,
        admissibility=basis.admissibility, kernel_quotients=[float(x) for x in ker["quotients"]],
    )
