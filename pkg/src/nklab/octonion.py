"""Imaginary-octonion algebra on R^7: cross product, the G2 3-form and its dual.

Everything is derived from one table, :data:`PHI0_TERMS`:

    phi0 = e123 + e145 + e167 + e246 - e257 - e347 - e356

The cross product is ``(x × y)_k = phi0(x, y, e_k)`` and the octonion product
of imaginary units is ``e_i e_j = -δ_ij + e_i × e_j``. Indices in the public
table are 1-based; arrays are 0-based.

Vectors are plain ``(..., 7)`` arrays. Products accept :class:`~nklab.jets.Jet`
arguments, so every formula here can be differentiated.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np
from scipy.optimize import least_squares

from . import jets
from .errors import DegenerateInputError, FrameError

DIM = 7

PHI0_TERMS = (
    (1, 2, 3, +1),
    (1, 4, 5, +1),
    (1, 6, 7, +1),
    (2, 4, 6, +1),
    (2, 5, 7, -1),
    (3, 4, 7, -1),
    (3, 5, 6, -1),
)

ALGEBRA_TOL = 1e-10


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class AltForm:
    """Alternating k-form on R^n stored by its C(n, k) independent coefficients.

    ``coeffs[m]`` is the value on ``(e_I)`` for the m-th increasing index tuple
    ``I`` of :attr:`combos` (0-based).
    """

    def __init__(self, coeffs, degree: int, dim: int = DIM):
        self.degree = degree
        self.dim = dim
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape != (len(self.combos),):
            raise ValueError(f"a {degree}-form on R^{dim} has {len(self.combos)} coefficients")

    @cached_property
    def combos(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(self.dim), self.degree))

    @classmethod
    def from_terms(cls, terms, degree: int, dim: int = DIM) -> "AltForm":
        """Build from ``(i1, ..., ik, coefficient)`` tuples with 1-based indices."""
        form = cls(np.zeros(len(list(itertools.combinations(range(dim), degree)))), degree, dim)
        index = {c: m for m, c in enumerate(form.combos)}
        for term in terms:
            idx = tuple(i - 1 for i in term[:-1])
            form.coeffs[index[tuple(sorted(idx))]] += _perm_sign(idx) * term[-1]
        return form

    @classmethod
    def from_tensor(cls, tensor: np.ndarray, degree: int) -> "AltForm":
        dim = tensor.shape[0]
        combos = itertools.combinations(range(dim), degree)
        return cls([tensor[c] for c in combos], degree, dim)

    @cached_property
    def tensor(self) -> np.ndarray:
        """Fully antisymmetric dense array of shape ``(dim,) * degree``."""
        t = np.zeros((self.dim,) * self.degree)
        for coef, combo in zip(self.coeffs, self.combos):
            if coef == 0.0:
                continue
            for perm in itertools.permutations(range(self.degree)):
                t[tuple(combo[p] for p in perm)] = _perm_sign(perm) * coef
        return t

    def __call__(self, *vectors):
        """Evaluate on vectors with shared leading batch axes (arrays or jets)."""
        if len(vectors) != self.degree:
            raise TypeError(f"{self.degree}-form takes {self.degree} vectors")
        n = self.dim
        out = vectors[0] @ self.tensor.reshape(n, -1)
        for v in vectors[1:]:
            out = _split_last(out, n)
            out = jets.bilinear(out, v, lambda a, b: np.einsum("...im,...i->...m", a, b))
        return out[..., 0]

    def interior(self, v) -> "AltForm":
        """Contraction ``v ⌟ α`` into the first slot (single vector only)."""
        t = np.tensordot(np.asarray(v, dtype=float), self.tensor, axes=(0, 0))
        return AltForm.from_tensor(t, self.degree - 1)

    def wedge(self, other: "AltForm") -> "AltForm":
        degree = self.degree + other.degree
        out = AltForm(np.zeros(len(list(itertools.combinations(range(self.dim), degree)))),
                      degree, self.dim)
        index = {c: m for m, c in enumerate(out.combos)}
        for ca, a in zip(self.combos, self.coeffs):
            if a == 0.0:
                continue
            for cb, b in zip(other.combos, other.coeffs):
                if b == 0.0 or set(ca) & set(cb):
                    continue
                merged = ca + cb
                out.coeffs[index[tuple(sorted(merged))]] += _perm_sign(merged) * a * b
        return out

    def hodge(self) -> "AltForm":
        """Euclidean Hodge star with volume form e1 ∧ ... ∧ en."""
        degree = self.dim - self.degree
        out = AltForm(np.zeros(len(list(itertools.combinations(range(self.dim), degree)))),
                      degree, self.dim)
        index = {c: m for m, c in enumerate(out.combos)}
        for combo, coef in zip(self.combos, self.coeffs):
            rest = tuple(i for i in range(self.dim) if i not in combo)
            out.coeffs[index[rest]] += _perm_sign(combo + rest) * coef
        return out

    def top_coefficient(self) -> float:
        if self.degree != self.dim:
            raise ValueError("only a top-degree form has a single coefficient")
        return float(self.coeffs[0])

    def __add__(self, other: "AltForm") -> "AltForm":
        return AltForm(self.coeffs + other.coeffs, self.degree, self.dim)

    def __mul__(self, scalar: float) -> "AltForm":
        return AltForm(self.coeffs * scalar, self.degree, self.dim)

    __rmul__ = __mul__


def _split_last(x, n: int):
    """Reshape the last axis of size n*m into (n, m)."""
    if isinstance(x, jets.Jet):
        c = x.c
        return jets.Jet(c.reshape(c.shape[:-1] + (n, -1)), x.nvar, x.order)
    return x.reshape(x.shape[:-1] + (n, -1))


PHI0 = AltForm.from_terms(PHI0_TERMS, 3)
PSI0 = PHI0.hodge()
_EPS = PHI0.tensor  # structure constants: (x × y)_k = Σ ε_ijk x_i y_j
_PSI_T = PSI0.tensor


def cross(x, y):
    """7-dimensional cross product; bilinear and alternating."""
    return jets.bilinear(x, y, lambda a, b: np.einsum("ijk,...i,...j->...k", _EPS, a, b))


def phi0(x, y, z):
    return jets.dot(cross(x, y), z)


def star_phi0(w, x, y, z):
    """The coassociative 4-form ∗phi0 evaluated on four vectors."""
    if any(isinstance(v, jets.Jet) for v in (w, x, y, z)):
        return PSI0(w, x, y, z)
    return np.einsum("ijkl,...i,...j,...k,...l->...", _PSI_T, w, x, y, z)


def octonion_multiply(a, b) -> np.ndarray:
    """Product of full octonions stored as ``(..., 8)`` arrays ``(real, imag_1..7)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, av = a[..., 0], a[..., 1:]
    b0, bv = b[..., 0], b[..., 1:]
    real = a0 * b0 - np.sum(av * bv, axis=-1)
    imag = a0[..., None] * bv + b0[..., None] * av + cross(av, bv)
    return np.concatenate([real[..., None], imag], axis=-1)


def cross_from_product(x, y) -> np.ndarray:
    """½(xy − yx) computed through the octonion product (oracle for :func:`cross`)."""
    zero = np.zeros(np.shape(x)[:-1] + (1,))
    ox = np.concatenate([zero, x], axis=-1)
    oy = np.concatenate([zero, y], axis=-1)
    return 0.5 * (octonion_multiply(ox, oy) - octonion_multiply(oy, ox))[..., 1:]


def multiplication_table() -> list[list[str]]:
    """Signed-index table of ``e_i e_j`` for i, j = 1..7 (row i, column j)."""
    rows = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            if i == j:
                row.append("-1")
                continue
            k = int(np.flatnonzero(_EPS[i, j])[0])
            row.append(f"{'+' if _EPS[i, j, k] > 0 else '-'}e{k + 1}")
        rows.append(row)
    return rows


def dump_multiplication_table() -> str:
    rows = multiplication_table()
    header = "      " + " ".join(f"{'e' + str(j + 1):>4}" for j in range(DIM))
    body = [f"{'e' + str(i + 1):>4} |" + " ".join(f"{c:>4}" for c in row)
            for i, row in enumerate(rows)]
    return "\n".join([header] + body)


def g2_bilinear(phi: AltForm, v, w) -> float:
    """Coefficient of ⅙ (v⌟φ) ∧ (w⌟φ) ∧ φ against e1 ∧ ... ∧ e7."""
    top = phi.interior(v).wedge(phi.interior(w)).wedge(phi)
    return top.top_coefficient() / 6.0


def g2_gram(phi: AltForm = PHI0) -> np.ndarray:
    eye = np.eye(phi.dim)
    return np.array([[g2_bilinear(phi, eye[i], eye[j]) for j in range(phi.dim)]
                     for i in range(phi.dim)])


def orthonormalize(vectors, tol: float = 1e-12) -> np.ndarray:
    """Rows of the result span the same space; raises on rank deficiency."""
    m = np.asarray(vectors, dtype=float)
    q, r = np.linalg.qr(m.T)
    scale = max(np.max(np.abs(m)), 1.0)
    if np.min(np.abs(np.diag(r))) < tol * scale:
        raise DegenerateInputError("input vectors are linearly dependent")
    return (q * np.sign(np.diag(r))).T


def is_associative_plane(b1, b2, b3, tol: float = ALGEBRA_TOL) -> bool:
    u = orthonormalize([b1, b2, b3])
    return bool(abs(abs(phi0(u[0], u[1], u[2])) - 1.0) <= tol)


def coassociative_residual(basis) -> float:
    """Max |phi0| over triples from an orthonormalized 4-frame."""
    u = orthonormalize(basis)
    return max(abs(float(phi0(u[i], u[j], u[k])))
               for i, j, k in itertools.combinations(range(len(u)), 3))


def complement_basis(vectors) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement, seeded by e1..e7 in order."""
    basis = list(orthonormalize(vectors))
    out = []
    for cand in np.eye(DIM):
        v = cand - sum(np.dot(cand, b) * b for b in basis + out)
        n = np.linalg.norm(v)
        if n > 1e-6:
            out.append(v / n)
    return np.array(out)


def find_coassociative_plane(a, b, grid: int = 24, tol: float = ALGEBRA_TOL) -> np.ndarray:
    """Coassociative 4-plane containing span(a, b), found by search.

    The plane must be orthogonal to ``a × b``; the remaining two legs are
    searched inside the 4-dimensional complement W of span(a, b, a × b): the
    first leg is the first seeded basis vector of W, the second is located on
    a spherical grid of W and polished by least squares. Returns a 4 × 7
    orthonormal basis ``(a, b, x, y)``.
    """
    ab = orthonormalize([a, b])
    c = cross(ab[0], ab[1])
    w = complement_basis([ab[0], ab[1], c])
    x = w[0]
    rest = w[1:]

    def leg(angles):
        th, ph = angles
        return (np.cos(th) * rest[0] + np.sin(th) * np.cos(ph) * rest[1]
                + np.sin(th) * np.sin(ph) * rest[2])

    def residuals(angles):
        y = leg(angles)
        frame = (ab[0], ab[1], x, y)
        return np.array([phi0(frame[i], frame[j], frame[k])
                         for i, j, k in itertools.combinations(range(4), 3)])

    best, best_val = None, np.inf
    for th in np.linspace(0.0, np.pi, grid + 1):
        for ph in np.linspace(0.0, 2 * np.pi, 2 * grid, endpoint=False):
            val = np.max(np.abs(residuals((th, ph))))
            if val < best_val - 1e-14:
                best, best_val = (th, ph), val
    sol = least_squares(residuals, best, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    basis = orthonormalize([ab[0], ab[1], x, leg(sol.x)])
    if coassociative_residual(basis) > tol:
        raise FrameError("search did not reach a coassociative plane")
    return basis
