"""Boundary 3-folds: Lagrangian tests, tangent-space oracles and closest-point maps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import jets
from .errors import AccuracyError, DegenerateInputError
from .octonion import orthonormalize
from .sphere import omega, sphere_point

LAGRANGIAN_TOL = 1e-8


@dataclass(frozen=True)
class LagrangianPatch:
    """A 3-fold in S^6 given either as S^6 ∩ V for a 4-plane V or by a 3-parameter map.

    Exactly one of ``plane`` (4 x 7 spanning set) or ``embedding`` (callable of
    three jet-aware parameters) is set. ``seed`` is the parameter guess for
    closest-point iteration on an embedding.
    """

    name: str
    plane: Optional[np.ndarray] = None
    embedding: Optional[Callable] = None
    seed: tuple = (0.0, 0.0, 0.0)
    description: str = ""

    @property
    def basis(self) -> np.ndarray:
        return orthonormalize(self.plane)

    def tangent_basis(self, q) -> np.ndarray:
        """Orthonormal basis (3 x 7) of T_q L."""
        q = np.asarray(q, dtype=float)
        if self.plane is not None:
            B = self.basis
            c = B @ q
            # complement of c inside R^4, pushed back to R^7
            _, _, vt = np.linalg.svd(c[None, :])
            return vt[1:] @ B
        y = self.parameters_of(q)
        J = self._jacobian(y)
        return orthonormalize(J.T)

    def _jacobian(self, y) -> np.ndarray:
        v = jets.variables(list(y), 1)
        out = self.embedding(*v)
        return np.stack([out.partial(tuple(int(i == k) for i in range(3))) for k in range(3)], axis=-1)

    def parameters_of(self, q, tol: float = 1e-10, max_iter: int = 50) -> np.ndarray:
        """Gauss–Newton for min |embedding(y) − q|² starting from ``seed``."""
        y = np.array(self.seed, dtype=float)
        for _ in range(max_iter):
            r = np.asarray(self.embedding(*y)) - q
            J = self._jacobian(y)
            step = np.linalg.lstsq(J, -r, rcond=None)[0]
            y = y + step
            if np.linalg.norm(step) < tol:
                return y
        raise AccuracyError(f"{self.name}: closest-point iteration did not converge")

    def closest_point(self, x) -> np.ndarray:
        """Nearest point of L to an ambient point (Newton for embeddings)."""
        x = np.asarray(x, dtype=float)
        if self.plane is not None:
            B = self.basis
            return sphere_point((x @ B.T) @ B)
        return np.asarray(self.embedding(*self.parameters_of(x)))

    def contains(self, q, tol: float = 1e-8) -> bool:
        return bool(np.linalg.norm(self.closest_point(q) - q) <= tol)

    def tangent_distance(self, q, v) -> float:
        """Distance of v from T_q L."""
        T = self.tangent_basis(q)
        return float(np.linalg.norm(v - (T @ v) @ T))

    def lagrangian_residual(self, q) -> float:
        T = self.tangent_basis(q)
        if np.min(np.linalg.svd(T, compute_uv=False)) < 1e-6:
            raise DegenerateInputError(f"{self.name}: tangent space is not 3-dimensional")
        return float(max(abs(omega(q, T[i], T[j])) for i, j in itertools.combinations(range(3), 2)))


def validate_lagrangian(L: LagrangianPatch, points, tol: float = LAGRANGIAN_TOL) -> float:
    """Max |ω| on tangent spaces of L at the given points (which must lie on L)."""
    worst = 0.0
    for q in np.atleast_2d(points):
        if not L.contains(q):
            raise DegenerateInputError(f"{L.name}: sample point is not on the 3-fold")
        worst = max(worst, L.lagrangian_residual(q))
    return worst
