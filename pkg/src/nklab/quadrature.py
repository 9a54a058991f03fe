"""Tensor Gauss–Legendre rules on parameter rectangles, with deterministic sums."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError


@lru_cache(maxsize=None)
def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float, b: float):
    x, w = _gl(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class Grid:
    """Tensor-product rule; ``s``, ``t`` and ``w`` are flat arrays of equal length."""

    s: np.ndarray
    t: np.ndarray
    w: np.ndarray

    def __len__(self) -> int:
        return len(self.w)


def rectangle(domain, ns: int, nt: int | None = None) -> Grid:
    s0, s1, t0, t1 = domain
    nt = ns if nt is None else nt
    xs, ws = gauss_legendre(ns, s0, s1)
    xt, wt = gauss_legendre(nt, t0, t1)
    S, T = np.meshgrid(xs, xt, indexing="ij")
    return Grid(S.ravel(), T.ravel(), np.outer(ws, wt).ravel())


def edge(domain, edge_name: str, n: int) -> Grid:
    """1-D rule along a rectangle edge; ``w`` is the parameter-length weight."""
    s0, s1, t0, t1 = domain
    if edge_name in ("s0", "s1"):
        t, w = gauss_legendre(n, t0, t1)
        return Grid(np.full(n, s0 if edge_name == "s0" else s1), t, w)
    s, w = gauss_legendre(n, s0, s1)
    return Grid(s, np.full(n, t0 if edge_name == "t0" else t1), w)


def fsum(values) -> float:
    """Compensated sum in a fixed order (bit-reproducible)."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def integrate(grid: Grid, values) -> float:
    return fsum(grid.w * np.asarray(values, dtype=float))


def refine_until_stable(compute, n0: int, rtol: float, max_doublings: int = 3):
    """Evaluate ``compute(n)`` for n0, 2 n0, ... until successive values agree.

    Returns ``(value, n, change)``; raises :class:`AccuracyError` if the
    relative change never drops below ``rtol``.
    """
    prev = compute(n0)
    n = n0
    for _ in range(max_doublings):
        n *= 2
        cur = compute(n)
        change = abs(cur - prev) / max(1.0, abs(cur))
        if change < rtol:
            return cur, n, change
        prev = cur
    raise AccuracyError(f"quadrature did not settle below {rtol:g} by n = {n}")
