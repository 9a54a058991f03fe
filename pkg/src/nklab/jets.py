"""Truncated multivariate Taylor jets (forward-mode dual numbers of any order).

A :class:`Jet` stores the Taylor coefficients ``f^(a)(x0) / a!`` of an
array-valued function for every multi-index ``a`` with ``|a| <= order``.
Arithmetic truncates at the stored order, so pushing jet variables through a
closed-form map yields exact derivatives up to that order. Coefficient arrays
carry arbitrary trailing value shapes, so a whole quadrature grid is
evaluated in one pass.

Functions in this module (``sin``, ``sqrt``, ``dot`` ...) accept plain arrays
as well; geometry code is written once and works on both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import JetEvaluationError


def _compositions(deg: int, nvar: int):
    if nvar == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in _compositions(deg - first, nvar - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class _Layout:
    nvar: int
    order: int
    monomials: tuple
    index: dict
    ia: np.ndarray
    ib: np.ndarray
    gather: np.ndarray  # (M, P) 0/1 matrix summing products into output slots

    @property
    def size(self) -> int:
        return len(self.monomials)


@lru_cache(maxsize=None)
def layout(nvar: int, order: int) -> _Layout:
    monos = tuple(m for deg in range(order + 1) for m in _compositions(deg, nvar))
    index = {m: i for i, m in enumerate(monos)}
    ia, ib, ic = [], [], []
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            c = tuple(x + y for x, y in zip(a, b))
            if sum(c) <= order:
                ia.append(i)
                ib.append(j)
                ic.append(index[c])
    gather = np.zeros((len(monos), len(ia)))
    gather[ic, np.arange(len(ia))] = 1.0
    return _Layout(nvar, order, monos, index, np.array(ia), np.array(ib), gather)


def _align(c: np.ndarray, rank: int) -> np.ndarray:
    """Insert singleton value axes so that ``c`` has ``rank`` value dims."""
    missing = rank - (c.ndim - 1)
    if missing <= 0:
        return c
    return c.reshape((c.shape[0],) + (1,) * missing + c.shape[1:])


class Jet:
    """Truncated Taylor expansion in ``nvar`` variables up to ``order``."""

    __array_ufunc__ = None  # make ndarray operators defer to the reflected Jet ones

    def __init__(self, coeffs, nvar: int, order: int):
        self.c = np.asarray(coeffs, dtype=float)
        self.layout = layout(nvar, order)
        if self.c.shape[0] != self.layout.size:
            raise JetEvaluationError(
                f"coefficient array has {self.c.shape[0]} slots, layout needs {self.layout.size}")

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, value, nvar: int, order: int) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros((layout(nvar, order).size,) + value.shape)
        c[0] = value
        return cls(c, nvar, order)

    @property
    def nvar(self) -> int:
        return self.layout.nvar

    @property
    def order(self) -> int:
        return self.layout.order

    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    @property
    def shape(self) -> tuple:
        return self.c.shape[1:]

    @property
    def ndim(self) -> int:
        return self.c.ndim - 1

    def partial(self, alpha: Sequence[int]) -> np.ndarray:
        """Mixed partial derivative of the value at the expansion point."""
        alpha = tuple(alpha)
        if sum(alpha) > self.order:
            raise JetEvaluationError(f"derivative {alpha} exceeds jet order {self.order}")
        return math.prod(math.factorial(a) for a in alpha) * self.c[self.layout.index[alpha]]

    def d(self, var: int) -> "Jet":
        """Jet of the partial derivative in variable ``var`` (one order lower)."""
        if self.order == 0:
            raise JetEvaluationError("cannot differentiate an order-0 jet")
        low = layout(self.nvar, self.order - 1)
        out = np.empty((low.size,) + self.shape)
        for i, m in enumerate(low.monomials):
            up = list(m)
            up[var] += 1
            out[i] = (m[var] + 1) * self.c[self.layout.index[tuple(up)]]
        return Jet(out, self.nvar, self.order - 1)

    def truncate(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise JetEvaluationError("cannot raise jet order by truncation")
        return Jet(self.c[: layout(self.nvar, order).size], self.nvar, order)

    def without_constant(self) -> "Jet":
        c = self.c.copy()
        c[0] = 0.0
        return Jet(c, self.nvar, self.order)

    # array-like access ----------------------------------------------------
    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.c[(slice(None),) + key], self.nvar, self.order)

    def sum(self, axis: int = -1) -> "Jet":
        ax = axis if axis < 0 else axis + 1
        return Jet(self.c.sum(axis=ax), self.nvar, self.order)

    def __matmul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return bilinear(self, other, np.matmul)
        return Jet(self.c @ np.asarray(other, dtype=float), self.nvar, self.order)

    def __rmatmul__(self, other) -> "Jet":
        other = np.asarray(other, dtype=float)
        return Jet(np.einsum("ij,...j->...i", other, self.c), self.nvar, self.order)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = _common(self, other)
            rank = max(a.ndim, b.ndim)
            return Jet(_align(a.c, rank) + _align(b.c, rank), a.nvar, a.order)
        other = np.asarray(other, dtype=float)
        rank = max(self.ndim, other.ndim)
        c = _align(self.c, rank)
        shape = np.broadcast_shapes(c.shape[1:], other.shape)
        out = np.broadcast_to(c, (c.shape[0],) + shape).copy()
        out[0] = out[0] + other
        return Jet(out, self.nvar, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.nvar, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return bilinear(self, other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * reciprocal(other)
        return Jet(_align(self.c, np.ndim(other)) / np.asarray(other, dtype=float),
                   self.nvar, self.order)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            out = Jet.constant(np.ones(self.shape), self.nvar, self.order)
            for _ in range(exponent):
                out = out * self
            return out
        return power(self, float(exponent))

    def __repr__(self) -> str:
        return f"Jet(nvar={self.nvar}, order={self.order}, shape={self.shape})"


def _common(a: Jet, b: Jet) -> tuple[Jet, Jet]:
    if a.nvar != b.nvar:
        raise JetEvaluationError(f"jets in {a.nvar} and {b.nvar} variables cannot be combined")
    order = min(a.order, b.order)
    return a.truncate(order), b.truncate(order)


def bilinear(a, b, op: Callable):
    """Apply a bilinear array operation ``op`` with the Leibniz rule.

    ``op`` must broadcast over a leading axis (e.g. ``np.multiply``,
    ``np.cross`` or an ``einsum`` with ``...``).
    """
    ja, jb = isinstance(a, Jet), isinstance(b, Jet)
    if not ja and not jb:
        return op(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    if ja and not jb:
        b = np.asarray(b, dtype=float)
        rank = max(a.ndim, b.ndim)
        return Jet(op(_align(a.c, rank), b), a.nvar, a.order)
    if jb and not ja:
        a = np.asarray(a, dtype=float)
        rank = max(a.ndim, b.ndim)
        return Jet(op(a, _align(b.c, rank)), b.nvar, b.order)
    a, b = _common(a, b)
    lay = a.layout
    rank = max(a.ndim, b.ndim)
    prod = op(_align(a.c, rank)[lay.ia], _align(b.c, rank)[lay.ib])
    out = np.tensordot(lay.gather, prod, axes=(1, 0))
    return Jet(out, lay.nvar, lay.order)


def _compose(x: Jet, derivs: Sequence[np.ndarray]) -> Jet:
    """Evaluate ``f(x)`` from the derivatives of ``f`` at ``x.value``."""
    h = x.without_constant()
    out = Jet.constant(derivs[0], x.nvar, x.order)
    term = h
    for k in range(1, x.order + 1):
        out = out + term * (derivs[k] / math.factorial(k))
        if k < x.order:
            term = term * h
    return out


def sin(x):
    if not isinstance(x, Jet):
        return np.sin(x)
    x0 = x.value
    return _compose(x, [np.sin(x0 + k * np.pi / 2) for k in range(x.order + 1)])


def cos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    x0 = x.value
    return _compose(x, [np.cos(x0 + k * np.pi / 2) for k in range(x.order + 1)])


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    e = np.exp(x.value)
    return _compose(x, [e] * (x.order + 1))


def power(x, alpha: float):
    if not isinstance(x, Jet):
        return np.power(x, alpha)
    x0 = x.value
    derivs = []
    coef = 1.0
    for k in range(x.order + 1):
        derivs.append(coef * np.power(x0, alpha - k))
        coef *= alpha - k
    return _compose(x, derivs)


def sqrt(x):
    return power(x, 0.5) if isinstance(x, Jet) else np.sqrt(x)


def reciprocal(x):
    return power(x, -1.0) if isinstance(x, Jet) else 1.0 / np.asarray(x, dtype=float)


def dot(a, b):
    """Inner product over the last axis."""
    if isinstance(a, Jet) or isinstance(b, Jet):
        return bilinear(a, b, lambda x, y: np.sum(x * y, axis=-1))
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def norm(a):
    return sqrt(dot(a, a))


def value(x) -> np.ndarray:
    return x.value if isinstance(x, Jet) else np.asarray(x, dtype=float)


def stack(items: Sequence, axis: int = -1):
    """``np.stack`` for a mix of jets and arrays."""
    jets = [it for it in items if isinstance(it, Jet)]
    if not jets:
        return np.stack([np.asarray(it, dtype=float) for it in items], axis=axis)
    nvar = jets[0].nvar
    order = min(j.order for j in jets)
    promoted = []
    for it in items:
        if isinstance(it, Jet):
            promoted.append(it.truncate(order).c)
        else:
            promoted.append(Jet.constant(it, nvar, order).c)
    shape = np.broadcast_shapes(*(p.shape for p in promoted))
    promoted = [np.broadcast_to(p, shape) for p in promoted]
    ax = axis if axis < 0 else axis + 1
    return Jet(np.stack(promoted, axis=ax), nvar, order)


def variables(values: Sequence, order: int) -> tuple[Jet, ...]:
    """Independent jet variables seeded at the given (broadcastable) values."""
    vals = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in values))
    nvar = len(vals)
    lay = layout(nvar, order)
    out = []
    for i, v in enumerate(vals):
        c = np.zeros((lay.size,) + v.shape)
        c[0] = v
        if order >= 1:
            unit = tuple(1 if j == i else 0 for j in range(nvar))
            c[lay.index[unit]] = 1.0
        out.append(Jet(c, nvar, order))
    return tuple(out)


# finite-difference fallback ---------------------------------------------

FD_STEP_FIRST = np.finfo(float).eps ** (1.0 / 3.0)
FD_STEP_SECOND = np.finfo(float).eps ** (1.0 / 4.0)


def fd_jet(f: Callable, s, t, order: int = 2, scale: float = 1.0) -> Jet:
    """Second-order central-difference jet of a black-box map ``f(s, t)``.

    Truncation error is O(h1^2) for first derivatives (h1 = eps^(1/3) * scale,
    about 6e-6 * scale) and O(h2^2) for second derivatives
    (h2 = eps^(1/4) * scale); expect ~1e-10 and ~1e-8 absolute accuracy for
    unit-scale smooth maps.
    """
    if order > 2:
        raise JetEvaluationError("finite-difference jets stop at order 2")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    f0 = np.asarray(f(s, t), dtype=float)
    lay = layout(2, order)
    c = np.zeros((lay.size,) + f0.shape)
    c[0] = f0
    if order >= 1:
        h = FD_STEP_FIRST * scale
        c[lay.index[(1, 0)]] = (f(s + h, t) - f(s - h, t)) / (2 * h)
        c[lay.index[(0, 1)]] = (f(s, t + h) - f(s, t - h)) / (2 * h)
    if order >= 2:
        h = FD_STEP_SECOND * scale
        c[lay.index[(2, 0)]] = (f(s + h, t) - 2 * f0 + f(s - h, t)) / h**2 / 2
        c[lay.index[(0, 2)]] = (f(s, t + h) - 2 * f0 + f(s, t - h)) / h**2 / 2
        c[lay.index[(1, 1)]] = (f(s + h, t + h) - f(s + h, t - h)
                                - f(s - h, t + h) + f(s - h, t - h)) / (4 * h**2)
    return Jet(c, 2, order)


def jet_of(f: Callable, point: Sequence, order: int):
    """Push jet variables through ``f``; fall back to finite differences.

    Returns ``(jet, exact)`` where ``exact`` is False on the fallback path.
    """
    try:
        out = f(*variables(point, order))
        if not isinstance(out, Jet):
            out = Jet.constant(out, len(point), order)
        return out, True
    except (TypeError, JetEvaluationError, AttributeError):
        if len(point) != 2:
            raise JetEvaluationError("finite-difference fallback is implemented for 2 variables")
        return fd_jet(f, point[0], point[1], order=min(order, 2)), False


def derivative(f: Callable, t0, order: int = 1):
    """Derivatives ``[f(t0), f'(t0), ...]`` of a one-variable map."""
    try:
        (t,) = variables([t0], order)
        out = f(t)
        if not isinstance(out, Jet):
            return [np.asarray(out, dtype=float)] + [np.zeros_like(out)] * order
        return [out.partial((k,)) for k in range(order + 1)]
    except (TypeError, JetEvaluationError, AttributeError):
        if order > 2:
            raise
        t0 = np.asarray(t0, dtype=float)
        f0 = np.asarray(f(t0), dtype=float)
        h1, h2 = FD_STEP_FIRST, FD_STEP_SECOND
        out = [f0]
        if order >= 1:
            out.append((f(t0 + h1) - f(t0 - h1)) / (2 * h1))
        if order >= 2:
            out.append((f(t0 + h2) - 2 * f0 + f(t0 - h2)) / h2**2)
        return out
