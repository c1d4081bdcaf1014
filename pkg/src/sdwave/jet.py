"""Truncated Taylor series ("jets") in a single scalar variable.

A :class:`Jet` of order ``K`` stores ``c_0 .. c_K`` for ``sum c_m a**m + O(a**(K+1))``.
Coefficients may carry trailing batch axes, so one jet can hold the series for
many ``(t, r)`` nodes at once: ``coeffs.shape == (K + 1, *batch)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

DEFAULT_ORDER = 6


@dataclass(frozen=True)
class Jet:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim == 0:
            raise ValueError("jet coefficients must have at least one axis")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    def __add__(self, other):
        return jet_add(self, _lift(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return jet_add(self, jet_scale(_lift(other, self), -1.0))

    def __rsub__(self, other):
        return jet_add(_lift(other, self), jet_scale(self, -1.0))

    def __neg__(self):
        return jet_scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return jet_scale(self, 1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return jet_div(_lift(other, self), self)


def _lift(x, like: Jet) -> Jet:
    if isinstance(x, Jet):
        return x
    c = np.zeros_like(like.coeffs)
    c[0] = x
    return Jet(c)


def _check_same_order(x: Jet, y: Jet):
    if x.order != y.order:
        raise ValueError(f"jet orders differ: {x.order} != {y.order}")


def _aligned(x: Jet, y: Jet):
    """Coefficient arrays of ``x`` and ``y`` broadcast over their batch axes."""
    _check_same_order(x, y)
    a, b = x.coeffs, y.coeffs
    nd = max(a.ndim, b.ndim)
    a = a.reshape(a.shape + (1,) * (nd - a.ndim))
    b = b.reshape(b.shape + (1,) * (nd - b.ndim))
    return np.broadcast_arrays(a, b)


def jet_const(c, K: int) -> Jet:
    """Embed a constant (or an array of constants) as a jet of order ``K``."""
    if K < 0:
        raise ValueError("jet order must be non-negative")
    c = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(c)):
        raise ValueError("jet constant must be finite")
    out = np.zeros((K + 1,) + c.shape)
    out[0] = c
    return Jet(out)


def jet_var(K: int) -> Jet:
    """The expansion variable ``a`` itself."""
    if K < 1:
        raise ValueError("jet_var needs order >= 1")
    out = np.zeros(K + 1)
    out[1] = 1.0
    return Jet(out)


def jet_scale(x: Jet, s) -> Jet:
    return Jet(x.coeffs * np.asarray(s, dtype=float))


def jet_add(x: Jet, y: Jet) -> Jet:
    a, b = _aligned(x, y)
    return Jet(a + b)


def jet_mul(x: Jet, y: Jet) -> Jet:
    """Truncated Cauchy product."""
    K = x.order
    a, b = _aligned(x, y)
    out = np.zeros(a.shape)
    for k in range(K + 1):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        out[k] = acc
    return Jet(out)


def jet_div(x: Jet, y: Jet) -> Jet:
    """Power-series quotient ``x / y``; ``y`` must have a nonzero constant term."""
    a, b = _aligned(x, y)
    if np.any(b[0] == 0):
        raise ZeroDivisionError("jet division by a series with zero constant term")
    K = x.order
    q = np.zeros(a.shape)
    for k in range(K + 1):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * q[k - j]
        q[k] = acc / b[0]
    return Jet(q)


def jet_sqrt(x: Jet) -> Jet:
    c = x.coeffs
    if np.any(~(c[0] > 0)):
        raise ValueError("jet_sqrt needs a positive constant term")
    K = x.order
    y = np.zeros(c.shape)
    y[0] = np.sqrt(c[0])
    for k in range(1, K + 1):
        acc = c[k]
        for j in range(1, k):
            acc = acc - y[j] * y[k - j]
        y[k] = acc / (2.0 * y[0])
    return Jet(y)


def _sin_cos_nilpotent(h: np.ndarray):
    # h[0] == 0; Maclaurin series of sin(h) and cos(h) by the ODE recurrence
    # s' = c h', c' = -s h'.
    K = h.shape[0] - 1
    s = np.zeros(h.shape)
    c = np.zeros(h.shape)
    c[0] = 1.0
    for k in range(1, K + 1):
        acc_s = np.zeros(h.shape[1:])
        acc_c = np.zeros(h.shape[1:])
        for j in range(1, k + 1):
            acc_s = acc_s + j * h[j] * c[k - j]
            acc_c = acc_c + j * h[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = -acc_c / k
    return s, c


def jet_sin_cos(x: Jet) -> tuple[Jet, Jet]:
    """``(sin x, cos x)`` via angle addition around the constant term."""
    c0 = x.coeffs[0]
    h = x.coeffs.copy()
    h[0] = 0.0
    sh, ch = _sin_cos_nilpotent(h)
    s0, k0 = np.sin(c0), np.cos(c0)
    return Jet(s0 * ch + k0 * sh), Jet(k0 * ch - s0 * sh)


def jet_derivative_at_zero(x: Jet, k: int):
    """``d^k/da^k`` of the represented function at ``a = 0``."""
    if k < 0 or k > x.order:
        raise ValueError(f"derivative order {k} outside 0..{x.order}")
    return factorial(k) * x.coeffs[k]


def L_jets(t, r, K: int = DEFAULT_ORDER) -> tuple[Jet, Jet]:
    """Series in ``a`` of the phase-shifted cosine and scaled sine at fixed ``(t, r)``.

    Returns ``(L0, L1)``. ``r`` may be an array; ``r == 0`` entries of ``L1`` are
    left as ``nan`` (the caller decides how to extend them).
    """
    K = max(int(K), 1)
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    t, r = np.broadcast_arrays(t, r)
    a = jet_var(K)
    root = jet_sqrt(4.0 - a * a)
    shift = a / (4.0 + 2.0 * root)
    phase = jet_const(t * r, K) - jet_scale(_broadcast(shift, r.shape), t * r * r)
    s, c = jet_sin_cos(phase)
    with np.errstate(divide="ignore", invalid="ignore"):
        L1 = Jet(jet_div(s, _broadcast(root, r.shape)).coeffs / (r / 2.0))
    return c, L1


def _broadcast(x: Jet, shape) -> Jet:
    K = x.order
    return Jet(np.broadcast_to(x.coeffs.reshape((K + 1,) + (1,) * len(shape)), (K + 1,) + tuple(shape)).copy())
