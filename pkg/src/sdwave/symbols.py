"""Fourier multipliers of the strongly damped wave equation.

Each Fourier mode of ``u_tt - Δu - Δu_t = 0`` obeys
``û'' + r² û' + r² û = 0`` with ``r = |ξ|``; the evolution symbols ``E0``, ``E1``
split the mode solution as ``û = E0 û0 + E1 (r²/2 û0 + û1)``.

All functions here take the time ``t`` as a scalar and the frequency magnitude
``r`` as a scalar or array, and broadcast over ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import _backend
from ._fallback import BRANCH_EPS
from .jet import DEFAULT_ORDER, L_jets


@dataclass(frozen=True)
class SymbolQuery:
    t: float
    r: float

    def __post_init__(self):
        for name in ("t", "r"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class BranchForm:
    tag: str
    lambda_plus: float | None = None
    lambda_minus: float | None = None


def branch_form(r: float) -> BranchForm:
    """Classify ``r`` relative to the critical-damping point ``r = 2``."""
    if abs(r - 2.0) <= BRANCH_EPS:
        return BranchForm("transitional")
    if r < 2.0:
        return BranchForm("oscillatory")
    s = r * np.sqrt((r - 2.0) * (r + 2.0))
    lam_m = (-r * r - s) / 2.0
    return BranchForm("hyperbolic", r * r / lam_m, lam_m)


def _check(t, r):
    if not np.isfinite(t) or t < 0:
        raise ValueError(f"t must be finite and >= 0, got {t}")
    r = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r < 0):
        raise ValueError("r must be finite and >= 0")
    return float(t), r


def _scalar(x, like):
    return float(x) if np.ndim(like) == 0 else x


def symbols(t, r, backend=None):
    """``(E0, E1)`` evaluated together."""
    t, r = _check(t, r)
    e0, e1 = _backend.get(backend).symbols(t, r)
    return _scalar(e0, r), _scalar(e1, r)


def eval_E0(t, r, backend=None):
    return symbols(t, r, backend)[0]


def eval_E1(t, r, backend=None):
    return symbols(t, r, backend)[1]


def solution_hat(t, r, u0_hat, u1_hat, backend=None):
    """Fourier coefficient of the solution at frequency magnitude ``r``."""
    e0, e1 = symbols(t, r, backend)
    r = np.asarray(r, dtype=float)
    return e0 * np.asarray(u0_hat) + e1 * (r * r / 2.0 * np.asarray(u0_hat) + np.asarray(u1_hat))


def decay_rate(r):
    """Exponential rate ``λ(r)`` with ``|E_i| <~ exp(-λ t)``: ``r²/2`` below 2, ``|λ+|`` above."""
    r = np.asarray(r, dtype=float)
    with np.errstate(invalid="ignore"):
        s = r * np.sqrt(np.maximum((r - 2.0) * (r + 2.0), 0.0))
        lam_p = np.where(r > 2.0, 2.0 * r * r / (r * r + s), r * r / 2.0)
    return _scalar(np.minimum(r * r / 2.0, lam_p), r)


def eval_L(i: int, a, t, r):
    """Direct evaluation of ``L_i(a, t, ξ)`` with ``|ξ| = r``.

    Accepts ``-2 < a < 2`` (negative values are used by finite-difference checks).
    """
    if i not in (0, 1):
        raise ValueError("symbol index must be 0 or 1")
    a = np.asarray(a, dtype=float)
    if np.any(np.abs(a) >= 2.0):
        raise ValueError("L_i needs |a| < 2")
    r = np.asarray(r, dtype=float)
    if i == 1 and np.any(r == 0):
        raise ValueError("L_1 is undefined at r = 0")
    root = np.sqrt(4.0 - a * a)
    phase = t * r - t * r * r * a / (4.0 + 2.0 * root)
    if i == 0:
        out = np.cos(phase)
    else:
        out = np.sin(phase) / (r * root / 2.0)
    return float(out) if out.ndim == 0 else out


def L_derivatives(i: int, t, r, K: int = DEFAULT_ORDER):
    """``∂^k L_i / ∂a^k`` at ``a = 0`` for ``k = 0..K`` (shape ``(K+1, *r.shape)``)."""
    L0, L1 = L_jets(t, r, K)
    jet = L0 if i == 0 else L1
    fact = np.array([factorial(k) for k in range(K + 1)], dtype=float)
    return jet.coeffs[: K + 1] * fact.reshape((-1,) + (1,) * (jet.coeffs.ndim - 1))


def expansion_terms(i: int, K: int, t, r, backend=None):
    """``e_i^k(t, r)`` for ``k = 0..K`` stacked along axis 0."""
    if i not in (0, 1):
        raise ValueError("symbol index must be 0 or 1")
    if K < 0 or K > 30:
        raise ValueError(f"expansion order {K} outside the supported 0..30")
    t, r = _check(t, r)
    return _backend.get(backend).expansion_terms(i, K, t, r)


def eval_e_ik(i: int, k: int, t, r, order: int = DEFAULT_ORDER, backend=None):
    """The ``k``-th expansion term of ``E_i``; ``k`` may not exceed the jet ``order``."""
    if k > order:
        raise ValueError(f"k={k} exceeds jet order {order}")
    out = expansion_terms(i, k, t, r, backend)[k]
    return _scalar(out, np.asarray(r))
