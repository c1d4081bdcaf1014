"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``SDWAVE_BACKEND=python`` is set. Must stay numerically interchangeable with
``_kernels.pyx``.
"""

import numpy as np

from .jet import L_jets

BRANCH_EPS = 1e-6
SINC_EPS = 1e-5
# small-argument cutoff for the transitional series (4 terms, error < 1e-20)
SERIES_EPS = 1e-2


def _sinc_series(x2):
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))


def _cos_series(x2):
    return 1.0 - x2 / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0))


def symbols(t, r):
    """Return ``(E0, E1)`` at time ``t`` for an array of frequency magnitudes."""
    t = float(t)
    r = np.asarray(r, dtype=float)
    E0 = np.empty(r.shape)
    E1 = np.empty(r.shape)

    trans = np.abs(r - 2.0) <= BRANCH_EPS
    osc = (r < 2.0) & ~trans
    hyp = (r > 2.0) & ~trans

    # oscillatory: beta = r sqrt(4 - r^2) / 2
    ro = r[osc]
    beta = ro * np.sqrt((2.0 - ro) * (2.0 + ro)) / 2.0
    x = t * beta
    g = np.exp(-t * ro * ro / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        sinc = np.where(np.abs(x) < SINC_EPS, _sinc_series(x * x), np.sin(x) / x)
    E0[osc] = g * np.cos(x)
    E1[osc] = g * t * sinc

    # hyperbolic: roots lam_- <= lam_+ < 0 of lam^2 + r^2 lam + r^2
    rh = r[hyp]
    s = rh * np.sqrt((rh - 2.0) * (rh + 2.0))
    lam_m = (-rh * rh - s) / 2.0
    lam_p = rh * rh / lam_m
    ep = np.exp(lam_p * t)
    E0[hyp] = (ep + np.exp(lam_m * t)) / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s * t < SINC_EPS, t * (1.0 - s * t / 2.0), -np.expm1(-s * t) / s)
    E1[hyp] = ep * ratio

    # transitional: even series in (t beta)^2, signed by the side of r = 2
    rt = r[trans]
    sign = np.where(rt <= 2.0, 1.0, -1.0)
    b2 = rt * rt * np.abs((2.0 - rt) * (2.0 + rt)) / 4.0
    x2 = t * t * b2
    g = np.exp(-t * rt * rt / 2.0)
    small = x2 < SERIES_EPS**2
    xs = np.sqrt(x2)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct_sinc = np.where(sign > 0, np.sin(xs) / xs, np.sinh(xs) / xs)
    direct_cos = np.where(sign > 0, np.cos(xs), np.cosh(xs))
    E0[trans] = g * np.where(small, _cos_series(sign * x2), direct_cos)
    E1[trans] = g * t * np.where(small, _sinc_series(sign * x2), direct_sinc)
    return E0, E1


def expansion_terms(i, K, t, r):
    """Array of shape ``(K + 1, *r.shape)`` holding ``e_i^k(t, r)`` for ``k = 0..K``."""
    r = np.asarray(r, dtype=float)
    L0, L1 = L_jets(t, r, max(K, 1))
    jet = L0 if i == 0 else L1
    coeffs = jet.coeffs[: K + 1]
    g = np.exp(-t * r * r / 2.0)
    powers = r[None, ...] ** np.arange(K + 1).reshape((K + 1,) + (1,) * r.ndim)
    out = g * coeffs * powers
    if i == 1:
        zero = r == 0.0
        if np.any(zero):
            out[0][zero] = t
            out[1:, zero] = 0.0
    return out
