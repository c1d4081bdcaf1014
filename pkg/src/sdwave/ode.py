"""Fixed-step RK4 integration of single Fourier modes.

Independent ground truth for the closed-form symbols: it never touches
``symbols`` and integrates ``û'' + r² û' + r² û = 0`` as a first-order system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

import numpy as np

T_MAX = 50.0


def max_step(r) -> np.ndarray:
    """Largest step allowed for frequency ``r``."""
    return 0.01 / np.maximum(1.0, np.asarray(r, dtype=float) ** 2)


@dataclass
class OdeRun:
    r: float
    t_end: float
    h: float
    u0_hat: complex
    u1_hat: complex
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    derivatives: np.ndarray = field(repr=False)

    @property
    def final(self) -> complex:
        return self.values[-1]


def _rk4_system(r2, h, u, v, nsteps, record_every=0):
    def rhs(u, v):
        return v, -r2 * (v + u)

    us, vs = [u], [v]
    for step in range(1, nsteps + 1):
        k1u, k1v = rhs(u, v)
        k2u, k2v = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v)
        k3u, k3v = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v)
        k4u, k4v = rhs(u + h * k3u, v + h * k3v)
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if record_every and (step % record_every == 0 or step == nsteps):
            us.append(u)
            vs.append(v)
    return u, v, us, vs


def integrate_mode(r, t_end, u0_hat, u1_hat, h=None, samples=100) -> OdeRun:
    """Integrate one mode from ``t = 0`` to ``t_end``.

    ``h`` defaults to the largest step compatible with ``max_step(r)`` that
    divides ``t_end`` evenly; a user-supplied ``h`` must respect the same rule.
    """
    if r < 0 or not np.isfinite(r):
        raise ValueError("r must be finite and >= 0")
    if not 0 <= t_end <= T_MAX:
        raise ValueError(f"t_end must lie in [0, {T_MAX}] for the oracle")
    hmax = float(max_step(r))
    if h is None:
        nsteps = max(1, ceil(t_end / hmax))
    else:
        if h > hmax * (1 + 1e-12):
            raise ValueError(f"step {h} exceeds the stability rule {hmax}")
        nsteps = max(1, round(t_end / h))
    h = t_end / nsteps if t_end > 0 else 0.0
    every = max(1, nsteps // max(1, samples))
    _, _, us, vs = _rk4_system(r * r, h, complex(u0_hat), complex(u1_hat), nsteps if t_end > 0 else 0, every)
    n = len(us)
    times = np.linspace(0.0, t_end, n) if n > 1 else np.array([0.0])
    if n > 1:
        idx = [0] + [min(k * every, nsteps) for k in range(1, n)]
        times = np.array(idx, dtype=float) * h
    return OdeRun(float(r), float(t_end), h, complex(u0_hat), complex(u1_hat),
                  times, np.array(us), np.array(vs))


def integrate_modes(r, t_end, u0_hat, u1_hat, steps_scale=1.0):
    """Final values for many modes at once (vectorized; each mode has its own step).

    All modes take the same number of steps ``N``; mode ``i`` uses
    ``h_i = t_i / N`` which respects ``max_step(r_i)``. ``steps_scale`` > 1
    refines every step uniformly.
    """
    r = np.asarray(r, dtype=float)
    t_end = np.broadcast_to(np.asarray(t_end, dtype=float), r.shape)
    if np.any(t_end < 0) or np.any(t_end > T_MAX):
        raise ValueError(f"t_end must lie in [0, {T_MAX}] for the oracle")
    nsteps = int(ceil(np.max(t_end / max_step(r)) * steps_scale)) if r.size else 0
    nsteps = max(nsteps, 1)
    h = t_end / nsteps
    u0 = np.broadcast_to(np.asarray(u0_hat, dtype=complex), r.shape).copy()
    u1 = np.broadcast_to(np.asarray(u1_hat, dtype=complex), r.shape).copy()
    u, v, _, _ = _rk4_system(r * r, h, u0, u1, nsteps)
    return u, v
