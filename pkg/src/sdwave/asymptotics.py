"""Expansion profiles, remainder norms, rate fits and the bound checks built on them.

Norms over the unit ball use the quadrature module with a Gaussian envelope
cut (every integrand here carries ``exp(-t|ξ|²)``). Norms over all of R^n add
the shell ``|ξ| > 1``; for large ``t`` that shell is bounded analytically and
only integrated when the bound is not negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import floor

import numpy as np
from scipy import integrate, special

from .data import Datum, MomentSet
from .quadrature import Grid, integrate_interval, integrate_shell, sphere_area
from .symbols import decay_rate, expansion_terms, symbols

EXTERIOR_CUTOFF = 8.0
NEGLIGIBLE = 1e-14


class ConditionViolated(ValueError):
    """The integrability condition on γ fails for this dimension."""


def condition_holds(n: int, gamma: float) -> bool:
    """γ > 1/2 for n = 1, γ > 0 for n = 2, γ >= 0 for n >= 3."""
    if n == 1:
        return gamma > 0.5
    if n == 2:
        return gamma > 0
    return gamma >= 0


def geometric_t_grid(t_min=1e2, t_max=1e5, points=7):
    return np.geomspace(t_min, t_max, points)


def _is_radial(*data: Datum) -> bool:
    return all(c.kind == "gaussian" and not any(c.center) for d in data for c in d.components)


def default_grid(n: int, t: float, *data: Datum, base: float = 256.0) -> Grid:
    mode = "radial" if _is_radial(*data) else "tensor"
    return Grid.for_oscillation(n, t, mode=mode, base=base)


def _cols(r):
    return np.asarray(r)[:, 0]


@dataclass(frozen=True)
class ExpansionProfile:
    """``Σ_{k<=[γ]} e_i^k(t) Σ_{j<=[γ]-k} m[f]^j`` as a function of ``(t, ξ)``."""

    index: int
    gamma: float
    moments: MomentSet

    @classmethod
    def build(cls, datum: Datum, gamma: float, index: int = 1):
        return cls(index, gamma, datum.moments(floor(gamma)))

    @property
    def K(self) -> int:
        return floor(self.gamma)

    def __call__(self, t, r, omega, terms=None):
        """Evaluate with ``r`` of shape ``(m, 1)`` and ``omega`` of shape ``(k, n)``."""
        K = self.K
        if terms is None:
            terms = expansion_terms(self.index, K, t, _cols(r))
        mom = [self.moments.evaluate(j, omega) for j in range(K + 1)]
        out = 0.0
        for k in range(K + 1):
            inner = 0.0
            for j in range(K - k + 1):
                inner = inner + np.asarray(r) ** j * mom[j][None, :]
            out = out + terms[k][:, None] * inner
        return out


def _ball_norm(g, n, t, grid) -> float:
    val = integrate_shell(lambda r, w: np.abs(g(r, w)) ** 2, grid, 0.0, 1.0, decay=t).value
    return math.sqrt(max(val, 0.0))


def remainder_norm_thm31(u1: Datum, gamma: float, t: float, grid: Grid | None = None,
                         allow_invalid: bool = False) -> float:
    """``‖E1(t) û1 - profile‖`` over the unit ball (profile built from ``e_1^k`` and ``m[u1]^j``)."""
    n = u1.dim
    if not condition_holds(n, gamma) and not allow_invalid:
        raise ConditionViolated(f"gamma={gamma} violates the integrability condition for n={n}")
    prof = ExpansionProfile.build(u1, gamma, 1)
    grid = grid or default_grid(n, t, u1)

    def g(r, w):
        _, e1 = symbols(t, r)
        return e1 * u1.fourier_radial(r, w) - prof(t, r, w)

    return _ball_norm(g, n, t, grid)


def remainder_norm_thm32(u0: Datum, gamma: float, t: float, grid: Grid | None = None) -> float:
    """``‖E0(t) û0 - profile‖`` over the unit ball (``e_0^k`` and ``m[u0]^j``)."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    n = u0.dim
    prof = ExpansionProfile.build(u0, gamma, 0)
    grid = grid or default_grid(n, t, u0)

    def g(r, w):
        e0, _ = symbols(t, r)
        return e0 * u0.fourier_radial(r, w) - prof(t, r, w)

    return _ball_norm(g, n, t, grid)


@dataclass(frozen=True)
class NormSplit:
    """Squared L²(R^n) norm split at ``|ξ| = 1``."""

    interior: float
    exterior: float
    exterior_bound: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.interior + self.exterior)


def _solution(u0: Datum, u1: Datum, t: float, subtract_leading: bool):
    P1 = u1.mass

    def g(r, w):
        e0, e1 = symbols(t, r)
        a = u0.fourier_radial(r, w)
        b = u1.fourier_radial(r, w)
        out = e0 * a + e1 * (r * r / 2.0 * a + b)
        if subtract_leading:
            out = out - P1 * expansion_terms(1, 0, t, _cols(r))[0][:, None]
        return out

    def envelope(r):
        lam = decay_rate(r)
        b0 = u0.fourier_envelope(r)
        b1 = u1.fourier_envelope(r)
        env = np.exp(-lam * t) * (b0 * (1.0 + t * r * r / 2.0) + t * b1)
        if subtract_leading:
            env = env + abs(P1) * np.exp(-t * r * r / 2.0) / r
        return env

    return g, envelope


def _shell_bound(envelope, n, lo, hi=80.0) -> float:
    val, _ = integrate.quad(lambda r: r ** (n - 1) * envelope(np.array(r)) ** 2, lo, hi, limit=400, epsabs=0)
    return sphere_area(n) * val


def _rn_norm(g, envelope, n, t, grid, data) -> NormSplit:
    interior = integrate_shell(lambda r, w: np.abs(g(r, w)) ** 2, grid, 0.0, 1.0, decay=t).value
    bound = _shell_bound(envelope, n, 1.0)
    if bound <= NEGLIGIBLE * interior:
        return NormSplit(interior, 0.0, bound)
    reach = max([np.linalg.norm(c.center) for d in data for c in d.components] + [0.0])
    ang = max(grid.angular, 2 * math.ceil(EXTERIOR_CUTOFF * reach) + 16) if n > 1 else 0
    ext_grid = Grid.for_oscillation(n, 2.0 * t, mode=grid.mode, base=grid.nodes_per_unit, angular=ang)
    ext = integrate_shell(lambda r, w: np.abs(g(r, w)) ** 2, ext_grid, 1.0, EXTERIOR_CUTOFF).value
    tail = _shell_bound(envelope, n, EXTERIOR_CUTOFF, EXTERIOR_CUTOFF + 80.0)
    return NormSplit(interior, ext, tail)


def solution_norm(u0: Datum, u1: Datum, t: float, grid: Grid | None = None) -> NormSplit:
    """``‖û(t)‖_{L²(R^n)}`` (Plancherel-side norm of the solution)."""
    n = u1.dim
    grid = grid or default_grid(n, t, u0, u1)
    g, env = _solution(u0, u1, t, subtract_leading=False)
    return _rn_norm(g, env, n, t, grid, (u0, u1))


def leading_term_gap(u0: Datum, u1: Datum, t: float, grid: Grid | None = None) -> float:
    """``‖û(t) - P1 exp(-t|ξ|²/2) sin(t|ξ|)/|ξ|‖_{L²(R^n)}`` with ``P1 = ∫u1``."""
    n = u1.dim
    grid = grid or default_grid(n, t, u0, u1)
    g, env = _solution(u0, u1, t, subtract_leading=True)
    return _rn_norm(g, env, n, t, grid, (u0, u1)).norm


def data_size(u0: Datum, u1: Datum) -> float:
    """``‖u1‖_{1,1} + ‖u0‖_1 + ‖u1‖_2 + ‖u0‖_2``."""
    return u1.weighted_norm(1.0) + u0.l1_norm() + u1.l2_norm() + u0.l2_norm()


def upper_bound_38(u0: Datum, u1: Datum, t: float, grid: Grid | None = None):
    """Return ``(gap, gap / (data_size * (1+t)^(-n/4)))``."""
    gap = leading_term_gap(u0, u1, t, grid)
    size = data_size(u0, u1)
    return gap, gap / (size * (1.0 + t) ** (-u1.dim / 4))


# ---------------------------------------------------------------------------
# rate fitting

TRANSFORMS = ("log-log", "log-linear", "loglog-log")


@dataclass(frozen=True)
class RateFit:
    transform: str
    slope: float
    intercept: float
    max_residual: float
    t: tuple = field(repr=False)
    values: tuple = field(repr=False)

    def predict(self, t):
        t = np.asarray(t, dtype=float)
        x = np.log(np.log(t)) if self.transform == "loglog-log" else np.log(t)
        y = self.intercept + self.slope * x
        return y if self.transform == "log-linear" else np.exp(y)


def fit_rate(t, values, transform: str = "log-log", min_decades: float = 2.0) -> RateFit:
    """Least-squares line in transformed coordinates.

    ``log-log``: log v against log t. ``log-linear``: v against log t.
    ``loglog-log``: log v against log log t.
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"transform must be one of {TRANSFORMS}")
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size < 4 or t.size != v.size:
        raise ValueError("need at least 4 (t, value) samples")
    if np.any(t <= 0):
        raise ValueError("abscissae must be positive")
    if math.log10(t.max() / t.min()) < min_decades - 1e-9:
        raise ValueError(f"samples must span at least {min_decades} decades")
    if transform == "loglog-log":
        if np.any(t <= 1):
            raise ValueError("log log t needs t > 1")
        x = np.log(np.log(t))
    else:
        x = np.log(t)
    if transform == "log-linear":
        y = v
    else:
        if np.any(v <= 0):
            raise ValueError("values must be positive for a logarithmic fit")
        y = np.log(v)
    A = np.stack([x, np.ones_like(x)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.max(np.abs(A @ np.array([slope, intercept]) - y)))
    return RateFit(transform, float(slope), float(intercept), resid, tuple(t.tolist()), tuple(v.tolist()))


# ---------------------------------------------------------------------------
# model integrals and their explicit lower/upper constants


def _sinc_t(t, r):
    # sin(t r) / r, equal to t at r = 0
    return t * np.sinc(t * np.asarray(r) / np.pi)


def unit_power_integral(p: float, lo: float = 0.0, hi: float = 1.0) -> float:
    """``∫_lo^hi x^p exp(-x²) dx`` by 1-D Gauss-Legendre."""
    if p <= -1 and lo == 0:
        raise ValueError("integral diverges at the origin")
    return integrate_interval(lambda x: x**p * np.exp(-x * x), lo, hi, nodes_per_unit=256.0)


def weighted_ball_integral(n: int, gamma: float, t: float, kind: str = "sin", grid: Grid | None = None) -> float:
    """``∫_{|ξ|<=1} |ξ|^{2γ} exp(-t|ξ|²) w(ξ)² dξ`` with ``w = sin(t|ξ|)/|ξ|`` or ``cos(t|ξ|)``."""
    grid = grid or Grid.for_oscillation(n, t, mode="radial")
    if kind == "sin":
        f = lambda r, w: r ** (2 * gamma) * np.exp(-t * r * r) * _sinc_t(t, r) ** 2  # noqa: E731
    elif kind == "cos":
        f = lambda r, w: r ** (2 * gamma) * np.exp(-t * r * r) * np.cos(t * r) ** 2  # noqa: E731
    else:
        raise ValueError("kind must be 'sin' or 'cos'")
    return integrate_shell(f, grid, 0.0, 1.0, decay=t).value


def weighted_ball_lower(n: int, gamma: float, t: float, kind: str = "sin") -> float:
    """Explicit large-``t`` lower bound ``(ω_n/4)(∫_0^1 x^p e^{-x²}) t^q`` for :func:`weighted_ball_integral`."""
    if kind == "sin":
        p, q = 2 * gamma + n - 3, -n / 2 - gamma + 1
    else:
        p, q = 2 * gamma + n - 1, -n / 2 - gamma
    return sphere_area(n) / 4 * unit_power_integral(p) * t**q


def weighted_ball_upper_rate(n: int, gamma: float, kind: str = "sin") -> float:
    """Exponent of ``(1+t)`` in the matching upper bound."""
    return -n / 2 - gamma + 1 if kind == "sin" else -n / 2 - gamma


def damping_term_norm_sq(n: int, t: float, grid: Grid | None = None) -> float:
    """``‖(|ξ|²/2) E1(t)‖²`` over the unit ball."""
    grid = grid or Grid.for_oscillation(n, t, mode="radial")
    return integrate_shell(lambda r, w: (r * r / 2.0 * symbols(t, r)[1]) ** 2, grid, 0.0, 1.0, decay=t).value


def appendix_growth(n: int, t: float, grid: Grid | None = None) -> float:
    """``∫_{R^n} exp(-t|ξ|²) |sin(t|ξ|)/|ξ||² dξ`` by quadrature."""
    if t < 10:
        raise ValueError("appendix integrals are tabulated for t >= 10")
    from .quadrature import integrate_rn

    grid = grid or Grid.for_oscillation(n, t, mode="radial", cutoff=EXTERIOR_CUTOFF)
    f = lambda r, w: np.exp(-t * r * r) * _sinc_t(t, r) ** 2  # noqa: E731
    return integrate_rn(f, grid, dominating=(t * t, t)).value


def appendix_reference(n: int, t: float) -> float:
    """Closed forms of the same integral, independent of the quadrature module.

    n = 1: ``2√t (π/2)(k erf k + (e^{-k²} - 1)/√π)``, ``k = √t``
    n = 2: ``2π ∫_0^{√t} D(s) ds`` with Dawson's function ``D``
    n = 3: ``π^{3/2} t^{-1/2} (1 - e^{-t})``
    """
    k = math.sqrt(t)
    if n == 1:
        return 2 * k * (math.pi / 2) * (k * math.erf(k) + math.expm1(-t) / math.sqrt(math.pi))
    if n == 2:
        val, _ = integrate.quad(special.dawsn, 0.0, k, limit=500, epsabs=0, epsrel=1e-13)
        return 2 * math.pi * val
    if n == 3:
        return math.pi**1.5 / k * -math.expm1(-t)
    raise ValueError("n must be 1, 2 or 3")


def log_moment_constant() -> float:
    """``∫_0^∞ |log r| r e^{-r²} dr``."""
    f = lambda r: abs(math.log(r)) * r * math.exp(-r * r)  # noqa: E731
    a, _ = integrate.quad(f, 0.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
    b, _ = integrate.quad(f, 1.0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return a + b


def appendix_bracket(n: int, t: float) -> tuple[float, float]:
    """Explicit two-sided bounds on :func:`appendix_growth` valid for ``t >= 1``."""
    e = math.e
    if n == 1:
        k = math.sqrt(t)
        inner_lo = k / (8 * e)
        outer_lo = k / (4 * e) - math.exp(-math.pi**2 / 4) / (2 * math.pi) - math.sqrt(math.pi) / 2
        return 2 * k * (inner_lo + outer_lo), 2 * k * (2 * k)
    if n == 2:
        C0 = log_moment_constant()
        lo = (math.pi / 4 * t * -math.expm1(-1 / t) + math.pi / (4 * e) * math.log(t)
              + math.pi / 2 * math.log(math.pi / 2) * math.exp(-math.pi**2 / 4) - math.pi * C0)
        hi = math.pi + math.pi * math.log(t) + 4 * math.pi * C0
        return lo, hi
    if n == 3:
        lo = weighted_ball_lower(3, 0.0, t, "sin")
        hi = sphere_area(3) * math.sqrt(math.pi) / 2 / math.sqrt(t)
        return lo, hi
    raise ValueError("n must be 1, 2 or 3")


# ---------------------------------------------------------------------------
# leading-term optimality


@dataclass
class CaseSplitReport:
    P0: float
    P1: float
    M: tuple
    case: str
    delta: float | None
    lower_constant: float
    measured_constant: float | None = None

    def to_json(self):
        return {"P0": self.P0, "P1": self.P1, "M": list(self.M), "case": self.case, "delta": self.delta,
                "lower_constant": self.lower_constant, "measured_constant": self.measured_constant}


CASES = ("mass", "mass-and-displacement", "first-moment", "displacement", "degenerate")


def _zero(x, scale):
    return abs(x) <= 1e-12 * max(scale, 1e-300)


def case_split(u0: Datum, u1: Datum) -> CaseSplitReport:
    """Classify the data and compute the explicit constant ``c`` with ``gap >= c t^{-n/4}`` for large t.

    Cases: ``mass`` (P1 != 0, P0 = 0), ``mass-and-displacement`` (both nonzero,
    annulus radius δ = 4 sqrt(|P0|/|P1|)), ``first-moment`` (P1 = 0, M != 0),
    ``displacement`` (P1 = 0, M = 0, P0 != 0), ``degenerate`` (all zero).
    """
    n = u1.dim
    scale = max(u0.l1_norm(), u1.l1_norm(), 1.0)
    P0, P1 = u0.mass, u1.mass
    M = u1.first_moments
    w = sphere_area(n)
    A = unit_power_integral(n - 1)
    first = float(np.sum(M**2)) * w / (4 * n) * A
    delta = None
    if not _zero(P1, scale):
        if _zero(P0, scale):
            case = "mass"
            mass = P1**2 * w / 256 * unit_power_integral(n + 3)
        else:
            case = "mass-and-displacement"
            delta = 4 * math.sqrt(abs(P0) / abs(P1))
            via_p0 = w / 4 * unit_power_integral(n - 1, delta, 2 * delta) * P0**2
            via_p1 = w / 1024 * unit_power_integral(n + 3, delta, 2 * delta) * P1**2
            mass = max(via_p0, via_p1)
    else:
        mass = P0**2 * w / 4 * A
        if not _zero(first, scale**2):
            case = "first-moment"
        elif not _zero(P0, scale):
            case = "displacement"
        else:
            case = "degenerate"
    return CaseSplitReport(float(P0), float(P1), tuple(float(m) for m in M), case, delta,
                           math.sqrt(first + mass))


@dataclass
class PincerReport:
    cases: CaseSplitReport
    t: tuple
    gaps: tuple
    scaled: tuple  # gap * t^(n/4)
    ratios: tuple  # gap / (data_size (1+t)^(-n/4))
    fit: RateFit | None


def thm34_pincer(u0: Datum, u1: Datum, t_values, grid_base: float = 256.0) -> PincerReport:
    """Lower and upper sides of the leading-term optimality on a t-grid."""
    n = u1.dim
    rep = case_split(u0, u1)
    size = data_size(u0, u1)
    gaps, scaled, ratios = [], [], []
    for t in sorted(t_values):
        gap = leading_term_gap(u0, u1, t, default_grid(n, t, u0, u1, base=grid_base))
        gaps.append(gap)
        scaled.append(gap * t ** (n / 4))
        ratios.append(gap / (size * (1 + t) ** (-n / 4)))
    rep.measured_constant = min(scaled)
    ts = tuple(sorted(float(t) for t in t_values))
    fit = fit_rate(ts, gaps) if len(ts) >= 4 and ts[-1] / ts[0] >= 100 else None
    return PincerReport(rep, ts, tuple(gaps), tuple(scaled), tuple(ratios), fit)


@dataclass
class SandwichReport:
    t: tuple
    norms: tuple
    normalized: tuple  # norm / sqrt(t), / sqrt(log t), or raw
    fit: RateFit
    lower_constant: float  # min normalized / |P1|
    upper_constant: float  # max normalized


def thm33_sandwich(u0: Datum, u1: Datum, t_values) -> SandwichReport:
    """``‖û(t)‖₂`` on a t-grid with the dimension's normalisation and growth fit."""
    n = u1.dim
    ts = np.array(sorted(t_values), dtype=float)
    norms = np.array([solution_norm(u0, u1, t).norm for t in ts])
    if n == 1:
        normalized = norms / np.sqrt(ts)
        fit = fit_rate(ts, norms, "log-log")
    elif n == 2:
        normalized = norms / np.sqrt(np.log(ts))
        fit = fit_rate(ts, norms**2, "log-linear")
    else:
        normalized = norms * ts ** (n / 4 - 0.5)
        fit = fit_rate(ts, norms, "log-log")
    P1 = abs(u1.mass)
    lower = float(normalized.min() / P1) if P1 > 0 else float("nan")
    return SandwichReport(tuple(ts.tolist()), tuple(norms.tolist()), tuple(normalized.tolist()), fit,
                          lower, float(normalized.max()))


# ---------------------------------------------------------------------------
# the squared-norm identity used in the optimality argument


def leading_combination(u0: Datum, u1: Datum, t: float):
    """Integrand-valued ``e_1^0 m[u1]^1 + e_1^1 m[u1]^0 + e_0^0 m[u0]^0`` as ``g(r, omega)``."""
    m1 = u1.moments(1)
    P0 = u0.mass

    def g(r, w):
        e1 = expansion_terms(1, 1, t, _cols(r))
        e0 = expansion_terms(0, 0, t, _cols(r))[0]
        return (e1[0][:, None] * np.asarray(r) * m1.evaluate(1, w)[None, :]
                + e1[1][:, None] * m1.evaluate(0, w)[None, :]
                + P0 * e0[:, None])

    return g


def identity_52(u0: Datum, u1: Datum, t: float, grid: Grid | None = None):
    """The squared ball norm of :func:`leading_combination` computed two ways.

    Returns ``(direct, decomposed, cross)`` where ``cross`` lists the
    off-diagonal integrals ``∫ e^{-t|ξ|²}|sin(t|ξ|)/|ξ||² ξ_j ξ_k`` (j < k).
    """
    n = u1.dim
    grid = grid or Grid.for_oscillation(n, t, mode="tensor")
    g = leading_combination(u0, u1, t)
    direct = integrate_shell(lambda r, w: np.abs(g(r, w)) ** 2, grid, 0.0, 1.0, decay=t).value
    M = u1.first_moments
    P0, P1 = u0.mass, u1.mass

    def weight(r, w, j, k):
        return np.exp(-t * r * r) * _sinc_t(t, r) ** 2 * (r * w[None, :, j]) * (r * w[None, :, k])

    diag = [integrate_shell(lambda r, w, j=j: weight(r, w, j, j), grid, 0.0, 1.0, decay=t).value for j in range(n)]
    cross = {}
    for j in range(n):
        for k in range(j + 1, n):
            cross[(j, k)] = integrate_shell(lambda r, w, j=j, k=k: weight(r, w, j, k), grid, 0.0, 1.0, decay=t).value
    last = integrate_shell(
        lambda r, w: np.exp(-t * r * r) * (P1 / 8 * t * r * r - P0) ** 2 * np.cos(t * r) ** 2,
        grid, 0.0, 1.0, decay=t).value
    decomposed = (sum(M[j] ** 2 * diag[j] for j in range(n))
                  + 2 * sum(M[j] * M[k] * v for (j, k), v in cross.items()) + last)
    return direct, decomposed, cross, diag
