"""Analytic initial data with closed-form transforms and moments.

Components:

* ``Gaussian``: ``A exp(-|x - μ|² / σ²)``
* ``Hermite1``: ``A (x_j - μ_j) exp(-|x - μ|² / σ²)``; zero mass, nonzero first moment

A :class:`Datum` is a sum of up to eight components (an empty sum is the zero
function). Fourier convention: ``f̂(ξ) = ∫ exp(-i x·ξ) f(x) dx``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from math import comb, factorial, floor, gamma as gamma_fn, pi, sqrt
from pathlib import Path

import numpy as np
from scipy import integrate

MAX_COMPONENTS = 8


def _gauss_moment(b: int, sigma: float) -> float:
    # ∫ y^b exp(-y²/σ²) dy over R
    if b % 2:
        return 0.0
    return sigma ** (b + 1) * gamma_fn((b + 1) / 2)


def _shifted_moment(a: int, mu: float, sigma: float, extra: int = 0) -> float:
    # ∫ x^a (x - μ)^extra exp(-(x - μ)²/σ²) dx, expanded binomially around μ
    return sum(comb(a, b) * mu ** (a - b) * _gauss_moment(b + extra, sigma) for b in range(a + 1))


def _sphere_area(n: int) -> float:
    return 2 * pi ** (n / 2) / gamma_fn(n / 2)


@dataclass(frozen=True)
class Gaussian:
    center: tuple
    sigma: float = 1.0
    amplitude: float = 1.0

    kind = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def dim(self):
        return len(self.center)

    @property
    def _scale(self):
        return self.amplitude * (self.sigma * sqrt(pi)) ** self.dim

    def fourier(self, xi):
        mu = np.asarray(self.center)
        phase = xi @ mu
        r2 = np.sum(xi * xi, axis=-1)
        return self._scale * np.exp(-1j * phase - self.sigma**2 * r2 / 4.0)

    def fourier_radial(self, r, omega):
        mu_w = omega @ np.asarray(self.center)
        return self._scale * np.exp(-1j * r * mu_w - self.sigma**2 * r * r / 4.0)

    def value(self, x):
        d = x - np.asarray(self.center)
        return self.amplitude * np.exp(-np.sum(d * d, axis=-1) / self.sigma**2)

    def moment(self, alpha):
        out = self.amplitude
        for a, mu in zip(alpha, self.center):
            out *= _shifted_moment(a, mu, self.sigma)
        return out

    def directional_moment(self, k, omega):
        # ∫ (x·ω)^k f dx: the projection onto ω is a 1-D Gaussian centred at μ·ω
        mu_w = float(np.dot(omega, self.center))
        return self.amplitude * (self.sigma * sqrt(pi)) ** (self.dim - 1) * _shifted_moment(k, mu_w, self.sigma)

    def fourier_envelope(self, r):
        return abs(self._scale) * np.exp(-self.sigma**2 * np.asarray(r) ** 2 / 4.0)

    def to_json(self):
        return {"kind": self.kind, "center": list(self.center), "sigma": self.sigma, "amplitude": self.amplitude}


@dataclass(frozen=True)
class Hermite1:
    axis: int  # 1-based, as in x_1 .. x_n
    center: tuple
    sigma: float = 1.0
    amplitude: float = 1.0

    kind = "hermite1"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not 1 <= self.axis <= len(self.center):
            raise ValueError(f"axis must be in 1..{len(self.center)}")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def dim(self):
        return len(self.center)

    @property
    def _scale(self):
        return self.amplitude * (self.sigma * sqrt(pi)) ** self.dim

    def fourier(self, xi):
        mu = np.asarray(self.center)
        r2 = np.sum(xi * xi, axis=-1)
        xj = xi[..., self.axis - 1]
        return self._scale * (-0.5j * self.sigma**2 * xj) * np.exp(-1j * (xi @ mu) - self.sigma**2 * r2 / 4.0)

    def fourier_radial(self, r, omega):
        mu_w = omega @ np.asarray(self.center)
        wj = omega[..., self.axis - 1]
        return self._scale * (-0.5j * self.sigma**2 * r * wj) * np.exp(-1j * r * mu_w - self.sigma**2 * r * r / 4.0)

    def value(self, x):
        d = x - np.asarray(self.center)
        return self.amplitude * d[..., self.axis - 1] * np.exp(-np.sum(d * d, axis=-1) / self.sigma**2)

    def moment(self, alpha):
        out = self.amplitude
        for d, (a, mu) in enumerate(zip(alpha, self.center)):
            out *= _shifted_moment(a, mu, self.sigma, extra=1 if d == self.axis - 1 else 0)
        return out

    def directional_moment(self, k, omega):
        # x_j - μ_j = (y - μ·ω) ω_j + (orthogonal part, which integrates to zero)
        mu_w = float(np.dot(omega, self.center))
        wj = float(omega[self.axis - 1])
        return (self.amplitude * (self.sigma * sqrt(pi)) ** (self.dim - 1) * wj
                * _shifted_moment(k, mu_w, self.sigma, extra=1))

    def fourier_envelope(self, r):
        r = np.asarray(r)
        return abs(self._scale) * 0.5 * self.sigma**2 * r * np.exp(-self.sigma**2 * r * r / 4.0)

    def to_json(self):
        return {"kind": self.kind, "axis": self.axis, "center": list(self.center),
                "sigma": self.sigma, "amplitude": self.amplitude}


def multi_indices(n: int, k: int):
    """All multi-indices of length ``n`` and total degree ``k`` in lexicographic order."""
    return [a for a in itertools.product(range(k + 1), repeat=n) if sum(a) == k][::-1]


@dataclass(frozen=True)
class MomentSet:
    """Coefficients of the homogeneous Taylor pieces of ``f̂`` at the origin.

    ``coefficients[α] = ((-1)^|α| / α!) (∫ x^α f) i^|α|`` so that
    ``m^k(ξ) = Σ_{|α|=k} coefficients[α] ξ^α``.
    """

    dim: int
    gamma_floor: int
    coefficients: dict = field(repr=False)

    def evaluate(self, k: int, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for alpha in multi_indices(self.dim, k):
            c = self.coefficients[alpha]
            if c == 0:
                continue
            term = np.ones(xi.shape[:-1])
            for d, a in enumerate(alpha):
                if a:
                    term = term * xi[..., d] ** a
            out = out + c * term
        return out

    def evaluate_radial(self, k: int, r, omega):
        """``m^k(r ω) = r^k m^k(ω)`` with ``r`` and ``omega`` broadcasting."""
        return np.asarray(r) ** k * self.evaluate(k, omega)

    def total(self, xi):
        return sum(self.evaluate(k, xi) for k in range(self.gamma_floor + 1))


@dataclass(frozen=True)
class Datum:
    dim: int
    components: tuple = ()

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dim}")
        comps = tuple(self.components)
        if len(comps) > MAX_COMPONENTS:
            raise ValueError(f"at most {MAX_COMPONENTS} components")
        for c in comps:
            if c.dim != self.dim:
                raise ValueError("component dimension does not match the datum")
        object.__setattr__(self, "components", comps)

    # constructors -------------------------------------------------------
    @classmethod
    def gaussian(cls, dim, center=None, sigma=1.0, amplitude=1.0):
        center = (0.0,) * dim if center is None else tuple(center)
        return cls(dim, (Gaussian(center, sigma, amplitude),))

    @classmethod
    def hermite1(cls, dim, axis=1, center=None, sigma=1.0, amplitude=1.0):
        center = (0.0,) * dim if center is None else tuple(center)
        return cls(dim, (Hermite1(axis, center, sigma, amplitude),))

    @classmethod
    def zero(cls, dim):
        return cls(dim, ())

    @classmethod
    def mixture(cls, dim, parts):
        comps = []
        for p in parts:
            comps.extend(p.components if isinstance(p, Datum) else [p])
        return cls(dim, tuple(comps))

    def scaled(self, factor):
        comps = tuple(replace(c, amplitude=c.amplitude * factor) for c in self.components)
        return Datum(self.dim, comps)

    @property
    def kind(self):
        if len(self.components) == 1:
            return self.components[0].kind
        return "mixture"

    @property
    def is_zero(self):
        return all(c.amplitude == 0 for c in self.components)

    # transforms and moments ---------------------------------------------
    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for c in self.components:
            out = out + c.fourier(xi)
        return out

    def fourier_radial(self, r, omega):
        """``f̂(r ω)`` with ``r`` of shape ``(..., 1)``-broadcastable against ``omega[..., :n]``."""
        out = 0.0
        for c in self.components:
            out = out + c.fourier_radial(r, omega)
        if not self.components:
            out = np.zeros(np.broadcast_shapes(np.shape(r), np.shape(omega)[:-1]), dtype=complex)
        return out

    def fourier_envelope(self, r):
        """Upper bound on ``|f̂|`` over the sphere of radius ``r``."""
        out = np.zeros(np.shape(r))
        for c in self.components:
            out = out + c.fourier_envelope(r)
        return out

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1])
        for c in self.components:
            out = out + c.value(x)
        return out

    def moment(self, alpha):
        """``∫ x^α f(x) dx``."""
        if len(alpha) != self.dim:
            raise ValueError("multi-index length must equal the dimension")
        return float(sum(c.moment(tuple(alpha)) for c in self.components))

    @property
    def mass(self):
        return self.moment((0,) * self.dim)

    @property
    def first_moments(self):
        return np.array([self.moment(tuple(int(d == j) for d in range(self.dim))) for j in range(self.dim)])

    def moments(self, up_to: int) -> MomentSet:
        if up_to < 0:
            raise ValueError("up_to must be >= 0")
        coeffs = {}
        for k in range(up_to + 1):
            for alpha in multi_indices(self.dim, k):
                afact = 1
                for a in alpha:
                    afact *= factorial(a)
                coeffs[alpha] = ((-1) ** k / afact) * self.moment(alpha) * (1j**k)
        return MomentSet(self.dim, up_to, coeffs)

    def directional_moment(self, k, omega):
        return sum(c.directional_moment(k, omega) for c in self.components)

    def _length_scale(self):
        if not self.components:
            return 0.0
        return max(np.linalg.norm(c.center) + c.sigma for c in self.components)

    def taylor_remainder(self, xi, gamma: float):
        """``f̂(ξ) - Σ_{k<=[γ]} m^k(ξ)`` for a single point ``ξ``.

        Near the origin the tail ``Σ_{k>[γ]} m^k(ξ)`` is summed directly (no
        cancellation); elsewhere the truncated sum is subtracted from ``f̂``.
        """
        if gamma < 0:
            raise ValueError("gamma must be >= 0")
        K = floor(gamma)
        xi = np.asarray(xi, dtype=float).reshape(self.dim)
        s = float(np.linalg.norm(xi))
        if s == 0.0:
            return 0j
        if s * self._length_scale() < 0.5:
            omega = xi / s
            total = 0j
            for k in range(K + 1, K + 60):
                term = (-1j * s) ** k / factorial(k) * self.directional_moment(k, omega)
                total += term
                if k > K + 4 and abs(term) < 1e-18 * max(abs(total), 1e-300):
                    break
            return complex(total)
        ms = self.moments(K)
        return complex(self.fourier(xi) - ms.total(xi))

    # norms --------------------------------------------------------------
    def _single_centered(self):
        return len(self.components) == 1 and not any(self.components[0].center)

    def weighted_norm(self, gamma: float) -> float:
        """``‖f‖_{1,γ} = ∫ (1 + |x|)^γ |f(x)| dx``."""
        if gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not self.components:
            return 0.0
        n = self.dim
        if self._single_centered():
            c = self.components[0]
            if c.kind == "gaussian":
                ang, extra = _sphere_area(n), 0
            else:
                # ∫_{S^{n-1}} |ω_j| dS
                ang, extra = 2 * pi ** ((n - 1) / 2) / gamma_fn((n + 1) / 2), 1
            val, _ = integrate.quad(lambda r: (1 + r) ** gamma * r ** (n - 1 + extra) * np.exp(-r * r / c.sigma**2),
                                    0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
            return abs(c.amplitude) * ang * val
        return _xspace_integral(self, lambda x: (1 + np.linalg.norm(x, axis=-1)) ** gamma * np.abs(self.value(x)))

    def l1_norm(self) -> float:
        return self.weighted_norm(0.0)

    def l2_norm(self) -> float:
        if not self.components:
            return 0.0
        if len(self.components) == 1 and self.components[0].kind == "gaussian":
            c = self.components[0]
            return abs(c.amplitude) * (c.sigma * sqrt(pi / 2)) ** (self.dim / 2)
        return sqrt(_xspace_integral(self, lambda x: self.value(x) ** 2))

    # serialization ------------------------------------------------------
    def to_json(self):
        if len(self.components) == 1:
            return self.components[0].to_json()
        return {"kind": "mixture", "components": [c.to_json() for c in self.components]}


def _xspace_integral(datum: Datum, fn) -> float:
    from .quadrature import Grid, integrate_rn

    reach = max(np.linalg.norm(c.center) + 9.0 * c.sigma for c in datum.components)
    angular = 64 if datum.dim > 1 else 0
    grid = Grid(datum.dim, mode="tensor", nodes_per_unit=64.0 / min(c.sigma for c in datum.components),
                cutoff=reach, angular=angular)
    return integrate_rn(lambda r, w: fn(r[..., None] * w), grid).value


def _component_from_json(spec: dict, dim: int | None):
    kind = spec.get("kind", "gaussian")
    center = spec.get("center")
    if center is None:
        if dim is None:
            raise ValueError("datum needs a center or an explicit dimension")
        center = [0.0] * dim
    if dim is not None and len(center) != dim:
        raise ValueError(f"center {center} does not match dimension {dim}")
    sigma = float(spec.get("sigma", 1.0))
    amp = float(spec.get("amplitude", 1.0))
    if kind == "gaussian":
        return Gaussian(tuple(center), sigma, amp)
    if kind == "hermite1":
        return Hermite1(int(spec.get("axis", 1)), tuple(center), sigma, amp)
    raise ValueError(f"unknown datum kind {kind!r}")


def datum_from_json(spec, dim: int | None = None) -> Datum:
    """Build a :class:`Datum` from a JSON object, a list of components, a JSON string or a path."""
    if isinstance(spec, (str, Path)):
        text = str(spec)
        if not text.lstrip().startswith(("{", "[")):
            text = Path(text).read_text()
        spec = json.loads(text)
    if isinstance(spec, dict) and spec.get("kind") == "mixture":
        spec = spec.get("components", [])
    if isinstance(spec, list):
        comps = [_component_from_json(s, dim) for s in spec]
    else:
        comps = [_component_from_json(spec, dim)]
    if dim is None:
        if not comps:
            raise ValueError("empty mixture needs an explicit dimension")
        dim = comps[0].dim
    return Datum(dim, tuple(comps))
