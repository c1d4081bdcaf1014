import json
import math

import numpy as np
import pytest
from scipy import integrate

from sdwave.data import Datum, datum_from_json, multi_indices


def quad1(f, a=-12, b=12):
    return integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)[0]


def test_gaussian_moments_1d():
    ms = Datum.gaussian(1).moments(2)
    assert ms.evaluate(0, np.array([0.3])) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert ms.evaluate(1, np.array([0.3])) == 0
    # ∫x² e^{-x²} by brute-force quadrature
    second = quad1(lambda x: x * x * math.exp(-x * x))
    assert abs(second - math.sqrt(math.pi) / 2) < 1e-10
    assert ms.coefficients[(2,)] == pytest.approx(-second / 2, rel=1e-10)


def test_hermite_moments_2d():
    d = Datum.hermite1(2, axis=1)
    ms = d.moments(1)
    xi = np.array([0.4, -0.9])
    assert ms.evaluate(0, xi) == 0
    w, _ = integrate.dblquad(lambda y, x: x * x * math.exp(-x * x - y * y), -10, 10, -10, 10, epsabs=1e-12)
    assert abs(ms.evaluate(1, xi) - (-1j * xi[0] * w)) < 1e-8
    assert d.mass == 0.0 and d.first_moments[0] != 0 and d.first_moments[1] == 0


def test_moment_set_symmetries():
    d = Datum.mixture(2, [Datum.gaussian(2, center=[0.3, -0.2]), Datum.hermite1(2, axis=2, center=[0.1, 0.4])])
    ms = d.moments(3)
    xi = np.array([0.7, -0.2])
    for k in range(4):
        assert ms.evaluate(k, -xi) == pytest.approx(np.conj(ms.evaluate(k, xi)), abs=1e-14)
    even = Datum.gaussian(2, center=[0.0, 0.5]).moments(3)
    for alpha, c in even.coefficients.items():
        if alpha[0] % 2:
            assert c == 0


def test_fourier_transforms():
    g = Datum.gaussian(1)
    for x in (0.0, 0.5, 2.0):
        assert g.fourier(np.array([x])) == pytest.approx(math.sqrt(math.pi) * math.exp(-x * x / 4), rel=1e-14)
    for d in (Datum.gaussian(3, center=[0.2, 0, -1], sigma=0.8, amplitude=2.0), Datum.hermite1(2, axis=2)):
        assert abs(d.fourier(np.zeros(d.dim)) - d.mass) <= 1e-12 * max(1, abs(d.mass))
    h = Datum.hermite1(2, axis=1)
    xi = np.array([0.7, 0.0])
    val = h.fourier(xi)
    # quadrature oracle of ∫ e^{-i x·ξ} f
    re, _ = integrate.dblquad(lambda y, x: math.cos(0.7 * x) * h.value(np.array([x, y])), -10, 10, -10, 10)
    im, _ = integrate.dblquad(lambda y, x: -math.sin(0.7 * x) * h.value(np.array([x, y])), -10, 10, -10, 10)
    assert abs(val - (re + 1j * im)) < 1e-8
    assert abs(val.real) < 1e-15
    assert h.fourier(-xi) == pytest.approx(-val)


def test_fourier_radial_matches_cartesian():
    d = Datum.mixture(3, [Datum.gaussian(3, center=[0.3, 0, 0.1]), Datum.hermite1(3, axis=3, sigma=0.6)])
    omega = np.array([[0.0, 0.6, 0.8], [1.0, 0.0, 0.0]])
    r = np.array([[0.2], [1.3]])
    got = d.fourier_radial(r, omega)
    want = np.array([[d.fourier(ri * w) for w in omega] for ri in r[:, 0]])
    assert np.allclose(got, want, atol=1e-15)


def test_moments_match_derivatives_of_transform():
    # with f̂ = ∫ e^{-ix·ξ} f:  i^|α| ∂^α f̂(0) = ∫ x^α f
    d = Datum.gaussian(2, center=[0.4, -0.3], sigma=0.9)
    h = 1e-3
    e = np.eye(2)
    f = d.fourier
    for j in range(2):
        d1 = (f(h * e[j]) - f(-h * e[j])) / (2 * h)
        assert abs(1j * d1 - d.moment(tuple(int(i == j) for i in range(2)))) < 1e-5
        d2 = (f(h * e[j]) - 2 * f(np.zeros(2)) + f(-h * e[j])) / h**2
        assert abs(1j**2 * d2 - d.moment(tuple(2 * int(i == j) for i in range(2)))) < 1e-5


def test_taylor_remainder():
    g = Datum.gaussian(1)
    assert g.taylor_remainder(np.array([0.0]), 1.0) == 0
    xs = np.linspace(-1, 1, 401)
    xs = xs[xs != 0]
    ratios = [abs(g.taylor_remainder(np.array([x]), 1.0)) / abs(x) for x in xs]
    assert np.isfinite(max(ratios)) and max(ratios) > 0
    for gamma in (0.0, 1.0, 2.0):
        s = 2.0 ** -np.arange(5, 16)
        v = [abs(Datum.gaussian(1, center=[0.3]).taylor_remainder(np.array([x]), gamma)) for x in s]
        slope = np.polyfit(np.log(s), np.log(v), 1)[0]
        assert abs(slope - (math.floor(gamma) + 1)) < 0.05


def test_weighted_norms():
    g = Datum.gaussian(1)
    assert g.l1_norm() == pytest.approx(math.sqrt(math.pi), rel=1e-10)
    exact = math.sqrt(math.pi) + 1.0  # ∫(1+|x|)e^{-x²}
    assert g.weighted_norm(1.0) == pytest.approx(exact, rel=1e-10)
    vals = [Datum.gaussian(2, center=[0.5, 0.0]).weighted_norm(gm) for gm in (0, 0.5, 1, 2)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert g.l2_norm() == pytest.approx(quad1(lambda x: math.exp(-2 * x * x)) ** 0.5, rel=1e-12)
    h = Datum.hermite1(1)
    assert h.l1_norm() == pytest.approx(1.0, rel=1e-10)  # ∫|x|e^{-x²}
    mix = Datum.mixture(1, [Datum.gaussian(1, center=[1.0]), Datum.gaussian(1, center=[-1.0], amplitude=-1.0)])
    assert mix.l1_norm() == pytest.approx(quad1(lambda x: abs(mix.value(np.array([x])))), rel=1e-8)


def test_scaled_and_zero():
    d = Datum.gaussian(2, center=[0.1, 0.2])
    assert d.scaled(3.0).mass == pytest.approx(3 * d.mass)
    z = Datum.zero(3)
    assert z.is_zero and z.mass == 0 and z.l2_norm() == 0
    assert z.fourier_radial(np.ones((2, 1)), np.eye(3)).shape == (2, 3)


def test_json_round_trip_and_errors(tmp_path):
    d = Datum.mixture(2, [Datum.gaussian(2, center=[1, 0], sigma=0.5), Datum.hermite1(2, axis=2)])
    again = datum_from_json(json.dumps(d.to_json()))
    assert again == d
    p = tmp_path / "u.json"
    p.write_text(json.dumps({"kind": "gaussian", "center": [0, 0, 0]}))
    assert datum_from_json(str(p)).dim == 3
    assert datum_from_json({"kind": "gaussian"}, dim=2).dim == 2
    with pytest.raises(ValueError):
        datum_from_json({"kind": "bump"}, dim=1)
    with pytest.raises(ValueError):
        datum_from_json({"kind": "gaussian", "center": [0, 0]}, dim=3)
    with pytest.raises(ValueError):
        Datum.gaussian(4)
    with pytest.raises(ValueError):
        Datum.mixture(1, [Datum.gaussian(1)] * 9)
    with pytest.raises(ValueError):
        Datum.hermite1(2, axis=3)


def test_multi_indices():
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(multi_indices(3, 3)) == 10
