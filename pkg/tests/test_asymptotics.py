import math

import numpy as np
import pytest

from sdwave import asymptotics as A
from sdwave.data import Datum
from sdwave.quadrature import Grid, integrate_rn, sphere_area
from sdwave.symbols import expansion_terms

TS = A.geometric_t_grid()


def test_fit_rate_examples():
    t = np.geomspace(1, 1e4, 9)
    f = A.fit_rate(t, 3 * t**-0.5)
    assert f.slope == pytest.approx(-0.5, abs=1e-12) and f.max_residual < 1e-12
    assert A.fit_rate(t, 2 * np.log(t), "log-linear").slope == pytest.approx(2.0, abs=1e-12)
    t2 = np.geomspace(10, 1e4, 6)
    assert A.fit_rate(t2, np.log(t2) ** 3, "loglog-log").slope == pytest.approx(3.0, abs=1e-12)
    assert np.allclose(f.predict(t), 3 * t**-0.5)


def test_fit_rate_rejections():
    t = np.geomspace(1, 1e4, 9)
    with pytest.raises(ValueError):
        A.fit_rate(t[:3], t[:3])
    with pytest.raises(ValueError):
        A.fit_rate(np.geomspace(1, 10, 5), np.ones(5))
    with pytest.raises(ValueError):
        A.fit_rate(t, -t)
    with pytest.raises(ValueError):
        A.fit_rate(t, t, "semilog")


def test_appendix_n3_slope():
    v = [A.appendix_growth(3, t) for t in TS]
    assert A.fit_rate(TS, v).slope == pytest.approx(-0.5, abs=0.05)


def test_profile_reduces_below_one():
    u = Datum.gaussian(2, center=[0.2, -0.1])
    p = A.ExpansionProfile.build(u, 0.7, 1)
    r = np.array([[0.3], [0.8]])
    w = np.array([[1.0, 0.0], [0.6, 0.8]])
    single = expansion_terms(1, 0, 50.0, r[:, 0])[0][:, None] * u.mass
    assert np.allclose(p(50.0, r, w), single, atol=1e-15)


def test_condition_gate():
    assert not A.condition_holds(1, 0.5) and A.condition_holds(1, 0.51)
    assert not A.condition_holds(2, 0.0) and A.condition_holds(3, 0.0)
    with pytest.raises(A.ConditionViolated):
        A.remainder_norm_thm31(Datum.gaussian(1), 0.4, 100.0)
    assert A.remainder_norm_thm31(Datum.gaussian(1), 0.4, 100.0, allow_invalid=True) > 0
    with pytest.raises(ValueError):
        A.remainder_norm_thm32(Datum.gaussian(1), -1.0, 100.0)


def test_more_terms_do_not_hurt_on_smooth_data():
    u = Datum.gaussian(3)
    assert A.remainder_norm_thm31(u, 1.0, 1e3) <= A.remainder_norm_thm31(u, 0.0, 1e3)
    assert A.remainder_norm_thm32(u, 1.0, 1e3) <= A.remainder_norm_thm32(u, 0.0, 1e3)


def test_little_o_sequences():
    u = Datum.gaussian(1)
    t = np.array([1e2, 1e3, 1e4, 1e5])
    s31 = np.array([A.remainder_norm_thm31(u, 1.0, x) for x in t]) * t ** (1 / 4)
    s32 = np.array([A.remainder_norm_thm32(u, 1.0, x) for x in t]) * t ** (3 / 4)
    assert np.all(np.diff(s31) < 0) and np.all(np.diff(s32) < 0)


def test_scaled_taylor_remainder_vanishes():
    # t^{n/4+γ/2} ‖e^{-t|ξ|²/2} (f̂ - Σ m^k)‖₂ over R, gaussian, γ = 1
    u = Datum.gaussian(1)
    ms = u.moments(1)
    vals = []
    for t in (1e2, 1e3, 1e4, 1e5):
        def f(r, w):
            xi = r[..., None] * w[None]
            return np.abs(np.exp(-t * r * r / 2) * (u.fourier(xi) - ms.total(xi))) ** 2
        vals.append(math.sqrt(integrate_rn(f, Grid(1, cutoff=8), (4 * math.pi, t)).value) * t ** (1 / 4 + 1 / 2))
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_linearity_and_zero_velocity():
    u0, u1 = Datum.gaussian(2, center=[0.3, 0]), Datum.hermite1(2, axis=2)
    g = A.leading_term_gap(u0, u1, 1e3)
    assert A.leading_term_gap(u0.scaled(2), u1.scaled(2), 1e3) == pytest.approx(2 * g, rel=1e-12)
    zero = Datum.zero(2)
    gaps = [A.leading_term_gap(u0, zero, t) for t in TS]
    assert A.fit_rate(TS, gaps).slope == pytest.approx(-0.5, abs=0.05)
    norms = [A.solution_norm(u0, zero, t).norm for t in TS]
    assert np.allclose(gaps, norms, rtol=1e-12)


def test_exterior_is_integrated_when_not_negligible():
    u = Datum.gaussian(1)
    split = A.solution_norm(u, u, 2.0)
    assert split.exterior > 0 and split.exterior_bound < 1e-10 * split.interior
    far = A.solution_norm(u, u, 1e3)
    assert far.exterior == 0 and far.exterior_bound <= 1e-14 * far.interior


def test_case_split_tags():
    n = 1
    rep = A.case_split(Datum.zero(n), Datum.gaussian(n))
    assert rep.case == "mass" and rep.delta is None
    both = A.case_split(Datum.gaussian(n, amplitude=2.0), Datum.gaussian(n))
    assert both.case == "mass-and-displacement" and both.delta == pytest.approx(4 * math.sqrt(2))
    assert A.case_split(Datum.zero(n), Datum.hermite1(n)).case == "first-moment"
    assert A.case_split(Datum.gaussian(n), Datum.zero(n)).case == "displacement"
    assert A.case_split(Datum.zero(n), Datum.zero(n)).case == "degenerate"
    assert set(A.CASES) == {"mass", "mass-and-displacement", "first-moment", "displacement", "degenerate"}


def test_mass_case_constant():
    u1 = Datum.gaussian(1)
    rep = A.thm34_pincer(Datum.zero(1), u1, [1e3, 1e4])
    B = A.unit_power_integral(4)
    c = math.sqrt(sphere_area(1) / 256 * B) * abs(u1.mass)
    assert rep.cases.lower_constant == pytest.approx(c, rel=1e-12)
    assert all(c <= s <= 4 * c for s in rep.scaled)


def test_first_moment_case_constant():
    u1 = Datum.hermite1(1)
    rep = A.thm34_pincer(Datum.zero(1), u1, [1e3, 1e4])
    c = math.sqrt(sphere_area(1) / 4 * A.unit_power_integral(0)) * abs(u1.first_moments[0])
    assert rep.cases.lower_constant == pytest.approx(c, rel=1e-12)
    assert min(rep.scaled) >= c


def test_displacement_case_constant():
    u0 = Datum.gaussian(3)
    rep = A.thm34_pincer(u0, Datum.zero(3), [1e3, 1e4])
    c = math.sqrt(sphere_area(3) / 4 * A.unit_power_integral(2)) * abs(u0.mass)
    assert rep.cases.lower_constant == pytest.approx(c, rel=1e-12)
    assert min(rep.scaled) >= c


def test_upper_bound_ratio_bounded():
    u = Datum.gaussian(1)
    ratios = [A.upper_bound_38(u, u, t)[1] for t in TS]
    assert max(ratios) / min(ratios) < 1.1


def test_sandwich_by_dimension():
    u = Datum.gaussian(1)
    s1 = A.thm33_sandwich(u, u, TS)
    assert 0 < s1.lower_constant and max(s1.normalized) / min(s1.normalized) < 1.2
    s2 = A.thm33_sandwich(Datum.gaussian(2), Datum.gaussian(2), TS)
    assert max(s2.normalized) / min(s2.normalized) < 1.5
    s3 = A.thm33_sandwich(Datum.gaussian(3), Datum.gaussian(3), TS)
    assert s3.fit.slope == pytest.approx(-0.25, abs=0.05)


def test_weighted_ball_integrals():
    for n, g in [(3, 0.0), (1, 1.0), (2, 0.5)]:
        for t in (1e3, 1e4):
            for kind in ("sin", "cos"):
                assert A.weighted_ball_integral(n, g, t, kind) > A.weighted_ball_lower(n, g, t, kind)
    with pytest.raises(ValueError):
        A.weighted_ball_integral(2, 0, 10.0, "tan")
    with pytest.raises(ValueError):
        A.weighted_ball_lower(1, 0.0, 10.0, "sin")


def test_remark_ratios_bounded():
    for kind in ("sin", "cos"):
        q = A.weighted_ball_upper_rate(3, 0.0, kind)
        r = [A.weighted_ball_integral(3, 0.0, t, kind) / (1 + t) ** q for t in TS]
        assert abs(A.fit_rate(TS, r).slope) < 0.05


def test_damping_estimate_ratio():
    ts = np.geomspace(1, 1e5, 11)
    for n in (1, 2, 3):
        r = [A.damping_term_norm_sq(n, t) / (1 + t) ** (-n / 2 - 1) for t in ts]
        assert max(r) < 10 and min(r) > 0.05


def test_identity_two_ways():
    u0, u1 = Datum.gaussian(3, center=[0.3, 0, 0]), Datum.hermite1(3, axis=2, center=[0, 0.1, -0.2])
    direct, decomposed, cross, diag = A.identity_52(u0, u1, 1e3)
    assert abs(direct - decomposed) <= 1e-8 * direct
    assert all(abs(v) < 1e-9 for v in cross.values())


def test_appendix_reference_and_brackets():
    for n in (1, 2, 3):
        for t in (1e3, 1e4):
            v = A.appendix_growth(n, t)
            lo, hi = A.appendix_bracket(n, t)
            assert lo <= v <= hi
            assert v == pytest.approx(A.appendix_reference(n, t), rel=1e-10)
    with pytest.raises(ValueError):
        A.appendix_growth(2, 5.0)
    with pytest.raises(ValueError):
        A.appendix_reference(4, 10.0)


def test_log_moment_constant():
    # against extended-precision integration
    import mpmath

    with mpmath.workdps(30):
        f = lambda r: abs(mpmath.log(r)) * r * mpmath.exp(-r * r)  # noqa: E731
        ref = float(mpmath.quad(f, [0, 1, mpmath.inf]))
    assert A.log_moment_constant() == pytest.approx(ref, rel=1e-12)
