"""Verification units grouped into the ``symbols``, ``rates`` and ``bounds`` suites.

A unit takes a :class:`RunConfig` and returns a list of records. Units are pure
functions of the configuration, so running them in worker processes and
collecting results in declaration order gives identical reports for any
worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from math import floor

import numpy as np

from . import asymptotics as A
from ._fallback import BRANCH_EPS
from .config import RunConfig
from .data import Datum
from .ode import integrate_modes
from .quadrature import Grid
from .report import CONDITION_NOTE, Record, matches, status
from .symbols import eval_e_ik, solution_hat, symbols

SLOPE_TOL = 0.05
ODE_TOL = 1e-7
BRANCH_TOL = 1e-7
CLOSED_FORM_TOL = 1e-10
ORACLE_REL = 0.15
IDENTITY_REL = 1e-8
CROSS_TOL = 1e-9
RICHARDSON_REL = 1e-7
LOWER_TIMES = (1e3, 1e4)
PROBE_T = 1e3
SEED = 20240611


def _series(t, v, slope=None):
    d = {"series": {"t": [float(x) for x in t], "value": [float(x) for x in v]}}
    if slope is not None:
        d["slope"] = float(slope)
    return d


# -- symbols -------------------------------------------------------------------


def ode_oracle_check(count=500, seed=SEED):
    """Max deviation between the closed-form mode solution and RK4 on random modes."""
    rng = np.random.default_rng(seed)
    t = 20.0 * (1.0 - rng.random(count))
    r = 4.0 * (1.0 - rng.random(count))
    a = rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)
    b = rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)
    ode, _ = integrate_modes(r, t, a, b)
    exact = np.array([solution_hat(ti, ri, ai, bi) for ti, ri, ai, bi in zip(t, r, a, b)])
    return float(np.max(np.abs(ode - exact)))


def branch_jump(times=(0.1, 1.0, 5.0, 20.0, 50.0), delta=1e-10):
    """Largest jump of ``(E0, E1)`` across each switch point between evaluation branches."""
    worst = 0.0
    for t in times:
        for b in (2.0 - BRANCH_EPS, 2.0, 2.0 + BRANCH_EPS):
            lo = np.array(symbols(t, b - delta))
            hi = np.array(symbols(t, b + delta))
            worst = max(worst, float(np.max(np.abs(hi - lo))))
    return worst


def closed_form_error(size=20):
    t = np.geomspace(0.1, 1e3, size)[:, None]
    r = np.linspace(0.05, 1.0, size)[None, :]
    g = np.exp(-t * r * r / 2)
    refs = {
        (1, 0): g * np.sin(t * r) / r,
        (0, 0): g * np.cos(t * r),
        (1, 1): -t * r * r / 8 * g * np.cos(t * r),
    }
    worst = 0.0
    for (i, k), ref in refs.items():
        got = np.array([[eval_e_ik(i, k, float(tt), float(rr)) for rr in r[0]] for tt in t[:, 0]])
        worst = max(worst, float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref)))))
    return worst


def unit_symbols_ode(cfg: RunConfig):
    err = ode_oracle_check()
    return [Record("symbols.ode_oracle", status(err <= ODE_TOL), {"max_abs_error": err, "modes": 500},
                   {"abs": ODE_TOL})]


def unit_symbols_branch(cfg: RunConfig):
    jump = branch_jump()
    return [Record("symbols.branch_continuity", status(jump <= BRANCH_TOL), {"max_jump": jump},
                   {"abs": BRANCH_TOL})]


def unit_symbols_closed(cfg: RunConfig):
    err = closed_form_error()
    return [Record("symbols.closed_forms", status(err <= CLOSED_FORM_TOL), {"max_error": err, "grid": "20x20"},
                   {"abs_or_rel": CLOSED_FORM_TOL})]


# -- rates -----------------------------------------------------------------------


def thm31_expected(n, gamma):
    return -(n / 4 + gamma / 2 - 0.5)


def thm32_expected(n, gamma):
    return -(n / 4 + gamma / 2)


def _strictly_decreasing(v):
    return bool(np.all(np.diff(np.asarray(v)) < 0))


def unit_thm31(cfg: RunConfig):
    n, gamma = cfg.dim, cfg.gamma
    if not A.condition_holds(n, gamma):
        return [Record("thm31.condition", "not applicable", {"dim": n, "gamma": gamma}, None, CONDITION_NOTE)]
    _, u1 = cfg.data
    ts = cfg.t_grid
    v = [A.remainder_norm_thm31(u1, gamma, t, A.default_grid(n, t, u1, base=cfg.grid_base)) for t in ts]
    fit = A.fit_rate(ts, v)
    want = thm31_expected(n, gamma)
    scaled = np.asarray(v) * ts ** (-want)
    more = A.remainder_norm_thm31(u1, floor(gamma) + 1, PROBE_T)
    base = A.remainder_norm_thm31(u1, gamma, PROBE_T)
    return [
        Record("thm31.slope", status(abs(fit.slope - want) <= SLOPE_TOL),
               {**_series(ts, v, fit.slope), "expected": want, "max_residual": fit.max_residual}, {"slope": SLOPE_TOL}),
        Record("thm31.little_o", status(_strictly_decreasing(scaled)), {"scaled": scaled.tolist()},
               {"strictly_decreasing": True}),
        Record("thm31.gamma_monotone", "observe",
               {"t": PROBE_T, "gamma": gamma, "norm": base, "gamma_next": floor(gamma) + 1, "norm_next": more,
                "improved": bool(more <= base)}),
    ]


def unit_thm32(cfg: RunConfig):
    n, gamma = cfg.dim, cfg.gamma
    u0, _ = cfg.data
    ts = cfg.t_grid
    v = [A.remainder_norm_thm32(u0, gamma, t, A.default_grid(n, t, u0, base=cfg.grid_base)) for t in ts]
    fit = A.fit_rate(ts, v)
    want = thm32_expected(n, gamma)
    scaled = np.asarray(v) * ts ** (-want)
    return [
        Record("thm32.slope", status(abs(fit.slope - want) <= SLOPE_TOL),
               {**_series(ts, v, fit.slope), "expected": want, "max_residual": fit.max_residual}, {"slope": SLOPE_TOL}),
        Record("thm32.little_o", status(_strictly_decreasing(scaled)), {"scaled": scaled.tolist()},
               {"strictly_decreasing": True}),
    ]


# -- bounds ------------------------------------------------------------------------


def sandwich_verdict(n, rep: A.SandwichReport):
    """Bracket positivity plus the dimension's growth law within the slope tolerance."""
    positive = rep.lower_constant > 0 and math.isfinite(rep.upper_constant)
    if n == 1:
        return positive and abs(rep.fit.slope - 0.5) <= SLOPE_TOL
    if n == 2:
        # norm² is affine in log t with a positive coefficient
        return positive and rep.fit.slope > 0
    return positive and abs(rep.fit.slope - (-n / 4 + 0.5)) <= SLOPE_TOL


def unit_thm33(cfg: RunConfig):
    u0, u1 = cfg.data
    rep = A.thm33_sandwich(u0, u1, cfg.t_grid)
    ok = sandwich_verdict(cfg.dim, rep)
    measured = {**_series(rep.t, rep.norms, rep.fit.slope), "normalized": list(rep.normalized),
                "c1": rep.lower_constant, "c2": rep.upper_constant, "fit_transform": rep.fit.transform}
    if A.case_split(u0, u1).case in ("first-moment", "displacement", "degenerate"):
        return [Record("thm33.sandwich", "not applicable", measured, {"slope": SLOPE_TOL},
                       "P1 = 0: the lower half carries no information")]
    return [Record("thm33.sandwich", status(ok), measured, {"slope": SLOPE_TOL})]


def standard_cases(n):
    return {
        "mass": (Datum.zero(n), Datum.gaussian(n)),
        "first-moment": (Datum.zero(n), Datum.hermite1(n)),
        "displacement": (Datum.gaussian(n), Datum.zero(n)),
    }


def pincer_record(cid, u0, u1, times, base):
    rep = A.thm34_pincer(u0, u1, times, grid_base=base)
    c = rep.cases
    ok = c.case != "degenerate" and all(s >= c.lower_constant for s in rep.scaled)
    measured = {**c.to_json(), "t": list(rep.t), "scaled_gap": list(rep.scaled),
                "margin": min(rep.scaled) / c.lower_constant if c.lower_constant > 0 else None}
    return Record(cid, status(ok), measured, {"lower_bound": "gap*t^(n/4) >= lower_constant"})


def unit_thm34_lower(cfg: RunConfig):
    u0, u1 = cfg.data
    out = [pincer_record("thm34.lower.config", u0, u1, LOWER_TIMES, cfg.grid_base)]
    for name, (a, b) in standard_cases(cfg.dim).items():
        out.append(pincer_record(f"thm34.lower.{name}", a, b, LOWER_TIMES, cfg.grid_base))
    return out


def ratio_growth(ts, ratios):
    """Log-log slope of a ratio that should stay bounded."""
    return A.fit_rate(ts, ratios).slope


def unit_thm34_upper(cfg: RunConfig):
    u0, u1 = cfg.data
    ts = cfg.t_grid
    ratios = [A.upper_bound_38(u0, u1, t, A.default_grid(cfg.dim, t, u0, u1, base=cfg.grid_base))[1] for t in ts]
    growth = ratio_growth(ts, ratios)
    return [Record("thm34.upper", status(growth <= SLOPE_TOL),
                   {**_series(ts, ratios, growth), "sup_ratio": max(ratios)}, {"ratio_slope_max": SLOPE_TOL})]


def lemma43_values(n, gamma, times=LOWER_TIMES):
    rows = []
    for t in times:
        for kind in ("sin", "cos"):
            rows.append((t, kind, A.weighted_ball_integral(n, gamma, t, kind), A.weighted_ball_lower(n, gamma, t, kind)))
    return rows


def lemma43_applicable(n, gamma):
    return 2 * gamma + n - 3 > -1


def unit_lemma43(cfg: RunConfig):
    n, gamma = cfg.dim, cfg.gamma
    if not lemma43_applicable(n, gamma):
        return [Record("lemma43.lower", "not applicable", {"dim": n, "gamma": gamma}, None,
                       "weight |ξ|^(2γ+n-3) is not integrable at the origin")]
    rows = lemma43_values(n, gamma)
    ok = all(v > lo for _, _, v, lo in rows)
    return [Record("lemma43.lower", status(ok),
                   {"rows": [{"t": t, "kind": k, "value": v, "lower": lo} for t, k, v, lo in rows]},
                   {"strict": True})]


def unit_remark42(cfg: RunConfig):
    n, gamma = cfg.dim, cfg.gamma
    if not lemma43_applicable(n, gamma):
        return [Record("remark42.upper", "not applicable", {"dim": n, "gamma": gamma})]
    ts = cfg.t_grid
    out = {}
    ok = True
    for kind in ("sin", "cos"):
        q = A.weighted_ball_upper_rate(n, gamma, kind)
        ratios = [A.weighted_ball_integral(n, gamma, t, kind) / (1 + t) ** q for t in ts]
        g = ratio_growth(ts, ratios)
        ok &= g <= SLOPE_TOL
        out[kind] = {"ratios": ratios, "ratio_slope": g, "sup": max(ratios)}
    return [Record("remark42.upper", status(ok), out, {"ratio_slope_max": SLOPE_TOL})]


def unit_est51(cfg: RunConfig):
    n = cfg.dim
    ts = np.geomspace(1.0, cfg.t_max, 11)
    ratios = [A.damping_term_norm_sq(n, t) / (1 + t) ** (-n / 2 - 1) for t in ts]
    g = ratio_growth(ts, ratios)
    return [Record("est51.ratio", status(g <= SLOPE_TOL), {**_series(ts, ratios, g), "sup_ratio": max(ratios)},
                   {"ratio_slope_max": SLOPE_TOL})]


def unit_id52(cfg: RunConfig):
    u0, u1 = cfg.data
    direct, decomposed, cross, diag = A.identity_52(u0, u1, PROBE_T)
    rel = abs(direct - decomposed) / abs(direct)
    worst = max([abs(v) for v in cross.values()], default=0.0)
    spread = (max(diag) - min(diag)) / max(diag)
    return [
        Record("id52.identity", status(rel <= IDENTITY_REL),
               {"t": PROBE_T, "direct": direct, "decomposed": decomposed, "rel_diff": rel}, {"rel": IDENTITY_REL}),
        Record("id52.cross", status(worst <= CROSS_TOL),
               {"cross": {f"{j},{k}": v for (j, k), v in cross.items()}, "max_abs": worst,
                "diagonal_spread": spread}, {"abs": CROSS_TOL}),
    ]


APPENDIX_TARGET = {1: math.pi, 2: math.pi / 2, 3: math.pi**1.5}


def appendix_check(n, ts):
    ts = np.asarray([t for t in ts if t >= 10])
    vals = [A.appendix_growth(n, t) for t in ts]
    refs = [A.appendix_reference(n, t) for t in ts]
    top = ts[-1]
    if n == 1:
        asym = vals[-1] / top
    elif n == 2:
        asym = A.fit_rate(ts, vals, "log-linear").slope
    else:
        asym = vals[-1] * math.sqrt(top)
    target = APPENDIX_TARGET[n]
    brackets = [A.appendix_bracket(n, t) for t in ts]
    in_bracket = [bool(lo <= v <= hi) for t, v, (lo, hi) in zip(ts, vals, brackets) if t >= 1e3]
    ok = abs(asym - target) <= ORACLE_REL * target and all(in_bracket) and len(in_bracket) > 0
    measured = {**_series(ts, vals), "reference": refs, "asymptotic_constant": asym, "target": target,
                "brackets": [list(b) for b in brackets], "bracket_ok_t_ge_1e3": in_bracket}
    if n == 2:
        C0 = A.log_moment_constant()
        lo, hi = math.pi / (4 * math.e), math.pi + 4 * math.pi * C0
        measured["coefficient_bracket"] = [lo, hi]
        ok = ok and lo <= asym <= hi
    return ok, measured


def _appendix_unit(n):
    def unit(cfg: RunConfig):
        ok, measured = appendix_check(n, cfg.t_grid)
        return [Record(f"lemma6{n}.growth", status(ok), measured, {"rel": ORACLE_REL})]

    unit.__name__ = f"unit_lemma6{n}"
    return unit


unit_lemma61 = _appendix_unit(1)
unit_lemma62 = _appendix_unit(2)
unit_lemma63 = _appendix_unit(3)


def richardson_values(cfg: RunConfig, t=PROBE_T):
    """Reported quantities on a grid and on its 2x refinement."""
    n, gamma = cfg.dim, cfg.gamma
    u0, u1 = cfg.data
    g = A.default_grid(n, t, u0, u1, base=cfg.grid_base)
    rows = {}
    jobs = {
        "thm32": lambda grid: A.remainder_norm_thm32(u0, gamma, t, grid),
        "gap": lambda grid: A.leading_term_gap(u0, u1, t, grid),
        "solution": lambda grid: A.solution_norm(u0, u1, t, grid).norm,
        "appendix": lambda grid: A.appendix_growth(n, t, Grid.for_oscillation(
            n, t, mode="radial", cutoff=A.EXTERIOR_CUTOFF, base=grid.nodes_per_unit)),
    }
    if A.condition_holds(n, gamma):
        jobs["thm31"] = lambda grid: A.remainder_norm_thm31(u1, gamma, t, grid)
    for name, fn in jobs.items():
        a, b = fn(g), fn(g.refined(2))
        rows[name] = {"coarse": a, "fine": b, "rel_change": abs(a - b) / abs(b)}
    return rows


def unit_richardson(cfg: RunConfig):
    rows = richardson_values(cfg)
    worst = max(r["rel_change"] for r in rows.values())
    return [Record("quadrature.richardson", status(worst <= RICHARDSON_REL), {"t": PROBE_T, "rows": rows,
                                                                              "max_rel_change": worst},
                   {"rel": RICHARDSON_REL})]


# -- orchestration -----------------------------------------------------------------

UNITS = {
    "symbols": [
        (unit_symbols_ode, ("symbols.ode_oracle",)),
        (unit_symbols_branch, ("symbols.branch_continuity",)),
        (unit_symbols_closed, ("symbols.closed_forms",)),
    ],
    "rates": [
        (unit_thm31, ("thm31.condition", "thm31.slope", "thm31.little_o", "thm31.gamma_monotone")),
        (unit_thm32, ("thm32.slope", "thm32.little_o")),
    ],
    "bounds": [
        (unit_thm33, ("thm33.sandwich",)),
        (unit_thm34_lower, ("thm34.lower.config", "thm34.lower.mass", "thm34.lower.first-moment",
                            "thm34.lower.displacement")),
        (unit_thm34_upper, ("thm34.upper",)),
        (unit_lemma43, ("lemma43.lower",)),
        (unit_remark42, ("remark42.upper",)),
        (unit_est51, ("est51.ratio",)),
        (unit_id52, ("id52.identity", "id52.cross")),
        (unit_lemma61, ("lemma61.growth",)),
        (unit_lemma62, ("lemma62.growth",)),
        (unit_lemma63, ("lemma63.growth",)),
        (unit_richardson, ("quadrature.richardson",)),
    ],
}
SUITES = tuple(UNITS)


def _timed(args):
    suite, index, cfg = args
    fn = UNITS[suite][index][0]
    t0 = time.perf_counter()
    records = fn(cfg)
    return records, time.perf_counter() - t0


def run(suites, cfg: RunConfig, emit):
    """Run the selected units and pass ``(record, seconds)`` to ``emit`` in declaration order."""
    jobs = [(s, i, cfg) for s in suites for i, (_, ids) in enumerate(UNITS[s])
            if any(matches(cid, cfg.only) for cid in ids)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = pool.map(_timed, jobs)
            _drain(results, cfg, emit)
    else:
        _drain(map(_timed, jobs), cfg, emit)


def _drain(results, cfg, emit):
    for records, seconds in results:
        for rec in records:
            if matches(rec.id, cfg.only):
                emit(rec, seconds)
