"""Convex calculus: exact piecewise-linear algebra, one-sided
derivatives, minimization and sublevel sets, all cross-checked against
grid oracles on randomized instances."""

import math

import numpy as np
import pytest

from dfmest.convex import (
    ConvexFn,
    PiecewiseLinearConvex,
    argmin_interval,
    minimize,
    mix,
    pinball,
    sublevel_interval,
)
from dfmest.errors import ConstructionError, DomainError, ParameterError
from dfmest.extreal import INF, NEG_INF, Interval, REAL_LINE, ext, interval

from conftest import (
    grid_argmin_interval,
    grid_values,
    pwl_integral_of_slope,
    pwl_oracle_values,
    random_pwl,
    random_pwl_data,
)


# ---------------------------------------------------------------------------
# piecewise-linear representation


def test_pwl_eval_matches_oracle_on_random_instances(rng):
    for _ in range(300):
        breaks, ls, rs = random_pwl_data(rng)
        pwl = PiecewiseLinearConvex(breaks, ls, rs)
        xs = rng.uniform(-5.0, 5.0, size=20)
        want = pwl_oracle_values(breaks, ls, rs, xs)
        got = np.array([float(pwl.eval(float(x))) for x in xs])
        assert np.allclose(got, want, atol=1e-9)


def test_pwl_rejects_nonconvex_data():
    with pytest.raises(ConstructionError):
        PiecewiseLinearConvex(((0.0, 0.0), (1.0, 2.0), (2.0, 2.5)), -1.0, 0.2)
    with pytest.raises(ConstructionError):
        PiecewiseLinearConvex(((0.0, 0.0),), 1.0, -1.0)
    with pytest.raises(ConstructionError):
        PiecewiseLinearConvex((), -1.0, 1.0)


def test_pwl_derivatives_at_and_between_breakpoints():
    vee = PiecewiseLinearConvex(((1.0, 0.0),), -2.0, 3.0)
    assert float(vee.dminus(1.0)) == -2.0
    assert float(vee.dplus(1.0)) == 3.0
    assert float(vee.dplus(0.5)) == -2.0
    assert float(vee.dminus(2.0)) == 3.0


def test_pwl_argmin_shapes():
    vee = PiecewiseLinearConvex(((1.0, 0.5),), -1.0, 1.0)
    lo, hi, star = vee.argmin()
    assert float(lo) == 1.0 == float(hi) and float(star) == 0.5
    flat = PiecewiseLinearConvex(((0.0, 0.0), (2.0, 0.0)), -1.0, 1.0)
    lo, hi, star = flat.argmin()
    assert float(lo) == 0.0 and float(hi) == 2.0 and float(star) == 0.0
    runaway = PiecewiseLinearConvex(((0.0, 0.0),), 0.5, 1.0)
    lo, hi, star = runaway.argmin()
    assert lo == NEG_INF and hi == NEG_INF and star == NEG_INF
    plateau = PiecewiseLinearConvex(((0.0, 1.0),), 0.0, 1.0)
    lo, hi, star = plateau.argmin()
    assert lo == NEG_INF and float(hi) == 0.0 and float(star) == 1.0


def test_pwl_sublevel_exact():
    vee = PiecewiseLinearConvex(((0.0, 0.0),), -1.0, 2.0)
    s = vee.sublevel(1.0)
    assert abs(float(s.lo) + 1.0) < 1e-12 and abs(float(s.hi) - 0.5) < 1e-12
    assert vee.sublevel(-0.5).empty
    ray = PiecewiseLinearConvex(((0.0, 0.0),), 0.0, 1.0).sublevel(0.0)
    assert ray.lo == NEG_INF and float(ray.hi) == 0.0


def test_pwl_sublevel_matches_grid(rng):
    for _ in range(200):
        pwl = random_pwl(rng, interior_min=True)
        _, _, star = pwl.argmin()
        level = float(star) + float(rng.uniform(0.1, 2.0))
        s = pwl.sublevel(level)
        xs = np.linspace(-8.0, 8.0, 4001)
        vals = pwl_oracle_values(pwl.breakpoints, float(pwl.left_slope), float(pwl.right_slope), xs)
        inside = xs[vals <= level]
        assert inside.size
        step = xs[1] - xs[0]
        assert float(s.lo) <= inside[0] + step and float(s.hi) >= inside[-1] - step


def test_pwl_combine_is_pointwise_sum(rng):
    for _ in range(100):
        a = random_pwl(rng)
        b = random_pwl(rng)
        w = rng.uniform(0.1, 2.0, size=2)
        c = PiecewiseLinearConvex.combine(list(w), [a, b])
        for x in rng.uniform(-5.0, 5.0, size=10):
            want = w[0] * float(a.eval(float(x))) + w[1] * float(b.eval(float(x)))
            assert abs(float(c.eval(float(x))) - want) < 1e-8


def test_pwl_scaled():
    vee = PiecewiseLinearConvex(((1.0, 2.0),), -1.0, 1.0)
    s = vee.scaled(3.0)
    assert float(s.eval(1.0)) == 6.0 and float(s.dplus(1.0)) == 3.0


def test_pwl_serialization_round_trip(rng):
    for _ in range(50):
        pwl = random_pwl(rng)
        back = PiecewiseLinearConvex.from_dict(pwl.to_dict())
        assert back == pwl
    wall = PiecewiseLinearConvex(((0.0, 0.0),), NEG_INF, ext(1.0))
    d = wall.to_dict()
    assert d["left_slope"] == "-inf"
    assert PiecewiseLinearConvex.from_dict(d) == wall


# ---------------------------------------------------------------------------
# one-sided derivative properties (randomized suites)


def test_derivative_ordering_on_random_instances(rng):
    """dminus(t0) <= dplus(t0) <= dminus(t1) <= dplus(t1) for t0 < t1."""
    for _ in range(1000):
        f = ConvexFn.from_pwl(random_pwl(rng))
        t0, t1 = np.sort(rng.uniform(-6.0, 6.0, size=2))
        if t1 - t0 < 1e-9:
            continue
        dm0, dp0 = f.dminus(t0), f.dplus(t0)
        dm1, dp1 = f.dminus(t1), f.dplus(t1)
        assert dm0 <= dp0 <= dm1 <= dp1


def test_finite_difference_converges_to_dplus():
    f = ConvexFn(REAL_LINE, lambda t: ext(0.5 * (t - 0.3) ** 2))
    t = 1.7
    errs = []
    for h in (1e-2, 1e-3, 1e-4):
        fd = (float(f(t + h)) - float(f(t))) / h
        errs.append(abs(fd - float(f.dplus(t))))
    assert errs[0] < 1e-1 and errs[-1] < 1e-3
    assert errs[2] < errs[0]


def test_integral_of_derivative_reconstructs_increments(rng):
    """f(b) - f(a) equals the integral of dplus on random interior [a,b]."""
    for _ in range(1000):
        f = ConvexFn.from_pwl(random_pwl(rng))
        a, b = np.sort(rng.uniform(-6.0, 6.0, size=2))
        if b - a < 1e-6:
            continue
        want = float(f(b)) - float(f(a))
        got = pwl_integral_of_slope(f, float(a), float(b))
        assert abs(got - want) < 1e-7 * max(1.0, abs(want))


def test_endpoint_derivative_conventions():
    f = ConvexFn.from_pwl(PiecewiseLinearConvex(((0.5, 0.0),), -1.0, 1.0), interval(0.0, 1.0))
    assert f.dminus(0.0) == NEG_INF
    assert f.dplus(1.0) == INF
    assert float(f.dplus(0.0)) == -1.0
    assert float(f.dminus(1.0)) == 1.0
    # endpoint where the function is infinite: derivative points inward
    g = ConvexFn(interval(0.0, 1.0), lambda t: ext(-math.log(t)) if t > 0 else INF)
    assert g.dplus(0.0) == NEG_INF
    assert g(0.0) == INF


def test_domain_errors():
    f = ConvexFn.from_pwl(PiecewiseLinearConvex(((0.0, 0.0),), -1.0, 1.0), interval(0.0, 1.0))
    with pytest.raises(DomainError):
        f.dplus(2.0)
    with pytest.raises(DomainError):
        f.dminus(-0.5)
    # evaluation follows the extended-real convention off the domain
    assert f(-0.5) == INF


# ---------------------------------------------------------------------------
# minimize / argmin / sublevel


def test_minimize_pwl_exact_cases():
    f = ConvexFn.from_pwl(PiecewiseLinearConvex(((2.0, -1.0),), -3.0, 0.5))
    t, v = minimize(f)
    assert float(t) == 2.0 and float(v) == -1.0
    # restricted to an interval that excludes the argmin
    t, v = minimize(f, over=interval(3.0, 5.0))
    assert float(t) == 3.0 and abs(float(v) - (-0.5)) < 1e-12
    # unbounded below reports the runaway direction
    g = ConvexFn.from_pwl(PiecewiseLinearConvex(((0.0, 0.0),), 0.5, 1.0))
    t, v = minimize(g)
    assert t == NEG_INF and v == NEG_INF


def test_minimize_smooth_bisection():
    f = ConvexFn(REAL_LINE, lambda t: ext((t - 0.7) ** 2))
    t, v = minimize(f)
    assert abs(float(t) - 0.7) < 1e-7 and float(v) < 1e-12


def test_minimize_unattained_infimum_reports_limit():
    f = ConvexFn(Interval(ext(0.0), INF), lambda t: ext(math.exp(-min(t, 700.0))))
    t, v = minimize(f)
    assert t == INF and float(v) < 1e-12


def test_minimize_agrees_with_grid(rng):
    for _ in range(200):
        f = ConvexFn.from_pwl(random_pwl(rng, interior_min=True))
        t, v = minimize(f)
        xs, vals = grid_values(f, -8.0, 8.0, 2001)
        glo, ghi = grid_argmin_interval(xs, vals, tol=1e-9)
        step = xs[1] - xs[0]
        assert glo - step <= float(t) <= ghi + step
        assert abs(float(v) - float(np.min(vals))) < 4.0 * step * 10.0


def test_argmin_interval_flat_piece():
    f = ConvexFn.from_pwl(PiecewiseLinearConvex(((0.0, 0.0), (1.5, 0.0)), -1.0, 2.0))
    a = argmin_interval(f)
    assert abs(float(a.lo)) < 1e-9 and abs(float(a.hi) - 1.5) < 1e-9


def test_minimize_sublevel_consistency(rng):
    """theta* lies in every eps-sublevel; sublevel intervals nest."""
    for _ in range(1000):
        f = ConvexFn.from_pwl(random_pwl(rng, interior_min=True))
        t, v = minimize(f)
        eps_small, eps_big = np.sort(rng.uniform(1e-6, 1.0, size=2))
        s_small = sublevel_interval(f, float(v) + float(eps_small))
        s_big = sublevel_interval(f, float(v) + float(eps_big))
        assert s_small.contains(float(t))
        assert s_small.is_subset(s_big)


def test_sublevel_interval_below_min_is_empty():
    f = ConvexFn.from_pwl(PiecewiseLinearConvex(((1.0, 0.0),), -1.0, 1.0))
    assert sublevel_interval(f, -0.5).empty


def test_sublevel_interval_at_min_is_argmin_point():
    f = ConvexFn(REAL_LINE, lambda t: ext(0.5 * t * t))
    s = sublevel_interval(f, 0.0)
    assert abs(float(s.lo)) < 1e-6 and abs(float(s.hi)) < 1e-6


def test_sublevel_matches_grid_for_smooth(rng):
    f = ConvexFn(REAL_LINE, lambda t: ext((t - 1.0) ** 2))
    s = sublevel_interval(f, 0.25)
    assert abs(float(s.lo) - 0.5) < 1e-6 and abs(float(s.hi) - 1.5) < 1e-6


# ---------------------------------------------------------------------------
# mixtures and the pinball builder


def test_mix_requires_probability_vector():
    f = pinball(0.5, 0.0)
    with pytest.raises(ConstructionError):
        mix([0.5, 0.6], [f, f])
    with pytest.raises(ConstructionError):
        mix([-0.1, 1.1], [f, f])
    with pytest.raises(ConstructionError):
        mix([], [])


def test_mix_known_values():
    h = mix([0.7, 0.3], [pinball(0.5, 0.0), pinball(0.5, 1.0)])
    assert abs(float(h(0.5)) - 0.25) < 1e-12
    g = mix([0.5, 0.5], [
        ConvexFn.from_pwl(PiecewiseLinearConvex(((0.0, 0.0),), -1.0, 1.0)),
        ConvexFn(REAL_LINE, lambda t: ext(0.5 * t * t)),
    ])
    assert abs(float(g.dplus(0.0)) - 0.5) < 1e-7


def test_mix_pwl_is_exact(rng):
    for _ in range(100):
        fns = [ConvexFn.from_pwl(random_pwl(rng)) for _ in range(3)]
        w = rng.dirichlet(np.ones(3))
        g = mix(list(w), fns)
        assert g.pwl is not None
        for x in rng.uniform(-5.0, 5.0, size=8):
            want = sum(wi * float(fi(float(x))) for wi, fi in zip(w, fns))
            assert abs(float(g(float(x))) - want) < 1e-8


def test_mix_drops_zero_weights():
    f = pinball(0.5, 0.0)
    g = ConvexFn(interval(10.0, 11.0), lambda t: ext(t))
    h = mix([1.0, 0.0], [f, g])
    # the zero-weight component must not shrink the domain
    assert float(h(0.0)) == 0.0


def test_mix_of_closures_evaluates_pointwise():
    f = ConvexFn(REAL_LINE, lambda t: ext(t * t))
    g = ConvexFn(REAL_LINE, lambda t: ext(abs(t - 1.0)))
    h = mix([0.25, 0.75], [f, g])
    assert abs(float(h(2.0)) - (0.25 * 4.0 + 0.75 * 1.0)) < 1e-12


def test_pinball_values_and_slopes():
    f = pinball(0.3, 1.0)
    assert float(f(1.0)) == 0.0
    assert abs(float(f(3.0)) - 0.6) < 1e-12
    assert abs(float(f(0.0)) - 0.7) < 1e-12
    assert abs(float(f.dplus(2.0)) - 0.3) < 1e-12
    assert abs(float(f.dminus(0.5)) + 0.7) < 1e-12
    with pytest.raises(ParameterError):
        pinball(1.0, 0.0)
