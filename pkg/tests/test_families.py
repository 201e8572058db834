"""Loss families: closed-form values, envelope oracles, gap functions,
rate machinery, and descriptor round trips."""

import math

import numpy as np
import pytest

from dfmest.achievability import compact_lipschitz
from dfmest.convex import PiecewiseLinearConvex, minimize, mix, sublevel_interval
from dfmest.errors import ConstructionError, ParameterError
from dfmest.extreal import INF, NEG_INF, interval
from dfmest.families import (
    SampleSpace,
    bernoulli_log_family,
    exponential_family,
    family_from_descriptor,
    identity_rate,
    norate_family,
    piecewise_family,
    pinball_weighted_argmin,
    power_rate,
    quantile_family,
    rate_from_inverse,
    squared_family,
)

ALL_FAMILIES = [
    quantile_family(0.3),
    bernoulli_log_family(),
    squared_family(),
    exponential_family(),
    norate_family(identity_rate()),
    norate_family(power_rate(2.0)),
]


def _family_id(f):
    rate = f.descriptor()["params"].get("rate")
    return f.name + ("_" + rate["name"] if rate else "")


def _sample_z(family, rng):
    sp = family.space
    if sp.kind == "finite":
        return float(rng.choice(sp.atoms))
    lo = float(sp.bounds.lo) if sp.bounds.lo.finite else -4.0
    hi = float(sp.bounds.hi) if sp.bounds.hi.finite else 4.0
    return float(rng.uniform(lo, hi))


def _interior_theta(family, rng):
    dom = family.theta_domain
    lo = float(dom.lo) if dom.lo.finite else -4.0
    hi = float(dom.hi) if dom.hi.finite else 4.0
    pad = 1e-3 * (hi - lo)
    return float(rng.uniform(lo + pad, hi - pad))


# ---------------------------------------------------------------------------
# sample spaces


def test_sample_space_finite():
    sp = SampleSpace.finite((0.0, 1.0))
    assert sp.contains(0.0) and sp.contains(1.0) and not sp.contains(0.5)
    assert float(sp.z_min) == 0.0 and float(sp.z_max) == 1.0
    with pytest.raises(ConstructionError):
        SampleSpace.finite(())
    with pytest.raises(ConstructionError):
        SampleSpace.finite((1.0, 1.0))


def test_sample_space_interval_and_serialization():
    sp = SampleSpace.real_interval()
    assert sp.contains(1e12) and not math.isnan(float(sp.z_max))
    d = sp.to_dict()
    assert d["bounds"] == ["-inf", "inf"]
    assert SampleSpace.from_dict(d) == sp
    fin = SampleSpace.finite((0.0, 2.5))
    assert SampleSpace.from_dict(fin.to_dict()) == fin


# ---------------------------------------------------------------------------
# quantile family


def test_quantile_normalization_anchors_at_zero(rng):
    fam = quantile_family(0.3)
    for z in rng.normal(0.0, 5.0, size=50):
        assert abs(float(fam.loss_at(float(z))(0.0))) < 1e-12


def test_quantile_closed_form_values():
    fam = quantile_family(0.3)
    assert abs(float(fam.loss_at(2.0)(2.0)) - (-1.4)) < 1e-12
    f0 = fam.loss_at(0.0)
    assert float(f0(0.0)) == 0.0
    assert abs(float(f0(1.0)) - 0.3) < 1e-12
    assert abs(float(f0(-1.0)) - 0.7) < 1e-12
    # slope above the atom is alpha, below is -(1-alpha)
    assert abs(float(fam.loss_at(1.0).dplus(1.5)) - 0.3) < 1e-12
    assert abs(float(fam.loss_at(1.0).dminus(0.5)) + 0.7) < 1e-12
    with pytest.raises(ParameterError):
        quantile_family(0.0)
    with pytest.raises(ParameterError):
        quantile_family(1.0)


def test_quantile_envelopes_on_finite_space():
    fam = quantile_family(0.4, SampleSpace.finite((0.0, 10.0)))
    assert abs(float(fam.sup_dplus(5.0)) - 0.4) < 1e-12
    assert abs(float(fam.inf_dminus(5.0)) + 0.6) < 1e-12
    assert abs(float(fam.sup_dplus(-3.0)) + 0.6) < 1e-12
    assert abs(float(fam.inf_dminus(12.0)) - 0.4) < 1e-12


def test_quantile_pair_population_sublevel():
    fam = quantile_family(0.5)
    L = mix([0.7, 0.3], [fam.loss_at(0.0), fam.loss_at(1.0)])
    t, v = minimize(L)
    assert abs(float(t)) < 1e-9 and abs(float(v)) < 1e-12
    s = sublevel_interval(L, float(v) + 0.05)
    assert abs(float(s.lo) + 0.1) < 1e-9
    assert abs(float(s.hi) - 0.25) < 1e-9


# ---------------------------------------------------------------------------
# bernoulli log family


def test_bernoulli_log_values_and_blowup():
    fam = bernoulli_log_family()
    assert abs(float(fam.loss_at(1.0)(0.5)) - math.log(2.0)) < 1e-12
    assert fam.loss_at(1.0)(0.0) == INF
    assert fam.loss_at(0.0)(1.0) == INF
    assert abs(float(fam.sup_dplus(0.9)) - 10.0) < 1e-9
    assert abs(float(fam.inf_dminus(0.1)) + 10.0) < 1e-9


# ---------------------------------------------------------------------------
# squared family


def test_squared_values_and_envelopes():
    fam = squared_family()
    assert abs(float(fam.loss_at(3.0)(1.0)) - 2.0) < 1e-12
    # unbounded sample space makes both envelopes infinite everywhere
    assert fam.sup_dplus(0.5) == INF
    assert fam.inf_dminus(0.5) == NEG_INF
    t, v = fam.per_z_min(0.4)
    assert abs(float(t) - 0.4) < 1e-12 and abs(float(v)) < 1e-12


def test_squared_bounded_space_envelopes():
    fam = squared_family(SampleSpace.real_interval(-1.0, 1.0))
    assert abs(float(fam.sup_dplus(0.5)) - 1.5) < 1e-12
    assert abs(float(fam.inf_dminus(0.5)) + 0.5) < 1e-12


# ---------------------------------------------------------------------------
# exponential family


def test_exponential_values_and_gap():
    fam = exponential_family()
    assert abs(float(fam.loss_at(1.0)(0.0)) - 1.0) < 1e-12
    assert abs(float(fam.loss_at(-1.0)(2.0)) - math.exp(-2.0)) < 1e-12
    probe = interval(-math.log(10.0), math.log(10.0))
    assert abs(float(fam.gap(1.0, probe)) - 0.1) < 1e-9
    t, v = fam.per_z_min(1.0)
    assert t == NEG_INF and abs(float(v)) < 1e-12


def test_exponential_extreme_arguments_stay_positive():
    fam = exponential_family()
    assert float(fam.loss_at(1.0)(-800.0)) > 0.0
    assert fam.loss_at(1.0)(800.0) == INF or float(fam.loss_at(1.0)(800.0)) > 1e300


# ---------------------------------------------------------------------------
# norate family


def test_norate_identity_values():
    fam = norate_family(identity_rate())
    l1 = fam.loss_at(1.0)
    assert abs(float(l1(0.5)) - (0.5 + math.log(2.0))) < 1e-9
    assert abs(float(l1.dplus(0.25)) + 3.0) < 1e-9
    assert l1(0.0) == INF
    t, v = fam.per_z_min(0.0)
    assert abs(float(t)) < 1e-12 and abs(float(v)) < 1e-12


def test_norate_power_rate_closed_forms():
    r = power_rate(2.0)
    assert abs(r.forward(3.0) - 9.0) < 1e-12
    assert abs(r.inverse(9.0) - 3.0) < 1e-12
    assert abs(r.tail(0.25) - 2.0 * (1.0 - 0.5)) < 1e-12
    assert abs(r.tail(0.0) - 2.0) < 1e-12
    fam = norate_family(r)
    l1 = fam.loss_at(1.0)
    # theta + 2(1 - sqrt(theta))
    assert abs(float(l1(0.25)) - (0.25 + 1.0)) < 1e-9
    assert abs(float(l1.dplus(0.25)) - (1.0 - 2.0)) < 1e-9


def test_norate_lipschitz_budget():
    for rate in (identity_rate(), power_rate(2.0)):
        for eps in (0.1, 0.01):
            fam = norate_family(rate)
            L = compact_lipschitz(fam, interval(eps, 1.0 - eps))
            assert float(L) <= rate.inverse(1.0 / eps) + 1e-9


def test_rate_from_inverse_generic_matches_identity():
    r = rate_from_inverse(lambda x: x)
    assert abs(r.forward(7.0) - 7.0) < 1e-6
    assert abs(r.tail(0.5) - math.log(2.0)) < 1e-6
    assert r.forward(1.0) == 1.0
    with pytest.raises(ParameterError):
        r.forward(0.5)


def test_rate_from_inverse_generic_matches_power():
    r = rate_from_inverse(lambda x: x ** (1.0 / 3.0))
    want = power_rate(3.0)
    for y in (1.0, 2.0, 10.0, 100.0):
        assert abs(r.forward(y) - want.forward(y)) < 1e-6 * want.forward(y)
    for t in (0.9, 0.5, 0.1):
        assert abs(r.tail(t) - want.tail(t)) < 1e-6


def test_rate_from_inverse_validation():
    with pytest.raises(ParameterError):
        rate_from_inverse(lambda x: 2.0 * x)  # r_inverse(1) != 1
    with pytest.raises(ParameterError):
        rate_from_inverse(lambda x: 1.0 / x)  # decreasing


# ---------------------------------------------------------------------------
# piecewise family


def test_piecewise_single_entry():
    fam = piecewise_family({0.0: PiecewiseLinearConvex(((0.0, 0.0),), -1.0, 1.0)})
    assert abs(float(fam.sup_dplus(1.0)) - 1.0) < 1e-12
    assert abs(float(fam.loss_at(0.0)(2.0)) - 2.0) < 1e-12


def test_piecewise_pinball_table_envelopes():
    table = {
        0.0: PiecewiseLinearConvex(((0.0, 0.0),), -0.5, 0.5),
        1.0: PiecewiseLinearConvex(((1.0, 0.0),), -0.5, 0.5),
    }
    fam = piecewise_family(table)
    assert abs(float(fam.sup_dplus(0.5)) - 0.5) < 1e-12
    assert abs(float(fam.inf_dminus(0.5)) + 0.5) < 1e-12


def test_piecewise_empty_table_rejected():
    with pytest.raises(ConstructionError):
        piecewise_family({})


# ---------------------------------------------------------------------------
# cross-family properties


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=_family_id)
def test_envelope_soundness(family, rng):
    """sup_dplus dominates every per-z right derivative; inf_dminus is
    dominated by every per-z left derivative."""
    checks = 0
    while checks < 10_000:
        z = _sample_z(family, rng)
        theta = _interior_theta(family, rng)
        loss = family.loss_at(z)
        if loss(theta) == INF:
            continue
        assert family.sup_dplus(theta) >= loss.dplus(theta)
        assert family.inf_dminus(theta) <= loss.dminus(theta)
        checks += 1


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=_family_id)
def test_per_z_min_agrees_with_minimize(family, rng):
    for _ in range(25):
        z = _sample_z(family, rng)
        t_hook, v_hook = family.per_z_min(z)
        t_gen, v_gen = minimize(family.loss_at(z), over=family.theta_domain)
        if v_hook.finite and v_gen.finite:
            assert abs(float(v_hook) - float(v_gen)) < 1e-6
        else:
            assert v_hook == v_gen
        if t_hook.finite and t_gen.finite:
            f = family.loss_at(z)
            assert float(f(float(t_gen))) <= float(f(float(t_hook))) + 1e-6


def test_gap_nonnegative_and_zero_on_full_domain(rng):
    for family in ALL_FAMILIES:
        for _ in range(20):
            z = _sample_z(family, rng)
            dom = family.theta_domain
            lo = float(dom.lo) if dom.lo.finite else -5.0
            hi = float(dom.hi) if dom.hi.finite else 5.0
            a, b = np.sort(rng.uniform(lo, hi, size=2))
            if b - a < 1e-6:
                continue
            g = family.gap(z, interval(float(a), float(b)))
            assert g >= -1e-12 if g.finite else g == INF
            full = family.gap(z, dom)
            assert abs(float(full)) < 1e-9


# ---------------------------------------------------------------------------
# weighted pinball argmin


def test_pinball_weighted_argmin_exact_cases():
    from dfmest.extreal import REAL_LINE

    a = pinball_weighted_argmin(0.5, (1.0, 1.0, 1.0), (1.0, 2.0, 3.0), REAL_LINE)
    assert float(a.lo) == 2.0 == float(a.hi)
    a = pinball_weighted_argmin(0.5, (1.0, 1.0, 1.0, 1.0), (4.0, 1.0, 3.0, 2.0), REAL_LINE)
    assert float(a.lo) == 2.0 and float(a.hi) == 3.0


def test_pinball_weighted_argmin_matches_grid(rng):
    from dfmest.extreal import REAL_LINE

    for _ in range(200):
        k = int(rng.integers(1, 7))
        zs = np.round(rng.uniform(-3.0, 3.0, size=k), 4)
        ws = rng.uniform(0.1, 2.0, size=k)
        alpha = float(rng.uniform(0.05, 0.95))
        amin = pinball_weighted_argmin(alpha, tuple(ws), tuple(zs), REAL_LINE)
        xs = np.linspace(zs.min() - 1.0, zs.max() + 1.0, 4001)
        loss = np.zeros_like(xs)
        for w, z in zip(ws, zs):
            loss += w * (alpha * np.maximum(xs - z, 0.0) + (1 - alpha) * np.maximum(z - xs, 0.0))
        best = xs[np.flatnonzero(loss <= loss.min() + 1e-9)]
        step = xs[1] - xs[0]
        assert float(amin.lo) >= best[0] - step - 1e-9
        assert float(amin.hi) <= best[-1] + step + 1e-9


# ---------------------------------------------------------------------------
# descriptors


@pytest.mark.parametrize("family", ALL_FAMILIES, ids=_family_id)
def test_descriptor_round_trip(family):
    d = family.descriptor()
    back = family_from_descriptor(d)
    assert back.descriptor() == d
    assert back.name == family.name


def test_piecewise_descriptor_round_trip():
    fam = piecewise_family({0.0: PiecewiseLinearConvex(((0.0, 0.0),), -1.0, 1.0)})
    back = family_from_descriptor(fam.descriptor())
    assert abs(float(back.loss_at(0.0)(2.0)) - 2.0) < 1e-12


def test_unknown_descriptor_rejected():
    with pytest.raises(ConstructionError):
        family_from_descriptor({"name": "mystery", "params": {}})
