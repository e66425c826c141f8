import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medspec import generators as gen
from medspec.certification import (
    FACTOR_BOUNDS,
    PRODUCT_BOUND,
    alpha_delta,
    certify_asymptotic,
    certify_range,
    constraints_hold,
    delta_by_bisection,
    delta_for_regime,
    eps_pair,
    grid_oracle,
    monotonicity_lemmas,
    objective_closed_form,
    objective_full,
    proof_diagnostics,
    regime,
    regime_target,
    stage2,
    stage3,
    stage4,
    z_star,
)
from medspec.errors import DomainError
from medspec.graph import empty_graph
from medspec.spectral import eigenvalues

# smallest margin over d = 75..139 (attained at d = 139)
MIN_MARGIN_75_139 = 1.0811282677303247e-4


def test_certify_range_75_139():
    recs = certify_range(75, 139)
    assert len(recs) == 65
    assert all(r.certified and r.constraint_ok and r.margin > 0 for r in recs)
    worst = min(recs, key=lambda r: r.margin)
    assert worst.d == 139
    assert worst.margin == pytest.approx(MIN_MARGIN_75_139, rel=1e-9)
    assert len(certify_range(75, 75)) == 1


def test_certify_range_regime2_and_domain():
    assert all(r.regime == 2 for r in certify_range(140, 200))
    assert objective_closed_form(10**6).certified
    with pytest.raises(DomainError):
        certify_range(74, 80)


def test_d75_value():
    r = objective_closed_form(75)
    assert r.objective < 1
    assert r.delta == pytest.approx(math.sqrt((75 + math.sqrt(74)) * (75 - 7 * math.sqrt(74)))
                                    - math.sqrt(74))
    assert r.delta == pytest.approx(26.55, abs=0.01)


@pytest.mark.parametrize("d", [75, 100, 139, 140, 141, 500, 10**4])
def test_delta_solves_target(d):
    e0, e1 = eps_pair(d)
    delta = delta_for_regime(d)
    assert alpha_delta(d, delta) * (e1 - e0) == pytest.approx(regime_target(d), abs=1e-9)
    assert delta_by_bisection(d, regime_target(d)) == pytest.approx(delta, rel=1e-9)


def test_regime_boundary():
    assert regime(139) == 1 and regime(140) == 2
    d = 140
    assert delta_for_regime(d) - math.sqrt(d - 1) >= d / 3
    with pytest.raises(DomainError):
        regime(74)


def test_alpha_delta_blows_up_near_d():
    d = 100
    vals = [alpha_delta(d, d - 10.0**-k) for k in range(1, 8)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 1e6
    with pytest.raises(DomainError):
        alpha_delta(d, d)


@pytest.mark.parametrize("d", range(75, 301))
def test_constraints_at_regime_delta(d):
    assert constraints_hold(d, delta_for_regime(d))
    assert z_star(d, delta_for_regime(d)) <= 0.5


def test_objective_boundary_values():
    d = 75
    delta = delta_for_regime(d)
    e0, e1 = eps_pair(d)
    assert objective_full(d, delta, e0, 0.5, 0, 0) == 0
    expected = (2 * e0) ** 0.5 * ((e0 + e1) / (2 * e0)) * (e1 - e0) ** 0.5
    assert objective_full(d, delta, e1, 0.5, 0, 0) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(DomainError):
        objective_full(d, delta, e1, 0.4, 0, 0)
    with pytest.raises(DomainError):
        objective_full(d, delta, e1, 0.5, 0.6, 0)


@pytest.mark.parametrize("d", [75, 100, 139, 140, 1000])
def test_stagewise_maximizer_chain(d):
    delta = delta_for_regime(d)
    e0, e1 = eps_pair(d)
    zs = z_star(d, delta)
    for z in np.linspace(0, zs, 5):
        for y in np.linspace(0, 0.5 - z, 5):
            eps = (y * e0 + e1) / (y + 1)
            assert objective_full(d, delta, eps, 0.5, y, z) == pytest.approx(
                stage2(d, delta, y, z), rel=1e-10)
        assert stage2(d, delta, 0.5 - z, z) == pytest.approx(stage3(d, delta, z), rel=1e-10)
    eps = ((0.5 - zs) * e0 + e1) / (1.5 - zs)
    full = objective_full(d, delta, eps, 0.5, 0.5 - zs, zs)
    assert full == pytest.approx(objective_closed_form(d).objective, rel=1e-10)
    assert stage4(d, delta) == pytest.approx(objective_closed_form(d).objective, rel=1e-15)


@given(st.integers(75, 2000), st.floats(0, 1), st.floats(0.5, 5), st.floats(0, 1),
       st.floats(0, 1))
@settings(max_examples=300, deadline=None)
def test_random_feasible_points_below_closed_form(d, te, x, ty, tz):
    delta = delta_for_regime(d)
    e0, e1 = eps_pair(d)
    z = tz * z_star(d, delta)
    y = ty * (0.5 - z)
    eps = e0 + te * (e1 - e0)
    assert objective_full(d, delta, eps, x, y, z) <= objective_closed_form(d).objective * (1 + 1e-12)


@pytest.mark.parametrize("d", [140, 141, 200, 10**4])
def test_asymptotic_chain(d):
    rep = certify_asymptotic(d)
    for f, b in zip(rep.factors, FACTOR_BOUNDS):
        assert f <= b - 1e-12
    assert rep.product <= PRODUCT_BOUND - 1e-12 and PRODUCT_BOUND < 1
    assert rep.product == pytest.approx(rep.closed_form, rel=1e-10)


def test_asymptotic_z_star_small():
    assert certify_asymptotic(140).z_star <= 1 / 2000
    with pytest.raises(DomainError):
        certify_asymptotic(139)


@pytest.mark.parametrize("d", [75, 100, 139, 140, 200])
def test_grid_oracle(d):
    res = grid_oracle(d, resolution=200)
    closed = objective_closed_form(d).objective
    assert res.below_one and closed < 1
    assert res.max_value <= closed + 10 / 200
    assert res.argmax[1] == 0.5
    e0, e1 = eps_pair(d)
    eps, x, y, z = res.argmax
    delta = delta_for_regime(d)
    assert e0 <= eps <= e1 and 0 <= z <= 1 / (delta - e0) ** 2 and 0 <= y <= 0.5 - z
    assert res.x_decrease_checked == 27


def test_grid_oracle_rejects_coarse_grid():
    with pytest.raises(DomainError):
        grid_oracle(75, resolution=10)


@pytest.mark.parametrize("d", range(75, 201))
def test_monotonicity_lemmas(d):
    assert all(c.holds for c in monotonicity_lemmas(d))


def test_monotonicity_small_d_subset():
    names = [c.name for c in monotonicity_lemmas(3)]
    assert not any("3/2-z" in n for n in names)


def test_proof_diagnostics_heawood():
    diag = proof_diagnostics(gen.heawood(), 3, 2.0)
    assert diag.sizes["I"] == 2 and diag.sizes["J"] == 1
    assert diag.product("A") * diag.product("B") == pytest.approx(49, rel=1e-9)
    assert diag.exact_witness == 49
    assert not diag.failed()


def test_proof_diagnostics_k3():
    diag = proof_diagnostics(gen.complete(3), 3, 2.0)
    assert diag.sizes["I"] == 3
    assert diag.product("A") * diag.product("B") == pytest.approx(2, rel=1e-9)
    assert not diag.failed()


def test_proof_diagnostics_empty():
    diag = proof_diagnostics(empty_graph(6), 4, 2.5)
    assert diag.sizes["I"] == 6
    assert diag.product("A") * diag.product("B") == pytest.approx(3**6, rel=1e-9)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_proof_diagnostics_random(d):
    delta = 0.5 * (math.sqrt(d - 1) + d)
    for seed in range(25):
        g = gen.random_bounded_degree(4 + seed, d, seed)
        diag = proof_diagnostics(g, d, delta, eigenvalues(g))
        s = diag.sizes
        assert s["J"] + s["K"] + s["L"] == s["I"] <= s["n"]
        assert not diag.failed(), diag.failed()
