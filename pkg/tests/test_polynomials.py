import math

import numpy as np
import pytest
import sympy

from medspec import generators as gen
from medspec.errors import DomainError, PreconditionError
from medspec.graph import empty_graph
from medspec.polynomials import (
    GRID_POINTS,
    STRICT_MARGIN,
    build_energy_poly,
    build_magic,
    energy_bound,
    energy_bound_gap,
    expected_magic_under_mu,
    mu_distribution,
    mu_moments,
)
from medspec.spectral import eigenvalues

R2 = math.sqrt(2)
DS = range(3, 51)
X = sympy.Symbol("x")


def test_magic_d3_values():
    p = build_magic(3)
    assert p.alpha == pytest.approx(15 - 8 * R2, rel=1e-12)
    assert p.c2 == 11
    assert p(-3) == pytest.approx(0, abs=1e-9)
    assert p(-R2) == pytest.approx(0, abs=1e-9)
    assert p.c0 == pytest.approx((15 - 8 * R2) * 2 * 3, rel=1e-12)
    xs = np.linspace(R2, 3, 102)[1:-1]
    assert np.all(p(xs) > p(3))


def test_magic_coefficients_symbolic():
    # Viete expansion against a computer-algebra expansion of the product form
    for d in (3, 5, 10, 26):
        e0 = sympy.sqrt(d - 1)
        a = (d**2 + 2 * d * e0 + 2 * e0**2) / (d + 2 * e0)
        coeffs = sympy.Poly(sympy.expand((a - X) * (X + e0) ** 2 * (X + d)), X).all_coeffs()
        p = build_magic(d)
        got = [-1.0, p.c3, p.c2, p.c1, p.c0]
        assert np.allclose([float(c) for c in coeffs], got, rtol=1e-12)


@pytest.mark.parametrize("d", DS)
def test_magic_invariants(d):
    p = build_magic(d)
    e0 = math.sqrt(d - 1)
    assert p.alpha > d
    assert p.c3 < 0
    assert p.c2 == d * d + d - 1
    scale = abs(p(d))
    assert abs(p(-d)) <= 1e-9 * scale and abs(p(-e0)) <= 1e-9 * scale
    assert p(e0) == pytest.approx(p(d), rel=1e-9)
    grid = np.linspace(-d, d, GRID_POINTS)
    assert np.all(p(grid) >= -1e-9 * scale)
    band = np.linspace(e0 + STRICT_MARGIN, d - STRICT_MARGIN, GRID_POINTS)
    assert np.all(p(band) > p(d))
    ef = expected_magic_under_mu(p)
    assert ef == pytest.approx(p(d) / 2, rel=1e-9)
    assert -d * (2 * d - 1) + p.c2 * d + p.c0 == pytest.approx(ef, rel=1e-9)


def test_magic_domain():
    with pytest.raises(DomainError):
        build_magic(2)


@pytest.mark.parametrize("d", DS)
def test_mu_moments(d):
    _, probs = mu_distribution(d)
    assert probs.sum() == pytest.approx(1, rel=1e-12)
    m = mu_moments(d)
    assert m[0] == 0 and m[2] == 0
    assert m[1] == pytest.approx(d, rel=1e-10)
    assert m[3] == pytest.approx(d * (2 * d - 1), rel=1e-10)


def test_mu_moments_small():
    assert mu_moments(3) == pytest.approx((0, 3, 0, 15), abs=1e-12)
    assert mu_moments(4) == pytest.approx((0, 4, 0, 28), abs=1e-12)


def test_mu_is_plane_spectrum():
    for q in (2, 3, 4):
        vals = eigenvalues(gen.projective_plane_incidence(q)).values
        support, probs = mu_distribution(q + 1)
        for k in range(1, 5):
            assert np.mean(vals**k) == pytest.approx(np.dot(probs, support**k), abs=1e-9)


def test_energy_poly_d3():
    p = build_energy_poly(3)
    assert (p.alpha_e, p.beta, p.gamma) == pytest.approx(
        (15 + 6 * R2, 24 + 22 * R2, 18 + 12 * R2), rel=1e-12)
    assert p(R2) == pytest.approx(0, abs=1e-9)
    assert p(3) == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("d", DS)
def test_energy_poly_shape(d):
    p = build_energy_poly(d)
    xs = np.linspace(-(d + 2 * p.eps0), d, 10)
    assert np.allclose(p(xs), p.product_form(xs), rtol=1e-8, atol=1e-8 * abs(p.gamma))
    grid = np.linspace(0, d, GRID_POINTS)
    assert np.all(-p(grid) >= -1e-9 * p.gamma)


def test_energy_domain():
    with pytest.raises(DomainError):
        build_energy_poly(1)


def test_energy_gap_examples():
    hw = gen.heawood()
    assert energy_bound_gap(3, hw, eigenvalues(hw)) == pytest.approx(0, abs=1e-8)
    e = empty_graph(5)
    assert energy_bound_gap(3, e, eigenvalues(e)) > 0
    k4 = gen.complete(4)
    assert energy_bound_gap(3, k4, eigenvalues(k4)) >= -1e-8
    with pytest.raises(PreconditionError):
        energy_bound_gap(3, gen.complete(5), eigenvalues(gen.complete(5)))


@pytest.mark.parametrize("d", range(3, 9))
def test_energy_gap_on_random_graphs(d):
    for seed in range(40):
        g = gen.random_bounded_degree(5 + seed % 30, d, seed)
        assert energy_bound_gap(d, g, eigenvalues(g)) >= -1e-8


def test_energy_bound_heawood():
    assert energy_bound(3) == pytest.approx((3 + 6 * R2) / 7, abs=1e-12)
