import math

import numpy as np
import pytest
from scipy.integrate import quad

from dioprime.errors import DomainError
from dioprime.mollifier import Mollifier, check_bound, irwin_hall_pieces, theta, theta_hat
from oracles import theta_hat_quadrature

VARTHETAS = [1e-4, 1e-3, 1e-2, 1e-1]
KS = [2, 5, 10, 20]


def test_geometry():
    m = Mollifier(0.2, 8)
    assert m.a + sum(m.widths) / 2 == pytest.approx(0.2, rel=1e-15)
    assert m.a - sum(m.widths) / 2 == pytest.approx(0.15, rel=1e-15)
    with pytest.raises(DomainError):
        Mollifier(0.0)
    with pytest.raises(DomainError):
        Mollifier(0.1, 1)


def test_examples():
    v = 0.01
    m = Mollifier(v, 10)
    assert theta(m, 0.0) == 1.0
    assert theta(m, v) == 0.0 and theta(m, -1.5 * v) == 0.0
    assert 0 < theta(m, 0.9 * v) < 1
    assert theta_hat(m, 0.0) == pytest.approx(7 * v / 4, rel=1e-15)
    assert check_bound(m, 0.0)
    assert m.theta_hat(0.0) == m.bound(0.0)


def test_irwin_hall_is_a_distribution():
    for k in (2, 3, 7, 20):
        dens, cdf, _ = irwin_hall_pieces(k)
        assert sum(cdf[-1]) == 1
        assert cdf[0][0] == 0
        # density pieces integrate to one
        assert sum(sum(c / (i + 1) for i, c in enumerate(p)) for p in dens) == 1


@pytest.mark.parametrize("v", VARTHETAS)
@pytest.mark.parametrize("k", KS)
def test_grid_clauses(v, k):
    m = Mollifier(v, k)
    y = np.linspace(-1.25 * v, 1.25 * v, 10_001)
    y = np.concatenate([y, [0.75 * v, -0.75 * v, v, -v]])
    th = m.theta(y)
    r = np.abs(y)
    assert np.all(th[r <= 0.75 * v] == 1.0)
    assert np.all(th[r >= v] == 0.0)
    assert np.all((th >= 0) & (th <= 1))
    inner = (r > 0.75 * v) & (r < v)
    assert np.all(th[inner] > 0)
    assert np.all(m.theta_complement(y[inner]) > 0)
    # monotone on the transition
    t = np.linspace(0.75 * v, v, 2001)
    assert np.all(np.diff(m.theta(t)) <= 0)


def test_complement_consistent():
    m = Mollifier(0.3, 10)
    y = np.linspace(-0.35, 0.35, 701)
    assert np.max(np.abs(m.theta(y) + m.theta_complement(y) - 1)) < 1e-14


@pytest.mark.parametrize("v", VARTHETAS)
@pytest.mark.parametrize("k", KS)
def test_bound_sweep(v, k):
    m = Mollifier(v, k)
    x = np.logspace(-4, 4, 10_000) / v
    assert np.all(m.check_bound(x))
    assert np.all(m.check_bound(-x))


def test_random_bound_and_large_x():
    m = Mollifier(0.01, 10)
    x = np.random.default_rng(0).uniform(-1e4, 1e4, 1000)
    assert np.all(m.check_bound(x))
    big = 10 / m.vartheta
    assert m.check_bound(big) and m.check_bound(-big)
    # the power term takes over once 4k/(pi x vartheta) < 1: at 10/vartheta only for k <= 7
    for k, scale in ((5, 10), (7, 10), (10, 100), (20, 100)):
        mk = Mollifier(0.01, k)
        x = scale / mk.vartheta
        second = 1 / (math.pi * x)
        third = second * (k / (2 * math.pi * x * mk.vartheta / 8)) ** k
        assert third < second and mk.bound(x) == third and mk.check_bound(x)
    assert Mollifier(0.01, 10).bound(big) == 1 / (math.pi * big)


def test_third_term_is_product_of_box_factors():
    m = Mollifier(0.02, 7)
    x = np.array([3.0, 170.0, 2e4])
    prod = np.prod([1 / (math.pi * d * x) for d in m.widths], axis=0)
    assert np.allclose(prod, (m.k / (2 * math.pi * x * m.vartheta / 8)) ** m.k, rtol=1e-13)


@pytest.mark.parametrize("v,k", [(0.1, 2), (0.01, 10), (0.05, 5), (1e-3, 20)])
def test_transform_against_quadrature(v, k):
    m = Mollifier(v, k)
    xs = np.linspace(-10 / v, 10 / v, 100)
    ref = np.array([theta_hat_quadrature(m, float(x)) for x in xs])
    got = m.theta_hat(xs)
    sel = np.abs(ref) > 1e-12
    assert np.max(np.abs(got[sel] - ref[sel]) / np.abs(ref[sel])) < 1e-8
    assert np.array_equal(m.theta_hat(-xs), got)


def test_mass_and_integral_against_scipy():
    m = Mollifier(0.4, 6)
    f = lambda y: float(m.theta(y))
    pts = list(m.transition_breaks()) + [-b for b in m.transition_breaks()]
    mass = quad(f, -0.4, 0.4, points=pts, limit=200, epsabs=1e-15)[0]
    assert mass == pytest.approx(m.mass, rel=1e-12)
    for u in (-0.39, -0.31, -0.1, 0.0, 0.2, 0.33, 0.5):
        want = quad(f, -0.4, u, points=[p for p in pts if -0.4 < p < u] or None,
                    limit=200, epsabs=1e-15)[0] if u > -0.4 else 0.0
        assert float(m.theta_integral(u)) == pytest.approx(want, abs=1e-13)


def test_smoothness_order():
    # theta is C^(k-1): the k-th difference quotient jumps at an interior knot
    m = Mollifier(1.0, 3)
    knot = m.transition_breaks()[1]
    h = 1e-3
    left = m.theta(knot - np.array([0, h, 2 * h, 3 * h]))
    right = m.theta(knot + np.array([0, h, 2 * h, 3 * h]))
    d3l = (left[0] - 3 * left[1] + 3 * left[2] - left[3]) / h**3
    d3r = (right[3] - 3 * right[2] + 3 * right[1] - right[0]) / h**3
    assert abs(d3l - d3r) > 1.0
    d2l = (left[0] - 2 * left[1] + left[2]) / h**2
    d2r = (right[2] - 2 * right[1] + right[0]) / h**2
    assert abs(d2l - d2r) < 0.1 * max(abs(d3l), 1) * 10 * h + 2 * abs(d3l) * h
