import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dioprime.errors import DomainError, ResourceError
from dioprime.ntheory import coprime_to_Pz, mobius
from dioprime.rosser import (EULER_GAMMA, F_upper, G_pm, G_pm_exact, W_of, build_weights, f_lower,
                             lambda_exact, lambda_pm, lambda_pm_array, positivity_checks,
                             sandwich_violations, sieve_summary, singular_product,
                             singular_product_exact, trivial_weights, vector_sieve_lower)
from oracles import rosser_weight_brute

GRID_Z = [7, 10, 20, 30]
GRID_D = [10, 10**2, 10**3, 10**5]


def test_generous_level_is_mobius(small_table):
    w = build_weights(10, 1000, small_table)
    assert sorted(w.entries) == [1, 3, 5, 7, 15, 21, 35, 105]
    assert all(w.entries[d] == (mobius(d), mobius(d)) for d in w.entries)
    assert G_pm(w) == (pytest.approx(0.3125, abs=1e-12), pytest.approx(0.3125, abs=1e-12))


def test_level_100(small_table):
    w = build_weights(10, 100, small_table)
    d, lp = w.support("+")
    assert dict(zip(d.tolist(), lp.tolist())) == {1: 1, 3: -1}
    d, lm = w.support("-")
    assert dict(zip(d.tolist(), lm.tolist())) == {1: 1, 3: -1, 5: -1, 7: -1}
    gm, gp = G_pm(w)
    assert gp == 0.5 and gm == pytest.approx(1 / 12, abs=1e-15)
    assert lambda_pm(35, w) == (-1, 1)
    assert lambda_pm(1, w) == (1, 1)
    assert lambda_pm(3, w) == (0, 0)


def test_trivial_tables(small_table):
    w = trivial_weights()
    assert w.entries == {1: (1, 1)} and G_pm(w) == (1.0, 1.0)
    # z = 3, D = 2: the single prime 3 fails 3**3 < 2 for the upper weight, but
    # the lower weight -1 at d = 3 survives (no even-level condition applies)
    w = build_weights(3, 2, small_table)
    assert w.entries == {1: (1, 1), 3: (-1, 0)}
    assert sandwich_violations(w) == []
    with pytest.raises(DomainError):
        build_weights(2.5, 100, small_table)


def test_resource_guard(small_table):
    with pytest.raises(ResourceError):
        build_weights(30, 10**5, small_table, max_nodes=10)


@pytest.mark.parametrize("z", GRID_Z)
@pytest.mark.parametrize("D", GRID_D)
def test_weights_match_rules(z, D, small_table):
    w = build_weights(z, D, small_table)
    primes = list(w.sieving_primes)
    for r in range(len(primes) + 1):
        for combo in itertools.combinations(primes, r):
            d = math.prod(combo)
            want = rosser_weight_brute(list(combo), D)
            assert w.entries.get(d, (0, 0)) == want
    for d, (lm, lp) in w.entries.items():
        assert d % 2 == 1 and abs(lm) <= 1 and abs(lp) <= 1 and mobius(d) != 0
    assert w.entries[1] == (1, 1)


@pytest.mark.parametrize("z", GRID_Z)
@pytest.mark.parametrize("D", GRID_D)
def test_exhaustive_sandwich(z, D, small_table):
    assert sandwich_violations(build_weights(z, D, small_table)) == []


def test_sandwich_for_general_n(small_table):
    for z, D in itertools.product(GRID_Z, GRID_D):
        w = build_weights(z, D, small_table)
        ns = np.arange(1, 5001)
        lo, hi = lambda_pm_array(ns, w)
        exact = np.array([lambda_exact(int(n), z) for n in ns])
        assert np.all(lo <= exact) and np.all(exact <= hi)
        assert [lambda_pm(int(n), w) for n in ns[:300]] == list(zip(lo[:300].tolist(), hi[:300].tolist()))


def test_lambda_exact():
    assert lambda_exact(35, 10) == 0 and lambda_exact(1, 10) == 1 and lambda_exact(13 * 17, 10) == 1


def test_vector_sieve_examples():
    assert vector_sieve_lower((1, 1, 1), (1, 1, 1)) == 1
    assert vector_sieve_lower((0, 0, 0), (1, 1, 1)) == -2
    assert vector_sieve_lower((-1, 0, 0), (0, 1, 1)) == -1


def test_vector_sieve_inequality_from_tables(small_table):
    w = build_weights(10, 100, small_table)
    rng = random.Random(5)
    ns = [rng.randint(1, 10**6) for _ in range(3000)]
    pairs = [lambda_pm(n, w) for n in ns]
    checked = 0
    for bits in itertools.product((0, 1), repeat=3):
        for _ in range(300):
            trip = []
            for b in bits:
                # draw an n whose weights bracket the binary value b
                cands = [p for p in pairs if p[0] <= b <= p[1]]
                trip.append(rng.choice(cands))
            lm = tuple(t[0] for t in trip)
            lp = tuple(t[1] for t in trip)
            assert bits[0] * bits[1] * bits[2] >= vector_sieve_lower(lm, lp)
            checked += 1
    assert checked == 2400


@pytest.mark.parametrize("z,D", [(7, 50), (10, 200), (20, 1000), (30, 3000), (13, 1000),
                                 (50, 10**4), (100, 2 * 10**5), (200, 10**6)])
def test_density_sandwich(z, D, small_table):
    w = build_weights(z, D, small_table)
    s = math.log(D) / math.log(z)
    assert 2 <= s <= 3
    gm, gp = G_pm_exact(w)
    F = singular_product_exact(z, small_table)
    assert gm <= F <= gp
    summ = sieve_summary(w, small_table)
    assert summ.sandwich_ok and summ.as_dict()["W"] == W_of(summ.Gminus, summ.Gplus)


def test_generous_level_identity(small_table):
    for z in (7, 10, 13):
        r = len(build_weights(z, 10, small_table).sieving_primes)
        w = build_weights(z, float(z) ** (r + 2) * 10, small_table)
        gm, gp = G_pm_exact(w)
        assert gm == gp == singular_product_exact(z, small_table)


def test_singular_product(small_table):
    assert singular_product(10, small_table) == pytest.approx(0.3125, abs=1e-15)
    assert singular_product(3, small_table) == 0.5
    assert singular_product(2.9, small_table) == 1.0
    assert singular_product_exact(10, small_table) == Fraction(5, 16)


def test_sieve_curves():
    assert f_lower(2) == 0.0
    assert F_upper(3) == pytest.approx(1.18738, abs=1e-5)
    assert EULER_GAMMA == pytest.approx(0.5772156649015329, abs=1e-15)
    for bad in (1.99, 3.01):
        with pytest.raises(DomainError):
            f_lower(bad)
        with pytest.raises(DomainError):
            F_upper(bad)


def test_W():
    assert W_of(0.3, 0.3) == pytest.approx(0.3**3, rel=1e-15)
    assert W_of(1 / 12, 1 / 2) == pytest.approx(-0.1875, rel=1e-14)
    assert W_of(0.3125, 0.3125) == pytest.approx(0.030517578125, rel=1e-14)


def test_positivity_checks():
    c = positivity_checks()
    assert c["h"] == 28 and c["margin_ok"]
    assert c["f_minus_two_thirds_F"] == pytest.approx(1.64983e-4, rel=1e-4)
    assert not c["beta_below_one_thirtieth"]


def test_csv_export(tmp_path, small_table):
    w = build_weights(10, 100, small_table)
    w.to_csv(tmp_path / "w.csv")
    rows = (tmp_path / "w.csv").read_text().splitlines()
    assert rows[0] == "d,lambda_minus,lambda_plus"
    assert len(rows) == len(w) + 1
