import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dioprime.errors import DomainError, OutOfRangeError, ResourceError
from dioprime.ntheory import (big_omega, big_omega_array, coprime_to_Pz, euler_phi, factorize,
                              is_almost_prime, load_table, mobius, phi_reciprocal_sum, primes_in,
                              save_table, sieve_primes, smallest_factor_table)
from oracles import P_of, factor_td, is_prime_td, mobius_td, omega_td, phi_gcd


def test_small_tables():
    assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]
    assert sieve_primes(1).primes.tolist() == []
    assert sieve_primes(0).primes.tolist() == []


def test_count_to_a_million(table):
    assert len(primes_in(0, 10**6, table)) == 78498


def test_membership_matches_trial_division(small_table):
    flags = small_table.primality
    assert all(bool(flags[n]) == is_prime_td(n) for n in range(10**4 + 1))
    assert np.all(np.diff(small_table.primes) > 0)


def test_segment_boundaries_consistent():
    # a limit spanning several segments agrees with a one-shot sieve on its prefix
    a = sieve_primes(3 * 2**16 + 17)
    b = sieve_primes(2**16 + 5)
    assert np.array_equal(a.primes[: b.primes.size], b.primes)
    assert all(is_prime_td(int(p)) for p in a.primes[-50:])


def test_memory_cap():
    with pytest.raises(ResourceError):
        sieve_primes(10**6, cap=10**5)


def test_primes_in(small_table):
    assert primes_in(10, 20, small_table).tolist() == [11, 13, 17, 19]
    assert primes_in(4, 4, small_table).tolist() == []
    assert primes_in(2, 3, small_table).tolist() == [3]
    assert primes_in(2.5, 7.9, small_table).tolist() == [3, 5, 7]
    with pytest.raises(OutOfRangeError):
        primes_in(0, 10**4 + 1, small_table)


def test_cache_round_trip(tmp_path):
    path = tmp_path / "t.ptbl"
    built = sieve_primes(123_457, cache=path)
    assert path.read_bytes()[:4] == b"PTBL"
    loaded = load_table(path)
    assert loaded.limit == built.limit
    assert np.array_equal(loaded.primality, built.primality)
    again = sieve_primes(100_000, cache=path)
    assert np.array_equal(again.primes, sieve_primes(100_000).primes)
    save_table(again, tmp_path / "u.ptbl")
    assert np.array_equal(load_table(tmp_path / "u.ptbl").primes, again.primes)


def test_multiplicative_examples():
    assert euler_phi(1) == 1 and euler_phi(105) == 48 and euler_phi(12) == 4
    assert mobius(1) == 1 and mobius(12) == 0 and mobius(30) == -1
    assert big_omega(1) == 0 and big_omega(96) == 6 and big_omega(9) == 2
    assert is_almost_prime(7, 1) and not is_almost_prime(9, 1) and is_almost_prime(1, 1)
    with pytest.raises(DomainError):
        euler_phi(0)
    with pytest.raises(DomainError):
        mobius(0)


def test_functions_match_oracles_up_to_1e4():
    for n in range(1, 10**4 + 1):
        assert factorize(n) == factor_td(n)
        assert mobius(n) == mobius_td(n)
        assert big_omega(n) == omega_td(n)
    for n in range(1, 2001):
        assert euler_phi(n) == phi_gcd(n)


def test_multiplicativity_random_coprime_pairs():
    rng = random.Random(7)
    done = 0
    while done < 1000:
        m, n = rng.randint(1, 10**6), rng.randint(1, 10**6)
        if math.gcd(m, n) != 1:
            continue
        assert euler_phi(m * n) == euler_phi(m) * euler_phi(n)
        assert mobius(m * n) == mobius(m) * mobius(n)
        done += 1


def test_coprime_examples():
    assert not coprime_to_Pz(35, 10)
    assert coprime_to_Pz(1024, 10**6)
    assert coprime_to_Pz(1, 7)


@pytest.mark.parametrize("z", [3, 5, 7.5, 10, 13, 20, 29, 30])
def test_coprime_matches_explicit_product(z):
    P = P_of(z)
    for n in range(1, 10**4 + 1):
        assert coprime_to_Pz(n, z) == (math.gcd(n, P) == 1)


def test_phi_reciprocal_sum():
    assert phi_reciprocal_sum(2) == 2.0
    assert phi_reciprocal_sum(10) == pytest.approx(4.583333333333333, abs=1e-15)
    zeta = lambda s: sum(k**-s for k in range(1, 200_000))
    C = zeta(2) * zeta(3) / zeta(6)
    assert C == pytest.approx(1.9436, abs=1e-4)
    ratios = [phi_reciprocal_sum(10**e) / math.log(10**e) for e in (3, 4, 5, 6)]
    assert all(r < 3.0 for r in ratios)
    assert 1.5 <= ratios[-1] <= 2.5
    # the ratio creeps up towards C, it does not decrease
    assert all(r < C for r in ratios)


def test_omega_array_and_spf():
    spf = smallest_factor_table(10**4)
    vals = np.arange(1, 10**4 + 1)
    assert big_omega_array(vals, spf).tolist() == [omega_td(int(n)) for n in vals]
    with pytest.raises(OutOfRangeError):
        big_omega_array(np.array([10**4 + 1]), spf)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**12))
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime_td(p) for p in f if p < 10**7)
