import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unaryufa.primes import (
    ClusterNotFound,
    PrimeSet,
    cluster_interval,
    cluster_violation,
    is_prime,
    select_cluster,
    select_desk,
    sieve,
)


def trial_division(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def test_sieve_matches_trial_division():
    assert sieve(5000) == [p for p in range(5001) if trial_division(p)]


@given(st.integers(0, 10**6))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == trial_division(n)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**19 - 1))
    with pytest.raises(ValueError):
        is_prime(2**89 - 1)
    assert is_prime(1_000_000_007)


def test_cluster_n8():
    ps = select_cluster(8)
    lo, hi, _ = cluster_interval(8)
    assert len(ps) == 8
    assert all(lo <= p <= hi for p in ps)
    assert max(ps) / min(ps) <= 1.125
    assert cluster_violation(ps.primes) == ""


def test_documented_n8_window_is_valid():
    window = [p for p in range(479, 524) if trial_division(p)]
    assert window == [479, 487, 491, 499, 503, 509, 521, 523]
    assert cluster_violation(window) == ""


def test_cluster_n16():
    ps = select_cluster(16)
    assert ps.primes[0] == 2671 and ps.primes[-1] == 2753
    assert max(ps) / min(ps) <= 1 + 1 / 16
    assert ps.primes[-1] < 4 * 256 * math.log(16)


def test_cluster_not_found_for_n2():
    with pytest.raises(ClusterNotFound):
        select_cluster(2)


def test_desk_primes():
    assert select_desk(8, 3).primes == (5, 7, 11, 13, 17, 19, 23, 29)
    assert select_desk(128, 7).primes[0] == 11


def test_prime_set_validation():
    with pytest.raises(ValueError):
        PrimeSet((5, 9))
    with pytest.raises(ValueError):
        PrimeSet((7, 5))
    ps = PrimeSet((5, 7))
    assert ps.product() == 35
    assert PrimeSet.from_dict(ps.to_dict()) == ps
