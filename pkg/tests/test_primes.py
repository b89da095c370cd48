import pytest
from hypothesis import given, strategies as st

from gbx import InvalidArgument, OutOfRange, build_sieve, is_prime
from oracles import divisor_count, trial_is_prime


def test_small_sieve_membership():
    s = build_sieve(10)
    assert [n for n in range(11) if is_prime(s, n)] == [2, 3, 5, 7]


def test_hand_checked():
    s = build_sieve(40)
    assert is_prime(s, 37)
    assert not is_prime(s, 39)


def test_count_to_2000_matches_trial_division():
    # frozen from trial_is_prime over [0, 2000]
    assert build_sieve(2000).count() == 303
    assert build_sieve(2000).count() == sum(map(trial_is_prime, range(2001)))


def test_queries():
    s = build_sieve(100)
    assert is_prime(s, 2)
    assert not is_prime(s, 91)
    with pytest.raises(OutOfRange):
        is_prime(s, 101)
    assert not is_prime(s, 0) and not is_prime(s, 1)


@pytest.mark.parametrize("limit", [1, 0, -5])
def test_bad_limit(limit):
    with pytest.raises(InvalidArgument):
        build_sieve(limit)


def test_agrees_with_trial_division_to_10000():
    s = build_sieve(10_000)
    assert all(s.is_prime(n) == trial_is_prime(n) for n in range(10_001))


def test_two_divisor_definition():
    s = build_sieve(300)
    assert all(s.is_prime(n) == (divisor_count(n) == 2) for n in range(1, 301))


@given(st.integers(2, 3000), st.integers(0, 3000))
def test_growing_preserves_answers(small, extra):
    a, b = build_sieve(small), build_sieve(small + extra)
    assert all(a.is_prime(n) == b.is_prime(n) for n in range(small + 1))


def test_primes_upto():
    s = build_sieve(50)
    assert list(s.primes(20)) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert 13 in s
