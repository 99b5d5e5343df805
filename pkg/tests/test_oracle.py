import math

import pytest
from hypothesis import given, strategies as st

from ctes.errors import DomainError
from ctes.oracle import divisors_in, is_composite, residue_max_intensity, trial_division
from ctes.sumcore import SumConfig, nonfactor_ceiling


def test_single_number():
    f = trial_division(207911)
    assert f.prime_powers == ((11, 1), (41, 1), (461, 1))
    assert f.value() == 207911 == 451 * 461


def test_dual_number():
    f = trial_division(1308567)
    assert f.value() == 1308567 == 1131 * 1157
    assert f.prime_powers == ((3, 1), (13, 2), (29, 1), (89, 1))
    assert trial_division(1306349).value() == 1133 * 1153


def test_two_and_domain():
    assert trial_division(2).prime_powers == ((2, 1),)
    with pytest.raises(DomainError):
        trial_division(1)


@pytest.mark.parametrize("N,lo,hi,expected", [
    (207911, 451, 461, [451, 461]),
    (1306349, 1151, 1158, [1153]),
    (97, 3, 9, []),
])
def test_divisors_in(N, lo, hi, expected):
    assert divisors_in(N, lo, hi) == expected


@given(st.integers(2, 10**6))
def test_factorization_is_complete(N):
    f = trial_division(N)
    assert f.value() == N
    primes = [p for p, _ in f.prime_powers]
    assert primes == sorted(primes)
    assert all(len(divisors_in(p, 2, p)) == 1 for p in primes)


@given(st.integers(2, 10**5))
def test_composite_iff_small_divisor(N):
    by_division = len(trial_division(N).prime_powers) > 1 or trial_division(N).prime_powers[0][1] > 1
    assert is_composite(N) == by_division == bool(divisors_in(N, 2, math.isqrt(N)))


def test_residue_search_examples():
    r, v = residue_max_intensity(SumConfig(2, 1), 5)
    assert r in (1, 4) and v == pytest.approx(0.6545084971874737, abs=1e-12)
    assert residue_max_intensity(SumConfig(3, 2), 2) == (1, pytest.approx(1 / 9, abs=1e-15))
    # enumeration over r = 1, 2, 3 with cmath: 5/9, 1/9, 5/9
    r, v = residue_max_intensity(SumConfig(3, 2), 4)
    assert r == 1 and v == pytest.approx(5 / 9, abs=1e-12)


@pytest.mark.parametrize("M,j", [(2, 1), (3, 2), (3, 3), (4, 2)])
def test_residue_search_matches_ceiling_small(M, j):
    cfg = SumConfig(M, j)
    for ell in range(2, 200):
        assert residue_max_intensity(cfg, ell)[1] == pytest.approx(nonfactor_ceiling(cfg, ell), abs=1e-12)
