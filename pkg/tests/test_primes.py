import math

import numpy as np
import pytest

from slpinterp.errors import InputError, ResourceLimitError
from slpinterp.ff import is_prime
from slpinterp.primes import ParamSet, compute_params, draw_primes, sieve_interval


def trial_primes(lo, hi):
    return [x for x in range(lo + 1, hi + 1) if x > 1 and all(x % d for d in range(2, math.isqrt(x) + 1))]


def reference_params(n, D, T, q):
    m = max(6, math.ceil(2 * math.log2(D)), math.ceil(25 / 8 * math.log(4 * T)))
    lam = max(21, 95 / 3 * (T - 1) * math.log(D), 80 * n, 10 / 3 * m * math.log(m))
    s = math.ceil(math.log2(40) + 2 * math.log2(m) + 2 * math.log2(n) + 2 * math.log2(T))
    u = 1
    while q**u < 2 * n * D + 1:
        u += 1
    return m, lam, s, u


def test_param_examples():
    assert compute_params(2, 2**20, 4, 101).m == 40
    assert compute_params(1, 2, 1, 13).m == 6
    p = compute_params(2, 21, 4, 13)
    assert p.lam >= 21 and p.lam >= 160


@pytest.mark.parametrize("n", [1, 2, 3, 8])
@pytest.mark.parametrize("D", [2, 3, 16, 21, 1000, 2**20, 2**32])
@pytest.mark.parametrize("T", [1, 2, 5, 64])
@pytest.mark.parametrize("q", [2, 13, 101])
def test_params_match_formulas(n, D, T, q):
    got = compute_params(n, D, T, q)
    m, lam, s, u = reference_params(n, D, T, q)
    assert (got.m, got.s, got.u) == (m, s, u)
    assert got.lam == pytest.approx(lam, rel=1e-12)
    assert got.probes == got.m * got.n * (got.s + 1)
    assert q ** got.u >= 2 * n * D + 1 and (got.u == 1 or q ** (got.u - 1) < 2 * n * D + 1)


def test_params_reject_bad_input():
    for bad in [(0, 4, 1, 13), (1, 1, 1, 13), (1, 4, 0, 13), (1, 4, 1, 1)]:
        with pytest.raises(InputError):
            compute_params(*bad)


def test_params_monotone():
    base = dict(n=2, D=256, T=4, q=101)
    for key, values in [("n", range(1, 9)), ("D", [2**k for k in range(2, 33)]), ("T", range(1, 65))]:
        prev = None
        for val in values:
            p = compute_params(**{**base, key: val})
            if prev is not None:
                assert p.m >= prev.m and p.lam >= prev.lam
            prev = p


def test_sieve_examples():
    assert sieve_interval(21) == [23, 29, 31, 37, 41]
    assert sieve_interval(2.5) == [3, 5]
    assert sieve_interval(2) == [3]


@pytest.mark.parametrize("lam", [2, 3.7, 10, 21, 50.5, 997, 4000])
def test_sieve_matches_trial_division(lam):
    assert sieve_interval(lam) == trial_primes(math.floor(lam), math.floor(2 * lam))


@pytest.mark.parametrize("lam", [21, 100, 1000, 10**5])
def test_prime_count_lower_bound(lam):
    assert len(sieve_interval(lam)) >= 3 * lam / (5 * math.log(lam))


def test_sieve_limits():
    with pytest.raises(InputError):
        sieve_interval(1.5)
    with pytest.raises(ResourceLimitError):
        sieve_interval(2**32 + 1)


def small_params(lam, m):
    return ParamSet(n=1, D=4, T=1, q=13, m=m, lam=lam, s=1, u=1)


def test_draw_whole_interval():
    pool = sieve_interval(21)
    got = draw_primes(small_params(21, len(pool)), np.random.default_rng(0))
    assert sorted(got) == pool


def test_draw_properties(rng):
    params = compute_params(2, 2**10, 6, 101)
    for _ in range(50):
        got = draw_primes(params, rng)
        assert len(got) == params.m == len(set(got))
        assert all(is_prime(p) and params.lam < p <= 2 * params.lam for p in got)


def test_draw_frequencies():
    pool = sieve_interval(100)  # 21 primes in (100, 200]
    m, N = 6, 10**4
    rng = np.random.default_rng(11)
    counts = dict.fromkeys(pool, 0)
    for _ in range(N):
        for p in draw_primes(small_params(100, m), rng):
            counts[p] += 1
    prob = m / len(pool)
    sigma = math.sqrt(N * prob * (1 - prob))
    for c in counts.values():
        assert abs(c - N * prob) <= 5 * sigma


def test_draw_deterministic():
    params = compute_params(3, 512, 5, 101)
    assert draw_primes(params, np.random.default_rng(5)) == draw_primes(params, np.random.default_rng(5))
