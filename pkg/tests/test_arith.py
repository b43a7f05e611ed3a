import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eulerkronecker.arith import (
    MAX_SIEVE_LIMIT,
    cyclotomic_discriminant_log,
    euler_phi,
    factorize,
    is_prime_u64,
    multiplicative_order,
    primes_in_ap,
    primes_upto,
    primitive_root,
    require_odd_prime,
    sieve_primes,
)
from eulerkronecker.errors import DomainError, RangeError, UnsupportedModulusError


def plain_sieve(n):
    """Textbook bytearray sieve, the reference for the segmented one."""
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return flags


REF = plain_sieve(10**7)
REF_PRIMES = np.flatnonzero(np.frombuffer(bytes(REF), dtype=np.uint8))


def test_prime_counts():
    assert sieve_primes(10**6).count() == 78498
    assert sieve_primes(100).count() == 25
    assert len(primes_upto(10**7)) == 664579


def test_segmented_sieve_matches_reference():
    sv = sieve_primes(10**6, segment_size=4096)
    assert np.array_equal(sv.primes(), REF_PRIMES[REF_PRIMES <= 10**6])
    assert np.array_equal(primes_upto(10**7), REF_PRIMES)


@pytest.mark.parametrize("limit", [2, 3, 7, 8, 9, 1000, 4097])
def test_sieve_edges(limit):
    assert list(sieve_primes(limit, segment_size=16).primes()) == [p for p in REF_PRIMES if p <= limit]


def test_sieve_range_errors():
    with pytest.raises(RangeError):
        sieve_primes(1)
    with pytest.raises(RangeError):
        sieve_primes(MAX_SIEVE_LIMIT + 1)


def test_membership():
    sv = sieve_primes(1000)
    assert 997 in sv and 999 not in sv and 5000 not in sv
    with pytest.raises(RangeError):
        sv.is_prime(1001)


def test_miller_rabin_matches_sieve_to_1e7():
    flags = np.frombuffer(bytes(REF), dtype=np.uint8)
    # composites fail fast on trial division; this covers every n <= 1e7
    mismatches = [n for n in range(10**7 + 1) if is_prime_u64(n) != bool(flags[n])]
    assert mismatches == []


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (2**64 - 59, True),
        (2**64 - 1, False),
        (3_215_031_751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3_825_123_056_546_413_051, False),  # strong pseudoprime to the first nine primes
        (341_550_071_728_321, False),
        (1_000_000_007 * 998_244_353, False),
        (964477901, True),
    ],
)
def test_miller_rabin_hard_cases(n, expected):
    assert is_prime_u64(n) is expected


def test_primes_in_ap_matches_filter_small_moduli():
    window = (2, 10**5)
    ref = REF_PRIMES[REF_PRIMES <= window[1]]
    for q in (int(p) for p in REF_PRIMES[(REF_PRIMES >= 3) & (REF_PRIMES <= 300)]):
        for a in range(1, q):
            got = primes_in_ap(q, a, *window).to_array()
            assert np.array_equal(got, ref[ref % q == a]), (q, a)


def test_primes_in_ap_matches_filter_sampled_to_1e4():
    rng = random.Random(7)
    for q in (int(p) for p in REF_PRIMES[(REF_PRIMES > 300) & (REF_PRIMES <= 10**4)]):
        for a in rng.sample(range(1, q), 3):
            lo = rng.randrange(2, 10**6)
            hi = lo + rng.randrange(0, 10**6)
            ref = REF_PRIMES[(REF_PRIMES >= lo) & (REF_PRIMES <= hi)]
            got = primes_in_ap(q, a, lo, hi, segment_size=rng.choice([64, 1 << 20])).to_array()
            assert np.array_equal(got, ref[ref % q == a]), (q, a, lo, hi)


def test_primes_in_ap_includes_small_members():
    assert list(primes_in_ap(3, 2, 2, 20)) == [2, 5, 11, 17]
    assert list(primes_in_ap(7, 1, 2, 100)) == [29, 43, 71]


def test_primes_in_ap_errors():
    with pytest.raises(DomainError):
        primes_in_ap(7, 7, 2, 100)
    with pytest.raises(DomainError):
        primes_in_ap(7, 9, 2, 100)
    with pytest.raises(RangeError):
        primes_in_ap(7, 1, 1, 100)
    with pytest.raises(RangeError):
        primes_in_ap(7, 1, 2, MAX_SIEVE_LIMIT + 1)


def brute_order(p, q):
    f, x = 1, p % q
    while x != 1:
        x = x * p % q
        f += 1
    return f


def test_multiplicative_order_example():
    assert multiplicative_order(3, 1009) == brute_order(3, 1009)


@given(st.sampled_from([int(p) for p in REF_PRIMES[(REF_PRIMES >= 3) & (REF_PRIMES < 5000)]]), st.integers(1, 10**9))
def test_order_divides_and_is_minimal(q, p):
    if p % q == 0:
        with pytest.raises(DomainError):
            multiplicative_order(p, q)
        return
    f = multiplicative_order(p, q)
    assert (q - 1) % f == 0
    assert f == brute_order(p, q)


def test_primitive_roots_generate_the_group():
    for q in (int(p) for p in REF_PRIMES[(REF_PRIMES >= 3) & (REF_PRIMES <= 2000)]):
        g = primitive_root(q)
        seen = {pow(g, k, q) for k in range(q - 1)}
        assert seen == set(range(1, q))
        assert all(len({pow(h, k, q) for k in range(q - 1)}) < q - 1 for h in range(2, g))


def test_require_odd_prime():
    require_odd_prime(3)
    for bad in (2, 1, 0, 9, 91):
        with pytest.raises(UnsupportedModulusError):
            require_odd_prime(bad)


@given(st.integers(2, 10**12))
@settings(max_examples=200)
def test_factorize_roundtrip(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac.items()) == n
    assert all(is_prime_u64(p) for p in fac)


def test_euler_phi_against_gcd_count():
    for n in range(1, 300):
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def exact_discriminant(n):
    """(-1)^(phi/2) n^phi / prod p^(phi/(p-1)) as an exact rational."""
    phi = euler_phi(n)
    d = Fraction(n) ** phi
    for p in factorize(n):
        d /= Fraction(p) ** (phi // (p - 1))
    return (-1) ** (phi // 2) * d


@pytest.mark.parametrize("n", [3, 4, 5, 7, 8, 12, 15, 23, 60])
def test_cyclotomic_discriminant(n):
    d = exact_discriminant(n)
    assert d.denominator == 1
    sign, log_abs = cyclotomic_discriminant_log(n)
    assert sign == (1 if d > 0 else -1)
    assert log_abs == pytest.approx(math.log(abs(d.numerator)), rel=1e-13, abs=1e-13)


def test_discriminant_known_values():
    assert exact_discriminant(12) == 144
    assert exact_discriminant(3) == -3
    assert exact_discriminant(5) == 125
