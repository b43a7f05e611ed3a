import math

import numpy as np
import pytest

from eulerkronecker.arith import primes_upto, sieve_primes
from eulerkronecker.errors import CapacityError, RangeError, UnsupportedModulusError
from eulerkronecker.invariants import (
    Method,
    e_r,
    gamma_ek,
    gamma_via_primes,
    kummer_prime_sum,
    kummer_ratio,
    log_G,
    s_of_q,
    s_of_q_tail_bound,
    taylor_consistency,
)
from eulerkronecker.lfun import l_spectrum, l_values_at
from eulerkronecker.specfun import EULER_GAMMA

SMALL_Q = [int(p) for p in primes_upto(97) if p > 2]


def bareiss_det(m):
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def exact_h1(q):
    """Relative class number from an integer determinant.

    With g_k = g^k mod q and m = (q-1)/2, the odd-character product of
    sum_k g_k x^k is the negacyclic determinant of c_k = 2 g_k - q, and
    h_1 = |det| / (2q)^(m-1).
    """
    g = next(g for g in range(2, q) if all(pow(g, (q - 1) // p, q) != 1 for p in range(2, q) if (q - 1) % p == 0 and all(p % d for d in range(2, p))))
    m = (q - 1) // 2
    c = [2 * pow(g, k, q) - q for k in range(m)]
    mat = [[c[(j - i) % m] * (1 if j >= i else -1) for j in range(m)] for i in range(m)]
    num = abs(bareiss_det(mat))
    den = (2 * q) ** (m - 1)
    assert num % den == 0
    return num // den


def test_exact_h1_oracle_known_values():
    assert [exact_h1(q) for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)] == [1, 1, 1, 1, 1, 1, 1, 3, 8, 9]


def test_gamma_19_anchor():
    assert gamma_ek(19).gamma_over_logq == pytest.approx(1.626, abs=1e-3)


def test_gamma_17183_anchor():
    assert gamma_ek(17183).gamma_over_logq == pytest.approx(0.315, abs=1e-3)


def test_gamma_3_by_central_difference():
    h = 1e-4
    up, down = l_values_at(3, 1 + h)[1], l_values_at(3, 1 - h)[1]
    expected = EULER_GAMMA + (math.log(up.real) - math.log(down.real)) / (2 * h)
    assert abs(gamma_ek(3).gamma_q - expected) < 1e-6


@pytest.mark.parametrize("q", [3, 5, 7, 19, 101, 1009, 9973])
def test_report_invariants(q):
    sp = l_spectrum(q)
    ek = gamma_ek(q, sp)
    assert ek.method is Method.CHARACTERS
    assert ek.gamma_diff == ek.gamma_q - ek.gamma_q_plus
    assert ek.gamma_over_logq == ek.gamma_q / math.log(q)
    assert abs(np.sum(sp.ratios[sp.odd]).real - ek.gamma_diff) < 1e-8
    assert abs(np.sum(sp.ratios[1:]).imag) < 1e-8
    assert abs(np.sum(np.log(sp.L1[sp.odd])).imag) < 1e-8
    assert 0 < ek.est_abs_error < 1e-6
    kr = kummer_ratio(q, sp)
    assert kr.r > 0 and kr.r == math.exp(kr.log_r)


def test_kummer_anchors():
    assert kummer_ratio(5231).r == pytest.approx(1.556562, abs=1e-5)
    assert kummer_ratio(3331).r == pytest.approx(0.642429, abs=1e-5)


def test_kummer_ratio_q3_is_the_minimum_below_1e4():
    # r(3) = L(1, chi_{-3}) = pi / (3 sqrt 3) lies below the value at 3331
    assert kummer_ratio(3).r == pytest.approx(math.pi / (3 * math.sqrt(3)), abs=1e-14)
    assert kummer_ratio(3).r < kummer_ratio(3331).r


@pytest.mark.parametrize("q", SMALL_Q)
def test_h1_integer_and_exact(q):
    kr = kummer_ratio(q)
    assert kr.h1_rounded == exact_h1(q)
    assert kr.h1_residual < 1e-4
    assert (kr.h1_rounded == 1) == (q <= 19)
    assert abs(kr.log_r + kr.log_G - math.log(kr.h1_rounded)) < 1e-9


def test_h1_omitted_beyond_double_range():
    kr = kummer_ratio(1009)
    assert kr.h1_rounded is None and kr.h1_residual is None
    assert kr.log_r + kr.log_G > math.log(2**52)


def test_log_G_small_case():
    assert log_G(3) == pytest.approx(math.log(6 * math.sqrt(3 / (4 * math.pi**2))), abs=1e-15)


def test_s_of_q_exact_oracle_q3():
    # ord_3(p) = 2 exactly for p = 2 mod 3; p^2 - 1 < 2^53 so the denominator is exact
    terms = [math.log(p) / (p * p - 1) for p in map(int, primes_upto(10**7)) if p % 3 == 2]
    assert s_of_q(3, 10**7) == pytest.approx(2 * math.fsum(terms), rel=1e-12)


def brute_s_of_q(q, p_max):
    total = []
    for p in map(int, primes_upto(p_max)):
        if p == q:
            continue
        f, x = 1, p % q
        while x != 1:
            x = x * p % q
            f += 1
        if f >= 2:
            d = p**f - 1
            # beyond ~2^1000 the term vanishes in double precision anyway
            total.append(math.log(p) / d if d.bit_length() < 1000 else 0.0)
    return (q - 1) * math.fsum(total)


@pytest.mark.parametrize("q", [5, 7, 31, 101])
def test_s_of_q_exact_bigint_oracle(q):
    assert s_of_q(q, 10**5) == pytest.approx(brute_s_of_q(q, 10**5), rel=1e-12)


@pytest.mark.parametrize("q", [3, 7, 31, 997])
def test_s_of_q_tail_stability(q):
    assert abs(s_of_q(q, 10**7) - s_of_q(q, 10**6)) < s_of_q_tail_bound(q, 10**6)


def test_s_of_q_bound_sample():
    assert max(s_of_q(q, 10**7) for q in (3, 5, 7, 11, 13, 31, 1009, 9973)) <= 45


def test_s_of_q_range_error():
    with pytest.raises(RangeError):
        s_of_q(101, 150)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_gamma_via_primes_cross_method(q):
    est = gamma_via_primes(q, 1e8)
    assert abs(est.value - gamma_ek(q).gamma_q) < 0.05
    assert "truncated" in est.tail_note


def test_gamma_via_primes_degenerate_window():
    est = gamma_via_primes(3, 10)
    assert math.isfinite(est.value)
    assert "below the useful range" in est.tail_note
    # only p = 7 qualifies
    expected = -math.log(3) / 2 - s_of_q(3, 10**7) + math.log(10) - 2 * math.log(7) / 6
    assert est.value == pytest.approx(expected, abs=1e-12)


def test_e_r_hand_value_q3():
    g3 = gamma_ek(3).gamma_q
    assert e_r(3, 2) == pytest.approx(g3 - 2 * math.log(3) + 3 * math.log(7) / 6, abs=1e-13)


def test_e_r_q19_redundant_path():
    sp = l_spectrum(19, method="naive")
    gamma = EULER_GAMMA + float(np.sum(sp.ratios[1:]).real)
    primes = sieve_primes(361).primes()
    split = [int(p) for p in primes if p % 19 == 1]
    assert split == [191, 229]
    expected = gamma - 2 * math.log(19) + 19 * math.fsum(math.log(p) / (p - 1) for p in split)
    assert e_r(19, 2) == pytest.approx(expected, abs=1e-11)


def test_e_r_scan_finite():
    values = [e_r(q, 2, gamma_ek(q, p_max=2 * q).gamma_q) for q in map(int, primes_upto(10**4)) if q > 2]
    assert len(values) == 1228 and all(math.isfinite(v) for v in values)


def test_e_r_range():
    with pytest.raises(RangeError):
        e_r(3, 1.0)
    with pytest.raises(RangeError):
        e_r(3, 2.5)


def test_kummer_prime_sum_hand_enumeration():
    # p^m <= 4: 2 = -1 mod 3 subtracts 1/2, 4 = 2^2 = 1 mod 3 adds (1/2)(1/4)
    assert kummer_prime_sum(3, 4) == pytest.approx(-0.5 + 0.125, abs=1e-15)


@pytest.mark.parametrize("q", [3, 5])
def test_kummer_prime_sum_cross_method(q):
    assert abs(kummer_prime_sum(q, 1e8) - kummer_ratio(q).log_r) < 0.05


@pytest.mark.parametrize("q", [3, 7, 23])
def test_taylor_consistency(q):
    assert taylor_consistency(q) < 1e-5


def test_unsupported_and_capacity():
    with pytest.raises(UnsupportedModulusError):
        gamma_ek(2)
    with pytest.raises(UnsupportedModulusError):
        kummer_ratio(15)
    with pytest.raises(CapacityError):
        gamma_ek(964477901)
