"""Euler-Kronecker constants, the Kummer ratio and prime-sum estimators for Q(zeta_q)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .arith import primes_in_ap, primes_upto, require_odd_prime
from .characters import CharacterTable, build_table
from .errors import InvariantError, RangeError
from .lfun import LSpectrum, l_spectrum, l_values_at
from .specfun import EULER_GAMMA

DEFAULT_PMAX = 10**7
IMAG_TOL = 1e-8
H1_LIMIT = 2.0**52
# decimal digits for the exact-rounding evaluation of h_1
H1_DPS = 40


def _fsum(x: np.ndarray) -> float:
    return math.fsum(np.asarray(x, dtype=np.float64).tolist())


class Method(str, enum.Enum):
    CHARACTERS = "characters"
    PRIME_SUM = "prime_sum"


@dataclass(frozen=True)
class EKReport:
    q: int
    gamma_q: float
    gamma_q_plus: float
    gamma_diff: float
    gamma_over_logq: float
    s_of_q: float
    method: Method
    est_abs_error: float
    odd_ratio_sum: float


@dataclass(frozen=True)
class KummerReport:
    q: int
    log_r: float
    r: float
    log_G: float
    h1_rounded: int | None = None
    h1_residual: float | None = None


@dataclass(frozen=True)
class PrimeSumEstimate:
    q: int
    x: float
    value: float
    tail_note: str


def _spectrum(q: int, spectrum: LSpectrum | None) -> LSpectrum:
    if spectrum is None:
        return l_spectrum(q)
    if spectrum.q != q:
        raise ValueError(f"spectrum is for q = {spectrum.q}, not {q}")
    return spectrum


def _real_sum(values: np.ndarray, what: str, q: int) -> float:
    re = _fsum(values.real)
    im = _fsum(values.imag)
    if abs(im) >= IMAG_TOL:
        raise InvariantError(f"{what} has imaginary part {im:.3g} at q = {q}")
    return re


def gamma_ek(q: int, spectrum: LSpectrum | None = None, p_max: int = DEFAULT_PMAX) -> EKReport:
    """gamma_q and gamma_q^+ from L'(1, chi)/L(1, chi) over the characters mod q."""
    sp = _spectrum(q, spectrum)
    odd = _real_sum(sp.ratios[sp.odd], "sum of odd L'/L", q)
    even = _real_sum(sp.ratios[sp.even], "sum of even L'/L", q) if q > 3 else 0.0
    gamma_q = EULER_GAMMA + math.fsum([odd, even])
    gamma_plus = EULER_GAMMA + even
    return EKReport(
        q=q,
        gamma_q=gamma_q,
        gamma_q_plus=gamma_plus,
        gamma_diff=gamma_q - gamma_plus,
        gamma_over_logq=gamma_q / math.log(q),
        s_of_q=s_of_q(q, p_max, sp.table),
        method=Method.CHARACTERS,
        est_abs_error=_fsum(sp.ratio_error[1:]),
        odd_ratio_sum=odd,
    )


def log_G(q: int) -> float:
    """log of Kummer's G(q) = 2q (q / 4 pi^2)^((q-1)/4)."""
    return math.log(2 * q) + (q - 1) / 4 * math.log(q / (4 * math.pi**2))


def _precise_r_times_G(q: int, table: CharacterTable) -> mpmath.mpf:
    """r(q) G(q) at H1_DPS digits from the cotangent formula for odd L(1, chi)."""
    with mpmath.workdps(H1_DPS):
        n = q - 1
        roots = [mpmath.expjpi(mpmath.mpf(2 * m) / n) for m in range(n)]
        cots = [mpmath.cot(mpmath.pi * a / q) for a in range(1, q)]
        k = [int(v) for v in table.dlog[1:]]
        prod = mpmath.mpf(1)
        for j in range(1, n, 2):
            s = mpmath.fsum(roots[(j * kk) % n] * c for kk, c in zip(k, cots))
            prod *= abs(s) * mpmath.pi / (2 * q)
        G = 2 * q * (mpmath.mpf(q) / (4 * mpmath.pi**2)) ** (mpmath.mpf(n) / 4)
        return prod * G


def kummer_ratio(q: int, spectrum: LSpectrum | None = None) -> KummerReport:
    """r(q) as the product of L(1, chi) over the odd characters.

    While r G < 2**52 the first factor h_1 = r G is also rounded; that step
    re-evaluates the product at 40 digits because double precision cannot
    resolve r G to 1e-4 once it passes ~1e8.
    """
    sp = _spectrum(q, spectrum)
    L = sp.L1[sp.odd]
    absL = np.abs(L)
    if not np.all(absL > 0):
        raise InvariantError(f"vanishing L(1, chi) at q = {q}")
    log_r = _fsum(np.log(absL))
    arg = _fsum(np.angle(L))
    if abs(arg) >= IMAG_TOL:
        raise InvariantError(f"odd L-values do not pair up at q = {q} (arg sum {arg:.3g})")
    lg = log_G(q)
    h1 = resid = None
    if log_r + lg < math.log(H1_LIMIT):
        rg = _precise_r_times_G(q, sp.table)
        h1 = int(mpmath.nint(rg))
        resid = float(abs(rg - h1))
    return KummerReport(q=q, log_r=log_r, r=math.exp(log_r), log_G=lg, h1_rounded=h1, h1_residual=resid)


def s_of_q_tail_bound(q: int, p_max: int) -> float:
    lp = math.log(p_max)
    return lp / p_max + (q - 1) * lp / (2 * p_max**2)


def s_of_q(q: int, p_max: int = DEFAULT_PMAX, table: CharacterTable | None = None) -> float:
    """S(q) = (q-1) sum_{p != q, ord_q(p) >= 2} log p / (p^ord - 1), over p <= p_max.

    Orders come from the discrete-log table: ord(g^k) = (q-1)/gcd(k, q-1).
    p^f - 1 is evaluated as expm1(f log p), so huge p^f underflow the term
    to zero instead of overflowing.
    """
    require_odd_prime(q)
    if p_max < 2 * q:
        raise RangeError(f"p_max must be at least 2q = {2 * q}, got {p_max}")
    table = table or build_table(q)
    orders = table.residue_orders()
    p, lp = _primes_with_logs(p_max)
    f = orders[p % q]
    # expm1 overflows past ~709.8; terms beyond exp(-700) do not register in S(q)
    keep = (f >= 2) & (f * lp < 700.0)
    lp, f = lp[keep], f[keep]
    return (q - 1) * _fsum(lp / np.expm1(f * lp))


@lru_cache(maxsize=2)
def _primes_with_logs(p_max: int) -> tuple[np.ndarray, np.ndarray]:
    p = primes_upto(p_max)
    lp = np.log(p.astype(np.float64))
    lp.setflags(write=False)
    return p, lp


def _split_prime_log_sum(q: int, x: int) -> float:
    """sum_{p <= x, p = 1 mod q} log p / (p - 1)."""
    if x < q + 1:
        return 0.0
    total = []
    for seg in primes_in_ap(q, 1, 2, x).segments():
        pf = seg.astype(np.float64)
        total.append(_fsum(np.log(pf) / (pf - 1)))
    return math.fsum(total)


def gamma_via_primes(q: int, x: float, p_max: int = DEFAULT_PMAX) -> PrimeSumEstimate:
    """gamma_q from the prime-ideal expansion, truncated at x (no limit taken).

    gamma_q = -log q/(q-1) - S(q) + [log x - (q-1) sum_{p <= x, p = 1 mod q} log p/(p-1)]
    """
    require_odd_prime(q)
    if x < 2:
        raise RangeError(f"cutoff x must be at least 2, got {x}")
    xi = int(math.floor(x))
    bracket = math.log(x) - (q - 1) * _split_prime_log_sum(q, xi)
    value = -math.log(q) / (q - 1) - s_of_q(q, max(p_max, 2 * q), None) + bracket
    if x < (2 * q + 1) ** 2:
        note = (
            f"x = {x:g} is below the useful range (about (2q+1)^2 = {(2 * q + 1) ** 2}); "
            "the value is dominated by log x"
        )
    else:
        note = (
            f"truncated at x = {x:g}; the limit converges slowly and oscillates, "
            "so this is an estimate without a rigorous error bound"
        )
    return PrimeSumEstimate(q=q, x=float(x), value=value, tail_note=note)


def e_r(q: int, r: float, gamma_q: float | None = None) -> float:
    """E_r(q) = gamma_q - r log q + q sum_{p <= q^r, p = 1 mod q} log p/(p-1)."""
    if not 1 < r <= 2:
        raise RangeError(f"r must lie in (1, 2], got {r}")
    require_odd_prime(q)
    if gamma_q is None:
        gamma_q = gamma_ek(q).gamma_q
    bound = math.floor(q**r) if r != 2 else q * q
    return gamma_q - r * math.log(q) + q * _split_prime_log_sum(q, int(bound))


def kummer_prime_sum(q: int, x: float) -> float:
    """((q-1)/2) sum_{m >= 1} (1/m) sum_{p^m <= x, p^m = +-1 mod q} +-1/p^m.

    Truncation: every m with 2**m <= x is included.
    """
    require_odd_prime(q)
    if x < 2:
        raise RangeError(f"cutoff x must be at least 2, got {x}")
    xi = int(math.floor(x))
    parts = []
    plus = primes_in_ap(q, 1, 2, xi).to_array().astype(np.float64)
    minus = primes_in_ap(q, q - 1, 2, xi).to_array().astype(np.float64)
    parts.append(_fsum(1.0 / plus) - _fsum(1.0 / minus))
    m = 2
    while 2**m <= xi:
        root = int(round(xi ** (1.0 / m))) + 1
        while root**m > xi:
            root -= 1
        p = primes_upto(root)
        pm = np.array([int(v) ** m for v in p], dtype=object) if root > 1 else np.zeros(0, dtype=object)
        res = pm % q
        inv = np.array([1.0 / float(v) for v in pm], dtype=np.float64)
        parts.append((_fsum(inv[res == 1]) - _fsum(inv[res == q - 1])) / m)
        m += 1
    return (q - 1) / 2 * math.fsum(parts)


def taylor_consistency(q: int, h: float = 1e-4) -> float:
    """|d/ds prod_{odd chi} L(s, chi) at s=1 - r(q) (gamma_q - gamma_q^+)|.

    The derivative is a central difference using the regularised Hurwitz
    zeta at s = 1 +- h.
    """
    require_odd_prime(q)
    sp = l_spectrum(q)
    ek = gamma_ek(q, sp, p_max=max(DEFAULT_PMAX // 100, 2 * q))
    kr = kummer_ratio(q, sp)
    odd = sp.odd
    up = np.prod(l_values_at(q, 1 + h, sp.table)[odd])
    down = np.prod(l_values_at(q, 1 - h, sp.table)[odd])
    slope = (up - down).real / (2 * h)
    return abs(slope - kr.r * ek.gamma_diff)
