"""L(1, chi) and L'(1, chi) for every non-principal character mod q.

Production path: the Hurwitz decomposition
L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q), expanded at s = 1, gives

    L(1, chi)  = -(1/q) sum_a chi(a) psi(a/q)
    L'(1, chi) =  (1/q) sum_a chi(a) [log q psi(a/q) - gamma_1(a/q)]

so two all-character transforms of O(q) special-function values produce
the whole spectrum. The cotangent formula for odd characters and a
period-averaged Dirichlet series are kept as independent oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import require_odd_prime
from .characters import CharacterTable, all_character_sums, build_table
from .errors import CapacityError, DomainError, InvariantError
from .specfun import DEFAULT_CONFIG, SpecFunConfig, digamma, hurwitz_zeta_regular, stieltjes1

DEFAULT_MAX_Q = 2_000_000

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LSpectrum:
    """Arrays are indexed by the character number j; entry 0 (principal) is NaN."""

    q: int
    L1: np.ndarray = field(repr=False)
    L1prime: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)
    # per-entry absolute error estimates for L1 and ratios
    l1_error: np.ndarray = field(repr=False)
    ratio_error: np.ndarray = field(repr=False)
    table: CharacterTable = field(repr=False)

    @property
    def odd(self) -> np.ndarray:
        return np.arange(1, self.q - 1, 2)

    @property
    def even(self) -> np.ndarray:
        return np.arange(2, self.q - 1, 2)


def l_spectrum(
    q: int,
    config: SpecFunConfig = DEFAULT_CONFIG,
    method: str = "fft",
    max_q: int = DEFAULT_MAX_Q,
) -> LSpectrum:
    require_odd_prime(q)
    if q > max_q:
        raise CapacityError(
            f"q = {q} exceeds the configured bound {max_q} for the character-sum path", bound=max_q
        )
    table = build_table(q)
    x = np.arange(1, q, dtype=np.float64) / q
    psi = digamma(x, config)
    g1 = stieltjes1(x, config)
    s_psi = all_character_sums(table, psi, method)
    s_g1 = all_character_sums(table, g1, method)
    logq = math.log(q)
    L1 = -s_psi.values / q
    L1p = (logq * s_psi.values - s_g1.values) / q
    L1[0] = L1p[0] = complex("nan+nanj")

    # error model: special-function error per term plus transform error
    spec_err = config.target_abs_error * (q - 1) / q
    err_L = spec_err + s_psi.error_bound() / q + 16 * _EPS * float(np.abs(psi).max()) / q
    err_Lp = (logq + 1) * spec_err + (logq * s_psi.error_bound() + s_g1.error_bound()) / q
    absL = np.abs(L1)
    if np.any(absL[1:] <= 1e-12):
        raise InvariantError(f"L(1, chi) numerically vanishes for q = {q}")
    with np.errstate(invalid="ignore"):
        ratios = L1p / L1
        ratio_err = (err_Lp + np.abs(ratios) * err_L) / absL
        l1_err = np.full(q - 1, err_L)
    l1_err[0] = ratio_err[0] = np.nan

    # the quadratic character j = (q-1)/2 is real
    jr = (q - 1) // 2
    if abs(L1[jr].imag) > 1e-10 or abs(L1p[jr].imag) > 1e-10:
        raise InvariantError(f"real character has complex L-value at q = {q}")
    return LSpectrum(q=q, L1=L1, L1prime=L1p, ratios=ratios, l1_error=l1_err, ratio_error=ratio_err, table=table)


def l1_odd_oracle(q: int, j: int, table: CharacterTable | None = None) -> complex:
    """L(1, chi_j) = (pi / 2q) sum_a chi_j(a) cot(pi a / q) for odd j."""
    require_odd_prime(q)
    if j % 2 == 0 or not 1 <= j <= q - 2:
        raise DomainError(f"cotangent formula needs an odd character index, got j = {j}")
    table = table or build_table(q)
    a = np.arange(1, q)
    phase = 2 * np.pi * ((j * table.dlog[a]) % (q - 1)) / (q - 1)
    cot = 1.0 / np.tan(np.pi * a / q)
    re = math.fsum((np.cos(phase) * cot).tolist())
    im = math.fsum((np.sin(phase) * cot).tolist())
    return complex(re, im) * math.pi / (2 * q)


def l1_odd_oracle_all(q: int, table: CharacterTable | None = None) -> np.ndarray:
    """The cotangent formula for every odd j at once (O(q^2) direct sums)."""
    require_odd_prime(q)
    table = table or build_table(q)
    a = np.arange(1, q)
    cot = 1.0 / np.tan(np.pi * a / q)
    js = np.arange(1, q - 1, 2)
    k = table.dlog[a]
    out = np.empty(len(js), dtype=np.complex128)
    for i, j in enumerate(js):
        out[i] = np.dot(np.exp(2j * np.pi * ((j * k) % (q - 1)) / (q - 1)), cot)
    return out * np.pi / (2 * q)


def _series_weights(q: int, K: int) -> np.ndarray:
    """w_b such that sum_b chi(b) w_b is the mean of S_N = sum_{n<=N} chi(n)/n over N in (K-q, K].

    S_K groups by residue into sum_b chi(b) sum_t 1/(b + tq); removing the
    tail n in (N, K] and averaging over the period leaves weight (b-1)/q on
    the last term of class b.
    """
    b = np.arange(1, q, dtype=np.float64)
    t = np.arange(K // q, dtype=np.float64)
    h = np.sum(1.0 / (b[:, None] + q * t[None, :]), axis=1)
    return h - (b - 1) / (q * (K - q + b))


def l1_series_oracle_all(q: int, terms: int, table: CharacterTable | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Period-averaged Dirichlet series for every j = 1..q-2.

    Returns (values, error estimates) indexed by j - 1. Averaging over one
    period cancels the O(1/N) oscillation of the partial sums; the error
    estimate is the change between the last two periods plus q^2/K^2.
    """
    require_odd_prime(q)
    if terms < q:
        raise DomainError(f"need at least q = {q} terms")
    table = table or build_table(q)
    K = (terms // q) * q
    w_last = _series_weights(q, K)
    w_prev = _series_weights(q, K - q) if K > q else np.zeros(q - 1)
    k = table.dlog[1:]
    js = np.arange(1, q - 1)
    chi = np.exp(2j * np.pi * ((js[:, None] * k[None, :]) % (q - 1)) / (q - 1))
    last = chi @ w_last
    prev = chi @ w_prev
    err = np.abs(last - prev) + q * q / K**2
    return last, err


def l1_series_oracle(q: int, j: int, terms: int, table: CharacterTable | None = None) -> tuple[complex, float]:
    """Period-averaged partial sums of sum_n chi_j(n)/n; returns (value, error estimate)."""
    require_odd_prime(q)
    if j == 0:
        raise DomainError("the principal character has a divergent series at s = 1")
    if not 1 <= j <= q - 2:
        raise DomainError(f"character index out of range: {j}")
    if terms < q:
        raise DomainError(f"need at least q = {q} terms")
    table = table or build_table(q)
    K = (terms // q) * q
    chi = np.exp(2j * np.pi * ((j * table.dlog[1:]) % (q - 1)) / (q - 1))
    last = complex(np.dot(chi, _series_weights(q, K)))
    prev = complex(np.dot(chi, _series_weights(q, K - q))) if K > q else 0j
    return last, abs(last - prev) + q * q / K**2


def l_values_at(q: int, s: float, table: CharacterTable | None = None, config: SpecFunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """L(s, chi_j) for every j at real s near 1 (entry 0 NaN).

    Uses the regularised Hurwitz zeta; the pole drops out because
    sum_a chi(a) = 0 for non-principal chi. Intended for finite-difference
    checks, not production.
    """
    table = table or build_table(q)
    x = np.arange(1, q, dtype=np.float64) / q
    z = hurwitz_zeta_regular(s, x, config)
    sums = all_character_sums(table, z, "fft").values
    out = sums * math.exp(-s * math.log(q))
    out[0] = complex("nan+nanj")
    return out
