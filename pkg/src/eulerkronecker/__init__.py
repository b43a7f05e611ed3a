"""Euler-Kronecker constants and Kummer ratios of prime cyclotomic fields."""

from .admissible import AdmissibleSet, greedy_offsets, hl_scan, is_admissible, m_of
from .invariants import (
    EKReport,
    KummerReport,
    e_r,
    gamma_ek,
    gamma_via_primes,
    kummer_prime_sum,
    kummer_ratio,
    s_of_q,
    taylor_consistency,
)
from .lfun import LSpectrum, l_spectrum

__version__ = "0.1.0"

__all__ = [
    "AdmissibleSet",
    "EKReport",
    "KummerReport",
    "LSpectrum",
    "e_r",
    "gamma_ek",
    "gamma_via_primes",
    "greedy_offsets",
    "hl_scan",
    "is_admissible",
    "kummer_prime_sum",
    "kummer_ratio",
    "l_spectrum",
    "m_of",
    "s_of_q",
    "taylor_consistency",
]
