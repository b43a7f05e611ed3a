"""Integer and prime infrastructure.

Segmented sieves (full range and along an arithmetic progression),
deterministic 64-bit primality, multiplicative orders, primitive roots and
the discriminant of cyclotomic fields in log scale.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import DomainError, RangeError, UnsupportedModulusError

# Candidates per segment; 2**20 bytes of flags stays resident in L2.
SEGMENT_SIZE = 1 << 20

# The packed table costs limit/8 bytes, so 4e9 needs 500 MB.
MAX_SIEVE_LIMIT = 4_000_000_000

_TRIAL_LIMIT = 10**6
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# (bound, bases): the bases are a deterministic witness set below the bound
_MR_TIERS = (
    (3_215_031_751, (2, 3, 5, 7)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (1 << 64, (2, 325, 9375, 28178, 450775, 9780504, 1795265022)),
    (3_317_044_064_679_887_385_961_981, _SMALL_PRIMES),
)


def _small_primes(limit: int) -> np.ndarray:
    """Plain sieve for limit up to a few million."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _segments(lo: int, hi: int, segment_size: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start, flags) for consecutive windows of [lo, hi]."""
    base = _small_primes(math.isqrt(hi))
    for start in range(lo, hi + 1, segment_size):
        stop = min(start + segment_size, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        if start < 2:
            flags[: 2 - start] = False
        yield start, flags


@dataclass(frozen=True)
class PrimeSieve:
    """Primality flags over [0, limit], stored one bit per integer."""

    limit: int
    bits: np.ndarray = field(repr=False)

    def is_prime(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise RangeError(f"{n} outside sieved range [0, {self.limit}]")
        return bool((self.bits[n >> 3] >> (7 - (n & 7))) & 1)

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.limit and self.is_prime(n)

    def flags(self) -> np.ndarray:
        return np.unpackbits(self.bits, count=self.limit + 1).astype(bool)

    def primes(self) -> np.ndarray:
        return np.flatnonzero(np.unpackbits(self.bits, count=self.limit + 1)).astype(np.int64)

    def count(self) -> int:
        return int(np.unpackbits(self.bits, count=self.limit + 1).sum())


def sieve_primes(limit: int, segment_size: int = SEGMENT_SIZE) -> PrimeSieve:
    """Segmented sieve of Eratosthenes over [0, limit].

    Working memory is O(sqrt(limit) + segment_size); the returned table is
    limit/8 bytes. Supported range is 2 <= limit <= MAX_SIEVE_LIMIT.
    """
    if not 2 <= limit <= MAX_SIEVE_LIMIT:
        raise RangeError(f"sieve limit must lie in [2, {MAX_SIEVE_LIMIT}], got {limit}")
    # Segments start on multiples of 8 so each packs into whole bytes.
    segment_size = max(8, segment_size - segment_size % 8)
    chunks = [np.packbits(flags) for _, flags in _segments(0, limit, segment_size)]
    return PrimeSieve(limit=limit, bits=np.concatenate(chunks))


@lru_cache(maxsize=4)
def primes_upto(limit: int) -> np.ndarray:
    """Sorted int64 array of primes <= limit (cached, treat as read-only)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit <= 4 * SEGMENT_SIZE:
        out = _small_primes(limit)
    else:
        out = np.concatenate(
            [np.flatnonzero(flags).astype(np.int64) + start for start, flags in _segments(0, limit, SEGMENT_SIZE)]
        )
    out.setflags(write=False)
    return out


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2**64 (and up to 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 37 * 37:
        return True
    bases = next((b for bound, b in _MR_TIERS if n < bound), _SMALL_PRIMES)
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        x = pow(a, d, n)
        if x in (0, 1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ApPrimeStream:
    """Primes p in [lo, hi] with p = a (mod q), produced segment by segment."""

    q: int
    a: int
    lo: int
    hi: int
    segment_size: int = SEGMENT_SIZE

    def segments(self) -> Iterator[np.ndarray]:
        q, a, lo, hi = self.q, self.a, self.lo, self.hi
        if hi < lo:
            return
        # candidates n = a + k*q for k in [k0, k1]
        k0 = max(0, -(-(lo - a) // q))
        k1 = (hi - a) // q
        if k1 < k0:
            return
        base = _small_primes(math.isqrt(hi))
        base = base[base != q]
        starts = [(-a * pow(q, -1, int(p))) % int(p) for p in base]
        for ks in range(k0, k1 + 1, self.segment_size):
            ke = min(ks + self.segment_size, k1 + 1)
            flags = np.ones(ke - ks, dtype=bool)
            n_last = a + (ke - 1) * q
            for p, r in zip(base, starts):
                p = int(p)
                if p * p > n_last:
                    break
                # first k >= ks with k = r (mod p), skipping n == p itself
                k = ks + (r - ks) % p
                if a + k * q == p:
                    k += p
                flags[k - ks :: p] = False
            yield (a + q * (np.flatnonzero(flags) + ks)).astype(np.int64)

    def __iter__(self) -> Iterator[int]:
        for seg in self.segments():
            yield from (int(p) for p in seg)

    def to_array(self) -> np.ndarray:
        parts = list(self.segments())
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)


def primes_in_ap(q: int, a: int, lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> ApPrimeStream:
    """Stream of primes p = a (mod q) in [lo, hi], sieving only the progression."""
    if a % q == 0:
        raise DomainError(f"residue {a} is divisible by the modulus {q}")
    if not 1 <= a < q:
        raise DomainError(f"residue must lie in [1, {q - 1}], got {a}")
    if lo < 2:
        raise RangeError(f"window [{lo}, {hi}] must start at 2 or above")
    if hi > MAX_SIEVE_LIMIT:
        raise RangeError(f"window end {hi} exceeds {MAX_SIEVE_LIMIT}")
    return ApPrimeStream(q=q, a=a, lo=lo, hi=hi, segment_size=segment_size)


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = qq = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    qq = qq * abs(x - y) % n
                g = math.gcd(qq, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation: trial division by primes below 1e6, then Pollard-Brent."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in primes_upto(_TRIAL_LIMIT):
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime_u64(m):
            out[m] = out.get(m, 0) + 1
        else:
            d = _pollard_brent(m)
            stack += [d, m // d]
    return dict(sorted(out.items()))


def require_odd_prime(q: int) -> None:
    if q == 2 or not is_prime_u64(q):
        raise UnsupportedModulusError(f"modulus must be an odd prime, got {q}")


def multiplicative_order(p: int, q: int) -> int:
    """Least f >= 1 with p**f = 1 (mod q), for prime q not dividing p."""
    if p % q == 0:
        raise DomainError(f"{q} divides {p}")
    f = q - 1
    for ell in factorize(q - 1):
        while f % ell == 0 and pow(p, f // ell, q) == 1:
            f //= ell
    return f


def primitive_root(q: int) -> int:
    """Smallest generator of (Z/qZ)* for an odd prime q."""
    require_odd_prime(q)
    cofactors = [(q - 1) // ell for ell in factorize(q - 1)]
    g = 2
    while any(pow(g, c, q) == 1 for c in cofactors):
        g += 1
    return g


def euler_phi(n: int) -> int:
    phi = n
    for p in factorize(n):
        phi -= phi // p
    return phi


def cyclotomic_discriminant_log(n: int) -> tuple[int, float]:
    """Sign and log|d| of the discriminant of Q(zeta_n).

    log|d| = phi(n) log n - sum_{p | n} phi(n)/(p-1) log p.
    """
    if n < 3:
        raise RangeError(f"n must be at least 3, got {n}")
    phi = euler_phi(n)
    sign = -1 if (phi // 2) % 2 else 1
    log_abs = phi * math.log(n) - math.fsum(phi / (p - 1) * math.log(p) for p in factorize(n))
    return sign, log_abs
