"""Admissible sets of linear forms a*n + 1 and Hardy-Littlewood pattern scans.

A set {a_1, ..., a_s} is admissible when no prime p divides
n * prod(a_i n + 1) for every n. Only p <= s + 1 can obstruct, and for
p not dividing a_i the form a_i n + 1 kills exactly the residue
n = -1/a_i mod p. Since a -> -1/a permutes the non-zero residues, p
obstructs exactly when the elements hit all p - 1 non-zero classes mod p.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, Iterator

import numpy as np

from .arith import is_prime_u64, primes_upto
from .errors import ContractError, RangeError

WHEEL_PRIMES = (2, 3, 5, 7, 11, 13)
WHEEL_MODULUS = math.prod(WHEEL_PRIMES)


@dataclass(frozen=True)
class AdmissibleSet:
    """Sorted offsets with one witness n per prime p <= s+1.

    Each witness satisfies p not dividing n * prod(a_i n + 1).
    """

    elements: tuple[int, ...]
    certificate: dict[int, int] = field(default_factory=dict)

    @property
    def m(self) -> float:
        return m_of(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def verify(self) -> bool:
        for p, n in self.certificate.items():
            if n % p == 0 or any((a * n + 1) % p == 0 for a in self.elements):
                return False
        return True


@dataclass(frozen=True)
class Rejection:
    """An obstructing prime: p divides n * prod(a_i n + 1) for every n."""

    prime: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class HlPattern:
    offsets: AdmissibleSet
    q: int
    all_prime: bool


def _validate(elements: Iterable[int]) -> tuple[int, ...]:
    elems = [int(a) for a in elements]
    if not elems:
        raise ContractError("need at least one element")
    if any(a <= 0 for a in elems):
        raise ContractError("elements must be positive")
    if len(set(elems)) != len(elems):
        raise ContractError("elements must be distinct")
    return tuple(sorted(elems))


def is_admissible(elements: Iterable[int]) -> AdmissibleSet | Rejection:
    """Certificate of admissibility, or the smallest obstructing prime."""
    elems = _validate(elements)
    arr = np.array(elems, dtype=np.int64)
    cert = {}
    for p in primes_upto(len(elems) + 1):
        p = int(p)
        hit = np.zeros(p, dtype=bool)
        hit[arr % p] = True
        hit[0] = True
        free = np.flatnonzero(~hit)
        if len(free) == 0:
            return Rejection(p)
        # u is a non-zero class no element hits; n = -1/u avoids every a_i n + 1
        u = int(free[0])
        cert[p] = (-pow(u, -1, p)) % p
    return AdmissibleSet(elems, cert)


def m_of(elements: AdmissibleSet | Iterable[int]) -> float:
    """Sum of reciprocals."""
    if isinstance(elements, AdmissibleSet):
        elements = elements.elements
    return math.fsum(1.0 / a for a in elements)


class _GreedyState:
    """Incremental bookkeeping for the greedy sequence.

    For every prime p <= s+1 the set of non-zero classes hit by the
    elements is tracked in one flat flag buffer. A prime is critical when
    exactly one non-zero class is still free; a candidate is rejected iff it
    lands in the free class of some critical prime.
    """

    def __init__(self):
        self.elements: list[int] = []
        self.n_primes = 0
        self.used = 0
        self.primes = np.zeros(64, dtype=np.int64)
        self.offsets = np.zeros(64, dtype=np.int64)
        self.count = np.zeros(64, dtype=np.int64)
        self.hit = np.zeros(1 << 12, dtype=bool)
        self.crit_p = np.zeros(0, dtype=np.int64)
        self.crit_free = np.zeros(0, dtype=np.int64)
        self._prime_pool = primes_upto(1 << 16)

    def _reserve(self, p: int) -> None:
        if self.n_primes == len(self.primes):
            for name in ("primes", "offsets", "count"):
                arr = getattr(self, name)
                setattr(self, name, np.concatenate([arr, np.zeros_like(arr)]))
        if self.used + p > len(self.hit):
            grown = np.zeros(max(2 * len(self.hit), self.used + p), dtype=bool)
            grown[: self.used] = self.hit[: self.used]
            self.hit = grown

    def _admit_prime(self, p: int) -> None:
        self._reserve(p)
        i = self.n_primes
        block = self.hit[self.used : self.used + p]
        if self.elements:
            block[np.array(self.elements, dtype=np.int64) % p] = True
        block[0] = False
        self.primes[i], self.offsets[i], self.count[i] = p, self.used, int(block.sum())
        self.n_primes += 1
        self.used += p
        self._mark_critical([i])

    def _mark_critical(self, indices) -> None:
        # a fresh hit never lands on a critical prime (it would fill it), so
        # entries only ever join the critical list
        for i in indices:
            p = int(self.primes[i])
            if self.count[i] == p - 2:
                block = self.hit[self.offsets[i] : self.offsets[i] + p]
                free = int(np.flatnonzero(~block[1:])[0]) + 1
                self.crit_p = np.append(self.crit_p, p)
                self.crit_free = np.append(self.crit_free, free)

    def prepare(self) -> None:
        """Admit primes up to (s+1)+1, the threshold for the next element."""
        limit = len(self.elements) + 2
        while self._prime_pool[-1] < limit:
            self._prime_pool = primes_upto(2 * int(self._prime_pool[-1]))
        for p in self._prime_pool[self.n_primes :]:
            if p > limit:
                break
            self._admit_prime(int(p))

    def accepts(self, c: int) -> bool:
        return not np.any(c % self.crit_p == self.crit_free)

    def add(self, c: int) -> None:
        n = self.n_primes
        cls = c % self.primes[:n]
        idx = self.offsets[:n] + cls
        fresh = (cls != 0) & ~self.hit[idx]
        self.hit[idx[fresh]] = True
        self.count[:n][fresh] += 1
        self.elements.append(c)
        self._mark_critical(np.flatnonzero(fresh & (self.count[:n] == self.primes[:n] - 2)))


def iter_greedy() -> Iterator[int]:
    """The greedy sequence: each term is the least integer above the previous
    one (candidates start at 1) keeping the prefix admissible."""
    state = _GreedyState()
    c = 1
    while True:
        state.prepare()
        while not state.accepts(c):
            c += 1
        state.add(c)
        yield c
        c += 1


def greedy_offsets(count: int) -> AdmissibleSet:
    if count < 1:
        raise ContractError("count must be at least 1")
    elems = list(islice(iter_greedy(), count))
    result = is_admissible(elems)
    assert isinstance(result, AdmissibleSet)
    return result


def greedy_subset_large_m(x: int) -> AdmissibleSet:
    """Greedy terms not exceeding x.

    Heuristic: this is not an optimal construction and carries no growth
    guarantee for m against log log x.
    """
    if x < 2:
        raise RangeError("x must be at least 2")
    elems = []
    for a in iter_greedy():
        if a > x:
            break
        elems.append(a)
    result = is_admissible(elems)
    assert isinstance(result, AdmissibleSet)
    return result


def _wheel_mask(offsets: tuple[int, ...]) -> np.ndarray:
    """Residues r mod WHEEL_MODULUS such that no wheel prime divides q or any a*q + 1."""
    r = np.arange(WHEEL_MODULUS, dtype=np.int64)
    ok = np.ones(WHEEL_MODULUS, dtype=bool)
    for ell in WHEEL_PRIMES:
        ok &= r % ell != 0
        for a in offsets:
            ok &= (a * r + 1) % ell != 0
    return ok


def wheel_pass_fraction(offsets: Iterable[int]) -> float:
    """Share of integers surviving the wheel pre-filter."""
    return float(_wheel_mask(tuple(offsets)).mean())


def _pattern_holds(q: int, offsets: tuple[int, ...]) -> bool:
    if not is_prime_u64(q):
        return False
    return all(is_prime_u64(a * q + 1) for a in offsets)


def _scan_chunk(args) -> list[int]:
    offsets, lo, hi = args
    hits = []
    # q or a*q + 1 may itself be a wheel prime only for q <= 13
    small_end = min(hi, max(WHEEL_PRIMES))
    for q in range(lo, small_end + 1):
        if _pattern_holds(q, offsets):
            hits.append(q)
    lo = max(lo, small_end + 1)
    if lo > hi:
        return hits
    residues = np.flatnonzero(_wheel_mask(offsets)).tolist()
    base = lo - lo % WHEEL_MODULUS
    while base <= hi:
        for r in residues:
            q = base + r
            if q < lo:
                continue
            if q > hi:
                break
            if _pattern_holds(q, offsets):
                hits.append(q)
        base += WHEEL_MODULUS
    return hits


def hl_scan(offsets: AdmissibleSet | Iterable[int], q_lo: int, q_hi: int, jobs: int = 1) -> list[HlPattern]:
    """Primes q in [q_lo, q_hi] with a*q + 1 prime for every offset a."""
    if not isinstance(offsets, AdmissibleSet):
        offsets = AdmissibleSet(_validate(offsets))
    elems = offsets.elements
    if not elems:
        raise ContractError("need at least one offset")
    if q_hi * max(elems) + 1 >= 2**64:
        raise RangeError("a*q + 1 would leave the 64-bit range")
    if q_lo > q_hi:
        return []
    q_lo = max(q_lo, 2)
    if jobs > 1 and q_hi - q_lo > 10 * WHEEL_MODULUS:
        step = -(-(q_hi - q_lo + 1) // (4 * jobs))
        chunks = [(elems, s, min(s + step - 1, q_hi)) for s in range(q_lo, q_hi + 1, step)]
        with ProcessPoolExecutor(jobs) as pool:
            found = [q for part in pool.map(_scan_chunk, chunks) for q in part]
    else:
        found = _scan_chunk((elems, q_lo, q_hi))
    return [HlPattern(offsets=offsets, q=q, all_prime=True) for q in found]
