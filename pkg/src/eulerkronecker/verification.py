"""Acceptance checks shared by ``eulerkronecker verify`` and the test suite.

Every check returns a CheckResult with the measured value, the expected
value, the tolerance and the wall time. Checks flagged ``quick`` finish in
well under a second each.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .admissible import greedy_offsets
from .arith import is_prime_u64
from .characters import all_character_sums, build_table
from .invariants import gamma_ek, gamma_via_primes, kummer_ratio, s_of_q, s_of_q_tail_bound, taylor_consistency
from .lfun import l1_odd_oracle_all, l_spectrum
from .scan import compute_rows, odd_primes
from .specfun import EULER_GAMMA, digamma, stieltjes1

HL_PRIME = 964477901
HL_OFFSETS = (2, 6, 8, 12, 18, 20, 26, 30, 36, 56)
GREEDY_PREFIX = (2, 6, 8, 12, 18, 20, 26, 30, 32)


@dataclass
class CheckResult:
    passed: bool
    measured: object
    expected: object
    tolerance: object
    detail: str = ""
    runtime: float = 0.0


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    quick: bool
    run: Callable[["Context"], CheckResult]


@dataclass
class Context:
    jobs: int = 1
    _rows: list = field(default_factory=list)
    _covered: int = 0

    def rows(self, qmax: int):
        """Scan rows for odd primes up to qmax, computed once per context."""
        if self._covered < qmax:
            self._rows = compute_rows(odd_primes(3, qmax), jobs=self.jobs)
            self._covered = qmax
        return [r for r in self._rows if r.q <= qmax]


def _gamma19(ctx):
    t0 = time.perf_counter()
    v = gamma_ek(19).gamma_over_logq
    dt = time.perf_counter() - t0
    ok = abs(v - 1.626) <= 1e-3 and dt < 1.0
    return CheckResult(ok, round(v, 6), 1.626, "±1e-3, <1 s", f"{dt:.3f} s")


def _ihara_extremes(ctx):
    rows = ctx.rows(30000)
    hi = max(rows, key=lambda r: r.gamma_over_logq)
    lo = min(rows, key=lambda r: r.gamma_over_logq)
    ok = hi.q == 19 and abs(hi.gamma_over_logq - 1.626) <= 1e-3 and lo.q == 17183 and abs(lo.gamma_over_logq - 0.315) <= 1e-3
    return CheckResult(
        ok,
        f"max {hi.gamma_over_logq:.6f} @ {hi.q}, min {lo.gamma_over_logq:.6f} @ {lo.q}",
        "max 1.626 @ 19, min 0.315 @ 17183",
        "±1e-3",
        f"{len(rows)} primes",
    )


def _kummer_extremes(ctx):
    rows = ctx.rows(10000)
    hi = max(rows, key=lambda r: r.r)
    lo = min(rows, key=lambda r: r.r)
    ok = hi.q == 5231 and abs(hi.r - 1.556562) <= 1e-5 and lo.q == 3331 and abs(lo.r - 0.642429) <= 1e-5
    detail = ""
    if lo.q != 3331:
        runner_up = min((r for r in rows if r.q != lo.q), key=lambda r: r.r)
        detail = f"next smallest {runner_up.r:.7f} @ {runner_up.q}"
    return CheckResult(
        ok,
        f"max {hi.r:.7f} @ {hi.q}, min {lo.r:.7f} @ {lo.q}",
        "max 1.556562 @ 5231, min 0.642429 @ 3331",
        "±1e-5",
        detail,
    )


def _h1_integrality(ctx):
    worst = 0.0
    bad = []
    for q in odd_primes(3, 97):
        kr = kummer_ratio(q)
        worst = max(worst, kr.h1_residual)
        if kr.h1_residual >= 1e-4 or (kr.h1_rounded == 1) != (q <= 19):
            bad.append(q)
    return CheckResult(not bad, f"max residual {worst:.2e}", "integer, h1=1 iff q<=19", "1e-4", f"failures: {bad}" if bad else "")


def _greedy(ctx):
    t0 = time.perf_counter()
    g = greedy_offsets(2088)
    dt = time.perf_counter() - t0
    prefix = g.elements[:9]
    ok = prefix == GREEDY_PREFIX and g.m > 2 and dt < 60
    return CheckResult(ok, f"{','.join(map(str, prefix))}; m={g.m:.10f}", "2,...,32; m>2", "exact, <60 s", f"{dt:.2f} s")


def _hl_pattern(ctx):
    t0 = time.perf_counter()
    ok = is_prime_u64(HL_PRIME) and all(is_prime_u64(a * HL_PRIME + 1) for a in HL_OFFSETS)
    dt = time.perf_counter() - t0
    return CheckResult(ok and dt < 1e-3, ok, True, "<1 ms", f"{dt * 1e6:.0f} us")


def cotangent_discrepancy(qmax: int) -> float:
    """Largest |L(1, chi)| error of the production path against the cotangent formula."""
    worst = 0.0
    for q in odd_primes(3, qmax):
        sp = l_spectrum(q)
        worst = max(worst, float(np.max(np.abs(sp.L1[1::2] - l1_odd_oracle_all(q, sp.table)))))
    return worst


def distribution_discrepancy(qmax_psi: int, qmax_g1: int) -> tuple[float, float]:
    """Per-term error of sum_a f(a/q) against the closed forms for psi and gamma_1."""
    worst_psi = worst_g1 = 0.0
    g1_one = stieltjes1(1.0)
    for q in odd_primes(2, max(qmax_psi, qmax_g1)):
        x = np.arange(1, q + 1) / q
        if q <= qmax_psi:
            worst_psi = max(worst_psi, abs(math.fsum(digamma(x).tolist()) + q * (EULER_GAMMA + math.log(q))) / q)
        if q <= qmax_g1:
            lq = math.log(q)
            target = q * (g1_one - EULER_GAMMA * lq - lq * lq / 2)
            worst_g1 = max(worst_g1, abs(math.fsum(stieltjes1(x).tolist()) - target) / q)
    return worst_psi, worst_g1


def dft_discrepancy(qmax: int, seed: int = 20240611) -> float:
    """Relative gap between the fast and the naive character transform on random input."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in odd_primes(3, qmax):
        table = build_table(q)
        f = rng.normal(size=q - 1)
        fast = all_character_sums(table, f).values
        slow = all_character_sums(table, f, method="naive").values
        worst = max(worst, float(np.max(np.abs(fast - slow)) / np.max(np.abs(slow))))
    return worst


def _oracles(ctx):
    worst_cot = cotangent_discrepancy(2000)
    worst_psi, worst_g1 = distribution_discrepancy(2000, 500)
    worst_dft = dft_discrepancy(211)
    ok = worst_cot < 1e-9 and worst_psi < 1e-9 and worst_g1 < 1e-8 and worst_dft < 1e-10
    return CheckResult(
        ok,
        f"cot {worst_cot:.1e}, psi {worst_psi:.1e}, g1 {worst_g1:.1e}, dft {worst_dft:.1e}",
        "agreement",
        "1e-9, 1e-9, 1e-8, 1e-10 rel",
    )


def _prime_sum_gamma(ctx):
    diffs = {q: gamma_via_primes(q, 1e8).value - gamma_ek(q).gamma_q for q in (3, 5, 7)}
    worst = max(abs(d) for d in diffs.values())
    return CheckResult(worst < 0.05, {q: round(d, 6) for q, d in diffs.items()}, 0.0, "<0.05")


def _s_of_q(ctx):
    worst = 0.0
    worst_q = None
    unstable = []
    for q in odd_primes(3, 10_000):
        table = build_table(q)
        s7 = s_of_q(q, 10**7, table)
        s6 = s_of_q(q, 10**6, table)
        if s7 > worst:
            worst, worst_q = s7, q
        if abs(s7 - s6) > s_of_q_tail_bound(q, 10**6):
            unstable.append(q)
    ok = worst <= 45 and not unstable
    return CheckResult(ok, f"max S(q) {worst:.6f} @ {worst_q}", "<= 45, stable", "tail bound", f"unstable: {unstable}" if unstable else "")


def _taylor(ctx):
    res = {q: taylor_consistency(q) for q in (3, 7, 23)}
    return CheckResult(max(res.values()) < 1e-5, {q: f"{v:.1e}" for q, v in res.items()}, 0.0, "<1e-5")


CHECKS = (
    Check(1, "gamma_19 / log 19", True, _gamma19),
    Check(2, "extremes of gamma_q/log q, q <= 30000", False, _ihara_extremes),
    Check(3, "extremes of r(q), q <= 10000", False, _kummer_extremes),
    Check(4, "h1 integrality, q <= 97", True, _h1_integrality),
    Check(5, "greedy offsets and m > 2", True, _greedy),
    Check(6, "prime pattern of q = 964477901", True, _hl_pattern),
    Check(7, "oracle equivalences", False, _oracles),
    Check(8, "prime-sum gamma_q, x = 1e8", False, _prime_sum_gamma),
    Check(9, "S(q) <= 45, q <= 10^4", False, _s_of_q),
    Check(10, "Taylor consistency", True, _taylor),
)


def run_check(check: Check, ctx: Context) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = check.run(ctx)
    except Exception as exc:  # a crash is a failed check, not an aborted run
        res = CheckResult(False, repr(exc), None, None)
    res.runtime = time.perf_counter() - t0
    return res


def format_result(check: Check, res: CheckResult) -> str:
    status = "PASS" if res.passed else "FAIL"
    line = (
        f"[{status}] {check.number:2d}. {check.name}: measured={res.measured} expected={res.expected} "
        f"tol={res.tolerance} ({res.runtime:.2f} s)"
    )
    return line + (f" {res.detail}" if res.detail else "")


def run_all(quick: bool = False, jobs: int = 1, echo=print) -> bool:
    ctx = Context(jobs=jobs)
    ok = True
    for check in CHECKS:
        if quick and not check.quick:
            continue
        res = run_check(check, ctx)
        echo(format_result(check, res))
        ok &= res.passed
    return ok

