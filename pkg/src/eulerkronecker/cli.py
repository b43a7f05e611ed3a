"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 capacity/resource error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys

from . import admissible, scan
from .arith import MAX_SIEVE_LIMIT
from .errors import CapacityError, ContractError, DomainError, EKError, RangeError
from .invariants import DEFAULT_PMAX, e_r, gamma_ek, gamma_via_primes, kummer_prime_sum, kummer_ratio
from .lfun import l_spectrum
from .verification import run_all

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(EKError):
    pass


def _int_arg(text: str) -> int:
    """Integers, also written as 1e7 or 10**7."""
    try:
        if "**" in text:
            base, exp = text.split("**")
            return int(base) ** int(exp)
        return int(float(text)) if ("e" in text.lower() or "." in text) else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _int_list(text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("empty offset list")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"malformed integer list: {text!r}") from None


def cmd_scan(args) -> int:
    if args.qmax > args.capacity:
        raise CapacityError(f"--qmax {args.qmax} exceeds the configured capacity {args.capacity}", bound=args.capacity)
    rows = scan.scan(args.qmax, p_max=args.pmax, jobs=args.jobs, recompute=args.recompute, use_cache=not args.no_cache)
    try:
        if args.out == "-":
            scan.write_csv(rows, "/dev/stdout")
        else:
            scan.write_csv(rows, args.out)
    except OSError as exc:
        raise OSError(f"cannot write {args.out}: {exc.strerror}") from exc
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def _kv(key, value) -> str:
    if isinstance(value, float):
        value = format(value, ".12g")
    return f"{key:<22}{value}"


def cmd_report(args) -> int:
    q = args.q
    try:
        sp = l_spectrum(q)
    except CapacityError as exc:
        raise CapacityError(
            f"{exc}. Computing gamma_q at this size needs memory far beyond desk scale; "
            "use `eulerkronecker hlscan` to verify its prime pattern instead",
            bound=exc.bound,
        ) from exc
    ek = gamma_ek(q, sp, p_max=args.pmax)
    kr = kummer_ratio(q, sp)
    lines = [
        _kv("q", q),
        _kv("gamma_q", ek.gamma_q),
        _kv("gamma_q_plus", ek.gamma_q_plus),
        _kv("gamma_diff", ek.gamma_diff),
        _kv("gamma_over_logq", ek.gamma_over_logq),
        _kv("s_of_q", ek.s_of_q),
        _kv("s_of_q_pmax", args.pmax),
        _kv("est_abs_error", ek.est_abs_error),
        _kv("method", ek.method.value),
        _kv("log_r", kr.log_r),
        _kv("r", kr.r),
        _kv("log_G", kr.log_G),
    ]
    if kr.h1_rounded is not None:
        lines += [_kv("h1_rounded", kr.h1_rounded), _kv("h1_residual", f"{kr.h1_residual:.3e}")]
    else:
        lines.append(_kv("log_h1", kr.log_r + kr.log_G))
    if q * q <= MAX_SIEVE_LIMIT:
        lines.append(_kv("E_2(q)", e_r(q, 2, ek.gamma_q)))
    if args.x is not None:
        est = gamma_via_primes(q, args.x, p_max=args.pmax)
        lines += [
            _kv("gamma_via_primes", est.value),
            _kv("  note", est.tail_note),
            _kv("kummer_prime_sum", kummer_prime_sum(q, args.x)),
        ]
    print("\n".join(lines))
    return EXIT_OK


def cmd_admissible(args) -> int:
    if args.action == "check":
        res = admissible.is_admissible(_int_list(args.elements))
        if isinstance(res, admissible.Rejection):
            print(f"not admissible: p={res.prime}")
        else:
            wit = ", ".join(f"p={p}: n={n}" for p, n in res.certificate.items())
            print(f"admissible; witnesses {wit}")
    elif args.action == "m":
        print(format(admissible.m_of(_int_list(args.elements)), ".15g"))
    elif args.action == "greedy":
        print(",".join(map(str, admissible.greedy_offsets(args.count).elements)))
    elif args.action == "large-m":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["x", "size", "m", "loglog_x"])
        for x in args.x:
            s = admissible.greedy_subset_large_m(x)
            writer.writerow([x, len(s), format(s.m, ".15g"), format(math.log(math.log(x)), ".15g") if x > 2 else ""])
        print("# heuristic greedy restriction, not an optimal construction", file=sys.stderr)
    return EXIT_OK


def cmd_hlscan(args) -> int:
    offsets = _int_list(args.offsets)
    res = admissible.is_admissible(offsets)
    if isinstance(res, admissible.Rejection):
        print(f"warning: offsets are not admissible (p={res.prime})", file=sys.stderr)
        res = admissible.AdmissibleSet(tuple(sorted(offsets)))
    hits = admissible.hl_scan(res, args.qlo, args.qhi, jobs=args.jobs)
    m = res.m
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["q", "m", "two_minus_m"])
    for h in hits:
        writer.writerow([h.q, format(m, ".17g"), format(2 - m, ".17g")])
    return EXIT_OK


def cmd_verify(args) -> int:
    return EXIT_OK if run_all(quick=args.quick, jobs=args.jobs) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eulerkronecker", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="CSV of gamma_q, r(q), S(q) for all odd primes q <= qmax")
    p.add_argument("--qmax", type=_int_arg, default=scan.DEFAULT_QMAX)
    p.add_argument("--out", default="scan.csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--pmax", type=_int_arg, default=DEFAULT_PMAX, help="truncation of S(q)")
    p.add_argument("--recompute", action="store_true", help="ignore cached rows")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--capacity", type=_int_arg, default=scan.DEFAULT_QMAX)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("report", help="all invariants for one prime q")
    p.add_argument("q", type=_int_arg)
    p.add_argument("--pmax", type=_int_arg, default=DEFAULT_PMAX)
    p.add_argument("--x", type=float, default=None, help="cutoff for the prime-sum estimators")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("admissible", help="admissible-set tools")
    asub = p.add_subparsers(dest="action", required=True)
    a = asub.add_parser("check")
    a.add_argument("elements")
    a = asub.add_parser("m")
    a.add_argument("elements")
    a = asub.add_parser("greedy")
    a.add_argument("--count", type=_int_arg, required=True)
    a = asub.add_parser("large-m")
    a.add_argument("--x", type=_int_arg, nargs="+", required=True)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("hlscan", help="primes q with a*q+1 prime for every offset a")
    p.add_argument("--offsets", required=True)
    p.add_argument("--qlo", type=_int_arg, required=True)
    p.add_argument("--qhi", type=_int_arg, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_hlscan)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="only sub-second checks")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ContractError, DomainError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
