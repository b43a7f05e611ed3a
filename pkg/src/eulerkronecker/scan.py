"""Scans over primes q, the CSV format and the results cache.

CSV columns::

    q,gamma_q,gamma_over_logq,gamma_q_plus,log_r,r,s_of_q,est_abs_error

UTF-8, LF line endings, floats written with 17 significant digits so that
a write/read round trip reproduces every double exactly.

The cache is one JSON file per (schema, p_max) under the directory named by
$EULERKRONECKER_CACHE (default ~/.cache/eulerkronecker). JSON stores floats
via repr, so cached rows are bit-identical to freshly computed ones.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from .arith import primes_upto
from .invariants import DEFAULT_PMAX, gamma_ek, kummer_ratio
from .lfun import l_spectrum

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_QMAX = 50_000
CACHE_ENV = "EULERKRONECKER_CACHE"


@dataclass(frozen=True)
class ScanRow:
    q: int
    gamma_q: float
    gamma_over_logq: float
    gamma_q_plus: float
    log_r: float
    r: float
    s_of_q: float
    est_abs_error: float


COLUMNS = tuple(f.name for f in fields(ScanRow))


def compute_row(q: int, p_max: int = DEFAULT_PMAX) -> ScanRow:
    sp = l_spectrum(q)
    ek = gamma_ek(q, sp, p_max=p_max)
    kr = kummer_ratio(q, sp)
    return ScanRow(
        q=q,
        gamma_q=ek.gamma_q,
        gamma_over_logq=ek.gamma_over_logq,
        gamma_q_plus=ek.gamma_q_plus,
        log_r=kr.log_r,
        r=kr.r,
        s_of_q=ek.s_of_q,
        est_abs_error=ek.est_abs_error,
    )


def _rows_for(args) -> list[ScanRow]:
    qs, p_max = args
    return [compute_row(q, p_max) for q in qs]


def odd_primes(qmin: int, qmax: int) -> list[int]:
    return [int(q) for q in primes_upto(qmax) if q >= max(qmin, 3)]


def compute_rows(qs: list[int], p_max: int = DEFAULT_PMAX, jobs: int = 1) -> list[ScanRow]:
    """Rows for the given primes, sorted by q; identical for every ``jobs``."""
    qs = sorted(qs)
    if jobs <= 1 or len(qs) < 2:
        return _rows_for((qs, p_max))
    # strided chunks balance the O(q log q) cost across workers
    n_chunks = 8 * jobs
    chunks = [(qs[i::n_chunks], p_max) for i in range(n_chunks)]
    with ProcessPoolExecutor(jobs) as pool:
        rows = [row for part in pool.map(_rows_for, chunks) for row in part]
    return sorted(rows, key=lambda r: r.q)


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "eulerkronecker"


def cache_path(p_max: int) -> Path:
    return cache_dir() / f"scan-v{SCHEMA_VERSION}-pmax{p_max}.json"


def load_cache(p_max: int) -> dict[int, ScanRow]:
    path = cache_path(p_max)
    if not path.exists():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        log.warning("ignoring unreadable cache %s: %s", path, exc)
        return {}
    header = data.get("header", {})
    if header.get("schema") != SCHEMA_VERSION or header.get("p_max") != p_max or header.get("columns") != list(COLUMNS):
        log.warning("ignoring cache %s with mismatched header", path)
        return {}
    return {int(row[0]): ScanRow(int(row[0]), *map(float, row[1:])) for row in data["rows"]}


def save_cache(rows: dict[int, ScanRow], p_max: int) -> Path:
    path = cache_path(p_max)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "header": {"schema": SCHEMA_VERSION, "p_max": p_max, "columns": list(COLUMNS)},
        "rows": [list(astuple(rows[q])) for q in sorted(rows)],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload), encoding="utf-8")
    tmp.replace(path)
    return path


def scan(
    qmax: int,
    p_max: int = DEFAULT_PMAX,
    jobs: int = 1,
    recompute: bool = False,
    use_cache: bool = True,
    qmin: int = 3,
) -> list[ScanRow]:
    """Rows for every odd prime in [qmin, qmax], reusing cached rows unless ``recompute``."""
    qs = odd_primes(qmin, qmax)
    cached = load_cache(p_max) if use_cache and not recompute else {}
    missing = [q for q in qs if q not in cached]
    if missing:
        log.info("computing %d of %d rows", len(missing), len(qs))
        fresh = compute_rows(missing, p_max, jobs)
        if use_cache:
            merged = {} if recompute else load_cache(p_max)
            merged.update({r.q: r for r in fresh})
            save_cache(merged, p_max)
        cached = {**cached, **{r.q: r for r in fresh}}
    return [cached[q] for q in qs]


def _fmt(v) -> str:
    return str(v) if isinstance(v, int) else format(v, ".17g")


def write_csv(rows: list[ScanRow], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(_fmt(v) for v in astuple(row))


def read_csv(path: str | os.PathLike) -> list[ScanRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected header in {path}: {header}")
        return [ScanRow(int(rec[0]), *map(float, rec[1:])) for rec in reader]
