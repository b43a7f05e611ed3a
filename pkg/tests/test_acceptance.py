"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (or ``eulerkronecker verify``)
to see the report lines.
"""

import pytest

from eulerkronecker.verification import CHECKS, format_result, run_check


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion-{c.number:02d}" for c in CHECKS])
def test_criterion(check, verify_ctx, capsys):
    res = run_check(check, verify_ctx)
    line = format_result(check, res)
    with capsys.disabled():
        print("\n" + line)
    assert res.passed, line
