"""The twelve acceptance criteria, run once at seed 1.

Each criterion prints a ``[PASS]``/``[FAIL]`` line; pytest shows them in an
"acceptance criteria" section of the terminal summary.  Running this file
directly (``python3 tests/test_acceptance.py``) prints the same lines.
"""
from __future__ import annotations

import sys

import pytest

from qclab.acceptance import run_suite

SEED = 1


@pytest.fixture(scope="module")
def suite(acceptance_lines):
    results = {r.number: r for r in run_suite(SEED)}
    acceptance_lines[:] = [results[n].line() for n in sorted(results)]
    return results


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, 13))
def test_criterion(suite, number):
    res = suite[number]
    print(res.line())
    assert res.passed, res.line()


if __name__ == "__main__":
    results = run_suite(SEED, progress=lambda r: print(r.line(), flush=True) if hasattr(r, "line") else None)
    sys.exit(0 if all(r.passed for r in results) else 1)
