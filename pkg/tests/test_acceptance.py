"""The twelve acceptance criteria at their stated tolerances.

The profile comes from CUBIC_DIST_PROFILE ("full" by default, "quick" for a
shorter run).  Each criterion prints one PASS/FAIL line; failures are real
and are not skipped.
"""

from __future__ import annotations

import json
import os

import pytest

from cubicdist.acceptance import CHECKS, run_check

PROFILE = os.environ.get("CUBIC_DIST_PROFILE", "full")


@pytest.mark.parametrize("cid", sorted(CHECKS))
def test_criterion(cid, capsys):
    result = run_check(cid, PROFILE)
    with capsys.disabled():
        print()
        print(result.line())
        print("    " + json.dumps(result.as_json()["details"], sort_keys=True)[:2000])
    assert result.passed, result.line()
