"""Acceptance criteria 1-11, each run at its wall-clock limit.

Every criterion prints one line of the form

    PASS criterion 4 (pbw_coalgebra_isomorphism): 27 checks in 1.03s / limit 60s

directly to the terminal, so the summary shows up whether or not pytest
captures output.
"""
import math

import pytest

from prelie_pbw.suite import CRITERIA, SuiteConfig, run_criterion


def _limit_text(limit: float) -> str:
    return f"{limit:.0f}s" if math.isfinite(limit) else "none"


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda c: c.name)
def test_acceptance_criterion(crit, capsys):
    result = run_criterion(crit, SuiteConfig(seed=0))
    rep = result.report
    failed = [c for c in rep.checks if not c.passed]
    verdict = "PASS" if result.passed else "FAIL"
    line = (
        f"{verdict} criterion {crit.number} ({crit.name[4:]}): {len(rep.checks)} checks "
        f"in {result.elapsed:.2f}s / limit {_limit_text(crit.limit)}"
    )
    with capsys.disabled():
        print()
        print(line)
        for c in failed:
            print(f"    failed check: {c.line()}")
    assert rep.checks, "criterion ran no checks"
    assert not failed, [c.line() for c in failed]
    assert result.in_time, f"took {result.elapsed:.2f}s, limit {crit.limit}s"


def test_every_criterion_is_registered():
    assert [c.number for c in CRITERIA] == list(range(1, 12))
