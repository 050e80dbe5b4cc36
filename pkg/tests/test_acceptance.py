"""The twenty acceptance criteria, each with its stated time limit.

Each criterion contributes one PASS/FAIL line, printed in an "acceptance
criteria" section at the end of the pytest run.
"""

from __future__ import annotations

import pytest

from mcglevel.reproduce import REGISTRY, run_criterion


@pytest.mark.parametrize("number", sorted(REGISTRY))
def test_criterion(number, acceptance_log):
    r = run_criterion(number, seed=0)
    limit = "" if r.time_limit is None else f" (limit {r.time_limit:g}s)"
    ok = r.passed and r.within_limit
    acceptance_log.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {r.title} [{r.seconds:.2f}s{limit}]")
    assert r.passed, r.details
    assert r.within_limit, f"took {r.seconds:.1f}s, limit {r.time_limit}s"


def test_registry_complete():
    assert sorted(REGISTRY) == list(range(1, 21))
