"""Acceptance gate: the ten headline checks, each with its time budget.

Every test runs one check end to end, prints its [PASS]/[FAIL] line, and
asserts both the verdict and the wall-clock bound.  `pytest -s
tests/test_acceptance.py` therefore doubles as the release report.
"""

import pytest

from coxlab import suites

BUDGETS = [
    (suites.check_word_oracle, 60.0),
    (suites.check_orders_centralizers, 120.0),
    (suites.check_geometric, 120.0),
    (suites.check_determinant, 10.0),
    (suites.check_monotonicity, 120.0),
    (suites.check_definability, 120.0),
    (suites.check_affine, 60.0),
    (suites.check_raag, 60.0),
    (suites.check_tree, 300.0),
    (suites.check_domain, 60.0),
]


@pytest.mark.parametrize(
    "check,budget", BUDGETS,
    ids=[fn.__name__.replace("check_", "") for fn, _ in BUDGETS])
def test_acceptance(check, budget, capsys):
    result = check(seed=0)
    with capsys.disabled():
        print(result.line())
    assert result.status == "ok", result.details
    assert result.ok, result.details
    assert result.elapsed < budget, (
        f"{result.name}: {result.elapsed:.1f}s over the {budget:.0f}s budget")


def test_all_suite_covers_every_check():
    assert {fn.__name__ for fn, _ in BUDGETS} == \
        {fn.__name__ for fn in suites.CHECKS["all"]}
    assert len(suites.CHECKS["all"]) == len(BUDGETS)
