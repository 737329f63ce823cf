"""One test per acceptance property.  Run with ``-s`` to see the PASS/FAIL lines."""

import pytest

from coarse_ep import acceptance as acc

CRITERIA = [
    ("totality", acc.criterion_totality),
    ("hitting_bound", acc.criterion_hitting_bound),
    ("packing_bound", acc.criterion_packing_bound),
    ("oracle", acc.criterion_oracle),
    ("refinement", acc.criterion_refinement),
    ("subcubic", acc.criterion_subcubic),
    ("helly", acc.criterion_helly),
    ("budgets", acc.criterion_budgets),
    ("determinism", acc.criterion_determinism),
]


@pytest.mark.parametrize("name, criterion", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.detail


def test_every_criterion_is_listed():
    names = {r.name for r in acc.run_all()}
    assert len(names) == len(CRITERIA) == 9
