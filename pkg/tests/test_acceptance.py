"""Acceptance gate: every reproduction check must pass at its stated
tolerance.  One line is printed per criterion (visible with ``pytest -s``)."""

import pytest

from wallachflow.verify import CHECKS, run_check

_RESULTS = {}


def _result_for(func):
    if func.__name__ not in _RESULTS:
        _RESULTS[func.__name__] = run_check(func)
    return _RESULTS[func.__name__]


@pytest.mark.parametrize("check", CHECKS, ids=lambda f: f.__name__)
def test_acceptance_criterion(check):
    result = _result_for(check)
    print(f"{result.name}: {'PASS' if result.passed else 'FAIL'} - {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
