"""The twelve acceptance criteria, one test each.

Every run prints one PASS/FAIL line per criterion (in the terminal summary
under pytest, or directly when run as a script).  Tolerances are pinned in
padicjc.verification and asserted here so they cannot drift silently.
"""

import sys

import pytest

from padicjc import verification
from padicjc.verification import CRITERIA, run_criterion

RESULTS = {}


def test_pinned_tolerances():
    assert verification.PRIMES == (2, 3, 5, 7, 13)
    assert verification.PRECISION == 32
    assert verification.SERIES_IDENTITY_ORD == 28
    assert verification.HENSEL_ROOT_ORD == 32
    assert verification.INJECTIVITY_GAP == 1e-9


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number, seed=0, quick=False)
    RESULTS[number] = res
    print(res.line())
    assert res.passed, res.line()


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        res = run_criterion(n)
        print(res.line(), flush=True)
        failed += not res.passed
    sys.exit(1 if failed else 0)
