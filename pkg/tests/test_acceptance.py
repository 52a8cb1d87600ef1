"""Acceptance gate: every criterion at full scale, one line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` (or ``reebsplit selftest``
for the CLI equivalent).  Budgeted criteria enforce their own wall-clock
limits inside the selftest module.
"""

import pytest

from reebsplit import selftest


@pytest.fixture(scope="module")
def results():
    return {r.name: r for r in selftest.run_all(quick=False)}


NAMES = [
    "round-trip oracle",
    "automorphism oracle equivalence",
    "canonical group orders",
    "fixed-set structure",
    "splitting across every fixed edge",
    "extrema/multiplicity identity",
    "setwise-invariant edges are fixed pointwise",
    "byte-identical reruns",
]


@pytest.mark.parametrize("name", NAMES)
def test_criterion(results, name):
    r = results[name]
    print(f"{'PASS' if r.passed else 'FAIL'} {name}: {r.detail} [{r.seconds:.1f}s]")
    assert r.passed, r.detail
