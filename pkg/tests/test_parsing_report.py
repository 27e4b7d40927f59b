"""Parsing precision/recall on the hand-labeled 31-statement testset.

The expected numbers are frozen from a verified run; they stay below
1.0 on purpose (flag parameters, digit-bearing arguments, terse
queries) so the report reflects real parser behavior.
"""

import pytest

from parsing_testset import TESTSET
from tsgkit.evalharness import parsing_report


@pytest.fixture(scope="module")
def report(bundled_specs, registry):
    specs = [bundled_specs[name] for name in sorted(bundled_specs)]
    return parsing_report(specs, registry, TESTSET)


def test_testset_is_disjoint_from_specs(bundled_specs):
    spec_inputs = {inp for spec in bundled_specs.values() for inp, _ in spec.pairs}
    for stmt, _, _ in TESTSET:
        assert stmt.raw not in spec_inputs


def test_testset_size():
    assert len(TESTSET) >= 30


GOLDEN = {
    "adf": (8, 8, 8),
    "jarvis": (3, 3, 3),
    "kusto": (9, 9, 10),
    "merlin": (8, 9, 9),
    "natural_language": (5, 5, 5),
    "powershell": (18, 19, 18),
    "torus": (16, 20, 22),
    "overall": (67, 73, 75),
}


def test_report_matches_frozen_counts(report):
    got = {
        comp: (score.correct, score.extracted, score.expected)
        for comp, score in report.items()
    }
    assert got == GOLDEN


def test_report_rates_follow_counts(report):
    for comp, score in report.items():
        correct, extracted, expected = GOLDEN[comp]
        assert score.precision == pytest.approx(correct / extracted)
        assert score.recall == pytest.approx(correct / expected)


def test_strong_components_are_perfect(report):
    for comp in ("adf", "jarvis"):
        assert report[comp].precision == 1.0
        assert report[comp].recall == 1.0


def test_overall_rates(report):
    assert report["overall"].precision == pytest.approx(67 / 73)
    assert report["overall"].recall == pytest.approx(67 / 75)
