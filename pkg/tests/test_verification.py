"""
Tests the randomized invariant suite.
"""

from malstein.verification import DEFAULT_TRIALS, FAMILIES, run_verification


def test_suite_passes():
    report = run_verification(seed=0, trials=4)

    assert report.all_passed
    assert all(count == 4 for count in report.passed.values())
    assert not any(report.failures.values())


def test_suite_at_default_scale():
    """
    The default run of 500 random functionals passes every family.
    """

    assert DEFAULT_TRIALS == 500

    report = run_verification(seed=0)

    assert report.trials == 500
    assert report.all_passed
    assert not any(report.failures.values())


def test_suite_is_reproducible():
    first = run_verification(seed=11, trials=2).to_dict()
    second = run_verification(seed=11, trials=2).to_dict()

    assert first == second
    assert [family["name"] for family in first["families"]] == [name for name, _ in FAMILIES]


def test_failures_are_recorded():
    report = run_verification(seed=3, trials=1)
    report.passed["efron_stein"] -= 1
    report.failures["efron_stein"].append(0)

    assert not report.all_passed
    assert report.to_dict()["families"][10]["failed_trials"] == [0]
