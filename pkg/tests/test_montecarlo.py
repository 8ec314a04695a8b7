import math

import pytest

from seqdisc import (
    StrategyKind,
    StrategySpec,
    empirical_string_errors,
    enumerate_strings,
    lol_cost,
    run_trials,
    ubm_cost,
)

UBM = StrategySpec(StrategyKind.UBM)
FBM = StrategySpec(StrategyKind.FBM)
LOL = StrategySpec(StrategyKind.LOL)

TRIALS = 20_000


def test_input_validation(problem12):
    with pytest.raises(ValueError):
        run_trials(problem12, UBM, 0.179, 0)


def test_reproducibility(problem12):
    a = run_trials(problem12, UBM, 0.179, 2000, seed=42)
    b = run_trials(problem12, UBM, 0.179, 2000, seed=42)
    assert a == b
    c = run_trials(problem12, UBM, 0.179, 2000, seed=43)
    assert c != a


def test_trial_prefix_stability(problem12):
    # trial i's stream depends only on (seed, i): a longer run extends the
    # per-string tallies without changing earlier trials
    small = run_trials(problem12, FBM, 0.179, 500, seed=9)
    large = run_trials(problem12, FBM, 0.179, 1000, seed=9)
    assert sum(c for c, _ in small.per_string.values()) == 500
    for label, (count, _) in small.per_string.items():
        assert large.per_string[label][0] >= count


def test_ubm_mean_matches_linear_solve(problem12):
    report = run_trials(problem12, UBM, 0.179, TRIALS, seed=0)
    oracle = ubm_cost(problem12, 0.179).expected_copies
    assert abs(report.mean_copies - oracle) <= 3.0 * report.mean_copies_stderr


def test_lol_is_deterministic_in_length(problem12):
    report = run_trials(problem12, LOL, 0.179, 5000, seed=3)
    assert report.min_copies == report.max_copies == lol_cost(problem12, 0.179)
    assert report.mean_copies_stderr == 0.0


def test_fbm_string_frequencies_match_enumeration(problem12):
    report = run_trials(problem12, FBM, 0.179, TRIALS, seed=1)
    strings, _ = enumerate_strings(problem12, FBM, 0.179, coverage_target=1.0, max_depth=64)
    expected = {s.label: s.prob for s in strings}
    assert set(report.per_string) <= set(expected)
    for label, prob in expected.items():
        count = report.per_string.get(label, (0, 0))[0]
        sigma = math.sqrt(TRIALS * prob * (1.0 - prob))
        assert abs(count - TRIALS * prob) <= 4.0 * sigma + 1.0


def test_per_string_errors_within_wilson_interval(problem12):
    # observed conditional error vs the enumerated true error, 99% Wilson band
    report = run_trials(problem12, UBM, 0.179, TRIALS, seed=2)
    strings, _ = enumerate_strings(problem12, UBM, 0.179, coverage_target=1.0, max_depth=20)
    expected = {s.label: s.true_error for s in strings}
    z = 2.5758
    checked = 0
    for label, observed_err, _ in empirical_string_errors(report):
        if label not in expected:
            continue
        count = report.per_string[label][0]
        if count < 100:
            continue
        p_hat = observed_err
        denom = 1.0 + z * z / count
        center = (p_hat + z * z / (2 * count)) / denom
        half = z * math.sqrt(p_hat * (1 - p_hat) / count + z * z / (4 * count * count)) / denom
        assert center - half <= expected[label] <= center + half
        checked += 1
    assert checked >= 3


def test_fbm_outcome2_strings_have_zero_observed_error(problem12):
    report = run_trials(problem12, FBM, 0.179, TRIALS, seed=4)
    for label, (count, errs) in report.per_string.items():
        if label.endswith("2"):
            assert errs == 0


def test_empirical_string_errors_sorted(problem12):
    report = run_trials(problem12, UBM, 0.179, 5000, seed=5)
    rows = empirical_string_errors(report)
    probs = [r[2] for r in rows]
    assert probs == sorted(probs, reverse=True)
    assert all(count > 0 for count, _ in report.per_string.values())
