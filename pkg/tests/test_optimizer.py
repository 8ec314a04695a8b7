import math

import pytest

from seqdisc import (
    DiscriminationProblem,
    fbm_cost,
    fixed_angle_cost,
    optimize_angle,
    scan_angles,
    ubm_cost,
)

RES = 400  # coarse enough for fast tests, fine enough for stable minima


def test_scan_validation(problem12):
    with pytest.raises(ValueError):
        scan_angles(problem12, 0.179, 0.5, 0.4, 10)
    with pytest.raises(ValueError):
        scan_angles(problem12, 0.179, 0.0, 1.0, 1)


def test_scan_resolution_two_returns_endpoints(problem12):
    scan = scan_angles(problem12, 0.179, 0.4, 0.9, 2)
    assert [phi for phi, _ in scan.samples] == [0.4, 0.9]
    assert all(r is not None for _, r in scan.samples)


def test_scan_minimum_beats_fbm_and_ubm(problem12):
    scan = scan_angles(problem12, 0.179, 0.1, math.pi / 2 - 1e-9, RES)
    assert scan.best_cost <= min(4.6441, 3.2)


def test_scan_records_failures(problem12):
    # phi = 0 carries no information and must be recorded, not fatal
    scan = scan_angles(problem12, 0.179, 0.0, 1.0, 5)
    assert 0.0 in scan.failures
    assert scan.samples[0][1] is None
    assert math.isfinite(scan.best_cost)


def test_minimum_away_from_both_reference_angles():
    # at theta = pi/8, eps = 0.125 the optimum is at neither phi = theta nor pi/4
    p = DiscriminationProblem(theta=math.pi / 8)
    phi_opt, result = optimize_angle(p, 0.125, resolution=RES)
    at_theta = fixed_angle_cost(p, p.theta, 0.125)
    at_quarter = fixed_angle_cost(p, math.pi / 4, 0.125)
    assert result.expected_copies < at_theta.expected_copies - 1e-6
    assert result.expected_copies < at_quarter.expected_copies - 1e-6


def test_optimize_angle_paper_value(problem12, gof_179):
    phi_opt, result = gof_179
    assert 1.955 <= result.expected_copies <= 2.055
    assert 0.0 < phi_opt < math.pi / 2


def test_optimum_tie_breaks_to_smaller_phi(problem12, gof_179):
    # symmetric priors: the mirror angle pi/2 - phi is an exact tie; the
    # smaller of the two must be returned
    phi_opt, _ = gof_179
    assert phi_opt < math.pi / 4


def test_dominance_over_specific_strategies(problem12):
    for eps in (0.05, 0.125, 0.2):
        _, result = optimize_angle(problem12, eps, resolution=RES)
        slack = result.bound_width + 1e-9
        assert result.expected_copies <= fbm_cost(problem12, eps).expected_copies + slack
        assert result.expected_copies <= ubm_cost(problem12, eps).expected_copies + slack


def test_deterministic_rescan(problem12):
    a = scan_angles(problem12, 0.15, 0.2, 1.2, 50)
    b = scan_angles(problem12, 0.15, 0.2, 1.2, 50)
    assert [(phi, r.expected_copies if r else None) for phi, r in a.samples] == \
           [(phi, r.expected_copies if r else None) for phi, r in b.samples]
    assert (a.best_phi, a.best_cost) == (b.best_phi, b.best_cost)


def test_refinement_soundness(problem12):
    coarse = scan_angles(problem12, 0.179, 0.0, math.pi / 2 - 1e-9, RES)
    _, refined = optimize_angle(problem12, 0.179, resolution=RES)
    assert refined.expected_copies <= coarse.best_cost + 1e-12
