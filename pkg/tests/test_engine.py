import math
import random

import pytest

from seqdisc import (
    DiscriminationProblem,
    EngineOptions,
    NonConvergenceError,
    brute_force_cost,
    fbm_cost,
    fixed_angle_cost,
    ubm_cost,
)
from seqdisc.engine import CostCapExceeded

TIGHT = EngineOptions(max_copies=50_000, mass_tolerance=1e-14)


def test_engine_options_validation():
    with pytest.raises(ValueError):
        EngineOptions(max_copies=0)
    with pytest.raises(ValueError):
        EngineOptions(mass_tolerance=0.0)
    with pytest.raises(ValueError):
        EngineOptions(mode="newton")


def test_domain_errors(problem12):
    with pytest.raises(ValueError):
        fixed_angle_cost(problem12, math.pi / 2, 0.1)
    with pytest.raises(ValueError):
        fixed_angle_cost(problem12, 0.3, 0.6)
    with pytest.raises(ValueError):
        brute_force_cost(problem12, 0.3, 0.1, 31)


def test_matches_fbm_closed_form(problem12):
    result = fixed_angle_cost(problem12, problem12.theta, 0.179, TIGHT)
    assert result.expected_copies == pytest.approx(4.6441, abs=5e-4)
    oracle = fbm_cost(problem12, 0.179).expected_copies
    assert abs(result.expected_copies - oracle) <= result.bound_width + 1e-9


def test_matches_ubm_linear_solve(problem12):
    result = fixed_angle_cost(problem12, math.pi / 4, 0.179, TIGHT)
    assert abs(result.expected_copies - 3.2) <= result.bound_width + 1e-9


def test_gof_angle_cost_near_paper_value(problem12, gof_179):
    phi_opt, result = gof_179
    assert result.expected_copies == pytest.approx(2.005, abs=0.05)


def test_probability_conservation(problem12):
    records = []

    def on_depth(n, terminated, frontier):
        records.append((n, terminated, frontier))

    fixed_angle_cost(problem12, 0.9, 0.179, TIGHT, on_depth=on_depth)
    assert records
    for _, terminated, frontier in records:
        assert terminated + frontier == pytest.approx(1.0, abs=1e-12)


def test_monotone_residual(problem12):
    frontiers = []
    fixed_angle_cost(problem12, 0.9, 0.1, TIGHT,
                     on_depth=lambda n, t, f: frontiers.append(f))
    assert all(a >= b - 1e-15 for a, b in zip(frontiers, frontiers[1:]))


def test_infinite_step_at_aligned_angle(problem12):
    # at phi = theta any outcome 2 terminates immediately with zero error,
    # so the cost matches the closed form exactly and quickly
    result = fixed_angle_cost(problem12, problem12.theta, 0.3, TIGHT)
    oracle = fbm_cost(problem12, 0.3).expected_copies
    assert abs(result.expected_copies - oracle) <= result.bound_width + 1e-10


def test_nonconvergence_at_uninformative_angle(problem12):
    # phi = 0 carries no information: the posterior never moves
    with pytest.raises(NonConvergenceError):
        fixed_angle_cost(problem12, 0.0, 0.1, EngineOptions(max_copies=200))


def test_cost_cap_abandons_expensive_angles(problem12):
    with pytest.raises(CostCapExceeded):
        fixed_angle_cost(problem12, 0.02, 0.179, cost_cap=5.0)


def test_brute_force_examples(problem12):
    # every string terminates at length 1 when eps admits both one-copy posteriors
    p = problem12
    res = brute_force_cost(p, math.pi / 4, 0.26, 10)
    assert res.exact
    assert res.expected_copies == pytest.approx(1.0, abs=1e-12)


def _random_instances(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        theta = rng.uniform(0.1, 0.7)
        eps = rng.uniform(0.05, 0.35)
        phi = rng.uniform(0.15, 1.4)
        out.append((theta, eps, phi))
    return out


@pytest.mark.parametrize("theta,eps,phi", _random_instances(20, seed=20260826))
def test_dp_agrees_with_brute_force(theta, eps, phi):
    # identical truncation depth on both routes; costs agree to 1e-10
    depth = 18
    p = DiscriminationProblem(theta=theta)
    bf = brute_force_cost(p, phi, eps, depth)
    dp = fixed_angle_cost(
        p, phi, eps,
        EngineOptions(max_copies=depth, mass_tolerance=1e-300, bound_width_limit=math.inf),
    )
    assert dp.expected_copies == pytest.approx(bf.expected_copies, abs=1e-10)
    assert dp.residual_mass == pytest.approx(bf.residual_mass, abs=1e-10)


@pytest.mark.parametrize("theta,eps", [(t, e) for t, e, _ in _random_instances(25, seed=7)])
def test_dp_agrees_with_fbm_closed_form_random(theta, eps):
    p = DiscriminationProblem(theta=theta)
    dp = fixed_angle_cost(p, p.theta, eps, TIGHT)
    oracle = fbm_cost(p, eps).expected_copies
    assert abs(dp.expected_copies - oracle) <= dp.bound_width + 1e-9


@pytest.mark.parametrize("theta,eps", [(t, e) for t, e, _ in _random_instances(25, seed=11)])
def test_dp_agrees_with_ubm_linear_solve_random(theta, eps):
    p = DiscriminationProblem(theta=theta)
    dp = fixed_angle_cost(p, math.pi / 4, eps, TIGHT)
    oracle = ubm_cost(p, eps).expected_copies
    assert abs(dp.expected_copies - oracle) <= dp.bound_width + 1e-9


def test_brute_force_reproduces_fbm_string_termination(problem12):
    # depth large enough to hold the whole FBM set: cost is exact
    res = brute_force_cost(problem12, problem12.theta, 0.179, 25)
    assert res.residual_mass == pytest.approx(0.0, abs=1e-15)
    assert res.expected_copies == pytest.approx(
        fbm_cost(problem12, 0.179).expected_copies, abs=1e-10
    )
