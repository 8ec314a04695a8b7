"""Cross-check the analytic copy counts against direct simulation.

Runs reproducible Monte Carlo trials for each strategy and compares the
sample mean (with its standard error) to the exact value.  The adaptive
scheme uses the same number of copies in every trial, so its standard
error is exactly zero.
"""

import math

from seqdisc import (
    DiscriminationProblem,
    StrategyKind,
    StrategySpec,
    fbm_cost,
    lol_cost,
    run_trials,
    ubm_cost,
)

problem = DiscriminationProblem(theta=math.pi / 12)
eps = 0.179
trials = 50_000

cases = [
    ("fully biased", StrategySpec(StrategyKind.FBM),
     fbm_cost(problem, eps).expected_copies),
    ("unbiased walk", StrategySpec(StrategyKind.UBM),
     ubm_cost(problem, eps).expected_copies),
    ("adaptive", StrategySpec(StrategyKind.LOL),
     float(lol_cost(problem, eps))),
]

print(f"theta = pi/12, eps = {eps}, {trials} trials per strategy")
print(f"{'strategy':>14} {'analytic':>9} {'simulated':>10} {'stderr':>8} "
      f"{'emp. error':>10}")
for name, spec, exact in cases:
    report = run_trials(problem, spec, eps, trials, seed=1)
    print(f"{name:>14} {exact:9.4f} {report.mean_copies:10.4f} "
          f"{report.mean_copies_stderr:8.4f} {report.empirical_error:10.4f}")
