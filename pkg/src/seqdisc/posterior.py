"""Bayesian posterior updates from outcome counts, and log-likelihood-ratio steps.

Posteriors are always recomputed from the integer outcome counts via the
closed form, never accumulated multiplicatively, so long runs carry no
floating-point drift and absorption decisions are order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import DiscriminationProblem, MeasurementConfig

__all__ = [
    "PosteriorState",
    "LikelihoodSteps",
    "posterior_from_counts",
    "posterior_error",
    "log_likelihood_steps",
    "meets_error_bound",
    "BOUNDARY_TOL",
]

# Stopping comparisons are inclusive (error <= eps).  Several anchor cases
# land exactly on the boundary (e.g. a posterior error of exactly 0.1 against
# eps = 0.1) where float rounding of the trig closed forms can tip the
# comparison the wrong way, so the inequality absorbs a 1e-12 slack.
BOUNDARY_TOL = 1e-12


def meets_error_bound(error: float, eps: float) -> bool:
    """Inclusive stopping test: error <= eps, tolerant to boundary rounding."""
    return error <= eps + BOUNDARY_TOL


@dataclass(frozen=True)
class PosteriorState:
    """Posterior probability of psi1 together with the outcome counts behind it."""

    p1: float
    m1: int
    m2: int

    @property
    def n(self) -> int:
        return self.m1 + self.m2

    @property
    def count_difference(self) -> int:
        """m1 - m2, the walk coordinate for symmetric fixed-angle strategies."""
        return self.m1 - self.m2


@dataclass(frozen=True)
class LikelihoodSteps:
    """Log-likelihood-ratio increments ln[P(d|psi1)/P(d|psi2)] per outcome.

    step1 >= 0 and step2 <= 0 for angles in range; degenerate angles give
    signed infinities (phi = theta makes outcome 2 impossible under psi1,
    phi + theta = pi/2 makes outcome 1 impossible under psi2).
    """

    step1: float
    step2: float


def _log_ratio(num: float, den: float) -> float:
    """ln(num/den) with exact-zero handling; nan if both are zero."""
    if num == 0.0 and den == 0.0:
        return math.nan
    if num == 0.0:
        return -math.inf
    if den == 0.0:
        return math.inf
    return math.log(num / den)


def posterior_from_counts(
    problem: DiscriminationProblem,
    config: MeasurementConfig,
    m1: int,
    m2: int,
) -> PosteriorState:
    """Exact Bayesian posterior of psi1 after m1 outcome-1 and m2 outcome-2 results.

    Computed in log-odds space; a zero-likelihood outcome drives the posterior
    to exactly 0 or 1.  Raises if an observed outcome is impossible under both
    hypotheses (undefined evidence).
    """
    if m1 < 0 or m2 < 0:
        raise ValueError(f"counts must be >= 0, got m1={m1}, m2={m2}")
    # log-odds of psi2 vs psi1; d1 <= 0, d2 >= 0
    d1 = _log_ratio(config.p1_given_psi2, config.p1_given_psi1)
    d2 = _log_ratio(config.p2_given_psi2, config.p2_given_psi1)
    logit = math.log(problem.q2 / problem.q1)
    for count, step, d in ((m1, d1, 1), (m2, d2, 2)):
        if count > 0:
            if math.isnan(step):
                raise ValueError(
                    f"outcome {d} has zero probability under both hypotheses at phi={config.phi}"
                )
            if math.isinf(step):
                if math.isinf(logit) and (step > 0) != (logit > 0):
                    raise ValueError("contradictory zero-likelihood evidence")
                logit = step
            else:
                logit += count * step
    if logit == math.inf:
        p1 = 0.0
    elif logit == -math.inf:
        p1 = 1.0
    elif logit > 700.0:
        p1 = 0.0
    elif logit < -700.0:
        p1 = 1.0
    else:
        p1 = 1.0 / (1.0 + math.exp(logit))
    return PosteriorState(p1=p1, m1=m1, m2=m2)


def posterior_error(state: PosteriorState) -> float:
    """Error probability of guessing the more probable hypothesis: min(p1, 1-p1)."""
    return min(state.p1, 1.0 - state.p1)


def log_likelihood_steps(problem: DiscriminationProblem, phi: float) -> LikelihoodSteps:
    """Per-outcome log-likelihood-ratio increments for a fixed measurement angle."""
    config = MeasurementConfig.for_problem(problem, phi)
    return LikelihoodSteps(
        step1=_log_ratio(config.p1_given_psi1, config.p1_given_psi2),
        step2=_log_ratio(config.p2_given_psi1, config.p2_given_psi2),
    )
