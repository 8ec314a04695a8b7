"""Enumeration of successful termination strings with probabilities and true errors.

A termination string is an outcome sequence whose posterior first satisfies
the error bound at its last copy; the set of such strings is prefix-free by
construction.  Enumeration is best-first on prefix probability, so strings are
emitted in descending observation probability with a lexicographic tie-break.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .model import DiscriminationProblem, MeasurementConfig
from .posterior import meets_error_bound, posterior_error, posterior_from_counts
from .strategies import CostResult, StrategyKind, StrategySpec, strategy_angle

__all__ = [
    "TerminationString",
    "LengthAggregate",
    "enumerate_strings",
    "aggregate_by_length",
    "cost_from_strings",
]

DEFAULT_COVERAGE = 0.998
DEFAULT_MAX_DEPTH = 64


@dataclass(frozen=True)
class TerminationString:
    """A successful outcome string with its probabilities and true error."""

    outcomes: tuple[int, ...]
    prob: float
    prob_given_psi1: float
    prob_given_psi2: float
    true_error: float
    guess: int

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @property
    def label(self) -> str:
        return "".join(str(d) for d in self.outcomes)


@dataclass(frozen=True)
class LengthAggregate:
    """Strings of one length combined: total probability and mean true error."""

    n: int
    total_prob: float
    mean_error: float


def enumerate_strings(
    problem: DiscriminationProblem,
    strategy: StrategySpec,
    eps: float,
    coverage_target: float = DEFAULT_COVERAGE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> tuple[list[TerminationString], float]:
    """Termination strings of a fixed-angle strategy, in descending probability.

    Expands outcome prefixes best-first until the emitted strings cover
    coverage_target of the probability mass or every live prefix reaches
    max_depth.  Returns (strings, residual) with residual the unemitted mass.
    LOL is rejected: its strings are angle-adaptive and its copy count is
    deterministic (see lol_cost).
    """
    if strategy.kind is StrategyKind.LOL:
        raise ValueError("LOL has no fixed-angle string set; its copy count is lol_cost(eps)")
    if not 0.0 < coverage_target <= 1.0:
        raise ValueError(f"coverage_target must lie in (0, 1], got {coverage_target}")
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    phi = strategy_angle(problem, strategy)
    config = MeasurementConfig.for_problem(problem, phi)
    q1, q2 = problem.q1, problem.q2

    # heap entries: (-prob, outcomes, m1, m2, prob|psi1, prob|psi2)
    heap: list[tuple[float, tuple[int, ...], int, int, float, float]] = [
        (-1.0, (), 0, 0, 1.0, 1.0)
    ]
    emitted: list[TerminationString] = []
    covered = 0.0
    dropped = 0.0  # prefixes cut off at max_depth
    while heap and covered < coverage_target:
        neg_prob, outcomes, m1, m2, pg1, pg2 = heapq.heappop(heap)
        n = len(outcomes)
        if n > 0:
            state = posterior_from_counts(problem, config, m1, m2)
            if meets_error_bound(posterior_error(state), eps):
                guess = 1 if state.p1 >= 0.5 else 2
                emitted.append(
                    TerminationString(
                        outcomes=outcomes,
                        prob=-neg_prob,
                        prob_given_psi1=pg1,
                        prob_given_psi2=pg2,
                        true_error=(1.0 - state.p1) if guess == 1 else state.p1,
                        guess=guess,
                    )
                )
                covered += -neg_prob
                continue
            if n >= max_depth:
                dropped += -neg_prob
                continue
        for d in (1, 2):
            c1 = pg1 * config.likelihood(d, 1)
            c2 = pg2 * config.likelihood(d, 2)
            prob = q1 * c1 + q2 * c2
            if prob == 0.0:
                continue
            k1, k2 = (m1 + 1, m2) if d == 1 else (m1, m2 + 1)
            heapq.heappush(heap, (-prob, outcomes + (d,), k1, k2, c1, c2))
    # residual recomputed from the surviving mass, not as 1 - covered, so the
    # normalization invariant (sum of P + residual = 1) is a real check
    residual = dropped + sum(-entry[0] for entry in heap)
    return emitted, residual


def aggregate_by_length(strings: list[TerminationString]) -> list[LengthAggregate]:
    """Combine strings of equal length: summed probability, probability-weighted error."""
    by_n: dict[int, tuple[float, float]] = {}
    for s in strings:
        total, weighted = by_n.get(s.n, (0.0, 0.0))
        by_n[s.n] = (total + s.prob, weighted + s.prob * s.true_error)
    return [
        LengthAggregate(n=n, total_prob=total, mean_error=weighted / total if total else 0.0)
        for n, (total, weighted) in sorted(by_n.items())
    ]


def cost_from_strings(
    strings: list[TerminationString],
    residual: float,
    max_depth: int,
    tail_bound: float = 0.0,
) -> CostResult:
    """Expected copies from an enumerated string set: sum of n * P(X_n).

    The residual (unemitted) mass contributes an enclosure term; pass the
    engine's worst-case tail bound to tighten the upper end beyond
    residual * max_depth.
    """
    cost = sum(s.n * s.prob for s in strings)
    if residual <= 0.0:
        return CostResult(expected_copies=cost, exact=True)
    return CostResult(
        expected_copies=cost,
        exact=False,
        residual_mass=residual,
        bound_width=residual * (max_depth + tail_bound),
    )
