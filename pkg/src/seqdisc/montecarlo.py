"""Stochastic simulation of all four strategies with reproducible per-trial streams.

Every trial consumes its own deterministic uniform stream derived from the
master seed and the trial index: trial i reads row i of a seed-keyed
counter-based tableau, falling back to a stream seeded by (seed, i) in the
rare case a trial outlives its row.  Results are therefore bit-reproducible
for a fixed (seed, trials) regardless of execution order, and trials are
independent by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DiscriminationProblem, MeasurementConfig, helstrom_angle
from .posterior import BOUNDARY_TOL, _log_ratio
from .strategies import StrategyKind, StrategySpec, strategy_angle

__all__ = [
    "TrialRecord",
    "MonteCarloReport",
    "TrialLengthError",
    "run_trials",
    "empirical_string_errors",
]

# far above any desk-scale stopping depth; reaching it means the bound is unreachable
TRIAL_COPY_CAP = 1_000_000
_BLOCK = 64  # uniforms preallocated per trial (1 state draw + ~63 copies)
_CHUNK = 64  # refill size for trials that outlive their block


class TrialLengthError(RuntimeError):
    """A trial exceeded the hard per-trial copy cap without stopping."""


@dataclass(frozen=True)
class TrialRecord:
    true_state: int
    outcomes: tuple[int, ...]
    guess: int

    @property
    def copies_used(self) -> int:
        return len(self.outcomes)

    @property
    def correct(self) -> bool:
        return self.guess == self.true_state


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    mean_copies: float
    mean_copies_stderr: float
    empirical_error: float
    per_string: dict[str, tuple[int, int]]  # string -> (count, error count)
    seed: int
    min_copies: int
    max_copies: int


class _Uniforms:
    """Sequential uniforms: a preallocated row, then a spawned per-trial stream."""

    __slots__ = ("_buf", "_i", "_seed", "_trial", "_ext")

    def __init__(self, row: np.ndarray, seed: int, trial: int):
        self._buf = row
        self._i = 0
        self._seed = seed
        self._trial = trial
        self._ext = None

    def next(self) -> float:
        if self._i == len(self._buf):
            if self._ext is None:
                self._ext = np.random.default_rng((self._seed, self._trial))
            self._buf = self._ext.random(_CHUNK)
            self._i = 0
        u = self._buf[self._i]
        self._i += 1
        return u


def _fixed_angle_trial(
    problem: DiscriminationProblem,
    config: MeasurementConfig,
    eps: float,
    u: _Uniforms,
) -> tuple[int, str, int]:
    """One fixed-angle run; returns (true state, outcome string, guess).

    The stopping test reproduces posterior_from_counts bit for bit (same
    log-odds accumulation from the counts) without the per-copy call overhead.
    """
    true_state = 1 if u.next() < problem.q1 else 2
    p1 = config.p1_given_psi1 if true_state == 1 else config.p1_given_psi2
    d1 = _log_ratio(config.p1_given_psi2, config.p1_given_psi1)
    d2 = _log_ratio(config.p2_given_psi2, config.p2_given_psi1)
    logit0 = math.log(problem.q2 / problem.q1)
    bound = eps + BOUNDARY_TOL
    m1 = m2 = 0
    outcomes = []
    while True:
        if u.next() < p1:
            m1 += 1
            outcomes.append("1")
        else:
            m2 += 1
            outcomes.append("2")
        logit = logit0
        if m1 > 0:
            logit = d1 if math.isinf(d1) else logit + m1 * d1
        if m2 > 0:
            logit = d2 if math.isinf(d2) else logit + m2 * d2
        if logit > 700.0:
            p = 0.0
        elif logit < -700.0:
            p = 1.0
        else:
            p = 1.0 / (1.0 + math.exp(logit))
        if min(p, 1.0 - p) <= bound:
            return true_state, "".join(outcomes), (1 if p >= 0.5 else 2)
        if len(outcomes) >= TRIAL_COPY_CAP:
            raise TrialLengthError(
                f"trial exceeded {TRIAL_COPY_CAP} copies without reaching the bound"
            )


def _lol_trial(
    problem: DiscriminationProblem,
    eps: float,
    u: _Uniforms,
    angle_cache: dict[float, MeasurementConfig],
) -> tuple[int, str, int]:
    """One adaptive run: Helstrom angle recomputed from the posterior each copy."""
    true_state = 1 if u.next() < problem.q1 else 2
    belief = problem.q1  # posterior of psi1, updated exactly each copy
    bound = eps + BOUNDARY_TOL
    outcomes = []
    while True:
        config = angle_cache.get(belief)
        if config is None:
            phi = helstrom_angle(DiscriminationProblem(theta=problem.theta, q1=belief))
            config = MeasurementConfig.for_problem(problem, phi)
            angle_cache[belief] = config
        p1 = config.p1_given_psi1 if true_state == 1 else config.p1_given_psi2
        if u.next() < p1:
            outcomes.append("1")
            num, den = config.p1_given_psi1, config.p1_given_psi2
        else:
            outcomes.append("2")
            num, den = config.p2_given_psi1, config.p2_given_psi2
        evidence = belief * num + (1.0 - belief) * den
        belief = belief * num / evidence
        if min(belief, 1.0 - belief) <= bound:
            return true_state, "".join(outcomes), (1 if belief >= 0.5 else 2)
        if len(outcomes) >= TRIAL_COPY_CAP:
            raise TrialLengthError(
                f"trial exceeded {TRIAL_COPY_CAP} copies without reaching the bound"
            )


def run_trials(
    problem: DiscriminationProblem,
    strategy: StrategySpec,
    eps: float,
    trials: int,
    seed: int = 0,
) -> MonteCarloReport:
    """Simulate independent discrimination runs and aggregate their statistics."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    adaptive = strategy.kind is StrategyKind.LOL
    config = None
    if not adaptive:
        config = MeasurementConfig.for_problem(problem, strategy_angle(problem, strategy))
    angle_cache: dict[float, MeasurementConfig] = {}

    block = np.random.default_rng(seed).random((trials, _BLOCK))
    per_string: dict[str, list[int]] = {}
    total = 0
    total_sq = 0
    errors = 0
    min_copies = TRIAL_COPY_CAP
    max_copies = 0
    for i in range(trials):
        u = _Uniforms(block[i], seed, i)
        if adaptive:
            true_state, label, guess = _lol_trial(problem, eps, u, angle_cache)
        else:
            true_state, label, guess = _fixed_angle_trial(problem, config, eps, u)
        n = len(label)
        total += n
        total_sq += n * n
        wrong = guess != true_state
        errors += wrong
        if n < min_copies:
            min_copies = n
        if n > max_copies:
            max_copies = n
        tally = per_string.get(label)
        if tally is None:
            tally = per_string[label] = [0, 0]
        tally[0] += 1
        tally[1] += wrong

    mean = total / trials
    var = (total_sq - trials * mean * mean) / (trials - 1) if trials > 1 else 0.0
    stderr = math.sqrt(max(var, 0.0) / trials)
    return MonteCarloReport(
        trials=trials,
        mean_copies=mean,
        mean_copies_stderr=stderr,
        empirical_error=errors / trials,
        per_string={k: (c, e) for k, (c, e) in per_string.items()},
        seed=seed,
        min_copies=min_copies,
        max_copies=max_copies,
    )


def empirical_string_errors(report: MonteCarloReport) -> list[tuple[str, float, float]]:
    """Per-string (label, observed conditional error, observed probability).

    Sorted by descending observed probability, then lexicographically, matching
    the enumeration order of the string laboratory.
    """
    rows = []
    for label, (count, err_count) in report.per_string.items():
        if count == 0:
            continue
        rows.append((label, err_count / count, count / report.trials))
    rows.sort(key=lambda r: (-r[2], r[0]))
    return rows
