"""Expected stopping time of any fixed-angle strategy under the Bayesian stopping rule.

The dynamic program propagates unterminated probability mass over the integer
count lattice (m1, m2), depth by depth, under each hypothesis separately.  The
termination predicate is a function of the counts alone, so states reached by
different outcome orderings merge exactly; mass that stops is removed from the
frontier immediately, which enforces prefix termination automatically.

A brute-force outcome-tree enumeration with identical semantics serves as the
independent correctness oracle at validation scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DiscriminationProblem, MeasurementConfig
from .posterior import BOUNDARY_TOL, log_likelihood_steps, posterior_from_counts, posterior_error
from .strategies import CostResult

__all__ = [
    "EngineOptions",
    "NonConvergenceError",
    "CostCapExceeded",
    "fixed_angle_cost",
    "brute_force_cost",
    "worst_case_tail",
]

_BRUTE_FORCE_DEPTH_LIMIT = 30
# frontier states carrying less than this fraction of the live mass are dropped
# (tracked as leaked mass, so conservation accounting stays honest)
_WINDOW_CUT = 1e-40


class NonConvergenceError(RuntimeError):
    """The frontier did not drain below the mass tolerance within the depth budget."""


class CostCapExceeded(RuntimeError):
    """The running lower bound on the cost exceeded the caller's cap."""


@dataclass(frozen=True)
class EngineOptions:
    max_copies: int = 100_000
    mass_tolerance: float = 1e-12
    mode: str = "dp_lattice"  # or "brute_force_tree"
    # largest acceptable enclosure width before truncation is reported as failure
    bound_width_limit: float = 1e-6

    def __post_init__(self):
        if self.max_copies < 1:
            raise ValueError(f"max_copies must be >= 1, got {self.max_copies}")
        if not 0.0 < self.mass_tolerance < 1.0:
            raise ValueError(f"mass_tolerance must lie in (0, 1), got {self.mass_tolerance}")
        if self.mode not in ("dp_lattice", "brute_force_tree"):
            raise ValueError(f"unknown engine mode {self.mode!r}")


def _check_inputs(problem: DiscriminationProblem, phi: float, eps: float) -> None:
    if not 0.0 <= phi < math.pi / 2:
        raise ValueError(f"measurement angle must lie in [0, pi/2), got {phi}")
    if not 0.0 < eps < min(problem.q1, problem.q2):
        raise ValueError(
            f"error bound must lie in (0, min(q1, q2)), got {eps}"
        )


def worst_case_tail(problem: DiscriminationProblem, phi: float, eps: float) -> float:
    """Conservative bound on the expected copies still needed from any unterminated state.

    Uses Wald's identity on the log-odds walk: the continuation region has
    half-width ln(1/eps - 1), and the walk drifts toward the confirming
    boundary under either hypothesis.  An infinite step (zero likelihood for
    one outcome) absorbs geometrically at the rate of that outcome.  Returns
    inf when the measurement carries no information (phi = 0 limit).
    """
    config = MeasurementConfig.for_problem(problem, phi)
    steps = log_likelihood_steps(problem, phi)
    l_bound = math.log(1.0 / eps - 1.0)
    finite = [abs(s) for s in (steps.step1, steps.step2) if math.isfinite(s)]
    spread = sum(finite)
    tails = []
    for likelihoods in ((config.p1_given_psi1, config.p2_given_psi1),
                        (config.p1_given_psi2, config.p2_given_psi2)):
        geometric = math.inf
        drift = 0.0
        for p, s in zip(likelihoods, (steps.step1, steps.step2)):
            if p == 0.0:
                continue
            if math.isinf(s):
                geometric = min(geometric, 1.0 / p)
            else:
                drift += p * s
        wald = (2.0 * l_bound + spread) / abs(drift) if drift != 0.0 else math.inf
        tails.append(min(wald, geometric))
    return max(tails)


def _termination_mask(
    problem: DiscriminationProblem,
    steps,
    m1: np.ndarray,
    m2: np.ndarray,
    eps: float,
) -> np.ndarray:
    """Vectorized stopping predicate over count states; matches posterior_from_counts."""
    d1, d2 = -steps.step1, -steps.step2  # log-odds increments of psi2 vs psi1
    logit = np.full(m1.shape, math.log(problem.q2 / problem.q1))
    for m, d in ((m1, d1), (m2, d2)):
        if math.isinf(d):
            logit = np.where(m > 0, d, logit)
        else:
            logit = logit + m * d
    abs_logit = np.abs(logit)
    with np.errstate(over="ignore"):
        err = np.where(abs_logit > 700.0, 0.0, 1.0 / (1.0 + np.exp(np.minimum(abs_logit, 700.0))))
    return err <= eps + BOUNDARY_TOL


def fixed_angle_cost(
    problem: DiscriminationProblem,
    phi: float,
    eps: float,
    opts: EngineOptions | None = None,
    on_depth=None,
    cost_cap: float | None = None,
) -> CostResult:
    """Expected copies until the posterior error reaches eps, at a fixed angle.

    Marginalized over the true state with the problem's priors.  Stopping is
    checked after every copy; a terminated prefix is never extended.  The
    returned enclosure is [expected_copies, expected_copies + bound_width].

    on_depth, if given, is called as on_depth(n, terminated_mass, frontier_mass)
    after each depth (test instrumentation).  cost_cap, if given, raises
    CostCapExceeded as soon as the running lower bound on the final cost
    exceeds it (the angle optimizer uses this to abandon hopeless angles).
    """
    opts = opts or EngineOptions()
    if opts.mode == "brute_force_tree":
        return brute_force_cost(problem, phi, eps, min(opts.max_copies, _BRUTE_FORCE_DEPTH_LIMIT))
    _check_inputs(problem, phi, eps)

    config = MeasurementConfig.for_problem(problem, phi)
    steps = log_likelihood_steps(problem, phi)
    q1, q2 = problem.q1, problem.q2
    a1, a2 = config.p1_given_psi1, config.p1_given_psi2  # P(outcome 1 | psi_j)

    # frontier mass over a sliding window of m1 values [base, base + len),
    # at the current depth n (so m2 = n - m1)
    mass1 = np.array([1.0])
    mass2 = np.array([1.0])
    base = 0
    cost_accum = 0.0
    terminated = 0.0
    leaked = 0.0  # mass dropped with the window trim, counted into the residual
    n = 0
    while n < opts.max_copies:
        n += 1
        width = len(mass1) + 1
        new1 = np.zeros(width)
        new1[1:] += mass1 * a1
        new1[:-1] += mass1 * (1.0 - a1)
        new2 = np.zeros(width)
        new2[1:] += mass2 * a2
        new2[:-1] += mass2 * (1.0 - a2)
        m1 = base + np.arange(width)
        stop = _termination_mask(problem, steps, m1, n - m1, eps)
        weight = q1 * new1 + q2 * new2
        stopped_now = float(weight[stop].sum())
        cost_accum += n * stopped_now
        terminated += stopped_now
        mass1 = np.where(stop, 0.0, new1)
        mass2 = np.where(stop, 0.0, new2)
        live = np.where(stop, 0.0, weight)
        frontier = float(live.sum())
        if on_depth is not None:
            on_depth(n, terminated, frontier + leaked)
        if frontier + leaked <= opts.mass_tolerance:
            break
        if cost_cap is not None and cost_accum + (frontier + leaked) * (n + 1) > cost_cap:
            raise CostCapExceeded(
                f"cost lower bound exceeds cap {cost_cap} at depth {n} for phi={phi}"
            )
        # trim the window to states carrying non-negligible mass
        keep = np.nonzero(live > frontier * _WINDOW_CUT)[0]
        if len(keep) == 0:
            leaked += frontier
            mass1 = mass1[:0]
            mass2 = mass2[:0]
            break
        lo, hi = int(keep[0]), int(keep[-1]) + 1
        leaked += float(live[:lo].sum() + live[hi:].sum())
        mass1 = mass1[lo:hi]
        mass2 = mass2[lo:hi]
        base += lo

    residual = float(q1 * mass1.sum() + q2 * mass2.sum()) + leaked
    if residual == 0.0:
        return CostResult(expected_copies=cost_accum, exact=True)
    bound_width = residual * (n + worst_case_tail(problem, phi, eps))
    if residual > opts.mass_tolerance and bound_width > opts.bound_width_limit:
        raise NonConvergenceError(
            f"residual mass {residual:.3e} after {n} copies at phi={phi}; "
            f"enclosure width {bound_width:.3e} exceeds {opts.bound_width_limit:.3e}"
        )
    return CostResult(
        expected_copies=cost_accum,
        exact=False,
        residual_mass=residual,
        bound_width=bound_width,
    )


def brute_force_cost(
    problem: DiscriminationProblem,
    phi: float,
    eps: float,
    max_depth: int,
) -> CostResult:
    """Exhaustive outcome-tree enumeration with prefix termination (the oracle).

    Walks every outcome string depth-first, terminating each branch the first
    time the posterior error reaches eps.  Exponential in max_depth; intended
    for validation only (max_depth <= 30).
    """
    _check_inputs(problem, phi, eps)
    if max_depth < 1 or max_depth > _BRUTE_FORCE_DEPTH_LIMIT:
        raise ValueError(f"max_depth must lie in [1, {_BRUTE_FORCE_DEPTH_LIMIT}], got {max_depth}")
    config = MeasurementConfig.for_problem(problem, phi)
    q1, q2 = problem.q1, problem.q2

    cost_accum = 0.0
    residual = 0.0
    # stack of (m1, m2, path prob | psi1, path prob | psi2)
    stack = [(0, 0, 1.0, 1.0)]
    while stack:
        m1, m2, pg1, pg2 = stack.pop()
        n = m1 + m2
        for d in (1, 2):
            c1 = pg1 * config.likelihood(d, 1)
            c2 = pg2 * config.likelihood(d, 2)
            if c1 == 0.0 and c2 == 0.0:
                continue
            k1, k2 = (m1 + 1, m2) if d == 1 else (m1, m2 + 1)
            state = posterior_from_counts(problem, config, k1, k2)
            weight = q1 * c1 + q2 * c2
            if posterior_error(state) <= eps + BOUNDARY_TOL:
                cost_accum += (n + 1) * weight
            elif n + 1 >= max_depth:
                residual += weight
            else:
                stack.append((k1, k2, c1, c2))
    if residual == 0.0:
        return CostResult(expected_copies=cost_accum, exact=True)
    return CostResult(
        expected_copies=cost_accum,
        exact=False,
        residual_mass=residual,
        bound_width=residual * (max_depth + worst_case_tail(problem, phi, eps)),
    )
