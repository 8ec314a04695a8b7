"""Grid search for the globally optimal fixed measurement angle.

The cost landscape C(phi) has jump discontinuities wherever the set of
terminating strings changes, so gradient methods are unsound; the search is a
coarse uniform scan followed by recursive bracket refinement around the
incumbent.  Ties between grid points break toward smaller phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .engine import CostCapExceeded, EngineOptions, NonConvergenceError, fixed_angle_cost
from .model import DiscriminationProblem, helstrom_angle
from .strategies import CostResult, fbm_cost, ubm_cost

__all__ = ["AngleScan", "scan_angles", "optimize_angle"]

# guard keeps the phi + theta = pi/2 infinity off the last grid point
_UPPER_GUARD = 1e-9
_DEFAULT_RESOLUTION = 2000
_REFINE_POINTS = 17
_ANGLE_RESOLUTION = 1e-6


@dataclass
class AngleScan:
    """Ordered grid of (phi, cost) samples with the best point found.

    Samples where the engine failed to converge are recorded with result None
    and the failure message in `failures`; they never become the best point.
    """

    samples: list[tuple[float, CostResult | None]]
    best_phi: float
    best_cost: float
    failures: dict[float, str] = field(default_factory=dict)


def _scan_options(opts: EngineOptions | None) -> EngineOptions:
    # uninformative angles near phi = 0 absorb extremely slowly; cap the depth
    # so they fail fast and are recorded as failures instead of stalling
    return opts or EngineOptions(max_copies=20_000)


def scan_angles(
    problem: DiscriminationProblem,
    eps: float,
    phi_min: float,
    phi_max: float,
    resolution: int,
    opts: EngineOptions | None = None,
    abandon_above_best: bool = False,
    initial_cap: float | None = None,
) -> AngleScan:
    """Evaluate the fixed-angle cost on a uniform grid inclusive of both endpoints.

    With abandon_above_best, a grid point is abandoned (and recorded as a
    failure) once its cost provably exceeds the best point found so far; this
    only makes sense when the caller wants the minimum, not the whole curve.
    """
    if not 0.0 <= phi_min < phi_max < math.pi / 2:
        raise ValueError(f"need 0 <= phi_min < phi_max < pi/2, got [{phi_min}, {phi_max}]")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    opts = _scan_options(opts)
    samples: list[tuple[float, CostResult | None]] = []
    failures: dict[float, str] = {}
    best_phi = math.nan
    best_cost = math.inf
    step = (phi_max - phi_min) / (resolution - 1)
    for i in range(resolution):
        phi = phi_min + i * step
        cap = None
        if abandon_above_best:
            cap = min(best_cost, initial_cap if initial_cap is not None else math.inf)
            if not math.isfinite(cap):
                cap = None
        try:
            result = fixed_angle_cost(problem, phi, eps, opts, cost_cap=cap)
        except (CostCapExceeded, NonConvergenceError, ValueError) as exc:
            samples.append((phi, None))
            failures[phi] = str(exc)
            continue
        samples.append((phi, result))
        if result.expected_copies < best_cost:  # strict: ties keep the smaller phi
            best_cost = result.expected_copies
            best_phi = phi
    if not math.isfinite(best_cost):
        raise NonConvergenceError("no grid point converged over the scan range")
    return AngleScan(samples=samples, best_phi=best_phi, best_cost=best_cost, failures=failures)


def optimize_angle(
    problem: DiscriminationProblem,
    eps: float,
    resolution: int = _DEFAULT_RESOLUTION,
    opts: EngineOptions | None = None,
) -> tuple[float, CostResult]:
    """Globally optimal fixed angle, up to grid resolution.

    Coarse uniform scan over [0, pi/2), then recursive refinement of the
    bracket one coarse cell to each side of the incumbent, down to an angle
    resolution of 1e-6 rad.  The refined optimum never exceeds the coarse one.
    """
    opts = _scan_options(opts)
    lo, hi = 0.0, math.pi / 2 - _UPPER_GUARD
    # the optimum can only beat the specific fixed-angle strategies, so their
    # cheap closed forms seed the abandonment cap (with generous slack in case
    # no grid point lands near the seeding angles)
    cap = fbm_cost(problem, eps).expected_copies
    if problem.q1 == problem.q2:
        cap = min(cap, ubm_cost(problem, eps).expected_copies)
    cap = 2.0 * cap + 2.0
    try:
        scan = scan_angles(problem, eps, lo, hi, resolution, opts,
                           abandon_above_best=True, initial_cap=cap)
    except NonConvergenceError:
        # cap was too aggressive for this grid; fall back to an uncapped scan
        scan = scan_angles(problem, eps, lo, hi, resolution, opts)
    best_phi, best_cost = scan.best_phi, scan.best_cost
    best_result = next(r for p, r in scan.samples if p == best_phi)
    # the reference angles (fully biased and Helstrom) are always candidates,
    # so a coarse grid can never return something worse than either of them
    for anchor in (problem.theta, helstrom_angle(problem)):
        if not 0.0 < anchor < math.pi / 2 - _UPPER_GUARD:
            continue
        try:
            result = fixed_angle_cost(problem, anchor, eps, opts)
        except (NonConvergenceError, ValueError):
            continue
        if result.expected_copies < best_cost:
            best_phi, best_cost, best_result = anchor, result.expected_copies, result
    cell = (hi - lo) / (resolution - 1)
    while cell > _ANGLE_RESOLUTION:
        lo = max(0.0, best_phi - cell)
        hi = min(math.pi / 2 - _UPPER_GUARD, best_phi + cell)
        try:
            scan = scan_angles(problem, eps, lo, hi, _REFINE_POINTS, opts,
                               abandon_above_best=True)
        except NonConvergenceError:
            break  # keep the incumbent; nothing in the bracket converged
        if scan.best_cost < best_cost:
            best_phi, best_cost = scan.best_phi, scan.best_cost
            best_result = next(r for p, r in scan.samples if p == scan.best_phi)
        cell = (hi - lo) / (_REFINE_POINTS - 1)
    # For symmetric priors the landscape is exactly mirror-symmetric about
    # pi/4 (relabeling the outcomes maps phi to pi/2 - phi), so the two mirror
    # minima are a mathematical tie that grid rounding breaks arbitrarily.
    # Apply the smaller-phi tie-break across the mirror explicitly.
    if problem.q1 == problem.q2 and best_phi > math.pi / 4:
        mirror = math.pi / 2 - best_phi
        try:
            mirror_result = fixed_angle_cost(problem, mirror, eps, opts)
        except (NonConvergenceError, ValueError):
            mirror_result = None
        if mirror_result is not None:
            slack = best_result.bound_width + mirror_result.bound_width + 1e-9
            if mirror_result.expected_copies <= best_cost + slack:
                return mirror, mirror_result
    return best_phi, best_result
