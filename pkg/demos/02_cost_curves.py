"""Compare all four strategies as the error bound tightens.

For each epsilon on a log grid this prints the expected number of copies for
the fully biased measurement (closed form), the unbiased symmetric walk
(linear solve), the adaptive locally optimal scheme (deterministic length),
and the globally optimized fixed angle (grid search + dynamic program).

The adaptive scheme wins for loose bounds but scales worse than every fixed
strategy as eps -> 0.
"""

import math

from seqdisc import DiscriminationProblem, fbm_cost, lol_cost, optimize_angle, ubm_cost

problem = DiscriminationProblem(theta=math.pi / 12)

print(f"theta = pi/12, q1 = q2 = 1/2")
print(f"{'eps':>8} {'-ln eps':>8} {'biased':>8} {'unbiased':>9} "
      f"{'adaptive':>9} {'optimized':>10} {'phi_opt':>8}")
for k in range(8):
    eps = 0.30 * (0.01 / 0.30) ** (k / 7)
    fbm = fbm_cost(problem, eps).expected_copies
    ubm = ubm_cost(problem, eps).expected_copies
    lol = lol_cost(problem, eps)
    phi_opt, gof = optimize_angle(problem, eps, resolution=600)
    print(f"{eps:8.4f} {-math.log(eps):8.3f} {fbm:8.4f} {ubm:9.4f} "
          f"{lol:9d} {gof.expected_copies:10.4f} {phi_opt:8.4f}")
