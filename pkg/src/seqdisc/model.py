"""Discrimination instances, projective measurement likelihoods, Helstrom quantities.

The two hypotheses are pure qubit states separated by an opening angle of
2*theta in Hilbert space, with the bisector along the computational |x> axis.
A projective measurement is parametrized by a single angle phi in [0, pi/2);
outcome d=1 projects onto the vector at angle phi, outcome d=2 onto its
orthogonal complement.  All angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "DiscriminationProblem",
    "MeasurementConfig",
    "outcome_probability",
    "helstrom_angle",
    "helstrom_error",
    "collective_error",
]


@dataclass(frozen=True)
class DiscriminationProblem:
    """A two-state discrimination instance: state angle theta and priors (q1, q2).

    q2 is always derived as 1 - q1; the constructor is the only place the
    pair is formed, so q1 + q2 == 1 holds exactly as stored.
    """

    theta: float
    q1: float = 0.5
    q2: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi / 4:
            raise ValueError(f"theta must lie in (0, pi/4), got {self.theta}")
        if not 0.0 < self.q1 < 1.0:
            raise ValueError(f"q1 must lie in (0, 1), got {self.q1}")
        object.__setattr__(self, "q2", 1.0 - self.q1)

    @property
    def overlap(self) -> float:
        """State overlap cos(2*theta), in (0, 1)."""
        return math.cos(2.0 * self.theta)


def _check_phi(phi: float) -> None:
    if not 0.0 <= phi < math.pi / 2:
        raise ValueError(f"measurement angle must lie in [0, pi/2), got {phi}")


@dataclass(frozen=True)
class MeasurementConfig:
    """A fixed measurement angle with its four outcome likelihoods precomputed.

    The likelihoods are evaluated once at construction because every engine
    consumes them millions of times.
    """

    phi: float
    p1_given_psi1: float
    p2_given_psi1: float
    p1_given_psi2: float
    p2_given_psi2: float

    @classmethod
    def for_problem(cls, problem: DiscriminationProblem, phi: float) -> "MeasurementConfig":
        _check_phi(phi)
        t = problem.theta
        return cls(
            phi=phi,
            p1_given_psi1=math.cos(phi - t) ** 2,
            p2_given_psi1=math.sin(phi - t) ** 2,
            p1_given_psi2=math.cos(phi + t) ** 2,
            p2_given_psi2=math.sin(phi + t) ** 2,
        )

    def likelihood(self, d: int, j: int) -> float:
        """P(outcome d | state j) for d, j in {1, 2}."""
        if d not in (1, 2) or j not in (1, 2):
            raise ValueError(f"outcome and hypothesis indices must be 1 or 2, got d={d}, j={j}")
        return getattr(self, f"p{d}_given_psi{j}")


def outcome_probability(problem: DiscriminationProblem, phi: float, d: int, j: int) -> float:
    """Probability of outcome d in {1,2} when measuring state j in {1,2} at angle phi."""
    return MeasurementConfig.for_problem(problem, phi).likelihood(d, j)


def helstrom_angle(problem: DiscriminationProblem) -> float:
    """Measurement angle minimizing the single-copy average error.

    For equal priors this is exactly pi/4 (explicit branch; the formula has a
    division by q1 - q2).  For q1 < q2 the arctangent branch is shifted by
    pi/2 so the angle stays in (0, pi/2).
    """
    q1, q2 = problem.q1, problem.q2
    if q1 == q2:
        return math.pi / 4
    phi = 0.5 * math.atan(math.tan(2.0 * problem.theta) / (q1 - q2))
    if q1 < q2:
        phi += math.pi / 2
    return phi


def helstrom_error(problem: DiscriminationProblem) -> float:
    """Minimum single-copy average error probability."""
    return collective_error(problem, 1)


def collective_error(problem: DiscriminationProblem, n: int) -> float:
    """Minimum average error achievable with n copies (joint-measurement bound).

    Strictly decreasing in n; n=1 reproduces the Helstrom error.
    """
    if n < 1:
        raise ValueError(f"copy count must be >= 1, got {n}")
    q1, q2 = problem.q1, problem.q2
    c = problem.overlap
    return 0.5 - 0.5 * math.sqrt(1.0 - 4.0 * q1 * q2 * c ** (2 * n))
