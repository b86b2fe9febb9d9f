"""Spatial probability distributions for quantum and classical walks.

Covers the marginal position distribution of a sparse walker state, the
exact binomial distribution of the classical +-1 random walk (big-integer
coefficients, converted to floats at the end, so no sampling noise), and
spread statistics. The Hadamard line walk spreads ballistically (standard
deviation linear in the step count) while the classical walk is diffusive
(square root of the step count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .hilbert import Line, SparseState, StateSpace, state_from_terms
from .dynamics import CoinOperator, Dynamics, StepOperator, evolve


@dataclass(frozen=True)
class SpatialDistribution:
    """Map position -> probability; probabilities sum to 1 within 1e-10."""

    probabilities: dict
    steps: int | None = None

    def __post_init__(self):
        if any(p < 0 for p in self.probabilities.values()):
            raise ValueError("negative probability in spatial distribution")
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"distribution mass {total!r} is not 1 within 1e-10")

    def total_mass(self) -> float:
        return sum(self.probabilities.values())

    def items_sorted(self):
        return sorted(self.probabilities.items())


def spatial_distribution(s: SparseState) -> SpatialDistribution:
    """Marginal over all coin bits of a normalized state."""
    n = s.norm()
    if abs(n - 1.0) > 1e-6:
        raise ValueError(f"state norm {n!r} is not 1; normalize before taking marginals")
    probabilities: dict = {}
    for label, amp in s.amplitudes.items():
        weight = amp.real * amp.real + amp.imag * amp.imag
        probabilities[label.position] = probabilities.get(label.position, 0.0) + weight
    return SpatialDistribution(probabilities)


def classical_rw_distribution(T: int) -> SpatialDistribution:
    """Fair +-1 random walk after T steps: p(x) = C(T, (T+x)/2) / 2^T."""
    if T < 0:
        raise ValueError(f"step count must be >= 0, got {T}")
    denominator = 2 ** T
    probabilities = {
        2 * k - T: float(Fraction(math.comb(T, k), denominator))
        for k in range(T + 1)
    }
    return SpatialDistribution(probabilities, steps=T)


def mean(d: SpatialDistribution) -> float:
    return sum(x * p for x, p in d.items_sorted())


def std_dev(d: SpatialDistribution) -> float:
    mu = mean(d)
    second = sum(x * x * p for x, p in d.items_sorted())
    return math.sqrt(max(0.0, second - mu * mu))


COIN_INITS = {
    "zero": (1.0, 0.0),
    "one": (0.0, 1.0),
    "plus": (1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)),
    "plus-i": (1.0 / math.sqrt(2.0), 1j / math.sqrt(2.0)),
}


def hadamard_line_walk(T: int, coin_init: str = "plus-i") -> SparseState:
    """Run the Hadamard walk from x=0 for T steps; returns the final state."""
    if T < 0:
        raise ValueError(f"step count must be >= 0, got {T}")
    if coin_init not in COIN_INITS:
        raise ValueError(f"unknown coin init {coin_init!r}; choices: {sorted(COIN_INITS)}")
    space = StateSpace(Line(-max(T, 1), max(T, 1)), 1)
    a0, a1 = COIN_INITS[coin_init]
    start = state_from_terms(space, [(0, "0", a0), (0, "1", a1)])
    step = StepOperator.dtqw(space, CoinOperator.hadamard())
    return evolve(Dynamics.homogeneous(step, T), start, 0, T)


def hadamard_walk_distribution(T: int, coin_init: str = "plus-i") -> SpatialDistribution:
    d = spatial_distribution(hadamard_line_walk(T, coin_init))
    return SpatialDistribution(d.probabilities, steps=T)


def comparison_rows(T: int = 100, coin_init: str = "plus-i") -> list[tuple[int, float, float]]:
    """(x, p_quantum, p_classical) on the common support [-T, T].

    Both walks start at x=0, so only sites with x = T (mod 2) carry mass;
    the rows are restricted to that parity.
    """
    quantum = hadamard_walk_distribution(T, coin_init).probabilities
    classical = classical_rw_distribution(T).probabilities
    return [
        (x, quantum.get(x, 0.0), classical.get(x, 0.0))
        for x in range(-T, T + 1)
        if (x - T) % 2 == 0
    ]
