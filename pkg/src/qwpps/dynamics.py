"""One-step walk operators, their adjoints, and multi-step evolution.

The shift convention is fixed throughout: coin bit 0 moves the walker by
+1, coin bit 1 by -1 (x -> x + (-1)^c). Path-encoding bitstrings are read
under this convention.

Shift-only steps are implemented as key rewriting on the sparse map, with
no floating-point arithmetic, so permutation dynamics accumulates exactly
zero rounding error over any number of steps. Coined steps apply the 2x2
coin matrix to one slot of the bitstring and then shift on that slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import (
    EPS_PRUNE,
    BasisLabel,
    SparseState,
    StateSpace,
    max_amplitude_difference,
    random_sparse_state,
)

MODE_DTQW = "dtqw"
MODE_MCQW = "mcqw-step"
MODE_SHIFT = "shift-only"
MODE_IDENTITY = "identity"


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """A 2x2 complex coin matrix.

    Arbitrary matrices are accepted; unitarity is the caller's concern
    (see check_unitarity). Named constructors cover the common coins.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"coin matrix must be 2x2, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def hadamard(cls) -> "CoinOperator":
        return cls(np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0))

    @classmethod
    def identity(cls) -> "CoinOperator":
        return cls(np.eye(2, dtype=complex))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        gram = self.matrix @ self.matrix.conj().T
        return bool(np.max(np.abs(gram - np.eye(2))) <= tol)

    def __eq__(self, other):
        return isinstance(other, CoinOperator) and np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        return f"CoinOperator({self.matrix.tolist()})"


@dataclass(frozen=True)
class StepOperator:
    """One step of the walk over a declared space.

    Modes:
      dtqw        toss ``coin`` on the single coin slot, then shift on it
      mcqw-step   toss ``coin`` on slot ``coin_index``, then shift on it
      shift-only  shift on slot ``coin_index``; no toss (exact permutation)
      identity    leave the state unchanged (a "do nothing" time slot)
    """

    space: StateSpace
    mode: str
    coin: CoinOperator | None = None
    coin_index: int = 0

    def __post_init__(self):
        if self.mode not in (MODE_DTQW, MODE_MCQW, MODE_SHIFT, MODE_IDENTITY):
            raise ValueError(f"unknown step mode {self.mode!r}")
        if self.mode == MODE_DTQW:
            if self.space.n_coins != 1:
                raise ValueError("dtqw steps require exactly one coin")
            if self.coin is None:
                raise ValueError("dtqw steps require a coin operator")
        if self.mode == MODE_MCQW and self.coin is None:
            raise ValueError("mcqw steps require a coin operator")
        if self.mode in (MODE_MCQW, MODE_SHIFT):
            if not 0 <= self.coin_index < self.space.n_coins:
                raise ValueError(
                    f"coin index {self.coin_index} out of range for "
                    f"{self.space.n_coins} coin(s)"
                )

    @classmethod
    def dtqw(cls, space: StateSpace, coin: CoinOperator) -> "StepOperator":
        return cls(space, MODE_DTQW, coin=coin, coin_index=0)

    @classmethod
    def mcqw_step(cls, space: StateSpace, coin: CoinOperator, coin_index: int) -> "StepOperator":
        return cls(space, MODE_MCQW, coin=coin, coin_index=coin_index)

    @classmethod
    def shift_only(cls, space: StateSpace, coin_index: int) -> "StepOperator":
        return cls(space, MODE_SHIFT, coin_index=coin_index)

    @classmethod
    def identity(cls, space: StateSpace) -> "StepOperator":
        return cls(space, MODE_IDENTITY)

    @property
    def is_permutation(self) -> bool:
        """True when the step permutes basis kets (no amplitude mixing)."""
        return self.mode in (MODE_SHIFT, MODE_IDENTITY)

    @property
    def displacement_bound(self) -> int:
        """Largest |position change| a single application can produce."""
        return 0 if self.mode == MODE_IDENTITY else 1


def _set_bit(coins: str, slot: int, bit: int) -> str:
    return coins[:slot] + ("1" if bit else "0") + coins[slot + 1:]


def _shift_keys(s: SparseState, slot: int, invert: bool) -> SparseState:
    topology = s.space.topology
    out = {}
    for label, amp in s.amplitudes.items():
        direction = -1 if label.coins[slot] == "1" else 1
        if invert:
            direction = -direction
        out[BasisLabel(topology.shift(label.position, direction), label.coins)] = amp
    return SparseState(s.space, out)


def _py_entries(matrix: np.ndarray) -> list[list[complex]]:
    # Plain Python complex keeps downstream amplitudes JSON-friendly.
    return [[complex(matrix[i, j]) for j in (0, 1)] for i in (0, 1)]


def _coin_then_shift(s: SparseState, matrix: np.ndarray, slot: int) -> SparseState:
    topology = s.space.topology
    entries = _py_entries(matrix)
    out: dict[BasisLabel, complex] = {}
    for label, amp in s.amplitudes.items():
        column = 1 if label.coins[slot] == "1" else 0
        for new_bit in (0, 1):
            coefficient = entries[new_bit][column]
            if coefficient == 0:
                continue
            moved = topology.shift(label.position, -1 if new_bit else 1)
            key = BasisLabel(moved, _set_bit(label.coins, slot, new_bit))
            out[key] = out.get(key, 0j) + coefficient * amp
    return SparseState(s.space, {k: v for k, v in out.items() if abs(v) > EPS_PRUNE})


def _unshift_then_coin_adjoint(s: SparseState, matrix: np.ndarray, slot: int) -> SparseState:
    # (S (I x C))^dagger = (I x C^dagger) S^dagger: undo the shift first,
    # then apply the adjoint coin; C^dagger[b', b] = conj(C[b, b']).
    topology = s.space.topology
    entries = _py_entries(matrix)
    out: dict[BasisLabel, complex] = {}
    for label, amp in s.amplitudes.items():
        old_bit = 1 if label.coins[slot] == "1" else 0
        unmoved = topology.shift(label.position, 1 if old_bit else -1)
        for new_bit in (0, 1):
            coefficient = entries[old_bit][new_bit].conjugate()
            if coefficient == 0:
                continue
            key = BasisLabel(unmoved, _set_bit(label.coins, slot, new_bit))
            out[key] = out.get(key, 0j) + coefficient * amp
    return SparseState(s.space, {k: v for k, v in out.items() if abs(v) > EPS_PRUNE})


def apply_step(op: StepOperator, s: SparseState) -> SparseState:
    """Apply one step: |x, c> -> coin toss (if any) then shift by (-1)^c."""
    if s.space != op.space:
        raise ValueError("state space does not match the step operator's space")
    if op.mode == MODE_IDENTITY:
        return s
    if op.mode == MODE_SHIFT:
        return _shift_keys(s, op.coin_index, invert=False)
    return _coin_then_shift(s, op.coin.matrix, op.coin_index)


def apply_step_adjoint(op: StepOperator, s: SparseState) -> SparseState:
    """Exact inverse of apply_step for unitary coins."""
    if s.space != op.space:
        raise ValueError("state space does not match the step operator's space")
    if op.mode == MODE_IDENTITY:
        return s
    if op.mode == MODE_SHIFT:
        return _shift_keys(s, op.coin_index, invert=True)
    return _unshift_then_coin_adjoint(s, op.coin.matrix, op.coin_index)


@dataclass(frozen=True)
class Dynamics:
    """An ordered list of step operators, one per time step."""

    steps: tuple[StepOperator, ...]

    @classmethod
    def homogeneous(cls, op: StepOperator, n_steps: int) -> "Dynamics":
        return cls(tuple([op] * n_steps))

    def __len__(self):
        return len(self.steps)

    def is_permutation(self, from_t: int = 0, to_t: int | None = None) -> bool:
        window = self.steps[from_t: len(self.steps) if to_t is None else to_t]
        return all(step.is_permutation for step in window)


def evolve(d: Dynamics, s: SparseState, from_t: int, to_t: int) -> SparseState:
    """Compose the per-step operators between two times.

    Forward for to_t >= from_t; adjoints in reverse order otherwise.
    """
    n = len(d.steps)
    if not (0 <= from_t <= n and 0 <= to_t <= n):
        raise ValueError(f"time out of range: [{from_t}, {to_t}] not within [0, {n}]")
    if to_t >= from_t:
        for i in range(from_t, to_t):
            s = apply_step(d.steps[i], s)
    else:
        for i in range(from_t - 1, to_t - 1, -1):
            s = apply_step_adjoint(d.steps[i], s)
    return s


def apply_coin_to_slot(coin: CoinOperator, slot: int, s: SparseState) -> SparseState:
    """Toss ``coin`` on one slot without shifting."""
    if not 0 <= slot < s.space.n_coins:
        raise ValueError(f"coin index {slot} out of range for {s.space.n_coins} coin(s)")
    entries = _py_entries(coin.matrix)
    out: dict[BasisLabel, complex] = {}
    for label, amp in s.amplitudes.items():
        column = 1 if label.coins[slot] == "1" else 0
        for new_bit in (0, 1):
            coefficient = entries[new_bit][column]
            if coefficient == 0:
                continue
            key = BasisLabel(label.position, _set_bit(label.coins, slot, new_bit))
            out[key] = out.get(key, 0j) + coefficient * amp
    return SparseState(s.space, {k: v for k, v in out.items() if abs(v) > EPS_PRUNE})


def absorb_coins(coins: list[CoinOperator], s: SparseState) -> SparseState:
    """Apply coin i to slot i for every slot, as a preparation step.

    Afterwards the walk can be run with shift-only steps and reproduces
    the full per-step coin-toss evolution (conditional shifts commute with
    tosses on other slots).
    """
    if len(coins) != s.space.n_coins:
        raise ValueError(f"expected {s.space.n_coins} coins, got {len(coins)}")
    for slot, coin in enumerate(coins):
        s = apply_coin_to_slot(coin, slot, s)
    return s


def check_unitarity(op: StepOperator, trials: int, seed: int = 20240801, tol: float = 1e-10) -> bool:
    """True iff random states keep their norm and the adjoint inverts the step."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        s = random_sparse_state(op.space, rng)
        stepped = apply_step(op, s)
        if abs(stepped.norm() - s.norm()) > tol:
            return False
        restored = apply_step_adjoint(op, stepped)
        if max_amplitude_difference(restored, s) > tol:
            return False
    return True
