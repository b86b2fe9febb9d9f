"""Topologies, basis labels, and sparse complex walker states.

A walker state is a finite map from (position, coin bitstring) to a complex
amplitude. Positions live on a line segment, a single cycle, or a set of
disjoint cycles; the coin register is a fixed-length bitstring (length 0 is
allowed for coinless systems). Every operation here is a pure function
returning a new state, so values can be shared freely across threads.

Dense vectors are deliberately avoided: a walk with one coin per step has
dimension |X| * 2^T, while all systems of interest keep support on a few
dozen kets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

import numpy as np

# Tolerances, sized for double precision with at most ~1000 arithmetic
# operations per amplitude.
EPS_ZERO = 1e-12    # below this a norm counts as zero
EPS_PRUNE = 1e-14   # stored amplitudes below this magnitude are dropped
EPS_RANK = 1e-9     # singular values below this do not count toward the rank

#: A node is a plain integer (line, cycle) or a (component, index) pair
#: on disjoint cycles.
Position = Union[int, tuple]


@dataclass(frozen=True)
class Line:
    """Integer positions x_min..x_max.

    The range must be pre-sized so that every shift stays inside it (a
    walker taking T steps from support [a, b] fits in [a - T, b + T]).
    Optional ``labels`` give display names to the nodes, one per position
    in ascending order.
    """

    x_min: int
    x_max: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.x_max < self.x_min:
            raise ValueError(f"empty line range [{self.x_min}, {self.x_max}]")
        if self.labels is not None and len(self.labels) != self.x_max - self.x_min + 1:
            raise ValueError("labels must name every line position exactly once")

    def nodes(self) -> list[int]:
        return list(range(self.x_min, self.x_max + 1))

    def contains(self, position) -> bool:
        return isinstance(position, int) and self.x_min <= position <= self.x_max

    def shift(self, position: int, direction: int) -> int:
        moved = position + direction
        if moved < self.x_min or moved > self.x_max:
            raise ValueError(
                f"shift leaves the line range: {position} -> {moved} "
                f"outside [{self.x_min}, {self.x_max}]"
            )
        return moved

    def graph_distance(self, a: int, b: int) -> float:
        return abs(a - b)

    def format_position(self, position: int) -> str:
        if self.labels is not None:
            return self.labels[position - self.x_min]
        return str(position)

    def parse_position(self, text: str) -> int:
        if self.labels is not None and text in self.labels:
            return self.x_min + self.labels.index(text)
        position = int(text)
        if not self.contains(position):
            raise ValueError(f"position {text!r} outside line range [{self.x_min}, {self.x_max}]")
        return position


@dataclass(frozen=True)
class Cycle:
    """A single N-cycle with nodes 1..N and wrap-around shifts."""

    length: int

    def __post_init__(self):
        if self.length < 3:
            raise ValueError(f"cycle length must be >= 3, got {self.length}")

    def nodes(self) -> list[int]:
        return list(range(1, self.length + 1))

    def contains(self, position) -> bool:
        return isinstance(position, int) and 1 <= position <= self.length

    def shift(self, position: int, direction: int) -> int:
        return (position - 1 + direction) % self.length + 1

    def graph_distance(self, a: int, b: int) -> float:
        around = abs(a - b) % self.length
        return min(around, self.length - around)

    def format_position(self, position: int) -> str:
        return str(position)

    def parse_position(self, text: str) -> int:
        position = int(text)
        if not self.contains(position):
            raise ValueError(f"position {text!r} not on a {self.length}-cycle (nodes 1..{self.length})")
        return position


@dataclass(frozen=True)
class DisjointCycles:
    """Disconnected cycles; a node is (component id, index 1..length).

    Nodes are formatted "1_A"-style (index, then component). Distances
    across components are infinite: no shift dynamics connects them.
    """

    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        ids = [cid for cid, _ in self.components]
        if len(set(ids)) != len(ids):
            raise ValueError(f"component identifiers must be unique, got {ids}")
        for cid, length in self.components:
            if length < 3:
                raise ValueError(f"cycle {cid!r} length must be >= 3, got {length}")

    def _length_of(self, cid: str) -> int:
        for name, length in self.components:
            if name == cid:
                return length
        raise ValueError(f"unknown component {cid!r}")

    def nodes(self) -> list[tuple[str, int]]:
        return [(cid, i) for cid, length in self.components for i in range(1, length + 1)]

    def contains(self, position) -> bool:
        if not (isinstance(position, tuple) and len(position) == 2):
            return False
        cid, index = position
        for name, length in self.components:
            if name == cid:
                return 1 <= index <= length
        return False

    def shift(self, position, direction: int):
        cid, index = position
        length = self._length_of(cid)
        return (cid, (index - 1 + direction) % length + 1)

    def graph_distance(self, a, b) -> float:
        if a[0] != b[0]:
            return math.inf
        length = self._length_of(a[0])
        around = abs(a[1] - b[1]) % length
        return min(around, length - around)

    def format_position(self, position) -> str:
        cid, index = position
        return f"{index}_{cid}"

    def parse_position(self, text: str):
        index_text, _, cid = text.partition("_")
        position = (cid, int(index_text))
        if not self.contains(position):
            raise ValueError(f"position {text!r} not on any declared cycle")
        return position


Topology = Union[Line, Cycle, DisjointCycles]


@dataclass(frozen=True)
class StateSpace:
    """A topology plus the number of coins carried by the walker."""

    topology: Topology
    n_coins: int

    def __post_init__(self):
        if self.n_coins < 0:
            raise ValueError(f"coin count must be >= 0, got {self.n_coins}")


class BasisLabel(NamedTuple):
    """One computational basis ket: a node plus a coin bitstring."""

    position: Position
    coins: str


@dataclass(frozen=True)
class PositionProjector:
    """Pi_x = |x><x| tensored with the identity on the full coin register."""

    position: Position


@dataclass(frozen=True, eq=False)
class SparseState:
    """Finite map BasisLabel -> complex amplitude over a fixed space.

    Treated as immutable after construction: never mutate ``amplitudes``
    in place, operations return new states.
    """

    space: StateSpace
    amplitudes: dict

    def __post_init__(self):
        topology = self.space.topology
        for label in self.amplitudes:
            if len(label.coins) != self.space.n_coins or any(c not in "01" for c in label.coins):
                raise ValueError(
                    f"coin string {label.coins!r} invalid for a {self.space.n_coins}-coin space"
                )
            if not topology.contains(label.position):
                raise ValueError(f"position {label.position!r} is not a node of the topology")

    def norm(self) -> float:
        return math.sqrt(sum(a.real * a.real + a.imag * a.imag for a in self.amplitudes.values()))

    def items_sorted(self) -> list[tuple[BasisLabel, complex]]:
        """Entries in deterministic order: position-major, then bitstring."""
        return sorted(self.amplitudes.items(), key=lambda item: item[0])

    def __repr__(self):
        terms = ", ".join(
            f"{self.space.topology.format_position(lbl.position)}|{lbl.coins}>: {amp:.4g}"
            for lbl, amp in self.items_sorted()
        )
        return f"SparseState({terms})"


def basis_state(space: StateSpace, position: Position, coins: str = "") -> SparseState:
    """A single ket |position> tensor |coins> with amplitude 1."""
    return SparseState(space, {BasisLabel(position, coins): 1.0 + 0j})


def state_from_terms(space: StateSpace, terms: Iterable[tuple]) -> SparseState:
    """Build a state from (position, coins, amplitude) triples, merging duplicates."""
    amplitudes: dict[BasisLabel, complex] = {}
    for position, coins, amplitude in terms:
        label = BasisLabel(position, coins)
        amplitudes[label] = amplitudes.get(label, 0j) + complex(amplitude)
    return SparseState(space, {k: v for k, v in amplitudes.items() if abs(v) > EPS_PRUNE})


def zero_state(space: StateSpace) -> SparseState:
    return SparseState(space, {})


def inner_product(a: SparseState, b: SparseState) -> complex:
    """<a|b> = sum over the union of keys of conj(a[k]) * b[k].

    Conjugate-symmetric and linear in the second argument.
    """
    if a.space != b.space:
        raise ValueError("inner product between states on different spaces")
    if len(b.amplitudes) < len(a.amplitudes):
        return complex(sum(a.amplitudes[k].conjugate() * v
                           for k, v in b.amplitudes.items() if k in a.amplitudes))
    return complex(sum(v.conjugate() * b.amplitudes[k]
                       for k, v in a.amplitudes.items() if k in b.amplitudes))


def normalize(s: SparseState) -> SparseState:
    """Scale to unit norm, dropping amplitudes below EPS_PRUNE.

    Raises ValueError on a (numerically) null state.
    """
    n = s.norm()
    if n <= EPS_ZERO:
        raise ValueError("cannot normalize null state")
    inv = 1.0 / n
    return SparseState(
        s.space,
        {k: v * inv for k, v in s.amplitudes.items() if abs(v) * inv > EPS_PRUNE},
    )


def apply_projector(p: PositionProjector, s: SparseState) -> SparseState:
    """Keep exactly the entries at the projector's position; no renormalization.

    Pure key filtering, so applying twice equals applying once bit-for-bit.
    """
    if not s.space.topology.contains(p.position):
        raise ValueError(f"projector position {p.position!r} is not a node of the topology")
    return SparseState(
        s.space,
        {k: v for k, v in s.amplitudes.items() if k.position == p.position},
    )


def schmidt_rank(s: SparseState) -> int:
    """Rank of the position-versus-coin-register coefficient matrix.

    Counts singular values above EPS_RANK. Columns are restricted to coin
    strings occurring in the support; absent strings contribute zero
    columns and cannot change the rank.
    """
    if abs(s.norm() - 1.0) > 1e-6:
        raise ValueError("schmidt_rank expects a normalized state")
    positions = sorted({label.position for label in s.amplitudes})
    coin_strings = sorted({label.coins for label in s.amplitudes})
    matrix = np.zeros((len(positions), len(coin_strings)), dtype=complex)
    pos_index = {p: i for i, p in enumerate(positions)}
    coin_index = {c: j for j, c in enumerate(coin_strings)}
    for label, amp in s.amplitudes.items():
        matrix[pos_index[label.position], coin_index[label.coins]] = amp
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(singular_values > EPS_RANK))


def support_positions(s: SparseState) -> list[Position]:
    return sorted({label.position for label in s.amplitudes})


def support_coin_strings(s: SparseState) -> list[str]:
    return sorted({label.coins for label in s.amplitudes})


def max_amplitude_difference(a: SparseState, b: SparseState) -> float:
    """Largest per-amplitude |a[k] - b[k]| over the union of supports."""
    if a.space != b.space:
        raise ValueError("comparing states on different spaces")
    keys = set(a.amplitudes) | set(b.amplitudes)
    return max((abs(a.amplitudes.get(k, 0j) - b.amplitudes.get(k, 0j)) for k in keys), default=0.0)


def random_sparse_state(space: StateSpace, rng: np.random.Generator, max_support: int = 4) -> SparseState:
    """A normalized random state with small support; used by property checks."""
    nodes = space.topology.nodes()
    amplitudes: dict[BasisLabel, complex] = {}
    k = int(rng.integers(1, max_support + 1))
    while len(amplitudes) < k:
        position = nodes[int(rng.integers(len(nodes)))]
        coins = "".join("01"[int(b)] for b in rng.integers(0, 2, size=space.n_coins))
        amplitudes[BasisLabel(position, coins)] = complex(rng.normal(), rng.normal())
    return normalize(SparseState(space, amplitudes))
