"""Two-state-vector engine.

A TwoStateSystem pairs a state prepared at t=0 with a state selected at
t=T under declared dynamics. For any intermediate time it yields the
forward-evolved preparation and the backward-evolved selection, evaluates
the ABL conditional probability of finding the walker at a position,
scans for positions that are certain or impossible, checks exclusivity of
events across times in the Heisenberg picture, detects logical paradoxes
(two exclusive events both assigned probability one), and enumerates the
counterfactual trajectories built from certain positions.

collapse_oracle computes the same conditional probability by explicit
sequential simulation (projective collapse, renormalization, then the
selection overlap). It shares no arithmetic with abl_probability and
serves as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import islice, product

from .hilbert import (
    EPS_ZERO,
    BasisLabel,
    Line,
    PositionProjector,
    Position,
    SparseState,
    apply_projector,
    inner_product,
)
from .dynamics import Dynamics, apply_step, apply_step_adjoint, evolve

EPS_CLASS = 1e-9  # separation between genuine 0/1 and numerical near-misses

CERTAIN = "certain"
IMPOSSIBLE = "impossible"
INDETERMINATE = "indeterminate"

#: Exclusivity scopes. Permutation dynamics never mixes coin strings, so
#: restricting the operator check to the coin strings supporting the
#: two-state pair is exact ("operator"). For coin-mixing dynamics the same
#: restricted check is reported as support-level evidence only.
SCOPE_OPERATOR = "operator"
SCOPE_SUPPORT = "support"


class TwoStateSystem:
    """Preparation at t=0, selection at t=T, dynamics, and horizon T.

    The pair must be non-orthogonal (checked once, at t=0; unitarity makes
    the overlap time-invariant). All T+1 forward and backward states are
    memoized; caches are write-once per time index.
    """

    def __init__(self, pre: SparseState, post: SparseState, dynamics: Dynamics, horizon: int):
        if pre.space != post.space:
            raise ValueError("pre and post states live on different spaces")
        if horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {horizon}")
        if len(dynamics.steps) < horizon:
            raise ValueError(
                f"dynamics supplies {len(dynamics.steps)} step(s) but the horizon is {horizon}"
            )
        self.pre = pre
        self.post = post
        self.dynamics = dynamics
        self.horizon = horizon
        self._pre_cache: dict[int, SparseState] = {0: pre}
        self._post_cache: dict[int, SparseState] = {horizon: post}
        self._scan_cache: dict[int, tuple[tuple, tuple]] = {}
        overlap = abs(inner_product(self.post_at(0), pre))
        if overlap <= EPS_ZERO:
            raise ValueError(
                f"orthogonal pre/post pair: |<post(0)|pre(0)>| = {overlap:.3e}"
            )

    @property
    def space(self):
        return self.pre.space

    def _check_time(self, t: int):
        if not 0 <= t <= self.horizon:
            raise ValueError(f"time {t} out of range [0, {self.horizon}]")

    def pre_at(self, t: int) -> SparseState:
        """Forward evolution of the preparation by t steps (memoized)."""
        self._check_time(t)
        if t not in self._pre_cache:
            start = max(i for i in self._pre_cache if i <= t)
            state = self._pre_cache[start]
            for i in range(start, t):
                state = apply_step(self.dynamics.steps[i], state)
                self._pre_cache[i + 1] = state
        return self._pre_cache[t]

    def post_at(self, t: int) -> SparseState:
        """Backward (adjoint) evolution of the selection by T - t steps (memoized)."""
        self._check_time(t)
        if t not in self._post_cache:
            start = min(i for i in self._post_cache if i >= t)
            state = self._post_cache[start]
            for i in range(start - 1, t - 1, -1):
                state = apply_step_adjoint(self.dynamics.steps[i], state)
                self._post_cache[i] = state
        return self._post_cache[t]


@dataclass(frozen=True)
class AblVerdict:
    """An ABL conditional probability with its 0/1 classification."""

    probability: float
    classification: str


@dataclass(frozen=True)
class Witness:
    """Two certain events backing a paradox claim.

    ``scope`` records the strength of the exclusivity evidence; ``velocity``
    is the implied |dx|/dt for cross-time pairs on a line.
    """

    t1: int
    x1: Position
    t2: int
    x2: Position
    same_time: bool
    scope: str
    velocity: float | None = None


@dataclass(frozen=True)
class Trajectory:
    """One position per time step, each certain at its time."""

    positions: tuple


@dataclass(frozen=True)
class TrajectoryEnumeration:
    count: int
    sample: list[Trajectory]
    any_leap: bool
    all_leap: bool


@dataclass
class PpsReport:
    horizon: int
    certain_positions: list[tuple]
    impossible_positions: list[tuple]
    paradox_found: bool
    paradox_witnesses: list[Witness]
    postselection_probability: float
    trajectory_count: int
    exclusivity_scope: str = SCOPE_OPERATOR


def _classify(probability: float) -> str:
    if probability > 1.0 - EPS_CLASS:
        return CERTAIN
    if probability < EPS_CLASS:
        return IMPOSSIBLE
    return INDETERMINATE


def abl_probability(sys: TwoStateSystem, t: int, p: PositionProjector) -> AblVerdict:
    """Conditional probability of finding the walker at p's position at time t.

    |<post(t)|Pi|pre(t)>|^2 over the sum of that term and its complement,
    clamped to [0, 1].
    """
    pre_t = sys.pre_at(t)
    post_t = sys.post_at(t)
    hit = abs(inner_product(post_t, apply_projector(p, pre_t))) ** 2
    rest = SparseState(
        pre_t.space,
        {k: v for k, v in pre_t.amplitudes.items() if k.position != p.position},
    )
    miss = abs(inner_product(post_t, rest)) ** 2
    denominator = hit + miss
    if denominator < EPS_ZERO * EPS_ZERO:
        raise ValueError(f"orthogonal two-state vector at t={t}")
    probability = min(1.0, max(0.0, hit / denominator))
    return AblVerdict(probability, _classify(probability))


def collapse_oracle(sys: TwoStateSystem, t: int, p: PositionProjector) -> float:
    """The same conditional probability via explicit collapse simulation.

    Branch "found": project the forward state onto the position, record the
    branch weight, renormalize, and take the selection overlap. Branch "not
    found": the same with the complement. Independent code path from
    abl_probability, kept free of the shared inner-product helpers.
    """
    pre_amp = sys.pre_at(t).amplitudes
    post_amp = sys.post_at(t).amplitudes
    x = p.position

    def branch(keep_found: bool) -> float:
        weight = 0.0
        for label, amp in pre_amp.items():
            if (label.position == x) == keep_found:
                weight += amp.real * amp.real + amp.imag * amp.imag
        if weight <= 0.0:
            return 0.0
        scale = 1.0 / math.sqrt(weight)
        overlap = 0j
        for label, amp in pre_amp.items():
            if (label.position == x) == keep_found and label in post_amp:
                overlap += post_amp[label].conjugate() * (amp * scale)
        return weight * (overlap.real * overlap.real + overlap.imag * overlap.imag)

    found = branch(True)
    not_found = branch(False)
    total = found + not_found
    if total < EPS_ZERO * EPS_ZERO:
        raise ValueError(f"orthogonal two-state vector at t={t}")
    return found / total


def scan_certain(sys: TwoStateSystem, t: int) -> tuple[tuple, tuple]:
    """(certain, impossible) positions at time t, in topology order."""
    if t not in sys._scan_cache:
        certain = []
        impossible = []
        for position in sys.space.topology.nodes():
            verdict = abl_probability(sys, t, PositionProjector(position))
            if verdict.classification == CERTAIN:
                certain.append(position)
            elif verdict.classification == IMPOSSIBLE:
                impossible.append(position)
        sys._scan_cache[t] = (tuple(certain), tuple(impossible))
    return sys._scan_cache[t]


def _window_displacement_bound(sys: TwoStateSystem, t1: int, t2: int) -> int:
    return sum(sys.dynamics.steps[i].displacement_bound for i in range(t1, t2))


def check_exclusive(sys: TwoStateSystem, t1: int, x1: Position, t2: int, x2: Position) -> bool:
    """True iff finding the walker at x1 at t1 and at x2 at t2 are exclusive.

    In the Heisenberg picture this is Pi_{x2} U_{t1->t2} Pi_{x1} = 0. The
    light-cone criterion (graph distance beyond the reachable displacement)
    is sufficient on its own. Otherwise the operator chain is applied to
    every ket |x1, c> with c ranging over the coin strings supporting
    pre(t1) and post(t1); for permutation dynamics that restriction is
    exact, for coin-mixing dynamics it is support-level evidence.
    """
    if t1 > t2:
        raise ValueError(f"check_exclusive requires t1 <= t2, got {t1} > {t2}")
    if t1 == t2:
        return x1 != x2
    distance = sys.space.topology.graph_distance(x1, x2)
    if distance > _window_displacement_bound(sys, t1, t2):
        return True
    coin_strings = sorted(
        {label.coins for label in sys.pre_at(t1).amplitudes}
        | {label.coins for label in sys.post_at(t1).amplitudes}
    )
    for coins in coin_strings:
        ket = SparseState(sys.space, {BasisLabel(x1, coins): 1.0 + 0j})
        landed = evolve(sys.dynamics, ket, t1, t2)
        if any(label.position == x2 and abs(amp) > EPS_ZERO
               for label, amp in landed.amplitudes.items()):
            return False
    return True


def exclusivity_scope(sys: TwoStateSystem) -> str:
    return SCOPE_OPERATOR if sys.dynamics.is_permutation(0, sys.horizon) else SCOPE_SUPPORT


def _implied_velocity(sys: TwoStateSystem, t1: int, x1, t2: int, x2) -> float | None:
    if t2 > t1 and isinstance(sys.space.topology, Line):
        return abs(x2 - x1) / (t2 - t1)
    return None


def detect_paradox(sys: TwoStateSystem) -> PpsReport:
    """Scan every time step and collect logical-paradox evidence.

    A paradox is flagged when some time has two or more certain positions
    (same-time position projectors are exclusive by orthogonality), or when
    a pair of certain events at different times passes check_exclusive.
    """
    scope = exclusivity_scope(sys)
    certain_by_t = []
    impossible_by_t = []
    for t in range(sys.horizon + 1):
        certain, impossible = scan_certain(sys, t)
        certain_by_t.append(certain)
        impossible_by_t.append(impossible)

    witnesses: list[Witness] = []
    for t, certain in enumerate(certain_by_t):
        for i in range(len(certain)):
            for j in range(i + 1, len(certain)):
                witnesses.append(Witness(t, certain[i], t, certain[j], True, scope))
    events = [(t, x) for t, certain in enumerate(certain_by_t) for x in certain]
    for a in range(len(events)):
        t1, x1 = events[a]
        for b in range(a + 1, len(events)):
            t2, x2 = events[b]
            if t2 == t1:
                continue
            if check_exclusive(sys, t1, x1, t2, x2):
                witnesses.append(
                    Witness(t1, x1, t2, x2, False, scope,
                            velocity=_implied_velocity(sys, t1, x1, t2, x2))
                )

    count = math.prod(len(c) for c in certain_by_t)
    postselection = abs(inner_product(sys.post_at(0), sys.pre_at(0))) ** 2
    return PpsReport(
        horizon=sys.horizon,
        certain_positions=certain_by_t,
        impossible_positions=impossible_by_t,
        paradox_found=bool(witnesses),
        paradox_witnesses=witnesses,
        postselection_probability=postselection,
        trajectory_count=count,
        exclusivity_scope=scope,
    )


def trajectory_has_leap(sys: TwoStateSystem, trajectory: Trajectory) -> bool:
    """True when some step of the trajectory outruns the dynamics.

    A leap is a consecutive pair of positions whose graph distance exceeds
    what one application of that time step's operator can move (1 for
    shifts, 0 for identity slots).
    """
    topology = sys.space.topology
    for t in range(len(trajectory.positions) - 1):
        bound = sys.dynamics.steps[t].displacement_bound
        if topology.graph_distance(trajectory.positions[t], trajectory.positions[t + 1]) > bound:
            return True
    return False


def enumerate_trajectories(sys: TwoStateSystem, cap: int) -> TrajectoryEnumeration:
    """Count and sample position sequences that are certain at every time.

    The count is exact (arbitrary-precision product of the certain-set
    sizes). The sample lists the first ``cap`` trajectories in lexicographic
    order of per-step choices, each set ordered by topology. ``any_leap``
    and ``all_leap`` report whether some, respectively every, trajectory
    contains a super-unit-speed leap; computed exactly by counting
    leap-free trajectories with dynamic programming.
    """
    if cap < 0:
        raise ValueError(f"cap must be >= 0, got {cap}")
    certain_sets = [scan_certain(sys, t)[0] for t in range(sys.horizon + 1)]
    count = math.prod(len(c) for c in certain_sets)
    if count == 0:
        return TrajectoryEnumeration(0, [], False, False)
    sample = [Trajectory(tuple(choice)) for choice in islice(product(*certain_sets), cap)]

    topology = sys.space.topology
    reachable = {x: 1 for x in certain_sets[0]}
    for t in range(len(certain_sets) - 1):
        bound = sys.dynamics.steps[t].displacement_bound
        following = {}
        for y in certain_sets[t + 1]:
            total = sum(n for x, n in reachable.items()
                        if topology.graph_distance(x, y) <= bound)
            if total:
                following[y] = total
        reachable = following
    leap_free = sum(reachable.values())
    return TrajectoryEnumeration(
        count=count,
        sample=sample,
        any_leap=count > leap_free,
        all_leap=leap_free == 0,
    )
