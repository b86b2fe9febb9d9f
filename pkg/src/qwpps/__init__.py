"""Discrete-time and multi-coin quantum walk simulator with
pre/post-selection (ABL) analysis, paradox detection, and counterfactual
trajectory enumeration."""

from .hilbert import (
    BasisLabel,
    Cycle,
    DisjointCycles,
    Line,
    PositionProjector,
    SparseState,
    StateSpace,
    apply_projector,
    basis_state,
    inner_product,
    normalize,
    schmidt_rank,
    state_from_terms,
)
from .dynamics import (
    CoinOperator,
    Dynamics,
    StepOperator,
    absorb_coins,
    apply_step,
    apply_step_adjoint,
    check_unitarity,
    evolve,
)
from .pps import (
    AblVerdict,
    PpsReport,
    Trajectory,
    TwoStateSystem,
    abl_probability,
    check_exclusive,
    collapse_oracle,
    detect_paradox,
    enumerate_trajectories,
    scan_certain,
)
from .scenarios import (
    ScenarioBundle,
    build_hadamard_3cycle,
    build_scenario,
    build_scenario1,
    build_scenario2,
    build_scenario3,
    build_scenario4,
    build_three_box,
    list_scenarios,
)
from .distributions import (
    SpatialDistribution,
    classical_rw_distribution,
    hadamard_walk_distribution,
    spatial_distribution,
    std_dev,
)

__version__ = "0.1.0"
