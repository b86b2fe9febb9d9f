import numpy as np

from qwpps.hilbert import Cycle, StateSpace, random_sparse_state
from qwpps.dynamics import CoinOperator, Dynamics, StepOperator
from qwpps.pps import TwoStateSystem


def haar_coin(rng: np.random.Generator) -> CoinOperator:
    """Haar-random 2x2 unitary via QR with phase fixing."""
    z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return CoinOperator(q @ np.diag(phases))


def random_small_system(rng: np.random.Generator) -> TwoStateSystem:
    """A random pre/post pair on a small cycle: <=5 positions, <=2 coins, T<=4."""
    space = StateSpace(Cycle(int(rng.integers(3, 6))), int(rng.integers(1, 3)))
    horizon = int(rng.integers(1, 5))
    steps = tuple(
        StepOperator.mcqw_step(space, haar_coin(rng), int(rng.integers(space.n_coins)))
        for _ in range(horizon)
    )
    dynamics = Dynamics(steps)
    while True:
        pre = random_sparse_state(space, rng, max_support=5)
        post = random_sparse_state(space, rng, max_support=5)
        try:
            return TwoStateSystem(pre, post, dynamics, horizon)
        except ValueError:
            continue  # the random pair was (numerically) orthogonal
