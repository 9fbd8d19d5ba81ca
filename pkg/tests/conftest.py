import numpy as np
import pytest

from hedge_nash import SymmetricGame, run_trajectory

RPS01 = [[0.5, 0.0, 1.0], [1.0, 0.5, 0.0], [0.0, 1.0, 0.5]]


@pytest.fixture
def rps01():
    return SymmetricGame(np.array(RPS01), label="rps01")


@pytest.fixture
def identity2():
    return SymmetricGame(np.eye(2), label="identity2")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    # compile (or load cached) kernels once so timed tests measure the numerics
    run_trajectory(SymmetricGame(np.eye(2)), 0.1, 3, observe_every=1)
