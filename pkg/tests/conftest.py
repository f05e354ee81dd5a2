import sys
from pathlib import Path

import numpy as np
import pytest

import polyvol as pv

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def cube2():
    return pv.gen_cube(2)


@pytest.fixture(scope="session")
def cube3():
    return pv.gen_cube(3)


@pytest.fixture(scope="session")
def cube10():
    return pv.gen_cube(10)


@pytest.fixture(scope="session")
def cross3():
    return pv.gen_cross(3)


@pytest.fixture(scope="session")
def rh412():
    return pv.gen_rh(4, 12, seed=5)


@pytest.fixture(scope="session")
def interval():
    # Smallest bounded instance: -1 <= x <= 1 in dimension 1.
    return pv.parse_polytope("2 1\n1 1\n-1 1\n")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the walk kernels once so tests never time JIT work."""
    P = pv.gen_cube(2)
    rng = np.random.Generator(np.random.PCG64(0))
    ctx = pv.WalkContext(P, radius=4.0, rng=rng)
    pv.walk(ctx, np.zeros(2), 4, kind="coordinate")
    pv.walk(ctx, np.zeros(2), 4, kind="hypersphere")
    pv.estimate_volume(P, pv.EstimationConfig(seed=0, step_size=64))
    pv.estimate_volume(P, pv.EstimationConfig(seed=0, step_size=64, walk="hypersphere"))
