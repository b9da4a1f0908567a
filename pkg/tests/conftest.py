import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mvlsync import kernels  # noqa: E402
from mvlsync.examples import load_example  # noqa: E402
from mvlsync.network import augmented_from_network, build_augmented, CoupledAlgebraic  # noqa: E402
from mvlsync.stp import LogicMatrix  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def systems():
    return {name: augmented_from_network(load_example(name))
            for name in ("example1", "example2", "example3", "example4")}


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    with kernels.using_backend(request.param):
        yield request.param


def random_algebraic(rng, k=3, n=1):
    kn = k ** n
    F = LogicMatrix(kn, rng.integers(1, kn + 1, size=kn * kn))
    G = LogicMatrix(kn, rng.integers(1, kn + 1, size=kn * kn))
    return CoupledAlgebraic(k, n, F, G)


def random_system(rng, k=3, n=1):
    return build_augmented(random_algebraic(rng, k, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
