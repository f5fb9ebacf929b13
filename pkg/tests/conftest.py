import pytest

from markovsharp import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted kernels once so timed tests measure the algorithms
    _kernels.warmup()
