import pytest

from drgcayley.kernels import warmup


@pytest.fixture(scope="session", autouse=True)
def kernel_warmup():
    """Compile the scan kernel once so timed tests measure steady state."""
    return warmup()
