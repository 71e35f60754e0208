import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def complex_vectors(n_min=1, n_max=8, bound=3.0):
    """Hypothesis strategy for complex vectors with moderate entries."""
    part = st.floats(-bound, bound, allow_nan=False, allow_infinity=False)
    cplx = st.builds(complex, part, part)
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(cplx, min_size=n, max_size=n).map(np.array))


def well_separated(z, gap=0.1):
    if z.size < 2:
        return True
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices(z.size)] = np.inf
    return d.min() > gap


def random_distinct(rng, n, scale=1.0, gap=0.2):
    while True:
        z = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        if well_separated(z, gap * scale):
            return z


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
