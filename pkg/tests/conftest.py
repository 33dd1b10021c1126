import numpy as np
import pytest

from kappa_weyl import symbol_algebra as sa
from kappa_weyl.symbols import DEFAULT_LATTICE, GaussianMixture


@pytest.fixture(scope="session")
def lattice():
    return DEFAULT_LATTICE


@pytest.fixture(scope="session")
def pos_pair():
    """Two position symbols localised at r ~ 4 and their transforms."""
    f = GaussianMixture.gaussian([0.2, 4.0], [1.0, 0.5], [0.1, 0.2], amp=1.0 + 0.5j)
    g = GaussianMixture.gaussian([-0.3, 4.3], [0.9, 0.45], [-0.2, 0.1], amp=0.8)
    return f, g


@pytest.fixture(scope="session")
def mom_pair(pos_pair):
    f, g = pos_pair
    return f.fourier(), g.fourier()


@pytest.fixture(scope="session")
def star_pair(mom_pair, lattice):
    phi, psi = mom_pair
    return sa.star_momentum(phi, psi, lattice)


@pytest.fixture(scope="session")
def unit_triple():
    """Unit-width momentum Gaussians whose position profiles sit near r = 4."""
    return (GaussianMixture.gaussian([0.1, -0.1], [1.0, 1.0], [0.1, -4.0]),
            GaussianMixture.gaussian([-0.15, 0.2], [1.0, 1.0], [-0.05, -3.9]),
            GaussianMixture.gaussian([0.0, 0.1], [1.0, 1.0], [0.15, -4.1]))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion (echoed in the summary)."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
