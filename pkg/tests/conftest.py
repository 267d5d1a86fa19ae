import numpy as np
import pytest

from kempfness.atlas import diagonal_example, example2_phase_element, example2_vector, principal_nilpotent
from kempfness.rep_model import get_rep

BUILTIN = ["sl2x2", "sl2x3", "sl2x4", "sl2x5", "sl2x6", "so4pair"]


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


@pytest.fixture(params=BUILTIN)
def rep(request):
    return get_rep(request.param)


@pytest.fixture
def sl2x4():
    return get_rep("sl2x4")


@pytest.fixture
def sl2x5():
    return get_rep("sl2x5")


@pytest.fixture
def so4pair():
    return get_rep("so4pair")


@pytest.fixture
def v_e2():
    return example2_vector()


@pytest.fixture
def g_e2():
    return example2_phase_element()


@pytest.fixture
def nilpotent():
    return principal_nilpotent()


@pytest.fixture
def diag1234():
    return diagonal_example()


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
