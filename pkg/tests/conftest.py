import numpy as np
import pytest

from eigsign import problems, signsys
from helpers import ACCEPTANCE_LINES, HAND_A, HAND_M


@pytest.fixture
def hand_problem():
    return problems.EigenPhaseProblem(a=HAND_A, lam=1.0, magnitudes=HAND_M, truth_signs=[1, 1])


@pytest.fixture
def hand_system(hand_problem):
    return signsys.build_sign_system(hand_problem)


@pytest.fixture(scope="session")
def planted12():
    return problems.planted_problem(12, 3.0, "folded_gaussian", np.random.default_rng(12))


@pytest.fixture(scope="session")
def hadamard_top():
    return problems.hadamard_perturbed("top")


@pytest.fixture(scope="session")
def hadamard_bottom():
    return problems.hadamard_perturbed("bottom")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
