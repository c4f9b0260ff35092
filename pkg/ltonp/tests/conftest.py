import numpy as np
import pytest

from ltonp.complementary import ComplementaryPair
from ltonp.problem import ProblemData
from ltonp.sampling import random_instance
from ltonp.solver import InterpolationSolver

R = np.sqrt(0.75)


def scalar_problem(b: float = 0.5) -> ProblemData:
    """One-point problem F(0) = b"""
    return ProblemData(Z=[[0.0]], B=[[1.0]], Btilde=[[b]])


def scalar_solver(b: float = 0.5) -> InterpolationSolver:
    """Scalar solver with the pair fixed to C = 1, D = 0"""
    pair = ComplementaryPair(C=np.array([[1.0 + 0j]]), D=np.array([[0.0 + 0j]]))
    return InterpolationSolver(scalar_problem(b), pair=pair)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def scalar():
    return scalar_solver(0.5)


@pytest.fixture(params=[(3, 2, 2, 7), (4, 1, 3, 11), (2, 3, 1, 19)],
                ids=lambda d: f"n{d[0]}p{d[1]}q{d[2]}")
def random_solver(request):
    n, p, q, seed = request.param
    return InterpolationSolver(random_instance(np.random.default_rng(seed), n, p, q))
