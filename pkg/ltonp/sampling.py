"""
Seeded random instances and parameters for checks and demos.

Every generator takes a numpy Generator so a run is reproducible from one
seed.
"""
import logging

import numpy as np
import scipy.linalg as spla

from .fronts import LeechInstance, leech_truncate
from .kernel import min_hermitian_eigenvalue, operator_norm, spectral_radius
from .problem import ProblemData, gramians
from .systems import RationalSystem, SchurParameter

logger = logging.getLogger(__name__)

RHO_MAX = 0.8
MIN_PICK_EIGENVALUE = 0.05
MAX_GRAMIAN_CONDITION = 1e4
SHRINK = 0.8


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, size: int) -> np.ndarray:
    Q, R = spla.qr(complex_gaussian(rng, size, size))
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def random_disc_points(rng: np.random.Generator, count: int, radius: float = 0.99) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(size=count))
    return r * np.exp(2j * np.pi * rng.uniform(size=count))


def _stable_pair(rng, n, p):
    """(Z, B) from the top rows of a unitary, Z rescaled to rho <= RHO_MAX"""
    for attempt in range(100):
        U = random_unitary(rng, n + p)
        Z, B = U[:n, :n], U[:n, n:]
        rho = spectral_radius(Z)
        if rho > RHO_MAX:
            Z = Z * (RHO_MAX / rho)
        P = gramians(ProblemData(Z=Z, B=B, Btilde=np.zeros((n, 1)))).P
        if np.linalg.cond(P) <= MAX_GRAMIAN_CONDITION:
            return Z, B / np.sqrt(min_hermitian_eigenvalue(P))
        logger.debug("redrawing (Z, B): cond(P) = %.2e on attempt %d", np.linalg.cond(P), attempt)
    raise RuntimeError("could not draw a well-conditioned controllable pair")


def random_instance(rng: np.random.Generator, n: int, p: int, q: int) -> ProblemData:
    """
    A strictly positive instance: rho(Z) <= 0.8, smallest eigenvalue of P
    equal to one, Btilde shrunk until min-eig(Lambda) >= 0.05.
    """
    Z, B = _stable_pair(rng, n, p)
    Btilde = complex_gaussian(rng, n, q)
    while True:
        prob = ProblemData(Z=Z, B=B, Btilde=Btilde)
        if gramians(prob).min_eigenvalue >= MIN_PICK_EIGENVALUE:
            return prob
        Btilde = SHRINK * Btilde


def random_contraction(rng: np.random.Generator, rows: int, cols: int, norm: float = 0.9) -> np.ndarray:
    M = complex_gaussian(rng, rows, cols)
    scale = operator_norm(M)
    return M if scale == 0.0 else M * (norm / scale)


def random_schur_system(rng: np.random.Generator, e: int, q: int, state: int,
                        norm: float = 0.9) -> SchurParameter:
    """Dynamic parameter whose (e+state) x (q+state) system matrix has the given norm"""
    S = random_contraction(rng, e + state, q + state, norm)
    system = RationalSystem(alpha=S[e:, q:], beta=S[e:, :q], gamma=S[:e, q:], delta=S[:e, :q])
    return SchurParameter.dynamic(system)


def random_leech(rng: np.random.Generator, v: int, p: int, q: int, degree: int, N: int) -> LeechInstance:
    """Polynomial Leech data with K shrunk until the order-N Pick operator is strictly positive"""
    if v > p:
        raise ValueError("G needs at least as many columns as rows")
    G = [complex_gaussian(rng, v, p) for _ in range(degree + 1)]
    K = [complex_gaussian(rng, v, q) for _ in range(degree + 1)]
    while True:
        leech = LeechInstance(G_coeffs=G, K_coeffs=K, N=N)
        pick = gramians(leech_truncate(leech))
        if pick.min_eigenvalue >= MIN_PICK_EIGENVALUE * min_hermitian_eigenvalue(pick.P):
            return leech
        K = [SHRINK * k for k in K]
