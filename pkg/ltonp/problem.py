"""
LTONP instance data, Stein equation solver, Gramians and Pick operator.

The data set is {Z, B, Btilde}; the controllability operators
W = [B, ZB, Z^2 B, ...] and W~ = [Btilde, Z Btilde, ...] stay implicit and
are only materialized as finite sections.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

import numpy as np
import scipy.linalg as spla

from .errors import DimensionMismatch, InvalidProblem, IterationLimit, NotConvergent, OrderOverflow
from .kernel import as_matrix, ct, hermitize, min_hermitian_eigenvalue, operator_norm, spectral_radius
from .settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

# rho(Z) * rho(alpha) must stay below 1 - STEIN_MARGIN
STEIN_MARGIN = 1e-12
EPS_STALL = np.finfo(np.float64).eps


@dataclass(frozen=True, eq=False)
class ProblemData:
    """A finite LTONP instance {Z, B, Btilde} with rho(Z) < 1"""
    Z: np.ndarray
    B: np.ndarray
    Btilde: np.ndarray

    def __post_init__(self):
        Z = as_matrix(self.Z, "Z")
        B = as_matrix(self.B, "B")
        Btilde = as_matrix(self.Btilde, "Btilde")
        n = Z.shape[0]
        if Z.shape != (n, n) or n < 1:
            raise InvalidProblem(f"Z must be square with n >= 1, got {Z.shape}")
        if B.shape[0] != n or B.shape[1] < 1:
            raise InvalidProblem(f"B must be {n} x p with p >= 1, got {B.shape}")
        if Btilde.shape[0] != n or Btilde.shape[1] < 1:
            raise InvalidProblem(f"Btilde must be {n} x q with q >= 1, got {Btilde.shape}")
        rho = spectral_radius(Z)
        if rho >= 1.0:
            raise InvalidProblem(f"spectral radius of Z is {rho:.6f}; it must be below 1")
        for name, arr in (("Z", Z), ("B", B), ("Btilde", Btilde)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def p(self) -> int:
        return self.B.shape[1]

    @property
    def q(self) -> int:
        return self.Btilde.shape[1]

    @property
    def rho(self) -> float:
        return spectral_radius(self.Z)

    def describe(self) -> str:
        return f"n={self.n}, p={self.p}, q={self.q}, rho(Z)={self.rho:.4f}"


class PickClass(Enum):
    STRICTLY_POSITIVE = "strictly positive"
    NONNEGATIVE_SINGULAR = "nonnegative singular"
    INDEFINITE = "indefinite"


@dataclass(frozen=True, eq=False)
class PickData:
    P: np.ndarray
    Ptilde: np.ndarray
    Lambda: np.ndarray
    classification: PickClass
    min_eigenvalue: float
    posdef_tol: float
    P_strictly_positive: bool
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def is_strictly_positive(self) -> bool:
        return self.classification is PickClass.STRICTLY_POSITIVE

    @property
    def ill_conditioned(self) -> bool:
        """min-eig of Lambda within a factor 100 of the positivity threshold"""
        return self.is_strictly_positive and self.min_eigenvalue < 100.0 * self.posdef_tol

    @property
    def condition(self) -> float:
        if not self.is_strictly_positive:
            return float("inf")
        return float(np.linalg.cond(self.Lambda))


@dataclass(frozen=True, eq=False)
class ControllabilitySection:
    """[X, ZX, ..., Z^{K-1} X] with a bound on the discarded tail"""
    matrix: np.ndarray
    order: int
    tail_bound: float


def _stein_residual(Z, alpha, Xi, Omega) -> float:
    return operator_norm(Omega - Z @ Omega @ alpha - Xi)


def _is_nilpotent(Z: np.ndarray) -> bool:
    return not np.any(np.linalg.matrix_power(Z, Z.shape[0]))


def _stein_finite_sum(Z, alpha, Xi):
    Omega = Xi.copy()
    term = Xi
    for _ in range(Z.shape[0] - 1):
        term = Z @ term @ alpha
        Omega = Omega + term
    return Omega


def _stein_dense(Z, alpha, Xi):
    n, m = Xi.shape
    # vec(Z Omega alpha) = kron(alpha^T, Z) vec(Omega), column-major vec
    system = np.eye(n * m, dtype=complex) - np.kron(alpha.T, Z)
    vec = spla.solve(system, Xi.reshape(-1, order="F"))
    return vec.reshape((n, m), order="F")


def stein_solve(Z: np.ndarray, alpha: np.ndarray, Xi: np.ndarray,
                tol: float = DEFAULT_SETTINGS.stein_tol,
                doubling_switch: float = DEFAULT_SETTINGS.doubling_switch,
                max_doubling: int = DEFAULT_SETTINGS.max_doubling,
                dense_cap: int = DEFAULT_SETTINGS.dense_cap) -> np.ndarray:
    """
    Solve Omega - Z Omega alpha = Xi.

    Uses the squared-iterate accumulation
    Omega_{k+1} = Omega_k + Z^(2^k) Omega_k alpha^(2^k) for well damped
    operands, an exact finite sum when Z is nilpotent, and a dense solve of
    the vectorized system when rho(Z) rho(alpha) > doubling_switch. The dense
    solve is skipped for more than dense_cap unknowns; if doubling then
    stalls or runs out of steps, IterationLimit is raised.
    """
    Z = np.asarray(Z, dtype=complex)
    alpha = np.asarray(alpha, dtype=complex)
    Xi = np.asarray(Xi, dtype=complex)
    if Xi.shape != (Z.shape[0], alpha.shape[0]):
        raise DimensionMismatch(f"Xi has shape {Xi.shape}, expected {(Z.shape[0], alpha.shape[0])}")
    if Xi.size == 0:
        return Xi.copy()
    rho = spectral_radius(Z) * spectral_radius(alpha)
    if rho >= 1.0 - STEIN_MARGIN:
        raise NotConvergent(f"rho(Z) * rho(alpha) = {rho:.6f} is not below 1")

    if _is_nilpotent(Z):
        return _stein_finite_sum(Z, alpha, Xi)
    dense_ok = Xi.size <= dense_cap
    if rho > doubling_switch and dense_ok:
        logger.debug("Stein: rho product %.4f, using dense solve (%d unknowns)", rho, Xi.size)
        return _stein_dense(Z, alpha, Xi)

    scale = max(1.0, operator_norm(Xi))
    Omega = Xi.copy()
    Zk, Ak = Z, alpha
    for step in range(max_doubling):
        increment = Zk @ Omega @ Ak
        Omega = Omega + increment
        residual = _stein_residual(Z, alpha, Xi, Omega)
        if residual <= tol * scale:
            logger.debug("Stein: converged after %d doubling steps, residual %.2e", step + 1, residual)
            return Omega
        if operator_norm(increment) <= EPS_STALL * operator_norm(Omega):
            # rounding floor reached above the target
            if not dense_ok:
                raise IterationLimit(f"doubling stalled at residual {residual:.3e} and {Xi.size} "
                                     f"unknowns exceed the dense cap {dense_cap}")
            logger.warning("Stein: doubling stalled at residual %.2e, switching to dense solve", residual)
            return _stein_dense(Z, alpha, Xi)
        Zk, Ak = Zk @ Zk, Ak @ Ak
    raise IterationLimit(f"doubling iteration stopped at residual {residual:.3e} "
                         f"(target {tol * scale:.3e}) after {max_doubling} steps")


def gramians(prob: ProblemData, tol: float = DEFAULT_SETTINGS.stein_tol,
             posdef_factor: float = DEFAULT_SETTINGS.posdef_factor) -> PickData:
    """Gramians P, Ptilde, Pick operator Lambda = P - Ptilde and its classification"""
    Z, B, Bt = prob.Z, prob.B, prob.Btilde
    P = hermitize(stein_solve(Z, ct(Z), B @ ct(B), tol=tol))
    Ptilde = hermitize(stein_solve(Z, ct(Z), Bt @ ct(Bt), tol=tol))
    Lambda = P - Ptilde

    posdef_tol = posdef_factor * max(1.0, operator_norm(Lambda))
    min_eig = min_hermitian_eigenvalue(Lambda)
    if min_eig > posdef_tol:
        classification = PickClass.STRICTLY_POSITIVE
    elif min_eig >= -posdef_tol:
        classification = PickClass.NONNEGATIVE_SINGULAR
    else:
        classification = PickClass.INDEFINITE
    p_min = min_hermitian_eigenvalue(P)
    P_positive = p_min > posdef_factor * max(1.0, operator_norm(P))

    residuals = {
        "P": _stein_residual(Z, ct(Z), B @ ct(B), P),
        "Ptilde": _stein_residual(Z, ct(Z), Bt @ ct(Bt), Ptilde),
        "Lambda": _stein_residual(Z, ct(Z), B @ ct(B) - Bt @ ct(Bt), Lambda),
    }
    logger.debug("Pick operator %s, min eigenvalue %.3e (threshold %.1e)",
                 classification.value, min_eig, posdef_tol)
    return PickData(P=P, Ptilde=Ptilde, Lambda=Lambda, classification=classification,
                    min_eigenvalue=min_eig, posdef_tol=posdef_tol,
                    P_strictly_positive=P_positive, residuals=residuals)


def power_bound(Z: np.ndarray, cap: int = DEFAULT_SETTINGS.truncation_cap) -> Tuple[float, float]:
    """
    Bound S >= sum_j ||Z^j|| together with the sub-unit rate rho_hat.

    With m the first power such that ||Z^m|| < 1,
    S = (sum_{j<m} ||Z^j||) / (1 - ||Z^m||) and rho_hat = ||Z^m||^(1/m).
    For m = 1 this is the familiar 1 / (1 - ||Z||).
    """
    n = Z.shape[0]
    power = np.eye(n, dtype=complex)
    partial = 0.0
    for m in range(1, cap + 1):
        partial += operator_norm(power)
        power = power @ Z
        norm_m = operator_norm(power)
        if norm_m < 1.0:
            return partial / (1.0 - norm_m), norm_m ** (1.0 / m)
    raise OrderOverflow(f"no power of Z below norm 1 within {cap} steps")


def _section_source(prob: ProblemData, which: str) -> np.ndarray:
    if which == "B":
        return prob.B
    if which == "Btilde":
        return prob.Btilde
    raise ValueError(f"which must be 'B' or 'Btilde', got {which!r}")


def truncated_controllability(prob: ProblemData, which: str, K: int) -> ControllabilitySection:
    """
    The K-block section [X, ZX, ..., Z^{K-1}X] of W (which='B') or
    W~ (which='Btilde'). The discarded tail Z^K W is bounded by
    ||Z^K|| * ||X|| * S with S from power_bound.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    X = _section_source(prob, which)
    blocks = [X]
    for _ in range(K - 1):
        blocks.append(prob.Z @ blocks[-1])
    S, _ = power_bound(prob.Z)
    tail = operator_norm(np.linalg.matrix_power(prob.Z, K)) * operator_norm(X) * S
    return ControllabilitySection(matrix=np.hstack(blocks), order=K, tail_bound=tail)


def auto_truncation_order(prob: ProblemData, eps: float,
                          cap: int = DEFAULT_SETTINGS.truncation_cap) -> int:
    """
    Smallest K with ||Z^K|| * max(||B||, ||Btilde||) * S < eps, so one
    order serves both W and W~ sections.
    """
    S, _ = power_bound(prob.Z, cap)
    x_norm = max(operator_norm(prob.B), operator_norm(prob.Btilde))
    power = np.eye(prob.n, dtype=complex)
    for K in range(1, cap + 1):
        power = power @ prob.Z
        bound = operator_norm(power) * x_norm * S
        if bound < eps:
            logger.debug("truncation order %d reaches tail bound %.2e < %.1e", K, bound, eps)
            return K
    raise OrderOverflow(f"truncation order for eps={eps:.1e} exceeds cap {cap}")
