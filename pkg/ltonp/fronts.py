"""
Front ends that reduce other interpolation problems to LTONP data.

Leech: find Schur class F with G F = K. Polynomial data are cut at order
N; Z is then the nilpotent block shift, B and Btilde stack the first N
Taylor coefficients of G and K, and a solution of the reduced instance
solves G F = K modulo lambda^N. The exact problem is the N -> infinity
limit and is not claimed here.

Commutant lifting: data with Z Z* + B B* = I, so that P = I.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg as spla

from .complementary import ComplementaryPair
from .errors import InvalidProblem, LambdaNotStrictlyPositive, NotCoisometricPair
from .kernel import as_matrix, ct, hermitian_inv_sqrt, hermitize, operator_norm
from .problem import PickClass, PickData, ProblemData, auto_truncation_order, gramians, truncated_controllability
from .settings import DEFAULT_SETTINGS
from .solver import CoefficientSystem
from .systems import RationalSystem

logger = logging.getLogger(__name__)

LEECH_NOTE = "order-N finite section: necessary condition for the untruncated problem"


@dataclass(frozen=True, eq=False)
class LeechInstance:
    G_coeffs: Sequence[np.ndarray]
    K_coeffs: Sequence[np.ndarray]
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InvalidProblem(f"order N must be at least 1, got {self.N}")
        G = [as_matrix(g, f"G[{k}]") for k, g in enumerate(self.G_coeffs)]
        K = [as_matrix(c, f"K[{k}]") for k, c in enumerate(self.K_coeffs)]
        if not G or not K:
            raise InvalidProblem("G and K need at least one coefficient each")
        if len({g.shape for g in G}) != 1 or len({c.shape for c in K}) != 1:
            raise InvalidProblem("coefficients of G and of K must share one shape each")
        if G[0].shape[0] != K[0].shape[0]:
            raise InvalidProblem(f"G has {G[0].shape[0]} rows but K has {K[0].shape[0]}")
        object.__setattr__(self, "G_coeffs", G)
        object.__setattr__(self, "K_coeffs", K)

    @property
    def v(self) -> int:
        return self.G_coeffs[0].shape[0]

    @property
    def p(self) -> int:
        return self.G_coeffs[0].shape[1]

    @property
    def q(self) -> int:
        return self.K_coeffs[0].shape[1]

    def coefficient(self, which: str, k: int) -> np.ndarray:
        coeffs = self.G_coeffs if which == "G" else self.K_coeffs
        if k < len(coeffs):
            return coeffs[k]
        return np.zeros_like(coeffs[0])


def leech_truncate(leech: LeechInstance) -> ProblemData:
    N, v = leech.N, leech.v
    Z = np.kron(np.eye(N, k=-1), np.eye(v))
    B = np.vstack([leech.coefficient("G", k) for k in range(N)])
    Btilde = np.vstack([leech.coefficient("K", k) for k in range(N)])
    return ProblemData(Z=Z, B=B, Btilde=Btilde)


@dataclass(frozen=True)
class Solvability:
    classification: PickClass
    min_eigenvalue: float
    notes: List[str] = field(default_factory=list)


def leech_solvability(leech: LeechInstance) -> Solvability:
    pick = gramians(leech_truncate(leech))
    return Solvability(classification=pick.classification,
                       min_eigenvalue=pick.min_eigenvalue, notes=[LEECH_NOTE])


def leech_residuals(leech: LeechInstance, F: RationalSystem, orders: Optional[int] = None) -> List[float]:
    """||sum_{j<=k} G_j F_{k-j} - K_k|| for each k < orders"""
    orders = leech.N if orders is None else orders
    F_coeffs = F.taylor(orders)
    table = []
    for k in range(orders):
        product = sum(leech.coefficient("G", j) @ F_coeffs[k - j] for j in range(k + 1))
        table.append(operator_norm(product - leech.coefficient("K", k)))
    return table


def leech_residual(leech: LeechInstance, F: RationalSystem, orders: Optional[int] = None) -> float:
    """max over k < orders of the per-order residuals"""
    return max(leech_residuals(leech, F, orders), default=0.0)


def toeplitz_corona_instance(G_coeffs: Sequence[np.ndarray], N: int) -> ProblemData:
    """Leech reduction with K = I"""
    G = [as_matrix(g, "G") for g in G_coeffs]
    v = G[0].shape[0]
    return leech_truncate(LeechInstance(G_coeffs=G, K_coeffs=[np.eye(v)], N=N))


@dataclass(frozen=True, eq=False)
class CommutantLiftingInstance:
    Z: np.ndarray
    B: np.ndarray
    Btilde: np.ndarray


def commutant_lifting_instance(cl: CommutantLiftingInstance,
                               tol: float = DEFAULT_SETTINGS.lifting_tol) -> ProblemData:
    Z, B = as_matrix(cl.Z, "Z"), as_matrix(cl.B, "B")
    if Z.shape[0] != B.shape[0]:
        raise InvalidProblem(f"Z is {Z.shape} but B has {B.shape[0]} rows")
    defect = operator_norm(Z @ ct(Z) + B @ ct(B) - np.eye(Z.shape[0]))
    if defect > tol:
        raise NotCoisometricPair(f"||Z Z* + B B* - I|| = {defect:.3e} exceeds {tol:.1e}")
    return ProblemData(Z=Z, B=B, Btilde=cl.Btilde)


@dataclass(frozen=True, eq=False)
class LiftingCoefficients:
    order: int
    Q0: np.ndarray
    R0: np.ndarray
    gramian_residual: float
    lifting_identity_residual: float
    q0_residual: float
    r0_residual: float


def commutant_lifting_coefficients(prob: ProblemData, pick: PickData, pair: ComplementaryPair,
                                   coeffs: CoefficientSystem, K: Optional[int] = None,
                                   eps: float = 1e-12) -> LiftingCoefficients:
    """
    Q0 and R0 of a lifting instance from A = W~ (P = I):

        Q0 = (I + C A (I - A*A)^{-1} A* C*)^(-1/2)
        R0 = (E* (I - A*A)^{-1} E)^(-1/2)

    compared with the general coefficient system. A (I - A*A)^{-1} A*
    equals Lambda^{-1} Ptilde in the limit.
    """
    if not pick.is_strictly_positive:
        raise LambdaNotStrictlyPositive(pick.classification, pick.min_eigenvalue)
    q = prob.q
    if K is None:
        K = auto_truncation_order(prob, eps)
    A = truncated_controllability(prob, "Btilde", K).matrix
    defect = np.eye(K * q, dtype=complex) - ct(A) @ A
    lifted = hermitize(A @ spla.solve(defect, ct(A), assume_a="her"))
    closed = spla.solve(pick.Lambda, pick.Ptilde)

    Q0 = hermitian_inv_sqrt(hermitize(np.eye(pair.e) + pair.C @ lifted @ ct(pair.C)))
    head = spla.solve(defect, np.eye(K * q, q), assume_a="her")[:q]
    R0 = hermitian_inv_sqrt(hermitize(head))
    result = LiftingCoefficients(
        order=K, Q0=Q0, R0=R0,
        gramian_residual=operator_norm(pick.P - np.eye(prob.n)),
        lifting_identity_residual=operator_norm(lifted - closed),
        q0_residual=operator_norm(Q0 - coeffs.Q0),
        r0_residual=operator_norm(R0 - coeffs.R0),
    )
    logger.debug("lifting coefficients at order %d: Q0 residual %.2e, R0 residual %.2e",
                 K, result.q0_residual, result.r0_residual)
    return result
