"""
Coefficient function, central solution and the parametrizations of all
solutions.

With Lambda strictly positive every solution is

    F = (U11 X + U12)(U21 X + U22)^{-1}

for a Schur class parameter X, where U = Upsilon is realized on the state
space of Z*. Equivalently F is the Redheffer feedback of
G = omega P_F + tau2 X tau1*. X = 0 gives the central solution.
"""
import logging
import threading
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg as spla

from .complementary import ComplementaryPair, complementary_pair
from .errors import (DimensionMismatch, FeedbackSingular, LambdaNotStrictlyPositive,
                     ParameterNotContractive, ResolventSingular)
from .kernel import (ct, hermitian_inv_sqrt, hermitian_sqrt, hermitize, operator_norm,
                     resolvent_solve, spectral_radius)
from .problem import PickData, ProblemData, auto_truncation_order, gramians, truncated_controllability
from .settings import DEFAULT_SETTINGS, Settings
from .systems import RationalSystem, SchurParameter

logger = logging.getLogger(__name__)

ILL_CONDITIONED_NOTE = "ill-conditioned Pick operator"


def _require_positive(pick: PickData):
    if not pick.is_strictly_positive:
        raise LambdaNotStrictlyPositive(pick.classification, pick.min_eigenvalue)


def _her_inv(M: np.ndarray) -> np.ndarray:
    return hermitize(spla.solve(M, np.eye(M.shape[0], dtype=complex), assume_a="her"))


@dataclass(frozen=True, eq=False)
class CoefficientSystem:
    """Q0, R0 and the realization data of Upsilon; immutable once built"""
    Q0: np.ndarray
    R0: np.ndarray
    Bhat: np.ndarray
    Chat: np.ndarray
    Dhat: np.ndarray
    K: np.ndarray
    Lambda_inv: np.ndarray
    residuals: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def e(self) -> int:
        return self.Q0.shape[0]

    @property
    def q(self) -> int:
        return self.R0.shape[0]

    @property
    def scale(self) -> np.ndarray:
        """diag(Q0, R0)"""
        return spla.block_diag(self.Q0, self.R0)


@dataclass(frozen=True, eq=False)
class UpsilonBlocks:
    u11: np.ndarray
    u12: np.ndarray
    u21: np.ndarray
    u22: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.block([[self.u11, self.u12], [self.u21, self.u22]])


def coefficient_system(prob: ProblemData, pick: PickData, pair: ComplementaryPair,
                       tol: float = DEFAULT_SETTINGS.tol) -> CoefficientSystem:
    _require_positive(pick)
    Z, B, Bt = prob.Z, prob.B, prob.Btilde
    P, Lam = pick.P, pick.Lambda
    C, D = pair.C, pair.D
    e, q = pair.e, prob.q

    Lam_inv = _her_inv(Lam)
    P_inv = _her_inv(P)
    PC = P @ ct(C)

    Q0_inv_sq = hermitize(np.eye(e) + ct(PC) @ (Lam_inv - P_inv) @ PC)
    Q0 = hermitian_inv_sqrt(Q0_inv_sq)
    cross = hermitize(D @ ct(D) + ct(PC) @ Lam_inv @ PC)
    R0_inv_sq = hermitize(np.eye(q) + ct(Bt) @ Lam_inv @ Bt)
    R0 = hermitian_inv_sqrt(R0_inv_sq)
    K = spla.solve(Bt @ ct(Bt) + Lam, np.eye(prob.n, dtype=complex), assume_a="her")

    Bhat = np.hstack([Lam_inv @ PC, ct(Z) @ Lam_inv @ Bt])
    Chat = np.vstack([ct(B), ct(Bt)])
    Dhat = np.block([
        [ct(D), ct(B) @ Lam_inv @ Bt],
        [np.zeros((q, e), dtype=complex), R0_inv_sq],
    ])

    residuals = {
        "Q0": operator_norm(_her_inv(Q0 @ Q0) - Q0_inv_sq) if e else 0.0,
        "Q0_cross": operator_norm(Q0_inv_sq - cross),
        "R0": operator_norm(_her_inv(R0 @ R0) - R0_inv_sq),
    }
    notes = []
    if pick.ill_conditioned:
        notes.append(f"{ILL_CONDITIONED_NOTE} (cond {pick.condition:.3e})")
        logger.warning("Pick operator is nearly singular: min eigenvalue %.3e, cond %.3e",
                       pick.min_eigenvalue, pick.condition)
    if residuals["Q0_cross"] > tol:
        logger.warning("Q0 formulas disagree by %.2e", residuals["Q0_cross"])
    return CoefficientSystem(Q0=Q0, R0=R0, Bhat=Bhat, Chat=Chat, Dhat=Dhat, K=K,
                             Lambda_inv=Lam_inv, residuals=residuals, notes=notes)


def upsilon_eval(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData,
                 pair: ComplementaryPair, lam: complex) -> UpsilonBlocks:
    """The four blocks of Upsilon(lambda) from one resolvent solve"""
    e = coeffs.e
    Lam_inv = coeffs.Lambda_inv
    rhs = np.hstack([Lam_inv @ pick.P @ ct(pair.C) @ coeffs.Q0,
                     Lam_inv @ prob.Btilde @ coeffs.R0])
    x = resolvent_solve(np.eye(prob.n, dtype=complex) - lam * ct(prob.Z), rhs)
    x1, x2 = x[:, :e], x[:, e:]
    return UpsilonBlocks(
        u11=ct(pair.D) @ coeffs.Q0 + lam * (ct(prob.B) @ x1),
        u12=ct(prob.B) @ x2,
        u21=lam * (ct(prob.Btilde) @ x1),
        u22=coeffs.R0 + ct(prob.Btilde) @ x2,
    )


def upsilon_system(coeffs: CoefficientSystem, prob: ProblemData) -> RationalSystem:
    """Upsilon(lambda) = (Dhat + lambda Chat (I - lambda Z*)^{-1} Bhat) diag(Q0, R0)"""
    scale = coeffs.scale
    return RationalSystem(alpha=ct(prob.Z), beta=coeffs.Bhat @ scale,
                          gamma=coeffs.Chat, delta=coeffs.Dhat @ scale)


def central_solution(prob: ProblemData, pick: PickData) -> RationalSystem:
    """F0(lambda) = B* K (I - lambda T)^{-1} Btilde with T = Lambda Z* K"""
    _require_positive(pick)
    B, Bt, Lam = prob.B, prob.Btilde, pick.Lambda
    K = spla.solve(Bt @ ct(Bt) + Lam, np.eye(prob.n, dtype=complex), assume_a="her")
    T = Lam @ ct(prob.Z) @ K
    rho = spectral_radius(T)
    logger.debug("central solution: rho(T) = %.6f", rho)
    if rho >= 1.0:
        logger.warning("central solution state matrix has spectral radius %.6f", rho)
    return RationalSystem(alpha=T, beta=Bt, gamma=ct(B) @ K @ T, delta=ct(B) @ K @ Bt)


def upsilon22_inverse(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData) -> RationalSystem:
    _require_positive(pick)
    Zs, Bt, R0 = ct(prob.Z), prob.Btilde, coeffs.R0
    alpha = Zs @ coeffs.K @ pick.Lambda
    logger.debug("inverse of Upsilon22: rho(state) = %.6f", spectral_radius(alpha))
    return RationalSystem(alpha=alpha, beta=Zs @ coeffs.Lambda_inv @ Bt @ R0 @ R0,
                          gamma=-R0 @ ct(Bt), delta=R0)


def _check_parameter(X: SchurParameter, e: int, q: int):
    if X.shape != (e, q):
        raise DimensionMismatch(f"parameter is {X.shape}, expected {(e, q)}")
    if not X.system.is_contractive():
        raise ParameterNotContractive("parameter realization is not contractive")


def lft_solution(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData,
                 pair: ComplementaryPair, X: SchurParameter) -> RationalSystem:
    """
    Realization of F = (U11 X + U12)(U21 X + U22)^{-1}.

    N = Upsilon col(X, I) is formed as a cascade, then its lower block is
    inverted by output feedback; N2(0) = R0^{-1} because U21(0) = 0 and the
    X state never reaches the lower feedthrough. The result lives on the
    Z* state plus the X state.
    """
    _require_positive(pick)
    e, q = pair.e, prob.q
    if e == 0:
        logger.debug("e = 0: the solution is unique")
        return central_solution(prob, pick)
    _check_parameter(X, e, q)

    xs = X.system
    mx = xs.state_dim
    stacked = RationalSystem(
        alpha=xs.alpha, beta=xs.beta,
        gamma=np.vstack([xs.gamma, np.zeros((q, mx), dtype=complex)]),
        delta=np.vstack([xs.delta, np.eye(q, dtype=complex)]),
    )
    N = upsilon_system(coeffs, prob).cascade(stacked)
    F = N.right_quotient(prob.p)
    logger.debug("LFT solution: state %d, rho(alpha) %.4f", F.state_dim, F.spectral_radius_alpha)
    return F


def omega_pf(prob: ProblemData, pick: PickData) -> np.ndarray:
    """[B*; Lambda^(1/2) Z*] K [Btilde, Lambda^(1/2)], K = (Btilde Btilde* + Lambda)^{-1}"""
    _require_positive(pick)
    Lam_half = hermitian_sqrt(pick.Lambda)
    Bt = prob.Btilde
    K = spla.solve(Bt @ ct(Bt) + pick.Lambda, np.eye(prob.n, dtype=complex), assume_a="her")
    left = np.vstack([ct(prob.B), Lam_half @ ct(prob.Z)])
    right = np.hstack([Bt, Lam_half])
    return left @ K @ right


def tau_isometries(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData,
                   pair: ComplementaryPair) -> Tuple[np.ndarray, np.ndarray]:
    _require_positive(pick)
    Lam_inv_half = hermitian_inv_sqrt(pick.Lambda)
    tau1 = np.vstack([np.eye(prob.q, dtype=complex), -Lam_inv_half @ prob.Btilde]) @ coeffs.R0
    tau2 = np.vstack([ct(pair.D), Lam_inv_half @ pick.P @ ct(pair.C)]) @ coeffs.Q0
    return tau1, tau2


def g_family(prob: ProblemData, pick: PickData, pair: ComplementaryPair,
             coeffs: CoefficientSystem, X: SchurParameter, lam: complex) -> np.ndarray:
    """G(lambda) = omega P_F + tau2 X(lambda) tau1*, a (p+n) x (q+n) contraction"""
    tau1, tau2 = tau_isometries(coeffs, prob, pick, pair)
    G = omega_pf(prob, pick)
    if pair.e:
        G = G + tau2 @ X.evaluate(lam) @ ct(tau1)
    return G


def redheffer_solution(prob: ProblemData, pick: PickData, pair: ComplementaryPair,
                       coeffs: CoefficientSystem, X: SchurParameter, lam: complex) -> np.ndarray:
    """F(lambda) = G11 + lambda G12 (I - lambda G22)^{-1} G21"""
    p, q, n = prob.p, prob.q, prob.n
    G = g_family(prob, pick, pair, coeffs, X, lam)
    G11, G12 = G[:p, :q], G[:p, q:]
    G21, G22 = G[p:, :q], G[p:, q:]
    try:
        loop = resolvent_solve(np.eye(n, dtype=complex) - lam * G22, G21)
    except ResolventSingular as exc:
        raise FeedbackSingular(f"I - lambda G22 is singular at lambda={lam}") from exc
    return G11 + lam * (G12 @ loop)


def central_from_omega(prob: ProblemData, pick: PickData) -> RationalSystem:
    """Central solution read off the contractive realization omega P_F"""
    M = omega_pf(prob, pick)
    p, q = prob.p, prob.q
    return RationalSystem(alpha=M[p:, q:], beta=M[p:, :q], gamma=M[:p, q:], delta=M[:p, :q])


@dataclass(frozen=True, eq=False)
class AlternativeCoefficients:
    """Q0, R0 and the U12, U22 Taylor coefficients from K-block sections"""
    order: int
    A: np.ndarray
    Q0: np.ndarray
    R0: np.ndarray
    inversion_residual: float
    tail_bound: float
    u12_coeffs: np.ndarray
    u22_coeffs: np.ndarray

    def upsilon_blocks(self, lam: complex) -> Tuple[np.ndarray, np.ndarray]:
        powers = lam ** np.arange(self.order)
        return (np.tensordot(powers, self.u12_coeffs, axes=1),
                np.tensordot(powers, self.u22_coeffs, axes=1))


def alternative_coefficients(prob: ProblemData, pick: PickData, pair: ComplementaryPair,
                             K: Optional[int] = None, eps: float = 1e-12) -> AlternativeCoefficients:
    """
    Q0 and R0 through A = W* P^{-1} W~ on K-block sections:

        R0 = (E* (I - A*A)^{-1} E)^(-1/2)
        Q0 = (I + C W A (I - A*A)^{-1} A* W* C*)^(-1/2)

    U22 and U12 have Taylor coefficients (I - A*A)^{-1} E R0 and
    A (I - A*A)^{-1} E R0. The inversion residual compares (I - A*A)^{-1}
    with I + W~* Lambda^{-1} W~ and is controlled by the section tail.
    """
    _require_positive(pick)
    p, q = prob.p, prob.q
    if K is None:
        K = auto_truncation_order(prob, eps)
    W = truncated_controllability(prob, "B", K)
    Wt = truncated_controllability(prob, "Btilde", K)
    A = ct(W.matrix) @ _her_inv(pick.P) @ Wt.matrix
    defect = np.eye(K * q, dtype=complex) - ct(A) @ A
    defect_inv = _her_inv(defect)
    E = np.zeros((K * q, q), dtype=complex)
    E[:q] = np.eye(q)

    R0 = hermitian_inv_sqrt(ct(E) @ defect_inv @ E)
    CW = pair.C @ W.matrix
    Q0 = hermitian_inv_sqrt(hermitize(np.eye(pair.e) + CW @ A @ defect_inv @ ct(A) @ ct(CW)))
    woodbury = np.eye(K * q) + ct(Wt.matrix) @ _her_inv(pick.Lambda) @ Wt.matrix

    y = defect_inv @ E @ R0
    u22 = y.reshape(K, q, q)
    u12 = (A @ y).reshape(K, p, q)
    logger.debug("alternative coefficients at order %d", K)
    return AlternativeCoefficients(order=K, A=A, Q0=Q0, R0=R0,
                                   inversion_residual=operator_norm(defect_inv - woodbury),
                                   tail_bound=max(W.tail_bound, Wt.tail_bound),
                                   u12_coeffs=u12, u22_coeffs=u22)


def scalar_parameter_from_solution(b: complex, lam: complex, value: complex) -> complex:
    """Invert F = (lambda x + b) / (1 + conj(b) lambda x) for x at lambda != 0"""
    if lam == 0:
        raise ValueError("the parameter is not visible at lambda = 0")
    return (value - b) / (lam * (1.0 - np.conj(b) * value))


class InterpolationSolver:
    """
    One LTONP instance with its derived data computed on first use.

    Gramians, the complementary pair and the coefficient system are cached,
    so repeated solves for different parameters share the work. The cache is
    filled under a lock; one solver may be shared between threads.
    """

    def __init__(self, prob: ProblemData, settings: Settings = DEFAULT_SETTINGS,
                 pair: Optional[ComplementaryPair] = None):
        if pair is not None and (pair.D.shape != (pair.e, prob.p) or pair.C.shape != (pair.e, prob.n)):
            raise DimensionMismatch(f"pair needs D of shape (e, {prob.p}) and C of shape (e, {prob.n}), "
                                    f"got {pair.D.shape} and {pair.C.shape}")
        self.prob = prob
        self.settings = settings
        self._lock = threading.RLock()
        self._pick = None
        self._pair = pair
        self._coeffs = None

    @property
    def pick(self) -> PickData:
        with self._lock:
            if self._pick is None:
                self._pick = gramians(self.prob, tol=self.settings.stein_tol,
                                      posdef_factor=self.settings.posdef_factor)
        return self._pick

    @property
    def pair(self) -> ComplementaryPair:
        with self._lock:
            if self._pair is None:
                self._pair = complementary_pair(self.prob, self.pick, tol=self.settings.tol)
        return self._pair

    @property
    def coeffs(self) -> CoefficientSystem:
        with self._lock:
            if self._coeffs is None:
                self._coeffs = coefficient_system(self.prob, self.pick, self.pair, tol=self.settings.tol)
        return self._coeffs

    def central(self) -> RationalSystem:
        return central_solution(self.prob, self.pick)

    def solution(self, X: Optional[SchurParameter] = None) -> RationalSystem:
        if X is None:
            return self.central()
        return lft_solution(self.coeffs, self.prob, self.pick, self.pair, X)

    def upsilon(self, lam: complex) -> UpsilonBlocks:
        return upsilon_eval(self.coeffs, self.prob, self.pick, self.pair, lam)

    def redheffer(self, X: SchurParameter, lam: complex) -> np.ndarray:
        return redheffer_solution(self.prob, self.pick, self.pair, self.coeffs, X, lam)

    def notes(self) -> List[str]:
        return list(self.coeffs.notes) if self.pick.is_strictly_positive else []
