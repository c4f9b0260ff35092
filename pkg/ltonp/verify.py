"""
Independent checks on solutions and on the coefficient function.

Nothing here is used to build a solution; each check recomputes its
quantity from the realization and compares against a second route.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np
import scipy.linalg as spla

from .codec import encode_matrix
from .complementary import BASIS_NOTE, ComplementaryPair
from .errors import LambdaNotStrictlyPositive, NoConvergence, QuadratureDegenerate
from .kernel import (ct, hermitize, min_hermitian_eigenvalue, operator_norm, resolvent_solve,
                     spectral_radius)
from .problem import PickData, ProblemData, stein_solve
from .sampling import random_contraction, random_schur_system
from .settings import DEFAULT_SETTINGS, Settings
from .solver import (CoefficientSystem, InterpolationSolver, central_solution, upsilon22_inverse,
                     upsilon_eval)
from .systems import RationalSystem, SchurParameter

logger = logging.getLogger(__name__)

# branch threshold for the direct entropy formula
ENTROPY_MARGIN = 1e-6
ENTROPY_RIDGE = 1e-14


def circle_points(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


def default_grid(settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """Unit-circle samples followed by interior samples on each disc radius"""
    angles = 2 * np.pi * (np.arange(settings.disc_points) + 0.5) / settings.disc_points
    interior = [r * np.exp(1j * angles) for r in settings.disc_radii]
    return np.concatenate([circle_points(settings.circle_points)] + interior)


def _interpolation(prob: ProblemData, F: RationalSystem, tol: float):
    if F.state_dim == 0:
        return operator_norm(prob.B @ F.delta - prob.Btilde), 0.0
    Xi = prob.B @ F.gamma
    Omega = stein_solve(prob.Z, F.alpha, Xi, tol=tol)
    stein_residual = operator_norm(Omega - prob.Z @ Omega @ F.alpha - Xi)
    residual = operator_norm(prob.B @ F.delta + prob.Z @ Omega @ F.beta - prob.Btilde)
    return residual, stein_residual


def interpolation_residual(prob: ProblemData, F: RationalSystem,
                           tol: float = DEFAULT_SETTINGS.stein_tol) -> float:
    """
    ||sum_k Z^k B F_k - Btilde|| without truncation: with Omega solving
    Omega - Z Omega alpha = B gamma the sum equals B delta + Z Omega beta.
    """
    residual, _ = _interpolation(prob, F, tol)
    return residual


def schur_margin(F: RationalSystem, grid: Iterable[complex]) -> float:
    """max over the grid of ||F(lambda)|| - 1"""
    return max(operator_norm(F.evaluate(lam)) for lam in grid) - 1.0


def spectral_factorization_residual(prob: ProblemData, pick: PickData, coeffs: CoefficientSystem,
                                    circle_points_count: int = DEFAULT_SETTINGS.circle_points) -> float:
    """max over the circle of ||(I - F0* F0) - U22^{-*} U22^{-1}||"""
    F0 = central_solution(prob, pick)
    inverse = upsilon22_inverse(coeffs, prob, pick)
    I = np.eye(prob.q)
    worst = 0.0
    for lam in circle_points(circle_points_count):
        F = F0.evaluate(lam)
        V = inverse.evaluate(lam)
        worst = max(worst, operator_norm(I - ct(F) @ F - ct(V) @ V))
    return worst


def entropy_central(pick: PickData, prob: ProblemData) -> np.ndarray:
    """(I + Btilde* Lambda^{-1} Btilde)^{-1}"""
    if not pick.is_strictly_positive:
        raise LambdaNotStrictlyPositive(pick.classification, pick.min_eigenvalue)
    Bt = prob.Btilde
    inner = np.eye(prob.q) + ct(Bt) @ spla.solve(pick.Lambda, Bt, assume_a="her")
    return hermitize(spla.inv(inner))


def toeplitz_section(F: RationalSystem, N: int) -> np.ndarray:
    """Block lower-triangular Toeplitz matrix [F_{i-j}] of N x N blocks"""
    coeffs = F.taylor(N)
    _, p, q = coeffs.shape
    offsets = np.subtract.outer(np.arange(N), np.arange(N))
    blocks = coeffs[np.clip(offsets, 0, None)] * (offsets >= 0)[:, :, None, None]
    return blocks.transpose(0, 2, 1, 3).reshape(N * p, N * q)


def entropy_section(F: RationalSystem, N: int) -> np.ndarray:
    """
    Entropy of the N-block section, an upper bound that decreases
    monotonically to the entropy of F as N grows.
    """
    T = toeplitz_section(F, N)
    q = F.delta.shape[1]
    norm = operator_norm(T)
    if norm < 1.0 - ENTROPY_MARGIN:
        defect = np.eye(N * q) - ct(T) @ T
        head = spla.solve(defect, np.eye(N * q, q), assume_a="her")[:q]
        return hermitize(spla.inv(head))
    # least-squares form of the same Schur complement; valid when ||T|| = 1
    logger.warning("section of order %d has norm %.12f; using the least-squares entropy form",
                   N, norm)
    b = T[:, :q]
    M = b @ ct(b) + np.eye(T.shape[0]) - T @ ct(T)
    ridge = ENTROPY_RIDGE * np.real(np.trace(M))
    h, *_ = spla.lstsq(M + ridge * np.eye(M.shape[0]), b)
    return hermitize(np.eye(q) - ct(b) @ h)


def entropy_of_solution(F: RationalSystem, truncation: int = DEFAULT_SETTINGS.entropy_start,
                        tol: float = DEFAULT_SETTINGS.entropy_tol,
                        cap: int = DEFAULT_SETTINGS.entropy_cap) -> np.ndarray:
    N = truncation
    previous = entropy_section(F, N)
    while True:
        if 2 * N > cap:
            raise NoConvergence(f"entropy sections did not settle below {tol:.1e} by order {N}")
        N *= 2
        current = entropy_section(F, N)
        change = operator_norm(current - previous)
        if change < tol:
            logger.debug("entropy settled at section order %d (change %.2e)", N, change)
            return current
        previous = current


def entropy_maximality_gap(solver: InterpolationSolver, rng: np.random.Generator, samples: int,
                           settings: Settings = DEFAULT_SETTINGS) -> Optional[float]:
    """
    Smallest eigenvalue of entropy(F_central) - entropy(F_X) over `samples`
    random Schur parameters X, alternating constant and one-state ones.
    None when no samples are requested or the solution is unique (e == 0).
    """
    e, q = solver.pair.e, solver.prob.q
    if e == 0 or samples < 1:
        return None
    central = entropy_central(solver.pick, solver.prob)
    worst = np.inf
    for k in range(samples):
        if k % 2 == 0:
            X = SchurParameter.constant(random_contraction(rng, e, q, rng.uniform(0.1, 0.9)))
        else:
            X = random_schur_system(rng, e, q, 1)
        entropy = entropy_of_solution(solver.solution(X), settings.entropy_start,
                                      settings.entropy_tol, settings.entropy_cap)
        worst = min(worst, min_hermitian_eigenvalue(central - entropy))
    logger.debug("entropy maximality over %d parameters: smallest gap eigenvalue %.3e", samples, worst)
    return float(worst)


@dataclass(frozen=True)
class SzegoResult:
    lhs: float
    rhs: float

    @property
    def relative_gap(self) -> float:
        return abs(self.lhs - self.rhs) / abs(self.lhs)


def szego_check(prob: ProblemData, pick: PickData, F_central: RationalSystem,
                quad_points: int = DEFAULT_SETTINGS.szego_nodes) -> SzegoResult:
    """det of the central entropy against exp of the mean of log det(I - F0* F0) on the circle"""
    lhs = float(np.real(np.linalg.det(entropy_central(pick, prob))))
    I = np.eye(prob.q)
    logdets = np.empty(quad_points)
    for k, lam in enumerate(circle_points(quad_points)):
        F = F_central.evaluate(lam)
        sign, logdet = np.linalg.slogdet(I - ct(F) @ F)
        if np.real(sign) <= 0 or not np.isfinite(logdet):
            raise QuadratureDegenerate(f"det(I - F*F) is not positive at node {k}")
        logdets[k] = logdet
    return SzegoResult(lhs=lhs, rhs=float(np.exp(np.mean(logdets))))


def j_identity_residual(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData,
                        pair: ComplementaryPair, lambdas: Iterable[complex]) -> float:
    """
    max over lambdas of
    ||U* J1 U - J2 + (1 - |lambda|^2) M* Lambda M||
    with M(lambda) = (I - lambda Z*)^{-1} [Lambda^{-1} P C* Q0, Z* Lambda^{-1} Btilde R0].
    """
    p, q, e = prob.p, prob.q, pair.e
    J1 = spla.block_diag(np.eye(p), -np.eye(q))
    J2 = spla.block_diag(np.eye(e), -np.eye(q))
    beta = coeffs.Bhat @ coeffs.scale
    worst = 0.0
    for lam in lambdas:
        U = upsilon_eval(coeffs, prob, pick, pair, lam).matrix()
        M = resolvent_solve(np.eye(prob.n) - lam * ct(prob.Z), beta)
        defect = (1.0 - abs(lam) ** 2) * (ct(M) @ pick.Lambda @ M)
        worst = max(worst, operator_norm(ct(U) @ J1 @ U - J2 + defect))
    return worst


def quotient_residual(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData,
                      pair: ComplementaryPair, lambdas: Iterable[complex]) -> float:
    """max ||F0(lambda) - U12(lambda) U22(lambda)^{-1}||"""
    F0 = central_solution(prob, pick)
    worst = 0.0
    for lam in lambdas:
        blocks = upsilon_eval(coeffs, prob, pick, pair, lam)
        quotient = spla.solve(blocks.u22.T, blocks.u12.T).T
        worst = max(worst, operator_norm(F0.evaluate(lam) - quotient))
    return worst


def inverse_product_residual(coeffs: CoefficientSystem, prob: ProblemData, pick: PickData,
                             pair: ComplementaryPair, lambdas: Iterable[complex]) -> float:
    """max ||U22(lambda) U22^{-1}(lambda) - I|| using the inverse realization"""
    inverse = upsilon22_inverse(coeffs, prob, pick)
    I = np.eye(prob.q)
    return max(operator_norm(upsilon_eval(coeffs, prob, pick, pair, lam).u22 @ inverse.evaluate(lam) - I)
               for lam in lambdas)


@dataclass
class VerificationReport:
    interpolation_residual: float
    schur_margin: float
    j_identity_residual: Optional[float] = None
    spectral_factorization_residual: Optional[float] = None
    entropy_matrix: Optional[np.ndarray] = None
    # smallest eigenvalue of entropy(central) - entropy(F_X) over random X
    entropy_gap: Optional[float] = None
    stein_residuals: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def checks(self) -> Dict[str, float]:
        values = {
            "interpolation_residual": self.interpolation_residual,
            "schur_margin": self.schur_margin,
            "j_identity_residual": self.j_identity_residual,
            "spectral_factorization_residual": self.spectral_factorization_residual,
        }
        if self.entropy_gap is not None:
            values["entropy_maximality_violation"] = max(0.0, -self.entropy_gap)
        return {k: v for k, v in values.items() if v is not None}

    def failures(self, tol: float) -> List[str]:
        return [name for name, value in self.checks().items() if not value <= tol]

    def passed(self, tol: float = DEFAULT_SETTINGS.tol) -> bool:
        return not self.failures(tol)

    def to_dict(self) -> dict:
        data = dict(self.checks())
        data["stein_residuals"] = dict(self.stein_residuals)
        if self.entropy_matrix is not None:
            data["entropy_matrix"] = encode_matrix(self.entropy_matrix)
        if self.entropy_gap is not None:
            data["entropy_gap"] = self.entropy_gap
        data["notes"] = list(self.notes)
        return data


def verify_solution(prob: ProblemData, F: RationalSystem,
                    settings: Settings = DEFAULT_SETTINGS,
                    solver: Optional[InterpolationSolver] = None,
                    with_entropy: bool = True,
                    rng: Optional[np.random.Generator] = None) -> VerificationReport:
    """
    Run every applicable check on the candidate solution F. With entropy on
    and a strictly positive Pick operator, settings.entropy_samples random
    parameters (drawn from rng, else from settings.seed) are checked against
    the central entropy.
    """
    solver = solver or InterpolationSolver(prob, settings)
    pick = solver.pick
    grid = default_grid(settings)

    residual, aux = _interpolation(prob, F, settings.stein_tol)
    report = VerificationReport(
        interpolation_residual=residual,
        schur_margin=schur_margin(F, grid),
        stein_residuals=dict(pick.residuals, interpolation=aux),
    )
    if spectral_radius(F.alpha) >= 1.0:
        report.notes.append("solution state matrix is not stable")

    if pick.is_strictly_positive:
        coeffs = solver.coeffs
        report.notes.extend(coeffs.notes)
        report.notes.append(f"E-indexed quantities are {BASIS_NOTE}")
        report.j_identity_residual = j_identity_residual(coeffs, prob, pick, solver.pair, grid)
        report.spectral_factorization_residual = spectral_factorization_residual(
            prob, pick, coeffs, settings.circle_points)
    else:
        report.notes.append(f"Pick operator is {pick.classification.value}; "
                            "coefficient checks skipped")

    if with_entropy:
        try:
            report.entropy_matrix = entropy_of_solution(
                F, settings.entropy_start, settings.entropy_tol, settings.entropy_cap)
        except NoConvergence as exc:
            logger.warning("entropy not computed: %s", exc)
            report.notes.append(f"entropy not converged: {exc}")
        if pick.is_strictly_positive and settings.entropy_samples > 0:
            rng = rng if rng is not None else np.random.default_rng(settings.seed)
            try:
                report.entropy_gap = entropy_maximality_gap(solver, rng, settings.entropy_samples,
                                                            settings)
            except NoConvergence as exc:
                logger.warning("entropy comparison skipped: %s", exc)
                report.notes.append(f"entropy comparison not converged: {exc}")
    logger.debug("verification: %s", report.checks())
    return report
