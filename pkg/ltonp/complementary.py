"""
Complementary pair (C, D) and the inner function Theta.

The pair completes {Z, B, P} so that

    [D C; B Z] diag(I, P) [D* B*; C* Z*] = diag(I, P)
    [D* B*; C* Z*] diag(I, P^-1) [D C; B Z] = diag(I, P^-1)

It is read off an orthonormal basis phi = [phi1; phi2] of the null space
of [B, Z P^(1/2)]: D = phi1*, C = phi2* P^(-1/2). Any other admissible
pair is (U C, U D) for a unitary U, so nothing downstream depends on the
basis chosen for E.
"""
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as spla

from .errors import PNotStrictlyPositive
from .kernel import ct, hermitian_inv_sqrt, hermitian_sqrt, null_space_isometry, operator_norm
from .problem import PickData, ProblemData
from .settings import DEFAULT_SETTINGS
from .systems import RationalSystem

logger = logging.getLogger(__name__)

BASIS_NOTE = "basis-dependent up to left unitary"


@dataclass(frozen=True)
class PairResiduals:
    semiunit1: float
    semiunit2: float
    dd_cpc: float
    bd_zpc: float
    dd_bpb: float
    dc_bpz: float
    cc_zpz: float

    def max(self) -> float:
        return max(asdict(self).values())

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class ComplementaryPair:
    C: np.ndarray
    D: np.ndarray
    residuals: PairResiduals = field(default=None)

    @property
    def e(self) -> int:
        return self.D.shape[0]

    def rotated(self, U: np.ndarray) -> "ComplementaryPair":
        """The pair (U C, U D) for an e x e unitary U"""
        return ComplementaryPair(C=U @ self.C, D=U @ self.D, residuals=self.residuals)


def complementary_pair(prob: ProblemData, pick: PickData,
                       tol: float = DEFAULT_SETTINGS.tol) -> ComplementaryPair:
    if not pick.P_strictly_positive:
        raise PNotStrictlyPositive(
            f"smallest eigenvalue of P is {np.min(np.linalg.eigvalsh(pick.P)):.3e}")
    P_half = hermitian_sqrt(pick.P)
    P_inv_half = hermitian_inv_sqrt(pick.P)
    phi = null_space_isometry(np.hstack([prob.B, prob.Z @ P_half]))
    D = ct(phi[:prob.p])
    C = ct(phi[prob.p:]) @ P_inv_half

    pair = ComplementaryPair(C=C, D=D)
    residuals = verify_pair(pair, prob, pick)
    if max(residuals.semiunit1, residuals.semiunit2) > tol:
        logger.warning("complementary pair identities hold only to %.2e",
                       max(residuals.semiunit1, residuals.semiunit2))
    logger.debug("complementary pair: e=%d, residual %.2e", pair.e, residuals.max())
    return ComplementaryPair(C=C, D=D, residuals=residuals)


def inner_theta(pair: ComplementaryPair, prob: ProblemData) -> RationalSystem:
    """Theta(lambda) = D* + lambda B* (I - lambda Z*)^{-1} C*"""
    return RationalSystem(alpha=ct(prob.Z), beta=ct(pair.C), gamma=ct(prob.B), delta=ct(pair.D))


def verify_pair(pair: ComplementaryPair, prob: ProblemData, pick: PickData) -> PairResiduals:
    Z, B, P = prob.Z, prob.B, pick.P
    C, D = pair.C, pair.D
    e, n, p = pair.e, prob.n, prob.p
    P_inv = spla.solve(P, np.eye(n, dtype=complex), assume_a="her")

    top = np.block([[D, C], [B, Z]])
    lhs1 = top @ spla.block_diag(np.eye(p), P) @ ct(top)
    lhs2 = ct(top) @ spla.block_diag(np.eye(e), P_inv) @ top

    return PairResiduals(
        semiunit1=operator_norm(lhs1 - spla.block_diag(np.eye(e), P)),
        semiunit2=operator_norm(lhs2 - spla.block_diag(np.eye(p), P_inv)),
        dd_cpc=operator_norm(D @ ct(D) + C @ P @ ct(C) - np.eye(e)),
        bd_zpc=operator_norm(B @ ct(D) + Z @ P @ ct(C)),
        dd_bpb=operator_norm(ct(D) @ D + ct(B) @ P_inv @ B - np.eye(p)),
        dc_bpz=operator_norm(ct(D) @ C + ct(B) @ P_inv @ Z),
        cc_zpz=operator_norm(ct(C) @ C + ct(Z) @ P_inv @ Z - P_inv),
    )
