"""
State-space carriers.

A RationalSystem {alpha, beta, gamma, delta} stands for the transfer
function G(lambda) = delta + lambda * gamma (I - lambda alpha)^{-1} beta.
Solutions F, Schur parameters X, the coefficient function Upsilon and the
inverse of its (2,2) block are all carried this way.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
import scipy.linalg as spla

from .errors import DimensionMismatch, FeedbackSingular, ParameterNotContractive
from .kernel import as_matrix, operator_norm, resolvent_solve, spectral_radius
from .settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)


def _block(value, rows: int, cols: int, name: str) -> np.ndarray:
    if value is None:
        return np.zeros((rows, cols), dtype=complex)
    arr = np.asarray(value, dtype=complex)
    if arr.size == 0:
        return np.zeros((rows, cols), dtype=complex)
    arr = as_matrix(arr, name)
    if arr.shape != (rows, cols):
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {(rows, cols)}")
    return arr


@dataclass(frozen=True, eq=False)
class RationalSystem:
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        delta = as_matrix(self.delta, "delta")
        alpha = np.asarray(self.alpha, dtype=complex)
        m = alpha.shape[0] if alpha.size else 0
        y, u = delta.shape
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "alpha", _block(self.alpha, m, m, "alpha"))
        object.__setattr__(self, "beta", _block(self.beta, m, u, "beta"))
        object.__setattr__(self, "gamma", _block(self.gamma, y, m, "gamma"))

    @classmethod
    def constant(cls, value) -> "RationalSystem":
        """A system without state: G(lambda) = value"""
        delta = as_matrix(value, "delta")
        y, u = delta.shape
        return cls(alpha=np.zeros((0, 0)), beta=np.zeros((0, u)),
                   gamma=np.zeros((y, 0)), delta=delta)

    @property
    def dims(self) -> Tuple[int, int, int]:
        """(state, input, output) dimensions"""
        return self.alpha.shape[0], self.delta.shape[1], self.delta.shape[0]

    @property
    def state_dim(self) -> int:
        return self.alpha.shape[0]

    @property
    def spectral_radius_alpha(self) -> float:
        return spectral_radius(self.alpha)

    def system_matrix(self) -> np.ndarray:
        """[[delta, gamma], [beta, alpha]]"""
        return np.block([[self.delta, self.gamma], [self.beta, self.alpha]])

    def is_contractive(self, slack: float = DEFAULT_SETTINGS.contraction_slack) -> bool:
        return operator_norm(self.system_matrix()) <= 1.0 + slack

    @property
    def contractive_system_matrix(self) -> bool:
        return self.is_contractive()

    def evaluate(self, lam: complex) -> np.ndarray:
        if self.state_dim == 0:
            return self.delta.copy()
        resolvent = np.eye(self.state_dim, dtype=complex) - lam * self.alpha
        return self.delta + lam * (self.gamma @ resolvent_solve(resolvent, self.beta))

    def evaluate_many(self, lams: Iterable[complex]) -> np.ndarray:
        """Stack of evaluations with shape (len(lams), output, input)"""
        values = [self.evaluate(lam) for lam in lams]
        if not values:
            return np.zeros((0,) + self.delta.shape, dtype=complex)
        return np.stack(values)

    def taylor(self, count: int) -> np.ndarray:
        """Coefficients F_0 = delta, F_k = gamma alpha^{k-1} beta, shape (count, output, input)"""
        coeffs = np.zeros((count,) + self.delta.shape, dtype=complex)
        if count == 0:
            return coeffs
        coeffs[0] = self.delta
        if self.state_dim == 0:
            return coeffs
        column = self.beta
        for k in range(1, count):
            coeffs[k] = self.gamma @ column
            column = self.alpha @ column
        return coeffs

    def cascade(self, other: "RationalSystem") -> "RationalSystem":
        """Realization of self(lambda) @ other(lambda); other acts first"""
        if self.delta.shape[1] != other.delta.shape[0]:
            raise DimensionMismatch(
                f"cannot cascade {self.delta.shape} after {other.delta.shape}")
        m1, m2 = self.state_dim, other.state_dim
        alpha = np.block([
            [self.alpha, self.beta @ other.gamma],
            [np.zeros((m2, m1), dtype=complex), other.alpha],
        ])
        beta = np.vstack([self.beta @ other.delta, other.beta])
        gamma = np.hstack([self.gamma, self.delta @ other.gamma])
        return RationalSystem(alpha=alpha, beta=beta, gamma=gamma, delta=self.delta @ other.delta)

    def right_quotient(self, rows: int) -> "RationalSystem":
        """
        Realization of N1 N2^{-1} where N1 and N2 are the first `rows`
        output rows of self and the rest. N2(0) must be square and
        invertible; the result shares the state of self.
        """
        y, u = self.delta.shape
        if y - rows != u:
            raise DimensionMismatch(f"lower block has {y - rows} rows, expected {u}")
        d1, d2 = self.delta[:rows], self.delta[rows:]
        c1, c2 = self.gamma[:rows], self.gamma[rows:]
        try:
            lu = spla.lu_factor(d2, check_finite=True)
        except (spla.LinAlgError, ValueError) as exc:
            raise FeedbackSingular(str(exc)) from exc
        if np.min(np.abs(np.diag(lu[0]))) <= DEFAULT_SETTINGS.stein_tol * max(1.0, operator_norm(d2)):
            raise FeedbackSingular("feedthrough of the denominator block is singular")
        d2_inv = spla.lu_solve(lu, np.eye(u, dtype=complex))
        beta = self.beta @ d2_inv
        return RationalSystem(alpha=self.alpha - beta @ c2, beta=beta,
                              gamma=c1 - d1 @ d2_inv @ c2, delta=d1 @ d2_inv)


@dataclass(frozen=True, eq=False)
class SchurParameter:
    """Free parameter X of the solution set, e <- q, contractive on the disc"""
    system: RationalSystem
    kind: str

    @classmethod
    def constant(cls, value, slack: float = DEFAULT_SETTINGS.contraction_slack) -> "SchurParameter":
        X0 = as_matrix(value, "X0")
        norm = operator_norm(X0)
        if norm > 1.0 + slack:
            raise ParameterNotContractive(f"constant parameter has norm {norm:.6f} > 1")
        return cls(system=RationalSystem.constant(X0), kind="constant")

    @classmethod
    def dynamic(cls, system: RationalSystem,
                slack: float = DEFAULT_SETTINGS.contraction_slack) -> "SchurParameter":
        norm = operator_norm(system.system_matrix())
        if norm > 1.0 + slack:
            raise ParameterNotContractive(f"system matrix has norm {norm:.6f} > 1")
        return cls(system=system, kind="dynamic")

    @classmethod
    def zero(cls, e: int, q: int) -> "SchurParameter":
        return cls.constant(np.zeros((e, q), dtype=complex))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.system.delta.shape

    def evaluate(self, lam: complex) -> np.ndarray:
        return self.system.evaluate(lam)
