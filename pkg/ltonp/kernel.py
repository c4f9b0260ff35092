"""
Dense complex-matrix substrate.

Hermitian functional calculus, numerical null spaces, spectra and norms
with explicit tolerances. Everything here is a pure function of its
arguments; real input is promoted to complex.
"""
import logging

import numpy as np
import scipy.linalg as spla

from .errors import DimensionMismatch, EigenFailure, InvalidProblem, NotHermitian, NotPSD, ResolventSingular

logger = logging.getLogger(__name__)

EPS = np.finfo(np.float64).eps

# ||S @ S - M|| <= SQRT_RESIDUAL_CONSTANT * tol * ||M|| (plus rounding)
SQRT_RESIDUAL_CONSTANT = 2.0


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Promote `value` to a finite 2-D complex array"""
    arr = np.array(value, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise InvalidProblem(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidProblem(f"{name} has non-finite entries")
    return arr


def ct(M: np.ndarray) -> np.ndarray:
    """Conjugate transpose"""
    return M.conj().T


def hermitize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + ct(M))


def operator_norm(M: np.ndarray) -> float:
    """Largest singular value (0 for empty matrices)"""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def _require_square(M: np.ndarray, name: str = "matrix"):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")


def _check_hermitian(M: np.ndarray, tol: float) -> float:
    _require_square(M)
    scale = operator_norm(M)
    residual = operator_norm(M - ct(M))
    if residual > tol * scale:
        raise NotHermitian(f"symmetry residual {residual:.3e} exceeds {tol:.1e} * {scale:.3e}")
    return scale


def _eigh(M: np.ndarray):
    try:
        return spla.eigh(hermitize(M))
    except (spla.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc


def hermitian_sqrt(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """
    Non-negative square root via the Hermitian eigendecomposition.

    Eigenvalues in [-tol*||M||, 0) are clamped to zero; anything more
    negative raises NotPSD. The result satisfies
    ||S @ S - M|| <= SQRT_RESIDUAL_CONSTANT * tol * ||M|| up to rounding.
    """
    M = np.asarray(M, dtype=complex)
    scale = _check_hermitian(M, tol)
    if M.shape[0] == 0:
        return M.copy()
    w, V = _eigh(M)
    if w[0] < -tol * scale:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol:.1e} * {scale:.3e}")
    w = np.clip(w, 0.0, None)
    return hermitize((V * np.sqrt(w)) @ ct(V))


def hermitian_inv_sqrt(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Inverse of the square root of a strictly positive Hermitian matrix"""
    M = np.asarray(M, dtype=complex)
    scale = _check_hermitian(M, tol)
    if M.shape[0] == 0:
        return M.copy()
    w, V = _eigh(M)
    if w[0] <= tol * scale:
        raise NotPSD(f"eigenvalue {w[0]:.3e} not above {tol:.1e} * {scale:.3e}")
    return hermitize((V / np.sqrt(w)) @ ct(V))


def min_hermitian_eigenvalue(M: np.ndarray, tol: float = 1e-10) -> float:
    """Smallest eigenvalue of a (numerically) Hermitian matrix"""
    M = np.asarray(M, dtype=complex)
    _check_hermitian(M, tol)
    if M.shape[0] == 0:
        return float("inf")
    try:
        return float(spla.eigvalsh(hermitize(M))[0])
    except (spla.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc


def default_rank_tol(M: np.ndarray, smax: float) -> float:
    return max(M.shape) * EPS * smax


def numerical_rank(M: np.ndarray, rank_tol: float = None) -> int:
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0
    s = spla.svd(M, compute_uv=False)
    tol = default_rank_tol(M, s[0]) if rank_tol is None else rank_tol
    return int(np.sum(s > tol))


def null_space_isometry(M: np.ndarray, rank_tol: float = None) -> np.ndarray:
    """
    Orthonormal basis of the numerical null space of a k x m matrix.

    Returns phi (m x d) with phi* phi = I_d and M phi ~ 0, where
    d = m - numerical_rank(M). The default rank threshold is
    max(k, m) * eps * sigma_max. Any orthonormal basis is acceptable.
    """
    M = np.asarray(M, dtype=complex)
    m = M.shape[1]
    if M.shape[0] == 0 or m == 0:
        return np.eye(m, dtype=complex)
    U, s, Vh = spla.svd(M, full_matrices=True)
    tol = default_rank_tol(M, s[0]) if rank_tol is None else rank_tol
    rank = int(np.sum(s > tol))
    return ct(Vh[rank:, :])


def spectral_radius(M: np.ndarray) -> float:
    """max |eigenvalue| (0 for an empty matrix)"""
    M = np.asarray(M, dtype=complex)
    _require_square(M)
    if M.shape[0] == 0:
        return 0.0
    try:
        eigenvalues = spla.eigvals(M)
    except (spla.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc
    return float(np.max(np.abs(eigenvalues)))


def resolvent_solve(A: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve A x = rhs, treating A with reciprocal condition below EPS as singular"""
    A = np.asarray(A, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if A.shape[0] == 0:
        return np.zeros((0, rhs.shape[1]), dtype=complex)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(rhs))):
        raise ResolventSingular("matrix or right-hand side is not finite")
    getrf, gecon, getrs = spla.get_lapack_funcs(("getrf", "gecon", "getrs"), (A, rhs))
    lu, piv, info = getrf(A)
    if info > 0:
        raise ResolventSingular(f"diagonal entry {info} of the LU factor is exactly zero")
    rcond, _ = gecon(lu, np.linalg.norm(A, 1), norm="1")
    if rcond < EPS:
        raise ResolventSingular(f"reciprocal condition number {rcond:.3e} is below machine precision")
    x, info = getrs(lu, piv, rhs)
    if info != 0:
        raise ResolventSingular(f"LU back substitution failed (info {info})")
    return x
