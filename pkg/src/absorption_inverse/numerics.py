"""Dense linear-algebra kernels shared by the rest of the package."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NoConvergence, SingularMatrix

PIVOT_RTOL = 1e-13


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


def _as_matrix(A, name="A"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise ValueError(f"{name} has non-finite entries")
    return A


def lu_solve(A, B):
    """Solve ``A X = B`` by LU with partial pivoting.

    Raises
    ------
    SingularMatrix
        When a pivot is smaller than ``1e-13 * ||A||_inf``.
    """
    A = _as_matrix(A)
    B = np.asarray(B, dtype=float)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got {A.shape}")
    vector = B.ndim == 1
    if vector:
        B = B[:, np.newaxis]
    norm = np.abs(A).sum(axis=1).max() if A.size else 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if norm == 0 or pivots.min() < PIVOT_RTOL * norm:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below {PIVOT_RTOL:g} * ||A||_inf = {norm:.3e}")
    X = scipy.linalg.lu_solve((lu, piv), B, check_finite=False)
    return X[:, 0] if vector else X


def invert(A):
    A = _as_matrix(A)
    return lu_solve(A, np.eye(A.shape[0]))


def pseudoinverse_rank_deficient_1(L, u, v):
    """Moore-Penrose inverse of a rank ``n-1`` matrix via kernel bordering.

    ``u`` spans the right kernel (``L u = 0``) and ``v`` the left kernel
    (``v^T L = 0``).  The bordered matrix ``L + c u v^T`` is nonsingular
    and projecting its inverse off both kernels yields ``L^+``.
    """
    L = _as_matrix(L, "L")
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("kernel vectors must be nonzero")
    n = L.shape[0]
    c = np.abs(L).sum(axis=1).max() / (nu * nv)
    if c == 0:
        raise SingularMatrix("L is zero")
    B_inv = invert(L + c * np.outer(u, v))
    Pu = np.eye(n) - np.outer(u, u) / nu**2
    Pv = np.eye(n) - np.outer(v, v) / nv**2
    return Pu @ B_inv @ Pv


def _power_iterate(S, x, tol, max_iter):
    """Power iteration on symmetric ``S + sigma I``; returns (value, vector, residual, ok)."""
    n = S.shape[0]
    sigma = np.abs(S).sum(axis=1).max()
    shifted = S + sigma * np.eye(n)
    x = x / np.linalg.norm(x)
    residual = np.inf
    for _ in range(max_iter):
        Sx = S @ x
        lam = x @ Sx
        residual = np.linalg.norm(Sx - lam * x)
        if residual <= tol:
            return lam, x, residual, True
        y = shifted @ x
        ny = np.linalg.norm(y)
        if ny == 0:
            # S = -sigma I on this vector; it is already an eigenvector
            return lam, x, residual, residual <= tol
        x = y / ny
    return lam, x, residual, False


def symmetric_leading_eigpair(S, tol=1e-10, max_iter=100_000, seed=0) -> EigenPair:
    """Eigenpair of the algebraically largest eigenvalue of a symmetric matrix.

    Power iteration on ``S + sigma I`` with ``sigma = ||S||_inf`` so the
    target eigenvalue dominates in magnitude.  The run starts from the
    normalised all-ones vector; a second run from a random start (drawn
    from ``seed``) guards against a start vector orthogonal to the target,
    and the larger of the two converged eigenvalues is returned.

    Raises
    ------
    NoConvergence
        If neither run reaches residual ``tol`` within ``max_iter`` steps.
    """
    S = _as_matrix(S, "S")
    if S.shape[0] != S.shape[1]:
        raise ValueError("S must be square")
    scale = max(np.abs(S).max(), 1e-300)
    if np.abs(S - S.T).max() > 1e-10 * scale:
        raise ValueError("S is not symmetric")
    S = 0.5 * (S + S.T)
    n = S.shape[0]
    rng = np.random.default_rng(seed)
    runs = [_power_iterate(S, np.ones(n), tol, max_iter),
            _power_iterate(S, rng.standard_normal(n), tol, max_iter)]
    good = [r for r in runs if r[3]]
    if not good:
        raise NoConvergence(
            f"power iteration did not converge in {max_iter} iterations",
            residual=min(r[2] for r in runs))
    lam, x, _, _ = max(good, key=lambda r: r[0])
    return EigenPair(float(lam), x / np.linalg.norm(x))


def spectral_radius(M, tol=1e-10, max_iter=20_000, seed=0) -> float:
    """Largest eigenvalue modulus by power iteration.

    The estimate is ``||M x_k||`` for the normalised iterate ``x_k``; it is
    accepted once consecutive estimates agree to relative ``tol``.  One
    random restart is tried on stagnation.

    Raises
    ------
    NoConvergence
        Typically for a complex or defective dominant eigenvalue, where the
        norm ratio oscillates instead of settling.
    """
    M = _as_matrix(M, "M")
    n = M.shape[0]
    rng = np.random.default_rng(seed)
    starts = [np.ones(n), rng.standard_normal(n)]
    last_change = np.inf
    for x in starts:
        x = x / np.linalg.norm(x)
        est = np.inf
        settled = 0
        for _ in range(max_iter):
            y = M @ x
            ny = np.linalg.norm(y)
            if ny <= 1e-300:
                return 0.0
            last_change = abs(ny - est)
            if last_change <= tol * ny:
                settled += 1
                # a period-2 oscillation can match once by accident
                if settled >= 3:
                    return float(ny)
            else:
                settled = 0
            est = ny
            x = y / ny
    raise NoConvergence("spectral radius estimate did not settle", residual=last_change)
