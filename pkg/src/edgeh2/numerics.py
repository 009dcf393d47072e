"""Dense linear-algebra kernel: solves, the Lyapunov equation, rank-one inverse updates.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.
"""
import warnings

import numpy as np
import scipy.linalg

from .errors import DegenerateUpdate, SingularMatrix

PIVOT_TOL = 1e-12
SMW_TOL = 1e-12


def as_matrix(a):
    """Coerce ``a`` to a finite 2-D float array."""
    m = np.array(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _lu_permutation(piv):
    perm = np.arange(len(piv))
    for i, p in enumerate(piv):
        perm[i], perm[p] = perm[p], perm[i]
    return perm


def solve_linear(A, B):
    """Solve ``A X = B`` by LU with partial pivoting.

    Raises SingularMatrix when a pivot falls below ``1e-12`` times the
    max-abs scale of the original row it came from.
    """
    A = as_matrix(A)
    B = np.asarray(B, dtype=float)
    vector = B.ndim == 1
    B = as_matrix(B)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"A must be square, got {A.shape}")
    if B.shape[0] != n:
        raise ValueError(f"B has {B.shape[0]} rows, expected {n}")
    if n == 0:
        return np.zeros((0, B.shape[1]))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    row_scale = np.max(np.abs(A), axis=1)[_lu_permutation(piv)]
    pivots = np.abs(np.diag(lu))
    bad = np.nonzero(pivots <= PIVOT_TOL * row_scale)[0]
    if bad.size or np.any(row_scale == 0.0):
        k = int(bad[0]) if bad.size else int(np.argmin(row_scale))
        raise SingularMatrix(f"pivot {k} is {pivots[k]:.3e} (row scale {row_scale[k]:.3e})")
    X = scipy.linalg.lu_solve((lu, piv), B, check_finite=False)
    return X[:, 0] if vector else X


def inverse(A):
    A = as_matrix(A)
    return solve_linear(A, np.eye(A.shape[0]))


def lyapunov_solve(A, Q):
    """Solve ``A X + X A^T + Q = 0`` through the Kronecker-vectorized system.

    The result is symmetrized. Cost is O(k^6), intended for k up to ~30.
    A non-Hurwitz ``A`` with a zero eigenvalue pair surfaces as SingularMatrix.
    """
    A = as_matrix(A)
    Q = as_matrix(Q)
    k = A.shape[0]
    if A.shape != (k, k) or Q.shape != (k, k):
        raise ValueError(f"shape mismatch: A {A.shape}, Q {Q.shape}")
    if k == 0:
        return np.zeros((0, 0))
    eye = np.eye(k)
    K = np.kron(A, eye) + np.kron(eye, A)
    x = solve_linear(K, -Q.reshape(-1))
    X = x.reshape(k, k)
    return 0.5 * (X + X.T)


def lyapunov_residual(A, X, Q):
    """Relative residual ``||A X + X A^T + Q|| / ||Q||`` (Frobenius)."""
    R = A @ X + X @ A.T + Q
    scale = np.linalg.norm(Q)
    return float(np.linalg.norm(R) / scale) if scale > 0 else float(np.linalg.norm(R))


def smw_update_inverse(M_inv, u, c):
    """Return ``(M + c u u^T)^{-1}`` given ``M^{-1}`` (Sherman-Morrison)."""
    M_inv = as_matrix(M_inv)
    u = np.asarray(u, dtype=float).reshape(-1)
    if M_inv.shape != (u.size, u.size):
        raise ValueError(f"u has length {u.size}, M_inv is {M_inv.shape}")
    Mu = M_inv @ u
    uM = u @ M_inv
    denom = 1.0 + c * float(u @ Mu)
    if abs(denom) < SMW_TOL:
        raise DegenerateUpdate(f"denominator 1 + c u^T M^-1 u = {denom:.3e}")
    return M_inv - (c / denom) * np.outer(Mu, uM)
