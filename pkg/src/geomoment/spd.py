"""Distances and linear algebra on symmetric positive-definite matrices.

Conventions used throughout:

* the affine-invariant distance is ``sqrt(0.5 * sum_i log^2 lambda_i)``
  with ``lambda_i`` the eigenvalues of ``P1^{-1} P2`` (the 1/2 factor is
  part of the metric normalization, not optional);
* eigenvalues of ``P1^{-1} P2`` are always obtained from the symmetric
  pencil form ``L^{-1} P2 L^{-T}`` with ``P1 = L L^T``, never from the
  nonsymmetric product.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .errors import ConvergenceFailure, NotPositiveDefinite, NotSymmetric

SYM_RTOL = 1e-12  # relative asymmetry allowed before a matrix is rejected


@dataclass(frozen=True)
class SpdMatrix:
    """A validated symmetric positive-definite matrix."""

    dim: int
    entries: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def as_matrix(P):
    """Plain float ndarray view of an SpdMatrix or array-like."""
    if isinstance(P, SpdMatrix):
        return P.entries
    return np.asarray(P, dtype=float)


def sym(M):
    """Exactly symmetric part (M + M^T) / 2."""
    M = as_matrix(M)
    return 0.5 * (M + M.T)


def check_symmetric(M, rtol=SYM_RTOL):
    """Return M as ndarray, raising NotSymmetric beyond the tolerance."""
    M = as_matrix(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {M.shape}")
    scale = np.max(np.abs(M))
    asym = np.max(np.abs(M - M.T))
    if asym > rtol * max(scale, np.finfo(float).tiny):
        raise NotSymmetric(f"asymmetry {asym:.3e} exceeds {rtol:.1e} * {scale:.3e}")
    return M


def validate_spd(M, spd_tol=None):
    """Check that M is SPD and wrap it.

    Symmetry is enforced by averaging (M + M^T)/2 before the eigenvalue
    check. When spd_tol is None it defaults to 1e-10 * trace(M)/dim,
    separating genuine rank deficiency from double-precision noise.
    """
    M = check_symmetric(M)
    M = sym(M)
    n = M.shape[0]
    if spd_tol is None:
        scale = np.trace(M) / n
        spd_tol = 1e-10 * (scale if scale > 0 else 1.0)
    lam_min = float(eigvals_sym(M)[0])
    if not lam_min > spd_tol:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {lam_min:.6e} not above tolerance {spd_tol:.1e}",
            lambda_min=lam_min,
        )
    return SpdMatrix(dim=n, entries=M)


def eigvals_sym(M):
    """All eigenvalues of a symmetric matrix, ascending.

    LAPACK's symmetric solver (tridiagonalization plus implicit QR) with
    its internal iteration cap; non-convergence surfaces as
    ConvergenceFailure.
    """
    M = sym(M)
    try:
        return np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def eigh_sym(M):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix."""
    M = sym(M)
    try:
        return np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def matrix_log(P):
    """Matrix logarithm of an SPD matrix via eigendecomposition."""
    P = as_matrix(P)
    lam, Q = eigh_sym(P)
    if lam[0] <= 0:
        raise NotPositiveDefinite(
            f"matrix log needs positive eigenvalues, got {lam[0]:.6e}",
            lambda_min=float(lam[0]),
        )
    return sym((Q * np.log(lam)) @ Q.T)


def _cholesky(P):
    try:
        return np.linalg.cholesky(as_matrix(P))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky failed: {exc}") from exc


def pencil_eigvals(P1, P2):
    """Eigenvalues of P1^{-1} P2 from the symmetric pencil form, ascending."""
    L = _cholesky(P1)
    W = solve_triangular(L, as_matrix(P2), lower=True)
    M = solve_triangular(L, W.T, lower=True)
    return eigvals_sym(M)


def pencil_eigh(P1, P2):
    """Generalized eigenpairs of P2 v = lambda P1 v.

    Returns (lam, V) with lam ascending and columns of V normalized so
    that V^T P1 V = I.
    """
    L = _cholesky(P1)
    W = solve_triangular(L, as_matrix(P2), lower=True)
    M = solve_triangular(L, W.T, lower=True)
    lam, Y = eigh_sym(M)
    V = solve_triangular(L, Y, lower=True, trans="T")
    return lam, V


def dist_airm(P1, P2):
    """Affine-invariant Riemannian distance sqrt(0.5 * sum log^2 lambda_i(P1^{-1}P2))."""
    lam = pencil_eigvals(P1, P2)
    if lam[0] <= 0:
        raise NotPositiveDefinite(
            f"pencil eigenvalue {lam[0]:.6e} <= 0", lambda_min=float(lam[0])
        )
    return float(np.sqrt(0.5 * np.sum(np.log(lam) ** 2)))


def dist_hilbert(P1, P2):
    """Hilbert projective distance log(lambda_max / lambda_min) of P1^{-1}P2."""
    lam = pencil_eigvals(P1, P2)
    if lam[0] <= 0:
        raise NotPositiveDefinite(
            f"pencil eigenvalue {lam[0]:.6e} <= 0", lambda_min=float(lam[0])
        )
    return float(np.log(lam[-1]) - np.log(lam[0]))


def dist_logeuclid(P1, P2):
    """Frobenius distance between matrix logarithms."""
    return float(np.linalg.norm(matrix_log(P1) - matrix_log(P2), "fro"))


def inner_affine(P, V1, V2):
    """Affine-invariant metric tr(P^{-1} V1 P^{-1} V2) at base point P."""
    V1 = check_symmetric(V1)
    V2 = check_symmetric(V2)
    try:
        c = cho_factor(as_matrix(P), lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky failed: {exc}") from exc
    X1 = cho_solve(c, V1)
    X2 = cho_solve(c, V2)
    return float(np.sum(X1 * X2.T))
