"""Dense symmetric eigen/SVD helpers sized for the small matrices used here.

Thin contracts over LAPACK (numpy/scipy): symmetry is checked on the way in,
eigenvalues come back ascending, and every returned eigenvector has its last
nonzero component positive so golden outputs are deterministic.  The largest
singular value is taken from the eigendecomposition of M^T M, which is
accurate enough here because only the (well separated) top value is consumed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigenError

_SYM_RTOL = 1e-12
_SIGN_RTOL = 1e-12


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix given by its diagonal and offdiagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or offdiag.shape != (max(diag.shape[0] - 1, 0),):
            raise ValueError("offdiag must be one entry shorter than diag")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip v so its last component of non-negligible size is positive."""
    top = np.max(np.abs(v)) if v.size else 0.0
    if top == 0.0:
        return v
    idx = np.nonzero(np.abs(v) > _SIGN_RTOL * top)[0]
    if idx.size and v[idx[-1]] < 0:
        return -v
    return v


def _check_symmetric(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise EigenError(f"{name} must be a square matrix")
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.T) > _SYM_RTOL * scale:
        raise EigenError(f"{name} is not symmetric")
    return 0.5 * (m + m.T)


def tridiag_eigen(t: SymTridiag):
    """Eigenvalues (ascending) and first components of the unit eigenvectors."""
    try:
        vals, vecs = scipy.linalg.eigh_tridiagonal(t.diag, t.offdiag)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigenError(f"tridiagonal eigensolver did not converge: {exc}") from exc
    return vals, vecs[0, :].copy()


def sym_eigen(m: np.ndarray):
    """Eigendecomposition of a symmetric matrix: ascending values, orthonormal vectors."""
    sym = _check_symmetric(m, "matrix")
    try:
        vals, vecs = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"eigensolver did not converge: {exc}") from exc
    for j in range(vecs.shape[1]):
        vecs[:, j] = _fix_sign(vecs[:, j])
    return vals, vecs


def svd_largest(m: np.ndarray):
    """Greatest singular value of m and the corresponding right singular vector."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    gram = m.T @ m
    vals, vecs = sym_eigen(gram)
    sigma = float(np.sqrt(max(vals[-1], 0.0)))
    vec = vecs[:, -1]
    if sigma == 0.0:
        warnings.warn("svd_largest: zero matrix, returning an arbitrary unit vector")
        vec = np.zeros(m.shape[1])
        vec[-1] = 1.0
    return sigma, vec


def gen_sym_eigen_max(a: np.ndarray, b: np.ndarray):
    """Largest theta with A v = theta B v for symmetric A and positive definite B.

    Reduction through the Cholesky factor B = L L^T; the returned vector is
    normalized so that v^T B v = 1.
    """
    a = _check_symmetric(a, "A")
    b = _check_symmetric(b, "B")
    if a.shape != b.shape:
        raise EigenError("A and B must have equal shapes")
    try:
        chol = np.linalg.cholesky(b)
    except np.linalg.LinAlgError as exc:
        raise EigenError("B not positive definite") from exc
    half = scipy.linalg.solve_triangular(chol, a, lower=True)
    reduced = scipy.linalg.solve_triangular(chol, half.T, lower=True).T
    vals, vecs = sym_eigen(0.5 * (reduced + reduced.T))
    theta = float(vals[-1])
    vec = scipy.linalg.solve_triangular(chol.T, vecs[:, -1], lower=False)
    return theta, _fix_sign(vec)
