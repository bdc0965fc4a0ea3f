"""Dense real linear algebra: SVD, pseudo-inverse and a few checked products.

Matrices are plain 2-D ``float64`` numpy arrays. :func:`as_matrix` is the single
gate that validates shape and finiteness; everything else calls it first.

The SVD is a one-sided (Hestenes) Jacobi method run on the transposed triangular
factor of a column-pivoted QR decomposition. Jacobi is slower than LAPACK's
divide-and-conquer but computes small singular values to high relative
accuracy, and the smallest singular value is what every bound in this package
depends on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._jacobi import jacobi_sweeps
from .errors import DimensionError, SvdConvergenceError

JACOBI_TOL = 1e-12
MAX_SWEEPS = 60
RANK_TOL = 1e-12


def as_matrix(m, *, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite, non-empty 2-D float64 array."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and column, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """``M = u @ diag(sigma) @ v.T`` with ``sigma`` sorted descending.

    ``u`` is ``rows x k`` (thin, ``k = min(rows, cols)``) unless the full
    factorisation was requested, in which case it is ``rows x rows``; ``v`` is
    ``cols x k`` or ``cols x cols`` likewise.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for field in ("u", "sigma", "v"):
            object.__setattr__(self, field, _frozen(getattr(self, field)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape[0], self.v.shape[0]

    @property
    def sigma_max(self) -> float:
        return float(self.sigma[0])

    @property
    def sigma_min(self) -> float:
        return float(self.sigma[-1])

    def reconstruct(self) -> np.ndarray:
        k = self.sigma.size
        return (self.u[:, :k] * self.sigma) @ self.v[:, :k].T


def _complete_basis(basis: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Replace the columns not flagged ``good`` with an orthonormal completion."""
    n, k = basis.shape
    kept = basis[:, good]
    q, _ = np.linalg.qr(np.hstack([kept, np.eye(n)]), mode="reduced")
    # q spans R^n; its first columns reproduce ``kept`` up to sign
    q = q[:, kept.shape[1]:]
    out = basis.copy()
    out[:, ~good] = q[:, : int((~good).sum())]
    return out


def _complete_square(u: np.ndarray) -> np.ndarray:
    n, k = u.shape
    if k == n:
        return u
    q, _ = np.linalg.qr(np.hstack([u, np.eye(n)]), mode="reduced")
    return np.hstack([u, q[:, k:n]])


def _jacobi_tall(a: np.ndarray, compute_uv: bool):
    """Jacobi SVD of a tall or square ``a`` (rows >= cols).

    With ``A P = Q R`` and Jacobi applied to the columns of ``R^T``
    (``R^T W = Y``), ``A = (Q W) diag(|y_j|) (P Y/|y_j|)^T``.
    """
    s, t = a.shape
    q, r, piv = scipy.linalg.qr(a, mode="economic", pivoting=True)
    # rows of R are the columns of R^T
    work = np.ascontiguousarray(r)
    acc = np.eye(t) if compute_uv else np.empty((0, 0))
    sweeps, residual = jacobi_sweeps(work, acc, compute_uv, JACOBI_TOL, MAX_SWEEPS)
    if sweeps < 0:
        raise SvdConvergenceError(MAX_SWEEPS, residual)
    sigma = np.sqrt(np.einsum("ij,ij->i", work, work))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    if not compute_uv:
        return None, sigma, None

    u = q @ acc.T[:, order]
    y = work[order].T
    floor = max(sigma[0], np.finfo(float).tiny) * t * np.finfo(float).eps
    good = sigma > floor
    ytilde = np.zeros_like(y)
    ytilde[:, good] = y[:, good] / sigma[good]
    if not good.all():
        ytilde = _complete_basis(ytilde, good)
    v = np.empty_like(ytilde)
    v[piv, :] = ytilde
    return u, sigma, v


def _fix_signs(u: np.ndarray, v: np.ndarray):
    k = v.shape[1]
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[idx, np.arange(k)] < 0, -1.0, 1.0)
    return u * signs, v * signs


def svd(m, *, full_matrices: bool = False) -> SvdFactors:
    """Singular value decomposition by preconditioned one-sided Jacobi.

    The largest-magnitude entry of every right singular vector is made
    non-negative, so repeated calls give identical factors.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows >= cols:
        u, sigma, v = _jacobi_tall(a, True)
        u, v = _fix_signs(u, v)
    else:
        v, sigma, u = _jacobi_tall(a.T, True)
        u, v = _fix_signs(u, v)
    if full_matrices:
        u = _complete_square(u)
        v = _complete_square(v)
    return SvdFactors(u=u, sigma=sigma, v=v)


def singular_values(m) -> np.ndarray:
    """Singular values only, descending. Skips the rotation bookkeeping."""
    a = as_matrix(m)
    if a.shape[0] < a.shape[1]:
        a = a.T
    return _jacobi_tall(a, False)[1]


def sigma_extreme(m) -> tuple[float, float]:
    """``(sigma_1, sigma_min(rows, cols))``."""
    s = singular_values(m)
    return float(s[0]), float(s[-1])


def pseudo_inverse(m, *, factors: SvdFactors | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse ``V diag(1/sigma) U^T``.

    Singular values at or below ``1e-12 * sigma_1`` are treated as zero.
    Pass precomputed ``factors`` to skip the decomposition.
    """
    f = factors if factors is not None else svd(m)
    k = f.sigma.size
    cutoff = RANK_TOL * f.sigma[0]
    inv = np.zeros(k)
    nz = f.sigma > cutoff
    inv[nz] = 1.0 / f.sigma[nz]
    return (f.v[:, :k] * inv) @ f.u[:, :k].T


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, name="a")
    b = as_matrix(b, name="b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def matvec(a, x) -> np.ndarray:
    a = as_matrix(a, name="a")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != a.shape[1]:
        raise DimensionError(f"cannot multiply {a.shape} by vector of shape {x.shape}")
    return a @ x


def is_orthogonal(q, tol: float = 1e-10) -> bool:
    """True when ``q^T q`` is the identity to ``tol`` in max norm."""
    q = as_matrix(q)
    return bool(np.max(np.abs(q.T @ q - np.eye(q.shape[1]))) <= tol)
