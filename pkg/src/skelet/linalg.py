"""Dense double-precision kernels: SVD, QR, pseudoinverse, polar factor.

All matrices are plain ``numpy.ndarray`` in row-major order with value
semantics; factorizations return new arrays and never alias their input.
"""

from dataclasses import dataclass

import numpy as np

#: Default relative truncation for pseudoinverses.  Skeleton Gram matrices
#: can be very ill-conditioned, so the cut sits just above roundoff.
PINV_REL_TOL = 1e-12

#: A square matrix with smallest singular value below this multiple of the
#: largest is treated as numerically singular by the polar factorization.
POLAR_RANK_TOL = 1e-12


def as_matrix(a):
    """Validate and copy ``a`` into a finite, 2-d, float64, C-order array."""
    m = np.array(a, dtype=np.float64, order="C")
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def frobenius_norm(a):
    return float(np.linalg.norm(a, "fro"))


def spectral_norm(a):
    """Largest singular value of ``a`` (0.0 for an empty matrix)."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def matrix_norm(a, norm):
    """Dispatch on norm name: 'spectral' or 'frobenius'."""
    if norm == "spectral":
        return spectral_norm(a)
    if norm == "frobenius":
        return frobenius_norm(a)
    raise ValueError(f"unknown norm {norm!r}")


@dataclass(frozen=True)
class SvdResult:
    """Full SVD ``A = U @ diag(s) @ V.T`` with singular values descending.

    U is m x r and V is n x r with orthonormal columns, r = min(m, n).
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    @property
    def rank_limit(self):
        return self.s.size

    def reconstruct(self):
        return (self.U * self.s) @ self.V.T

    def truncate(self, k):
        """Leading-k factors (U_k, s_k, V_k)."""
        return self.U[:, :k], self.s[:k], self.V[:, :k]


@dataclass(frozen=True)
class SvdPartition:
    """An SVD split at rank k into leading and trailing blocks."""

    U_head: np.ndarray
    s_head: np.ndarray
    V_head: np.ndarray
    U_tail: np.ndarray
    s_tail: np.ndarray
    V_tail: np.ndarray

    def reconstruct(self):
        return (self.U_head * self.s_head) @ self.V_head.T + (
            self.U_tail * self.s_tail
        ) @ self.V_tail.T

    @property
    def tail_spectral_norm(self):
        return float(self.s_tail[0]) if self.s_tail.size else 0.0

    @property
    def tail_frobenius_norm(self):
        return float(np.sqrt(np.sum(self.s_tail**2)))

    def tail_norm(self, norm):
        if norm == "spectral":
            return self.tail_spectral_norm
        if norm == "frobenius":
            return self.tail_frobenius_norm
        raise ValueError(f"unknown norm {norm!r}")


def svd(a):
    """Full singular value decomposition of a finite matrix.

    Returns
    -------
    SvdResult
        Singular values sorted descending; reconstruction holds to
        1e-10 * ||A||_F.
    """
    m = as_matrix(a)
    U, s, Vt = np.linalg.svd(m, full_matrices=False)
    return SvdResult(U=U, s=s, V=Vt.T)


def partition_at(res, k):
    """Split an SvdResult at rank k, 1 <= k < min(m, n)."""
    r = res.rank_limit
    if not 1 <= k < r:
        raise ValueError(f"partition rank k={k} out of range [1, {r})")
    return SvdPartition(
        U_head=res.U[:, :k],
        s_head=res.s[:k],
        V_head=res.V[:, :k],
        U_tail=res.U[:, k:],
        s_tail=res.s[k:],
        V_tail=res.V[:, k:],
    )


def householder_qr(a):
    """Thin QR factorization A = Q R with Q m x n orthonormal, m >= n."""
    m = as_matrix(a)
    if m.shape[0] < m.shape[1]:
        raise ValueError("thin QR requires at least as many rows as columns")
    Q, R = np.linalg.qr(m, mode="reduced")
    return Q, R


def orthonormal_columns(a):
    """Orthonormal basis for range(a); drops numerically dependent columns."""
    m = as_matrix(a)
    U, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0:
        return U
    rank = int(np.count_nonzero(s > s[0] * np.finfo(float).eps * max(m.shape)))
    return U[:, :rank]


def pseudoinverse(a, rel_tol=PINV_REL_TOL):
    """Moore-Penrose pseudoinverse, zeroing singular values <= rel_tol * s_1.

    A zero matrix yields a zero pseudoinverse.
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    m = as_matrix(a)
    return np.linalg.pinv(m, rcond=rel_tol)


def polar_orthogonal_factor(a):
    """Orthogonal factor W = U V^T of the polar decomposition of a square A.

    W is the closest orthogonal matrix to A in the Frobenius norm.  Raises
    for numerically rank-deficient input (singular combination).
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("polar orthogonal factor requires a square matrix")
    U, s, Vt = np.linalg.svd(m)
    if s[-1] <= POLAR_RANK_TOL * s[0]:
        raise ValueError("matrix is numerically singular; no unique polar factor")
    return U @ Vt


@dataclass(frozen=True)
class LowRankApprox:
    """A rank-k approximation A ~= B1 @ B2.T, optionally with skeleton set J."""

    B1: np.ndarray
    B2: np.ndarray
    J: np.ndarray | None = None

    def __post_init__(self):
        if self.B1.shape[1] != self.B2.shape[1]:
            raise ValueError("B1 and B2 must have the same number of columns")
        if not (np.all(np.isfinite(self.B1)) and np.all(np.isfinite(self.B2))):
            raise ValueError("approximation factors contain non-finite entries")

    @property
    def rank(self):
        return self.B1.shape[1]

    def reconstruct(self):
        return self.B1 @ self.B2.T

    def residual(self, a):
        return a - self.reconstruct()

    def error(self, a, norm="spectral"):
        return matrix_norm(self.residual(a), norm)
