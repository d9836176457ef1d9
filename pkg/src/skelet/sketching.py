"""Gaussian sketching and the randomized SVD.

The randomized SVD draws an n x (k+p) Gaussian sketch, optionally runs q
power-iteration rounds with re-orthonormalization after every product with
A or A^T, projects, and truncates the rank-(k+p) result to the optimal
rank-k one.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .linalg import LowRankApprox, as_matrix, orthonormal_columns


@dataclass(frozen=True)
class RsvdConfig:
    """Sketch parameters: target rank k, oversampling p, power iterations q."""

    k: int
    p: int = 0
    q: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("target rank k must be positive")
        if self.p < 0 or self.q < 0:
            raise ValueError("oversampling p and power count q must be >= 0")

    @property
    def sketch_size(self):
        return self.k + self.p


@dataclass(frozen=True)
class RsvdResult:
    """Estimated leading-k factors (U_hat, s_hat, V_hat)."""

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    def reconstruct(self):
        return (self.U * self.s) @ self.V.T


def gaussian(rows, cols, seed):
    """Seeded i.i.d. standard-normal matrix; identical (rows, cols, seed)
    reproduce bit for bit."""
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    return rng.generator(seed).standard_normal((rows, cols))


def proto_sketch(a, omega):
    """Single-pass sketch: Q = orth(A @ omega), B1 = Q, B2 = A^T Q.

    If A @ omega is rank deficient, Q simply has fewer columns.
    """
    A = as_matrix(a)
    omega = as_matrix(omega)
    if omega.shape[0] != A.shape[1]:
        raise ValueError("sketch matrix must have n rows")
    Q = orthonormal_columns(A @ omega)
    return LowRankApprox(B1=Q, B2=A.T @ Q)


def _thin_q(y):
    return np.linalg.qr(y, mode="reduced")[0]


def rsvd_from_sketch(a, omega, k, q=0):
    """Randomized SVD driven by a caller-supplied sketch matrix."""
    A = as_matrix(a)
    Y = A @ omega
    Q = _thin_q(Y)
    for _ in range(q):
        Z = _thin_q(A.T @ Q)
        Q = _thin_q(A @ Z)
    B = Q.T @ A
    W, s, Vt = np.linalg.svd(B, full_matrices=False)
    # optimal rank-k truncation of the rank-(k+p) approximation
    return RsvdResult(U=Q @ W[:, :k], s=s[:k], V=Vt[:k].T)


def rsvd(a, cfg):
    """Randomized SVD of ``a`` with a fresh Gaussian sketch from cfg.seed."""
    A = as_matrix(a)
    m, n = A.shape
    if cfg.sketch_size > min(m, n):
        raise ValueError(
            f"k + p = {cfg.sketch_size} exceeds min(m, n) = {min(m, n)}"
        )
    omega = gaussian(n, cfg.sketch_size, cfg.seed)
    return rsvd_from_sketch(A, omega, cfg.k, cfg.q)
