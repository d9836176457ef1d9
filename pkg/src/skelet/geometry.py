"""Subspace geometry: principal angles, leverage scores, coherence, and
spectrum statistics (singular gaps, residual stable rank).

Angles are computed with a two-branch method: cosines come from the SVD of
X^T Y and sines from the SVD of (I - X X^T) Y, and each angle uses whichever
branch is better conditioned.  This keeps secants accurate for angles near
pi/2 and perturbations accurate for angles near 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, spectral_norm

ORTHONORMAL_TOL = 1e-8

#: Below this smallest singular value the row block V[J] is treated as
#: singular, i.e. the largest angle is at pi/2 and tangents are undefined.
INVERTIBLE_TOL = 1e-12


def _check_orthonormal(x, name):
    defect = spectral_norm(x.T @ x - np.eye(x.shape[1]))
    if defect > ORTHONORMAL_TOL:
        raise ValueError(f"{name} does not have orthonormal columns (defect {defect:.2e})")


def _check_index_set(J, n, k=None):
    J = np.asarray(J, dtype=np.intp)
    if J.ndim != 1 or J.size == 0:
        raise ValueError("index set must be a nonempty 1-d sequence")
    if J.min() < 0 or J.max() >= n:
        raise ValueError(f"index set out of range [0, {n})")
    if np.unique(J).size != J.size:
        raise ValueError("index set contains duplicates")
    if k is not None and J.size != k:
        raise ValueError(f"index set must have exactly {k} entries, got {J.size}")
    return J


@dataclass(frozen=True)
class PrincipalAngles:
    """Canonical angles between two equal-dimension subspaces.

    cosines descend in [0, 1]; angles ascend in [0, pi/2] so that
    angles[i] == arccos(cosines[i]) up to the branch tolerance.
    """

    cosines: np.ndarray
    angles: np.ndarray

    @property
    def sines(self):
        return np.sin(self.angles)

    @property
    def largest(self):
        return float(self.angles[-1])

    @property
    def smallest_cosine(self):
        return float(self.cosines[-1])

    def secants(self):
        if self.smallest_cosine <= INVERTIBLE_TOL:
            raise ValueError("largest angle is at pi/2; secant undefined")
        return 1.0 / self.cosines

    def tangents(self):
        return np.tan(self.angles)


def _two_branch_angles(cosines, sines_ascending):
    # cosine branch is well conditioned for large angles, sine branch for
    # small ones; switch at 45 degrees
    angles = np.empty_like(cosines)
    for i, c in enumerate(cosines):
        if c * c >= 0.5:
            angles[i] = math.asin(sines_ascending[i])
        else:
            angles[i] = math.acos(c)
    return angles


def principal_angles(x, y):
    """Principal angles between the column spans of orthonormal x and y."""
    x = as_matrix(x)
    y = as_matrix(y)
    if x.shape != y.shape:
        raise ValueError("subspace bases must have identical shapes")
    _check_orthonormal(x, "x")
    _check_orthonormal(y, "y")
    g = x.T @ y
    cosines = np.clip(np.linalg.svd(g, compute_uv=False), 0.0, 1.0)
    # residual of y against span(x); its singular values are the sines
    z = y - x @ g
    sines = np.clip(np.linalg.svd(z, compute_uv=False), 0.0, 1.0)
    sines_ascending = sines[::-1]
    angles = _two_branch_angles(cosines, sines_ascending)
    return PrincipalAngles(cosines=cosines, angles=angles)


def angles_to_index_subspace(v_k, J):
    """Angles between span(v_k) and the coordinate subspace span{e_j : j in J}.

    The cosines are the singular values of the row block v_k[J]; requires
    2k <= n so the coordinate subspace comparison is well posed.
    """
    v_k = as_matrix(v_k)
    n, k = v_k.shape
    if 2 * k > n:
        raise ValueError(f"requires k <= n/2 (got k={k}, n={n})")
    J = _check_index_set(J, n, k)
    _check_orthonormal(v_k, "v_k")
    cosines = np.clip(np.linalg.svd(v_k[J], compute_uv=False), 0.0, 1.0)
    comp = np.setdiff1d(np.arange(n), J)
    sines = np.clip(np.linalg.svd(v_k[comp], compute_uv=False), 0.0, 1.0)
    angles = _two_branch_angles(cosines, sines[::-1])
    return PrincipalAngles(cosines=cosines, angles=angles)


def tangents_of_index_angles(v_k, J):
    """Tangents of the index-subspace angles, descending.

    Returns the singular values of v_k[comp] @ inv(v_k[J]); raises when the
    row block v_k[J] is numerically singular (an angle sits at pi/2).
    """
    v_k = as_matrix(v_k)
    n, k = v_k.shape
    J = _check_index_set(J, n, k)
    block = v_k[J]
    smin = np.linalg.svd(block, compute_uv=False)[-1]
    if smin <= INVERTIBLE_TOL:
        raise ValueError("row block is singular: largest angle is at pi/2")
    comp = np.setdiff1d(np.arange(n), J)
    t = np.linalg.solve(block.T, v_k[comp].T).T
    return np.linalg.svd(t, compute_uv=False)


def leverage_scores(v_k):
    """Row norms of an orthonormal basis; their squares sum to k."""
    v_k = as_matrix(v_k)
    return np.linalg.norm(v_k, axis=1)


def coherence(v_k):
    """Largest leverage score; lies in [sqrt(k/n), 1]."""
    return float(np.max(leverage_scores(v_k)))


def singular_gap(s, k):
    """gamma_k = s[k] / s[k-1] (0-based: s_{k+1}/s_k)."""
    s = np.asarray(s, dtype=float)
    if not 1 <= k < s.size:
        raise ValueError(f"k={k} out of range for {s.size} singular values")
    if s[k - 1] == 0.0:
        raise ValueError("gap undefined: s_k = 0")
    return float(s[k] / s[k - 1])


def generalized_gap(s, i, j):
    """gamma_{i,j} = s_j / s_i for 1-based i < j."""
    s = np.asarray(s, dtype=float)
    if not 1 <= i < j <= s.size:
        raise ValueError("need 1 <= i < j <= len(s)")
    if s[i - 1] == 0.0:
        raise ValueError("generalized gap undefined: s_i = 0")
    return float(s[j - 1] / s[i - 1])


def residual_stable_rank(s, k):
    """r_k = sum_{i>k} s_i^2 / s_{k+1}^2; requires s_{k+1} > 0."""
    s = np.asarray(s, dtype=float)
    if not 1 <= k < s.size:
        raise ValueError(f"k={k} out of range for {s.size} singular values")
    tail = s[k:]
    if tail[0] == 0.0:
        raise ValueError("residual stable rank undefined: s_{k+1} = 0")
    return float(np.sum((tail / tail[0]) ** 2))


@dataclass(frozen=True)
class SpectrumStats:
    """Spectrum and subspace statistics at a fixed rank k."""

    k: int
    gap: float
    stable_rank: float
    leverage: np.ndarray | None = None

    @property
    def coherence(self):
        if self.leverage is None:
            raise ValueError("coherence requires leverage scores (pass v_k)")
        return float(np.max(self.leverage))


def spectrum_stats(s, k, v_k=None):
    """Bundle gap, residual stable rank, and (optionally) leverage scores."""
    lev = None
    if v_k is not None:
        v_k = as_matrix(v_k)
        if v_k.shape[1] != k:
            raise ValueError("v_k must have exactly k columns")
        lev = leverage_scores(v_k)
    return SpectrumStats(
        k=k,
        gap=singular_gap(s, k),
        stable_rank=residual_stable_rank(s, k),
        leverage=lev,
    )


@dataclass(frozen=True)
class ProjectorStats:
    """Aggregate and element-wise distances between two projectors."""

    theta_max: float          # largest principal angle
    sin_theta: float          # spectral norm of P - P_hat
    elem_max: float
    elem_median: float
    elem_mean: float


def projector_distance(v_k, v_hat):
    """Distance between the projectors onto span(v_k) and span(v_hat).

    sin(theta_max) equals the spectral norm of the projector difference;
    element-wise statistics summarize |P - P_hat| entry by entry.
    """
    v_k = as_matrix(v_k)
    v_hat = as_matrix(v_hat)
    if v_k.shape != v_hat.shape:
        raise ValueError("bases must have identical shapes")
    _check_orthonormal(v_k, "v_k")
    _check_orthonormal(v_hat, "v_hat")
    diff = v_k @ v_k.T - v_hat @ v_hat.T
    abs_diff = np.abs(diff)
    theta = principal_angles(v_k, v_hat).largest
    return ProjectorStats(
        theta_max=theta,
        sin_theta=spectral_norm(diff),
        elem_max=float(abs_diff.max()),
        elem_median=float(np.median(abs_diff)),
        elem_mean=float(abs_diff.mean()),
    )


def row_distance_upper(v_k, v_hat):
    """Upper bound on the row-wise subspace distance.

    Aligns v_hat to v_k with the orthogonal Procrustes rotation and returns
    the largest row discrepancy.  The exact distance minimizes over all
    orthogonal alignments, so this value can only overestimate it.
    """
    v_k = as_matrix(v_k)
    v_hat = as_matrix(v_hat)
    if v_k.shape != v_hat.shape:
        raise ValueError("bases must have identical shapes")
    u, _, wt = np.linalg.svd(v_hat.T @ v_k)
    aligned = v_hat @ (u @ wt)
    return float(np.max(np.linalg.norm(v_k - aligned, axis=1)))
