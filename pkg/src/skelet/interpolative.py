"""Interpolative decompositions and the four skeleton-selection algorithms:
GKS, RGKS, RID, and leverage score sampling (LSS).

GKS pivots the transposed leading right singular vectors; RGKS does the
same on a randomized-SVD estimate; RID pivots a Gaussian row sketch of the
matrix itself; LSS samples columns by estimated leverage scores and is the
one algorithm here whose output is *not* an interpolative decomposition.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import rng
from .geometry import leverage_scores
from .linalg import LowRankApprox, as_matrix, pseudoinverse, svd
from .pivoting import golub_businger_cpqr, gu_eisenstat_srrqr
from .sketching import RsvdConfig, gaussian, rsvd

PIVOTERS = ("golub-businger", "gu-eisenstat")


@dataclass(frozen=True)
class InterpolativeDecomp:
    """A ~= B1 @ B2.T with B1 = A[:, J] exact skeleton columns."""

    J: np.ndarray
    B1: np.ndarray
    B2: np.ndarray

    @property
    def rank(self):
        return self.J.size

    def reconstruct(self):
        return self.B1 @ self.B2.T

    def residual(self, a):
        return a - self.reconstruct()

    def error(self, a, norm="spectral"):
        return self.as_low_rank().error(a, norm)

    def as_low_rank(self):
        return LowRankApprox(B1=self.B1, B2=self.B2, J=self.J)


@dataclass(frozen=True)
class RgksTrace:
    """Intermediate quantities of an RGKS run, consumed by bound evaluators."""

    cfg: RsvdConfig
    V_hat: np.ndarray
    s_hat: np.ndarray
    J: np.ndarray


def _validate_columns(J, n):
    J = np.asarray(J, dtype=np.intp)
    if J.ndim != 1 or J.size == 0:
        raise ValueError("skeleton set must be a nonempty 1-d sequence")
    if J.min() < 0 or J.max() >= n:
        raise ValueError(f"skeleton indices out of range [0, {n})")
    if np.unique(J).size != J.size:
        raise ValueError("skeleton set contains duplicates")
    return J


def id_from_columns(a, J):
    """Interpolative decomposition with skeleton columns J.

    B1 holds the selected columns of ``a`` verbatim and B2^T = pinv(B1) @ a,
    the least-squares projection of every column onto their span.
    """
    A = as_matrix(a)
    J = _validate_columns(J, A.shape[1])
    B1 = A[:, J].copy()
    B2 = (pseudoinverse(B1) @ A).T
    return InterpolativeDecomp(J=J, B1=B1, B2=B2)


def _pivot_rows(v_k, k, pivoter, f):
    if pivoter == "golub-businger":
        return golub_businger_cpqr(v_k.T, k).skeleton
    if pivoter == "gu-eisenstat":
        return gu_eisenstat_srrqr(v_k.T, k, f=f).skeleton
    raise ValueError(f"unknown pivoter {pivoter!r}; expected one of {PIVOTERS}")


def gks(a, k, pivoter="golub-businger", f=2.0, svd_result=None):
    """Deterministic SVD-based column selection.

    Computes the leading k right singular vectors and selects the skeleton
    by a rank-revealing QR of their transpose.  Warns when s_k = s_{k+1},
    where the leading subspace is not unique.
    """
    A = as_matrix(a)
    res = svd_result if svd_result is not None else svd(A)
    if k < 1 or k > A.shape[1]:
        raise ValueError(f"rank k={k} out of range")
    if k < res.s.size and not res.s[k - 1] > res.s[k]:
        warnings.warn(
            "no singular gap at rank k; the leading right subspace is "
            "ill-defined and the selected columns depend on the SVD's "
            "arbitrary basis choice",
            stacklevel=2,
        )
    J = _pivot_rows(res.V[:, :k], k, pivoter, f)
    return id_from_columns(A, J)


def rgks(a, cfg, pivoter="golub-businger", f=2.0, with_trace=False):
    """Randomized GKS: pivot an RSVD estimate of the right singular vectors."""
    A = as_matrix(a)
    estimate = rsvd(A, cfg)
    J = _pivot_rows(estimate.V, cfg.k, pivoter, f)
    dec = id_from_columns(A, J)
    if with_trace:
        return dec, RgksTrace(cfg=cfg, V_hat=estimate.V, s_hat=estimate.s, J=J)
    return dec


def rid(a, k, p=0, seed=0, sketch_rows=None, matched_products=False):
    """Randomized ID: pivoted QR on a Gaussian row sketch of the matrix.

    The sketch has k + p rows by default; ``matched_products=True`` uses
    min(m, 2(k + p)) rows instead, equalizing matrix-vector products with a
    randomized SVD at the same (k, p).
    """
    A = as_matrix(a)
    m, n = A.shape
    if sketch_rows is not None:
        ell = int(sketch_rows)
    elif matched_products:
        ell = min(m, 2 * (k + p))
    else:
        ell = k + p
    if ell < k:
        raise ValueError("sketch must have at least k rows")
    S = gaussian(ell, m, seed)
    J = golub_businger_cpqr(S @ A, k).skeleton
    return id_from_columns(A, J)


def sample_without_replacement(weights, count, generator):
    """Sequential weighted draws without replacement.

    Draws indices one at a time with probability proportional to the
    remaining weights, renormalizing after each draw.  Stops early if the
    remaining weights are all zero.
    """
    w = np.array(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    chosen = []
    for _ in range(count):
        total = w.sum()
        if total <= 0.0:
            break
        pick = int(generator.choice(w.size, p=w / total))
        chosen.append(pick)
        w[pick] = 0.0
    return np.array(chosen, dtype=np.intp)


def lss(a, k, p=0, seed=0):
    """Leverage score sampling.

    Estimates leverage scores with a q=0 randomized SVD, samples k + p
    distinct columns with probability proportional to the squared scores,
    and projects onto the leading k left singular vectors of the sampled
    columns.  The result is rank k but not interpolative: B1 mixes the
    skeleton columns instead of reproducing them.
    """
    A = as_matrix(a)
    n = A.shape[1]
    if k + p > n:
        raise ValueError("k + p exceeds the number of columns")
    cfg = RsvdConfig(
        k=k, p=p, q=0, seed=rng.substream_seed(seed, 0, rng.ROLE_SKETCH)
    )
    scores = leverage_scores(rsvd(A, cfg).V)
    sampler = rng.generator(rng.substream_seed(seed, 0, rng.ROLE_SAMPLING))
    J = sample_without_replacement(scores**2, k + p, sampler)
    if J.size < k + p:
        # degenerate score distribution: pad by largest remaining column norms
        remaining = np.setdiff1d(np.arange(n), J)
        order = np.argsort(-np.linalg.norm(A[:, remaining], axis=0), kind="stable")
        pad = remaining[order][: k + p - J.size]
        J = np.concatenate([J, pad])
    C = A[:, J]
    U = np.linalg.svd(C, full_matrices=False)[0]
    B1 = U[:, :k]
    return LowRankApprox(B1=B1, B2=A.T @ B1, J=J)
