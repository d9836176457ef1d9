"""Column-pivoted QR (Golub-Businger) and strong rank-revealing QR
(Gu-Eisenstat), the skeleton-selection engines.

Both factorizations are deterministic: pivot ties break toward the lowest
column index, so identical inputs always produce identical permutations.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .linalg import as_matrix

#: When a downdated column norm falls below this fraction of its original
#: value it is recomputed from scratch (standard cancellation guard).
DOWNDATE_GUARD = 1e-7

#: Slack on the strong-RRQR swap criterion; entries of R11^{-1} R12 are
#: bounded by f * (1 + SWAP_TOL) on return.
SWAP_TOL = 1e-8


@dataclass(frozen=True)
class PivotedQr:
    """A pivoted factorization A[:, perm] = Q @ R partitioned at rank k."""

    perm: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    k: int

    @property
    def R11(self):
        return self.R[: self.k, : self.k]

    @property
    def R12(self):
        return self.R[: self.k, self.k :]

    @property
    def R22(self):
        return self.R[self.k :, self.k :]

    @property
    def skeleton(self):
        """First k pivot indices."""
        return self.perm[: self.k]

    def permutation_matrix(self):
        n = self.perm.size
        pi = np.zeros((n, n))
        pi[self.perm, np.arange(n)] = 1.0
        return pi

    def interpolation_matrix(self):
        """R11^{-1} R12, the coefficients expressing trailing columns in the
        pivot basis."""
        if self.R12.shape[1] == 0:
            return np.zeros((self.k, 0))
        return solve_triangular(self.R11, self.R12)


def golub_businger_cpqr(a, k=None):
    """Greedy max-column-norm pivoted QR with norm downdating.

    Parameters
    ----------
    a : (m, n) array
    k : int, optional
        Partition rank for the R blocks; defaults to min(m, n).

    Returns
    -------
    PivotedQr
        |diag(R11)| is non-increasing; rank-deficient inputs yield a zero
        trailing diagonal.
    """
    A = as_matrix(a)
    m, n = A.shape
    r = min(m, n)
    if k is None:
        k = r
    if not 1 <= k <= r:
        raise ValueError(f"partition rank k={k} out of range [1, {r}]")

    R = A.copy()
    perm = np.arange(n)
    norms2 = np.sum(R * R, axis=0)
    orig2 = norms2.copy()
    reflectors = []

    for j in range(r):
        piv = j + int(np.argmax(norms2[j:]))  # argmax takes the first max
        if piv != j:
            R[:, [j, piv]] = R[:, [piv, j]]
            norms2[[j, piv]] = norms2[[piv, j]]
            orig2[[j, piv]] = orig2[[piv, j]]
            perm[[j, piv]] = perm[[piv, j]]

        x = R[j:, j]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            reflectors.append(None)
            continue
        v = x.copy()
        v[0] += np.copysign(norm_x, x[0]) if x[0] != 0.0 else norm_x
        v /= np.linalg.norm(v)
        reflectors.append(v)
        R[j:, j:] -= 2.0 * np.outer(v, v @ R[j:, j:])
        R[j + 1 :, j] = 0.0

        if j + 1 < n:
            tail = slice(j + 1, n)
            norms2[tail] -= R[j, tail] ** 2
            stale = (norms2[tail] < DOWNDATE_GUARD**2 * orig2[tail]) | (
                norms2[tail] < 0.0
            )
            if np.any(stale):
                cols = np.nonzero(stale)[0] + j + 1
                fresh = np.sum(R[j + 1 :, cols] ** 2, axis=0)
                norms2[cols] = fresh
                orig2[cols] = fresh

    Q = np.eye(m, r)
    for j in range(r - 1, -1, -1):
        v = reflectors[j]
        if v is not None:
            Q[j:, :] -= 2.0 * np.outer(v, v @ Q[j:, :])

    return PivotedQr(perm=perm, Q=Q, R=np.triu(R[:r, :]), k=k)


def _refactor(A, perm, k):
    Q, R = np.linalg.qr(A[:, perm], mode="reduced")
    return PivotedQr(perm=perm.copy(), Q=Q, R=R, k=k)


def gu_eisenstat_srrqr(a, k, f=2.0):
    """Strong rank-revealing QR with interpolation entries bounded by f.

    Starts from the Golub-Businger factorization and performs column
    interchanges while the Gu-Eisenstat statistic

        rho_ij^2 = (R11^{-1} R12)_ij^2 + (||row_i(R11^{-1})|| * ||col_j(R22)||)^2

    exceeds f.  Each swap multiplies |det R11| by rho > f > 1, so the number
    of swaps is finite; a guard at 10*n*k swaps flags a kernel bug.

    On return, max |R11^{-1} R12| <= f * (1 + 1e-8) and

        sigma_min(R11) >= sigma_k(A) / sqrt(1 + f^2 k (n - k)).
    """
    if f <= 1.0:
        raise ValueError("f must exceed 1")
    A = as_matrix(a)
    m, n = A.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"partition rank k={k} out of range [1, {min(m, n)}]")

    perm = golub_businger_cpqr(A, k).perm.copy()
    if k == n:
        return _refactor(A, perm, k)

    threshold2 = (f * (1.0 + SWAP_TOL)) ** 2
    max_swaps = 10 * n * k
    for _ in range(max_swaps + 1):
        fac = _refactor(A, perm, k)
        diag = np.abs(np.diag(fac.R11))
        if diag.min() == 0.0 or not np.all(np.isfinite(fac.R)):
            raise ValueError("leading block is numerically rank deficient")
        T = solve_triangular(fac.R11, fac.R12)
        rinv = solve_triangular(fac.R11, np.eye(k))
        row_inv_norms = np.linalg.norm(rinv, axis=1)
        if fac.R22.shape[0] > 0:
            col_norms = np.linalg.norm(fac.R22, axis=0)
        else:
            col_norms = np.zeros(n - k)
        rho2 = T**2 + np.outer(row_inv_norms, col_norms) ** 2
        i, j = np.unravel_index(int(np.argmax(rho2)), rho2.shape)
        if rho2[i, j] <= threshold2:
            return fac
        perm[[i, k + j]] = perm[[k + j, i]]

    raise RuntimeError(
        f"strong RRQR did not converge within {max_swaps} swaps; "
        "this indicates a kernel bug"
    )
