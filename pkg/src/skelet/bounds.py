"""Numerical evaluators for every error bound the library certifies.

Each evaluator returns a BoundReport.  Hypothesis failures are data, never
silent defaults: an inapplicable report carries the violated hypotheses and
a NaN value, because the bounds tend to lose their hypotheses exactly where
the algorithms behave most interestingly (vanishing singular gaps).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    INVERTIBLE_TOL,
    angles_to_index_subspace,
    coherence,
    principal_angles,
    residual_stable_rank,
    row_distance_upper,
    tangents_of_index_angles,
)
from .interpolative import gks, id_from_columns
from .linalg import as_matrix, orthonormal_columns, svd
from .sketching import proto_sketch

#: Relative slack for validity checks: a bound is accepted when
#: value >= actual * (1 - VALIDITY_REL_TOL).
VALIDITY_REL_TOL = 1e-8


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: its value, the actual error, and applicability."""

    name: str
    value: float
    applicable: bool
    hypothesis_violations: tuple
    actual_error: float

    @property
    def ratio(self):
        """value / actual_error; inf when the actual error is zero or the
        certified floor is non-positive."""
        if not self.applicable:
            return float("nan")
        if self.actual_error > 0.0:
            return self.value / self.actual_error
        return float("inf") if self.value >= self.actual_error else float("-inf")

    def is_valid(self, rel_tol=VALIDITY_REL_TOL, abs_tol=0.0):
        """True when the certified value dominates the actual quantity up to
        relative and absolute slack.  Inapplicable reports are vacuously
        valid."""
        if not self.applicable:
            return True
        return (
            self.value
            >= self.actual_error - rel_tol * abs(self.actual_error) - abs_tol
        )


@dataclass(frozen=True)
class ResidualStats:
    """Singular values of a residual matrix E and its truncated condition
    numbers kappa(E, i) = s_1(E) / s_i(E)."""

    sigmas: np.ndarray

    def kappa(self, i):
        if not 1 <= i <= self.sigmas.size:
            raise ValueError(f"level i={i} out of range")
        if self.sigmas[i - 1] == 0.0:
            raise ValueError(f"kappa undefined: s_{i}(E) = 0")
        return float(self.sigmas[0] / self.sigmas[i - 1])


def residual_floor_margin(residual_svals, matrix_svals, k):
    """min_i [ s_i(E) - s_{k+i}(A) ]; nonnegative up to roundoff because the
    residual of any rank-k column projection dominates the shifted spectrum."""
    e = np.asarray(residual_svals, dtype=float)
    s = np.asarray(matrix_svals, dtype=float)
    count = min(e.size, s.size - k)
    if count < 1:
        raise ValueError("no comparable singular values")
    return float(np.min(e[:count] - s[k : k + count]))


def _inapplicable(name, violations, actual):
    return BoundReport(
        name=name,
        value=float("nan"),
        applicable=False,
        hypothesis_violations=tuple(violations),
        actual_error=actual,
    )


def _id_context(a, J, k, svd_result, residual_svals):
    A = as_matrix(a)
    res = svd_result if svd_result is not None else svd(A)
    if residual_svals is None:
        E = id_from_columns(A, J).residual(A)
        residual_svals = np.linalg.svd(E, compute_uv=False)
    return A, res, np.asarray(residual_svals, dtype=float)


def _tail_norms(s, k):
    tail = s[k:]
    return float(tail[0]), float(np.sqrt(np.sum(tail**2)))


def _gap_violations(s, k, n, require_half=True):
    v = []
    if require_half and 2 * k > n:
        v.append("k exceeds n/2")
    if k >= s.size:
        v.append("no trailing singular values at rank k")
    elif not s[k - 1] > s[k]:
        v.append("no singular gap at rank k")
    return v


def spectral_secant_bound(a, J, k, svd_result=None, residual_svals=None):
    """Spectral error bound s_{k+1} * sec(phi_max) for skeleton set J.

    phi_max is the largest principal angle between the leading right
    singular subspace and the coordinate subspace of J.
    """
    A, res, esv = _id_context(a, J, k, svd_result, residual_svals)
    actual = float(esv[0]) if esv.size else 0.0
    viols = _gap_violations(res.s, k, A.shape[1])
    if viols:
        return _inapplicable("spectral_secant", viols, actual)
    ang = angles_to_index_subspace(res.V[:, :k], J)
    if ang.smallest_cosine <= INVERTIBLE_TOL:
        return _inapplicable(
            "spectral_secant", ["largest index angle at pi/2"], actual
        )
    value = res.s[k] / ang.smallest_cosine
    return BoundReport("spectral_secant", float(value), True, (), actual)


def frobenius_stable_rank_bound(a, J, k, svd_result=None, residual_svals=None):
    """Frobenius bound ||tail||_F * sqrt(1 + (1/r_k) * sum(tan^2 phi_i))."""
    A, res, esv = _id_context(a, J, k, svd_result, residual_svals)
    actual = float(np.sqrt(np.sum(esv**2)))
    viols = _gap_violations(res.s, k, A.shape[1])
    if not viols and res.s[k] == 0.0:
        viols.append("residual stable rank undefined: s_{k+1} = 0")
    if viols:
        return _inapplicable("frobenius_stable_rank", viols, actual)
    ang = angles_to_index_subspace(res.V[:, :k], J)
    if ang.smallest_cosine <= INVERTIBLE_TOL:
        return _inapplicable(
            "frobenius_stable_rank", ["largest index angle at pi/2"], actual
        )
    tangents = tangents_of_index_angles(res.V[:, :k], J)
    r_k = residual_stable_rank(res.s, k)
    _, tail_f = _tail_norms(res.s, k)
    value = tail_f * math.sqrt(1.0 + np.sum(tangents**2) / r_k)
    return BoundReport("frobenius_stable_rank", float(value), True, (), actual)


def condition_number_bound(a, basis, k, svd_result=None):
    """Spectral bound s_{k+1}(A) * kappa(E, k+1) for the residual of a
    column-wise projection onto span(basis).

    Returns (report, ResidualStats).  Needs no singular gap: it is the one
    bound that survives flat spectra, where it is nearly tight.
    """
    A = as_matrix(a)
    res = svd_result if svd_result is not None else svd(A)
    Q = orthonormal_columns(basis)
    E = A - Q @ (Q.T @ A)
    esv = np.linalg.svd(E, compute_uv=False)
    stats = ResidualStats(sigmas=esv)
    actual = float(esv[0])
    viols = []
    if k >= res.s.size:
        viols.append("no trailing singular values at rank k")
    if k >= esv.size or esv[k] == 0.0:
        viols.append("kappa undefined: s_{k+1}(E) = 0")
    if viols:
        return _inapplicable("condition_number", viols, actual), stats
    value = res.s[k] * stats.kappa(k + 1)
    return BoundReport("condition_number", float(value), True, (), actual), stats


def subset_angle_bound(a, J, k, t, svd_result=None, residual_svals=None):
    """Spectral bound through a skeleton subset of size k - t.

    Uses the first k - t indices of J (the pivot order) as the witness I:
    value = s_{k-t+1} * sec(phi_max over (V_{k-t}, I)).  With t = 0 this is
    exactly the plain secant bound.
    """
    A, res, esv = _id_context(a, J, k, svd_result, residual_svals)
    actual = float(esv[0]) if esv.size else 0.0
    name = "subset_secant"
    J = np.asarray(J)
    if not 0 <= t < k:
        raise ValueError("subset offset t must satisfy 0 <= t < k")
    kt = k - t
    viols = []
    if 2 * kt > A.shape[1]:
        viols.append("k - t exceeds n/2")
    if k >= res.s.size:
        viols.append("no trailing singular values at rank k")
    elif not res.s[kt - 1] > res.s[kt]:
        viols.append("no singular gap at rank k - t")
    if viols:
        return _inapplicable(name, viols, actual)
    ang = angles_to_index_subspace(res.V[:, :kt], J[:kt])
    if ang.smallest_cosine <= INVERTIBLE_TOL:
        return _inapplicable(name, ["largest subset angle at pi/2"], actual)
    value = res.s[kt] / ang.smallest_cosine
    return BoundReport(name, float(value), True, (), actual)


def gks_rrqr_bounds(a, k, f=2.0, svd_result=None, decomposition=None):
    """A-priori bounds for GKS run with the strong rank-revealing pivoter.

    Returns the spectral report with value ||tail||_2 * sqrt(1 + f^2 k (n-k))
    and the Frobenius report whose angle term is attenuated by 1/r_k.
    """
    A = as_matrix(a)
    n = A.shape[1]
    res = svd_result if svd_result is not None else svd(A)
    if decomposition is None:
        decomposition = gks(A, k, pivoter="gu-eisenstat", f=f, svd_result=res)
    E = decomposition.residual(A)
    esv = np.linalg.svd(E, compute_uv=False)
    actual_spec = float(esv[0])
    actual_frob = float(np.sqrt(np.sum(esv**2)))
    viols = _gap_violations(res.s, k, n)
    if viols:
        return (
            _inapplicable("gks_spectral", viols, actual_spec),
            _inapplicable("gks_frobenius", viols, actual_frob),
        )
    tail_2, tail_f = _tail_norms(res.s, k)
    blowup = f * f * k * (n - k)
    spec = BoundReport(
        "gks_spectral",
        tail_2 * math.sqrt(1.0 + blowup),
        True,
        (),
        actual_spec,
    )
    if res.s[k] == 0.0:
        frob = _inapplicable(
            "gks_frobenius", ["residual stable rank undefined: s_{k+1} = 0"],
            actual_frob,
        )
    else:
        r_k = residual_stable_rank(res.s, k)
        frob = BoundReport(
            "gks_frobenius",
            tail_f * math.sqrt(1.0 + blowup / r_k),
            True,
            (),
            actual_frob,
        )
    return spec, frob


@dataclass(frozen=True)
class SecantEnvelope:
    """Leverage-score sandwich for sec(phi_max) of an index subspace."""

    lower: float
    upper: float | None
    skeleton_score_mass: float  # sum of squared leverage scores over J


def coherence_secant_envelope(v_k, J):
    """Lower bound 1/c_k always; upper bound when the skeleton leverage
    scores carry mass at least k - 1."""
    v_k = as_matrix(v_k)
    k = v_k.shape[1]
    J = np.asarray(J, dtype=np.intp)
    lev = np.linalg.norm(v_k, axis=1)
    c_k = float(np.max(lev))
    lower = 1.0 / c_k
    mass = float(np.sum(lev[J] ** 2))
    deficit = float(np.sum(1.0 - np.clip(lev[J], 0.0, 1.0) ** 2))
    upper = None
    if J.size == k and mass >= k - 1.0:
        upper = float("inf") if deficit >= 1.0 else 1.0 / math.sqrt(1.0 - deficit)
    return SecantEnvelope(lower=lower, upper=upper, skeleton_score_mass=mass)


def sketch_structural_bound(a, omega, svd_result=None, approx=None):
    """Structural bound for the single-pass sketch with matrix omega.

    value^2 = ||tail||^2 + ||tail_diag @ W2 @ pinv(W1)||^2 in each norm,
    where W1, W2 are the sketch's components along the leading and trailing
    right singular subspaces.  Applicable when W1 has full rank.

    Returns (spectral report, frobenius report).
    """
    A = as_matrix(a)
    omega = as_matrix(omega)
    res = svd_result if svd_result is not None else svd(A)
    k = omega.shape[1]
    if approx is None:
        approx = proto_sketch(A, omega)
    E = approx.residual(A)
    esv = np.linalg.svd(E, compute_uv=False)
    actual_spec = float(esv[0])
    actual_frob = float(np.sqrt(np.sum(esv**2)))
    viols = []
    if k >= res.s.size:
        viols.append("no trailing singular values at sketch width")
    if not viols:
        w1 = res.V[:, :k].T @ omega
        w1_svals = np.linalg.svd(w1, compute_uv=False)
        if w1_svals[-1] <= 1e-12 * max(w1_svals[0], 1e-300):
            viols.append("sketch loses rank on the leading subspace")
    if viols:
        return (
            _inapplicable("sketch_structural_spectral", viols, actual_spec),
            _inapplicable("sketch_structural_frobenius", viols, actual_frob),
        )
    w2 = res.V[:, k:].T @ omega
    cross = (res.s[k:, None] * w2) @ np.linalg.pinv(w1)
    tail_2, tail_f = _tail_norms(res.s, k)
    cross_2 = float(np.linalg.norm(cross, 2)) if cross.size else 0.0
    cross_f = float(np.linalg.norm(cross))
    spec = BoundReport(
        "sketch_structural_spectral",
        math.sqrt(tail_2**2 + cross_2**2),
        True,
        (),
        actual_spec,
    )
    frob = BoundReport(
        "sketch_structural_frobenius",
        math.sqrt(tail_f**2 + cross_f**2),
        True,
        (),
        actual_frob,
    )
    return spec, frob


@dataclass(frozen=True)
class RgksPerturbationReport:
    """Angles, row-wise distance, and every randomization-aware bound for
    one RGKS run."""

    k: int
    phi_max: float
    phi_hat_max: float
    theta_max: float
    theta_subset: dict
    mu: float
    subspace_coherence: float
    cos_floor_first_order: float
    reports: list = field(default_factory=list)

    def report(self, name):
        for r in self.reports:
            if r.name == name:
                return r
        raise KeyError(name)


def rgks_perturbation_bounds(a, trace, svd_result=None, residual_svals=None,
                             subset_offsets=None):
    """Evaluate the randomization-aware bounds for an RGKS run.

    ``trace`` carries the RSVD subspace estimate and the selected skeleton.
    Reports: the combined-angle secant and tangent bounds, one subset-secant
    bound per admissible offset t, and the certified cosine floor
    cos(phi_max) >= cos(phi_hat_max + theta_max).  The first-order row-wise
    floor (which carries an uncontrolled O(mu^2) remainder) is exposed as a
    plain field, not a report.
    """
    A = as_matrix(a)
    n = A.shape[1]
    k = trace.cfg.k
    res = svd_result if svd_result is not None else svd(A)
    if residual_svals is None:
        E = id_from_columns(A, trace.J).residual(A)
        residual_svals = np.linalg.svd(E, compute_uv=False)
    esv = np.asarray(residual_svals, dtype=float)
    actual_spec = float(esv[0]) if esv.size else 0.0
    actual_frob = float(np.sqrt(np.sum(esv**2)))

    viols = _gap_violations(res.s, k, n)
    if viols:
        names = ("rgks_secant_spectral", "rgks_tangent_frobenius", "cosine_floor")
        return RgksPerturbationReport(
            k=k,
            phi_max=float("nan"),
            phi_hat_max=float("nan"),
            theta_max=float("nan"),
            theta_subset={},
            mu=float("nan"),
            subspace_coherence=float("nan"),
            cos_floor_first_order=float("nan"),
            reports=[
                _inapplicable(nm, viols, actual_spec) for nm in names
            ],
        )

    v_k = res.V[:, :k]
    v_hat = trace.V_hat
    phi = angles_to_index_subspace(v_k, trace.J)
    phi_hat = angles_to_index_subspace(v_hat, trace.J)
    theta = principal_angles(v_k, v_hat)
    mu = row_distance_upper(v_k, v_hat)
    c_k = coherence(v_k)
    phi_max = phi.largest
    phi_hat_max = phi_hat.largest
    theta_max = theta.largest

    tail_2, tail_f = _tail_norms(res.s, k)
    reports = []

    combined = phi_hat_max + theta_max
    if combined < math.pi / 2:
        sec_c = 1.0 / math.cos(combined)
        reports.append(
            BoundReport(
                "rgks_secant_spectral", tail_2 * sec_c, True, (), actual_spec
            )
        )
        r_k = residual_stable_rank(res.s, k)
        tan_c = math.tan(combined)
        reports.append(
            BoundReport(
                "rgks_tangent_frobenius",
                tail_f * math.sqrt(1.0 + (k / r_k) * tan_c**2),
                True,
                (),
                actual_frob,
            )
        )
    else:
        why = ("combined angle phi_hat_max + theta_max at or above pi/2",)
        reports.append(_inapplicable("rgks_secant_spectral", why, actual_spec))
        reports.append(_inapplicable("rgks_tangent_frobenius", why, actual_frob))

    # certified floor from the angle triangle inequality
    reports.append(
        BoundReport(
            "cosine_floor",
            math.cos(phi_max),
            True,
            (),
            math.cos(combined),
        )
    )

    theta_subset = {}
    if subset_offsets is None:
        subset_offsets = range(1, k)
    for t in subset_offsets:
        if not 1 <= t < k:
            continue
        kt = k - t
        name = f"rgks_subset_secant_t{t}"
        if kt < res.s.size and res.s[kt - 1] > res.s[kt]:
            th = principal_angles(v_k[:, :kt], v_hat[:, :kt]).largest
            theta_subset[t] = th
            combined_t = phi_hat_max + th
            if combined_t < math.pi / 2 and res.s[kt] > 0.0:
                gamma = res.s[k] / res.s[kt]
                value = (tail_2 / gamma) / math.cos(combined_t)
                reports.append(
                    BoundReport(name, value, True, (), actual_spec)
                )
            else:
                reports.append(
                    _inapplicable(
                        name,
                        ("combined subset angle at or above pi/2",),
                        actual_spec,
                    )
                )
        else:
            reports.append(
                _inapplicable(name, (f"no singular gap at rank {kt}",), actual_spec)
            )

    cos_hat = math.cos(phi_hat_max)
    first_order = cos_hat - k * c_k * mu / cos_hat if cos_hat > 0 else float("nan")

    return RgksPerturbationReport(
        k=k,
        phi_max=phi_max,
        phi_hat_max=phi_hat_max,
        theta_max=theta_max,
        theta_subset=theta_subset,
        mu=mu,
        subspace_coherence=c_k,
        cos_floor_first_order=first_order,
        reports=reports,
    )
