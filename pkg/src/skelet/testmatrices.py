"""Reproducible structured test matrices: controlled singular spectra and
coherence-controlled right singular subspaces.

A test matrix is assembled as A = U diag(s) V^T where U orthogonalizes a
seeded Gaussian matrix, s follows a requested decay profile, and V is built
to a requested coherence structure: a permutation matrix (fully coherent),
a normalized Hadamard matrix (minimally coherent), a polar-orthogonalized
convex mix of the two, a noisy variant, or a random orthogonal matrix.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import hadamard as _hadamard_pm1

from . import rng
from .geometry import coherence
from .linalg import as_matrix, polar_orthogonal_factor
from .sketching import gaussian

SUBSPACE_KINDS = (
    "mixed-hadamard-permutation",
    "random-orthogonal",
    "noisy-permutation",
    "noisy-hadamard",
)


def hadamard(n):
    """Normalized Hadamard matrix of dyadic order: orthogonal, entries
    all +-1/sqrt(n)."""
    if n < 1 or n & (n - 1) != 0:
        raise ValueError(f"Hadamard order must be a power of two, got {n}")
    return _hadamard_pm1(n).astype(float) / math.sqrt(n)


def kahan(n, c=0.7):
    """Kahan's upper-triangular matrix, the classic failure case for greedy
    column-pivoted QR: its trailing R entry grossly overestimates the
    smallest singular value."""
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    s = math.sqrt(1.0 - c * c)
    scale = s ** np.arange(n)
    body = np.eye(n) - c * np.triu(np.ones((n, n)), 1)
    return scale[:, None] * body


#: Spectra are floored here to keep long geometric tails away from
#: underflow; it is far below every tolerance in the package.
SPECTRUM_FLOOR = 1e-18


def geometric_spectrum(n, rho=0.85):
    """s_i = rho^(i-1)."""
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    return np.maximum(rho ** np.arange(n, dtype=float), SPECTRUM_FLOOR)


def staircase_spectrum(n, shelf=16, drop=10.0):
    """Flat shelves of the given length, each a factor ``drop`` below the
    previous one."""
    if shelf < 1 or drop <= 1.0:
        raise ValueError("need shelf >= 1 and drop > 1")
    profile = drop ** -(np.arange(n) // shelf).astype(float)
    return np.maximum(profile, SPECTRUM_FLOOR)


def flat_then_geometric_spectrum(n, k0, rho=0.85):
    """Flat at 1 through index k0, geometric decay afterwards."""
    if not 1 <= k0 <= n:
        raise ValueError("k0 out of range")
    s = np.ones(n)
    s[k0:] = rho ** np.arange(1, n - k0 + 1, dtype=float)
    return np.maximum(s, SPECTRUM_FLOOR)


def custom_spectrum(values):
    """Validate and normalize an explicit profile to s_1 = 1."""
    s = np.asarray(values, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("spectrum must be a nonempty vector")
    if np.any(s <= 0):
        raise ValueError("spectrum entries must be positive")
    if np.any(np.diff(s) > 0):
        raise ValueError("spectrum must be non-increasing")
    return s / s[0]


@dataclass(frozen=True)
class TestMatrixSpec:
    """Recipe for a reproducible n x n test matrix."""

    n: int
    spectrum: np.ndarray
    subspace: str = "random-orthogonal"
    alpha: float = 0.0
    delta: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.subspace not in SUBSPACE_KINDS:
            raise ValueError(
                f"unknown subspace kind {self.subspace!r}; "
                f"expected one of {SUBSPACE_KINDS}"
            )
        s = custom_spectrum(self.spectrum)
        if s.size != self.n:
            raise ValueError("spectrum length must equal n")
        object.__setattr__(self, "spectrum", s)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("mixing weight alpha must lie in [0, 1]")

    @property
    def noise_scale(self):
        return self.delta if self.delta is not None else 0.1 / math.sqrt(self.n)


@dataclass(frozen=True)
class TestMatrix:
    """A generated matrix with its exact factors as ground truth."""

    A: np.ndarray
    U: np.ndarray
    s: np.ndarray
    V: np.ndarray
    spec: TestMatrixSpec


def random_permutation_matrix(n, generator):
    perm = generator.permutation(n)
    p = np.zeros((n, n))
    p[perm, np.arange(n)] = 1.0
    return p


def build_right_subspace(spec):
    """The V factor alone (used directly by coherence calibration)."""
    n = spec.n
    kind = spec.subspace
    if kind == "random-orthogonal":
        g = gaussian(n, n, rng.substream_seed(spec.seed, 0, rng.ROLE_SUBSPACE_NOISE))
        return np.linalg.qr(g)[0]
    if kind == "mixed-hadamard-permutation":
        h = hadamard(n)
        for attempt in range(5):
            gen = rng.generator(
                rng.substream_seed(spec.seed, attempt, rng.ROLE_PERMUTATION)
            )
            p = random_permutation_matrix(n, gen)
            if spec.alpha == 1.0:
                return p
            if spec.alpha == 0.0:
                return h
            try:
                return polar_orthogonal_factor(
                    (1.0 - spec.alpha) * h + spec.alpha * p
                )
            except ValueError:
                continue
        raise ValueError(
            "mixing weight produced a singular combination in 5 attempts"
        )
    base = (
        hadamard(n)
        if kind == "noisy-hadamard"
        else random_permutation_matrix(
            n, rng.generator(rng.substream_seed(spec.seed, 0, rng.ROLE_PERMUTATION))
        )
    )
    for attempt in range(5):
        noise = gaussian(
            n, n, rng.substream_seed(spec.seed, attempt, rng.ROLE_SUBSPACE_NOISE)
        )
        try:
            return polar_orthogonal_factor(base + spec.noise_scale * noise)
        except ValueError:
            continue
    raise ValueError("noisy subspace construction stayed singular in 5 attempts")


def build_test_matrix(spec):
    """Assemble A = U diag(s) V^T from the recipe; the returned factors are
    exact, so experiments never need to re-factorize the input."""
    n = spec.n
    g = gaussian(n, n, rng.substream_seed(spec.seed, 0, rng.ROLE_LEFT_FACTOR))
    U = np.linalg.qr(g)[0]
    V = build_right_subspace(spec)
    A = (U * spec.spectrum) @ V.T
    return TestMatrix(A=as_matrix(A), U=U, s=spec.spectrum.copy(), V=V, spec=spec)


def coherence_floor(n, k):
    """Smallest possible coherence of a k-dimensional subspace of R^n."""
    return math.sqrt(k / n)


def calibrate_alpha(n, k, target_coherence, seed=0, tol=0.005, max_iter=60):
    """Find the mixing weight whose subspace has coherence near the target.

    Bisects the (deterministic, for a fixed seed) map alpha -> c_k of the
    mixed Hadamard/permutation construction.  Returns (alpha, achieved).
    """
    floor = coherence_floor(n, k)
    if not floor - 1e-12 <= target_coherence <= 1.0 + 1e-12:
        raise ValueError(
            f"target coherence {target_coherence} below the attainable floor "
            f"sqrt(k/n) = {floor:.6f} or above 1"
        )

    def measure(alpha):
        spec = TestMatrixSpec(
            n=n,
            spectrum=np.ones(n),
            subspace="mixed-hadamard-permutation",
            alpha=alpha,
            seed=seed,
        )
        v = build_right_subspace(spec)
        return coherence(v[:, :k])

    if target_coherence >= 1.0 - 1e-12:
        return 1.0, measure(1.0)
    if target_coherence <= floor + 1e-12:
        return 0.0, measure(0.0)

    lo, hi = 0.0, 1.0
    c_lo, c_hi = measure(lo), measure(hi)
    best = min(((lo, c_lo), (hi, c_hi)), key=lambda t: abs(t[1] - target_coherence))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        try:
            c_mid = measure(mid)
        except ValueError:
            mid += 1e-6
            c_mid = measure(mid)
        if abs(c_mid - target_coherence) < abs(best[1] - target_coherence):
            best = (mid, c_mid)
        if abs(c_mid - target_coherence) <= tol:
            return mid, c_mid
        if c_mid < target_coherence:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return best


def with_seed(spec, seed):
    """Copy of a spec with a different seed (fresh random draws)."""
    return replace(spec, seed=seed)
