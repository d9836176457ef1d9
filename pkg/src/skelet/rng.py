"""Deterministic random streams built on a counter-based bit generator.

Every random draw in this package is keyed by an integer seed, and
experiment code additionally keys draws by (seed, trial, role) so that
trials can run in parallel, in any order, and still reproduce bit for bit.
"""

import numpy as np

# Stream roles. Distinct roles keyed off the same (seed, trial) give
# statistically independent streams.
ROLE_SKETCH = 1          # Gaussian sketch inside RSVD / RGKS
ROLE_ROW_SKETCH = 2      # Gaussian row embedding inside RID
ROLE_SAMPLING = 3        # index sampling inside LSS
ROLE_LEFT_FACTOR = 4     # left orthogonal factor of a test matrix
ROLE_PERMUTATION = 5     # permutation used in a test-matrix subspace
ROLE_SUBSPACE_NOISE = 6  # additive noise in noisy subspace constructions
ROLE_GENERIC = 7


def generator(seed):
    """Philox generator for a plain integer seed (or a sequence of ints)."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def substream_seed(seed, trial, role):
    """Derive a 64-bit child seed from (seed, trial, role).

    The derivation is order-free: workers can compute any trial's seed
    without having seen the others.
    """
    ss = np.random.SeedSequence([int(seed), int(trial), int(role)])
    return int(ss.generate_state(1, np.uint64)[0])
