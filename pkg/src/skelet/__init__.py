"""skelet: skeleton-column low-rank approximation.

A numpy/scipy library for interpolative decompositions (GKS, RGKS, RID,
leverage score sampling), the randomized SVD they build on, subspace
geometry (principal angles, leverage scores, coherence), numerical
evaluators for the associated error bounds, and a reproducible experiment
harness with a command-line front end.
"""

from .bounds import (
    BoundReport,
    RgksPerturbationReport,
    ResidualStats,
    SecantEnvelope,
    coherence_secant_envelope,
    condition_number_bound,
    frobenius_stable_rank_bound,
    gks_rrqr_bounds,
    residual_floor_margin,
    rgks_perturbation_bounds,
    sketch_structural_bound,
    spectral_secant_bound,
    subset_angle_bound,
)
from .geometry import (
    PrincipalAngles,
    ProjectorStats,
    SpectrumStats,
    angles_to_index_subspace,
    coherence,
    generalized_gap,
    leverage_scores,
    principal_angles,
    projector_distance,
    residual_stable_rank,
    row_distance_upper,
    singular_gap,
    spectrum_stats,
    tangents_of_index_angles,
)
from .interpolative import (
    InterpolativeDecomp,
    RgksTrace,
    gks,
    id_from_columns,
    lss,
    rgks,
    rid,
    sample_without_replacement,
)
from .linalg import (
    LowRankApprox,
    SvdPartition,
    SvdResult,
    as_matrix,
    frobenius_norm,
    householder_qr,
    matrix_norm,
    partition_at,
    polar_orthogonal_factor,
    pseudoinverse,
    spectral_norm,
    svd,
)
from .matrixio import load_matrix, save_matrix
from .pivoting import PivotedQr, golub_businger_cpqr, gu_eisenstat_srrqr
from .sketching import (
    RsvdConfig,
    RsvdResult,
    gaussian,
    proto_sketch,
    rsvd,
    rsvd_from_sketch,
)
from .testmatrices import (
    TestMatrix,
    TestMatrixSpec,
    build_right_subspace,
    build_test_matrix,
    calibrate_alpha,
    coherence_floor,
    custom_spectrum,
    flat_then_geometric_spectrum,
    geometric_spectrum,
    hadamard,
    kahan,
    staircase_spectrum,
)

__version__ = "0.1.0"
