"""Budgeted diverse-subset selection for sequence embedding pools.

The library selects a diverse and representative subset of sequence-level
embedding samples under a fixed budget (farthest-point sampling, multi-frame
fusion, nearest-neighbor validation) and provides overlap-based bounding-box
losses (IoU and the asymmetric Tversky family) with analytic gradients.
"""

from .errors import (
    BlobSizeMismatch,
    BudgetExceedsPool,
    ClusterPackingFailed,
    DegeneratePair,
    DimensionMismatch,
    DuplicateId,
    EmptyPool,
    InvalidBox,
    ManifestError,
    ManifestParse,
    NoEligibleSeed,
    NonFiniteValue,
    PoolTooSmall,
    PoolValidationError,
    SeqselError,
    ZeroNormVector,
)
from .types import (
    AuditRecord,
    BBox,
    EmbeddingSet,
    LossParams,
    Metric,
    RejectionReason,
    SelectionConfig,
    SelectionResult,
    SequenceEmbedding,
    Strategy,
    pool_from_arrays,
    validate_pool,
)
from .distance import (
    DistanceMatrix,
    NNStats,
    cosine_distance,
    distance_matrix,
    euclidean_distance,
    nn_stats,
)
from .fusion import (
    FusionMode,
    RepresentativeSet,
    first_frame_reps,
    multi_frame_reps,
    sample_frame_indices,
)
from .selection import (
    FPSState,
    run_selection,
    select_fps,
    select_kmal,
    select_random,
)
from .boxloss import (
    BoxDecomposition,
    LossValue,
    combine_total_loss,
    decompose,
    iou_loss,
    tversky,
    tversky_loss,
)
from .synthbench import (
    OUTLIER,
    BenchCell,
    BenchReport,
    StrategySummary,
    SynthConfig,
    generate_pool,
    run_bench,
    sign_test_pvalue,
    write_bench_report,
)
from .fileio import (
    PoolManifest,
    load_pool,
    load_pool_csv,
    parse_manifest,
    save_pool,
    save_selection,
)
from .rng import make_rng

__version__ = "0.1.0"

__all__ = [
    "AuditRecord",
    "BBox",
    "BenchCell",
    "BenchReport",
    "BlobSizeMismatch",
    "BoxDecomposition",
    "BudgetExceedsPool",
    "ClusterPackingFailed",
    "DegeneratePair",
    "DimensionMismatch",
    "DistanceMatrix",
    "DuplicateId",
    "EmbeddingSet",
    "EmptyPool",
    "FPSState",
    "FusionMode",
    "InvalidBox",
    "LossParams",
    "LossValue",
    "ManifestError",
    "ManifestParse",
    "Metric",
    "NNStats",
    "NoEligibleSeed",
    "NonFiniteValue",
    "OUTLIER",
    "PoolManifest",
    "PoolTooSmall",
    "PoolValidationError",
    "RejectionReason",
    "RepresentativeSet",
    "SelectionConfig",
    "SelectionResult",
    "SeqselError",
    "SequenceEmbedding",
    "Strategy",
    "StrategySummary",
    "SynthConfig",
    "ZeroNormVector",
    "combine_total_loss",
    "cosine_distance",
    "decompose",
    "distance_matrix",
    "euclidean_distance",
    "first_frame_reps",
    "generate_pool",
    "iou_loss",
    "load_pool",
    "load_pool_csv",
    "make_rng",
    "multi_frame_reps",
    "nn_stats",
    "parse_manifest",
    "pool_from_arrays",
    "run_bench",
    "run_selection",
    "sample_frame_indices",
    "save_pool",
    "save_selection",
    "select_fps",
    "select_kmal",
    "select_random",
    "sign_test_pvalue",
    "tversky",
    "tversky_loss",
    "validate_pool",
    "write_bench_report",
]
