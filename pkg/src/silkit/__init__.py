"""silkit: clustering evaluation with micro- and macro-averaged silhouette
scores, cluster-balanced sampling, k-means machinery, and cluster-count
estimation."""

__version__ = "0.1.0"

from .clustering import KMeansConfig, KMeansResult, global_kmeanspp, kmeanspp_seed, lloyd
from .core import (
    Dataset,
    DatasetStats,
    DistanceMatrix,
    Labeling,
    MetricTag,
    canonicalize_labels,
    dataset_stats,
    distances_from_point,
    pairwise_distances,
)
from .kselect import SweepResult, SweepRow, estimate_k, sweep
from .sampling import (
    MonteCarloCell,
    SampleResult,
    SampleSpec,
    balanced_sample,
    monte_carlo_study,
    uniform_sample,
)
from .silhouette import (
    SilhouetteReport,
    SilhouetteUndefinedError,
    SingletonClusterError,
    cluster_mean,
    full_report,
    inner_distance,
    macro_average,
    micro_average,
    outer_distance,
    point_score,
)
from .synth import (
    BlobSpec,
    NoiseSpec,
    NoisyData,
    add_background_noise,
    generate_blobs,
    grow_nucleus,
    imbalance_demo_spec,
    randomize_except,
    separated_blobs_spec,
)

__all__ = [
    "__version__",
    "Dataset",
    "Labeling",
    "DistanceMatrix",
    "DatasetStats",
    "MetricTag",
    "pairwise_distances",
    "distances_from_point",
    "canonicalize_labels",
    "dataset_stats",
    "SilhouetteReport",
    "SilhouetteUndefinedError",
    "SingletonClusterError",
    "inner_distance",
    "outer_distance",
    "point_score",
    "micro_average",
    "cluster_mean",
    "macro_average",
    "full_report",
    "SampleSpec",
    "SampleResult",
    "MonteCarloCell",
    "uniform_sample",
    "balanced_sample",
    "monte_carlo_study",
    "KMeansConfig",
    "KMeansResult",
    "lloyd",
    "kmeanspp_seed",
    "global_kmeanspp",
    "SweepRow",
    "SweepResult",
    "sweep",
    "estimate_k",
    "BlobSpec",
    "NoiseSpec",
    "NoisyData",
    "generate_blobs",
    "grow_nucleus",
    "randomize_except",
    "add_background_noise",
    "imbalance_demo_spec",
    "separated_blobs_spec",
]
