"""Synthetic scenario generators: Gaussian blobs, nucleus growth for
cluster-imbalance experiments, label randomization, and uniform background
noise injection.

Two canned layouts are provided. ``separated_blobs_spec`` places k equal
clusters on a ring with adjacent centers 16 standard deviations apart.
``imbalance_demo_spec`` reconstructs the 12-cluster demo used throughout
the imbalance experiments: a tight "nucleus" cluster at the origin, a
radially aligned pair of clusters east of it (the cheapest merge for a
clusterer, and the nucleus's nearest neighbors), and nine moderately soft
clusters spread over varied radii and angles. The varied radii make a
random relabeling score clearly negative, while every cluster remains
coherent enough that the 12-way partition is the macro-silhouette optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, Labeling, canonicalize_labels

__all__ = [
    "BlobSpec",
    "NoiseSpec",
    "NoisyData",
    "generate_blobs",
    "grow_nucleus",
    "randomize_except",
    "add_background_noise",
    "imbalance_demo_spec",
    "separated_blobs_spec",
    "NUCLEUS_CLUSTER",
]

# Cluster id of the nucleus blob in imbalance_demo_spec layouts.
NUCLEUS_CLUSTER = 0

# Frozen imbalance-demo layout: (center x, center y, stddev).
# Index 0 is the nucleus; 1..2 the radial gate pair; 3..11 the outer ring.
_DEMO_LAYOUT = (
    (0.0, 0.0, 0.05),
    (9.0, 0.0, 1.15),
    (15.3, 0.0, 1.15),
    (5.4805, 11.2344, 1.27),
    (-0.5934, 16.9896, 1.27),
    (-6.7831, 10.8535, 1.32),
    (-16.0215, 9.25, 1.47),
    (-13.0, 0.0, 1.37),
    (-15.1554, -8.75, 1.37),
    (-6.3, -10.9119, 1.37),
    (-0.6283, -17.989, 1.37),
    (6.6, -11.4315, 1.58),
)


@dataclass(frozen=True)
class BlobSpec:
    """Isotropic Gaussian mixture: one center/stddev/count per blob."""

    centers: tuple[tuple[float, ...], ...]
    stddevs: tuple[float, ...]
    counts: tuple[int, ...]
    rng_seed: int = 0

    def __post_init__(self):
        if not (len(self.centers) == len(self.stddevs) == len(self.counts)):
            raise ValueError("centers, stddevs and counts must have equal length")
        if len(self.centers) < 1:
            raise ValueError("at least one blob is required")
        if any(c < 1 for c in self.counts):
            raise ValueError("counts must be >= 1")
        if any(s <= 0 for s in self.stddevs):
            raise ValueError("stddevs must be > 0")
        dims = {len(c) for c in self.centers}
        if len(dims) != 1:
            raise ValueError("all centers must share one dimensionality")


@dataclass(frozen=True)
class NoiseSpec:
    """Uniform background noise: relative level p and per-dimension bounds.

    ``bounds`` is ((a1, b1), ..., (ad, bd)); None derives the box from the
    dataset's bounding box expanded by ``pad`` per side.
    """

    level: float
    bounds: tuple[tuple[float, float], ...] | None = None
    rng_seed: int = 0
    pad: float = 0.10

    def __post_init__(self):
        if not 0.0 <= self.level < 1.0:
            raise ValueError("noise level must be in [0, 1)")
        if self.bounds is not None:
            if any(a >= b for a, b in self.bounds):
                raise ValueError("each bound must satisfy a < b")


@dataclass(frozen=True)
class NoisyData:
    """Dataset with appended noise rows; the mask marks which rows they are.

    Clustering consumers treat noise rows as ordinary points; the mask (and
    the -1 truth label) exists only for evaluation bookkeeping.
    """

    dataset: Dataset
    noise_mask: np.ndarray = field(repr=False)

    @property
    def n_noise(self) -> int:
        return int(self.noise_mask.sum())


def generate_blobs(spec: BlobSpec) -> tuple[Dataset, Labeling]:
    """Sample every blob and attach the generating labels as ground truth."""
    rng = np.random.default_rng(spec.rng_seed)
    pts, lab = [], []
    for j, (center, sd, count) in enumerate(zip(spec.centers, spec.stddevs, spec.counts)):
        pts.append(rng.normal(center, sd, size=(count, len(center))))
        lab.append(np.full(count, j, dtype=np.int64))
    points = np.vstack(pts)
    labels = np.concatenate(lab)
    return Dataset(points, truth_labels=labels), Labeling(labels, k=len(spec.centers))


def grow_nucleus(
    data: Dataset,
    labels: Labeling,
    nucleus_cluster: int,
    added: int,
    stddev: float,
    rng: np.random.Generator,
) -> tuple[Dataset, Labeling]:
    """Append Gaussian points at the nucleus cluster's center.

    Existing rows are unchanged; the new rows carry the nucleus label.
    """
    if not 0 <= nucleus_cluster < labels.k:
        raise ValueError(f"unknown cluster id {nucleus_cluster}")
    if added == 0:
        return data, labels
    center = data.points[labels.members(nucleus_cluster)].mean(axis=0)
    extra = rng.normal(center, stddev, size=(added, data.dim))
    points = np.vstack([data.points, extra])
    assignments = np.concatenate(
        [labels.assignments, np.full(added, nucleus_cluster, dtype=np.int64)]
    )
    truth = None
    if data.truth_labels is not None:
        truth = np.concatenate(
            [data.truth_labels, np.full(added, nucleus_cluster, dtype=np.int64)]
        )
    return Dataset(points, truth_labels=truth), Labeling(assignments, labels.k)


def randomize_except(
    labels: Labeling,
    keep_cluster: int,
    k: int,
    rng: np.random.Generator,
    *,
    allow_kept_label: bool = True,
) -> Labeling:
    """Random uniform labels for every point outside ``keep_cluster``.

    With ``allow_kept_label`` (default) the random draw ranges over all k
    labels. Setting it False draws from the other k-1 labels only, which
    keeps the preserved cluster pure; the nucleus growth study relies on
    that to hold its macro score constant while the cluster is inflated.
    """
    if not 0 <= keep_cluster < labels.k:
        raise ValueError(f"unknown cluster id {keep_cluster}")
    if k < 1:
        raise ValueError("k must be >= 1")
    out = np.asarray(labels.assignments).copy()
    mask = out != keep_cluster
    if allow_kept_label:
        out[mask] = rng.integers(0, k, size=int(mask.sum()))
    else:
        if k < 2:
            raise ValueError("excluding the kept label requires k >= 2")
        choices = np.array([c for c in range(k) if c != keep_cluster], dtype=np.int64)
        out[mask] = choices[rng.integers(0, k - 1, size=int(mask.sum()))]
    out[~mask] = keep_cluster
    return canonicalize_labels(out)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def noise_count(n_points: int, level: float) -> int:
    """Number of noise rows so that noise/(noise + N) equals the level."""
    if level == 0.0:
        return 0
    return _round_half_up(level * n_points / (1.0 - level))


def add_background_noise(data: Dataset, labels: Labeling, spec: NoiseSpec) -> NoisyData:
    """Append uniformly distributed points over the noise box.

    Noise rows get truth label -1 and are flagged in the returned mask.
    """
    n = noise_count(data.n, spec.level)
    mask = np.zeros(data.n + n, dtype=bool)
    if n == 0:
        truth = data.truth_labels
        if truth is None:
            truth = labels.assignments
        return NoisyData(Dataset(data.points, truth_labels=truth), mask)
    if spec.bounds is not None:
        lo = np.array([a for a, _ in spec.bounds], dtype=np.float64)
        hi = np.array([b for _, b in spec.bounds], dtype=np.float64)
        if len(lo) != data.dim:
            raise ValueError("bounds dimensionality does not match dataset")
    else:
        lo = data.points.min(axis=0)
        hi = data.points.max(axis=0)
        span = hi - lo
        lo = lo - spec.pad * span
        hi = hi + spec.pad * span
    rng = np.random.default_rng(spec.rng_seed)
    noise = rng.uniform(lo, hi, size=(n, data.dim))
    points = np.vstack([data.points, noise])
    base_truth = data.truth_labels if data.truth_labels is not None else labels.assignments
    truth = np.concatenate([base_truth, np.full(n, -1, dtype=np.int64)])
    mask[data.n :] = True
    return NoisyData(Dataset(points, truth_labels=truth), mask)


def imbalance_demo_spec(points_per_cluster: int = 100, rng_seed: int = 0) -> BlobSpec:
    """The frozen 12-cluster imbalance demo layout (see module docstring)."""
    return BlobSpec(
        centers=tuple((x, y) for x, y, _ in _DEMO_LAYOUT),
        stddevs=tuple(sd for _, _, sd in _DEMO_LAYOUT),
        counts=(points_per_cluster,) * len(_DEMO_LAYOUT),
        rng_seed=rng_seed,
    )


def separated_blobs_spec(
    k: int, points_per_cluster: int, rng_seed: int = 0, *, stddev: float = 1.0, spacing: float = 16.0
) -> BlobSpec:
    """k equal blobs on a ring with adjacent centers ``spacing`` apart."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        centers = ((0.0, 0.0),)
    else:
        radius = spacing / (2.0 * np.sin(np.pi / k))
        # phase offset puts k=4 on the corners of an axis-aligned square, so
        # the blobs span the bounding box instead of its edge midpoints
        angles = [np.pi / k + 2.0 * np.pi * j / k for j in range(k)]
        centers = tuple(
            (radius * float(np.cos(a)), radius * float(np.sin(a))) for a in angles
        )
    return BlobSpec(
        centers=centers,
        stddevs=(stddev,) * k,
        counts=(points_per_cluster,) * k,
        rng_seed=rng_seed,
    )
