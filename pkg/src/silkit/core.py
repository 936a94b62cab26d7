"""Core data containers: datasets, labelings, and distance computation.

Everything downstream (silhouette scoring, sampling, k-means) works on the
three immutable containers defined here. Distances are always computed with
the direct difference formula so that the full-matrix path and the streaming
per-row path produce bit-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "MetricTag",
    "Dataset",
    "Labeling",
    "DistanceMatrix",
    "DatasetStats",
    "pairwise_distances",
    "distances_from_point",
    "canonicalize_labels",
    "dataset_stats",
]


class MetricTag(Enum):
    """Distance metric selector. Only Euclidean is implemented today."""

    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class Dataset:
    """N x d matrix of finite reals with optional per-row class annotations.

    ``truth_labels`` holds integer class ids when ground truth is known;
    -1 marks rows without a class (e.g. injected background noise).
    """

    points: np.ndarray
    truth_labels: np.ndarray | None = None
    column_names: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be a non-empty 2-D matrix, got shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise ValueError("points contain NaN or Inf")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.truth_labels is not None:
            tl = np.asarray(self.truth_labels, dtype=np.int64).copy()
            if tl.shape != (pts.shape[0],):
                raise ValueError("truth_labels length must equal the number of rows")
            tl.setflags(write=False)
            object.__setattr__(self, "truth_labels", tl)
        if self.column_names is not None:
            names = tuple(self.column_names)
            if len(names) != pts.shape[1]:
                raise ValueError("column_names length must equal the number of columns")
            object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class Labeling:
    """Cluster assignment: per-row ids in 0..k-1, all k ids present."""

    assignments: np.ndarray
    k: int

    def __post_init__(self):
        arr = np.asarray(self.assignments, dtype=np.int64).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("assignments must be a non-empty 1-D sequence")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        present = np.unique(arr)
        if present[0] < 0 or present[-1] >= self.k or len(present) != self.k:
            raise ValueError(
                f"assignments must use exactly the ids 0..{self.k - 1}; found {present}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "assignments", arr)

    @classmethod
    def from_raw(cls, raw) -> "Labeling":
        return canonicalize_labels(raw)

    @property
    def n(self) -> int:
        return self.assignments.shape[0]

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == c)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative N x N matrix with zero diagonal."""

    entries: np.ndarray
    metric: MetricTag = MetricTag.EUCLIDEAN

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"entries must be square, got shape {m.shape}")
        if (m < 0).any():
            raise ValueError("distances must be nonnegative")
        if np.diagonal(m).any():
            raise ValueError("diagonal must be zero")
        if not np.array_equal(m, m.T):
            raise ValueError("entries must be symmetric")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]


@dataclass(frozen=True)
class DatasetStats:
    """Per-cluster sizes, imbalance ratio, and per-dimension bounding box."""

    cluster_sizes: tuple[int, ...]
    imbalance_ratio: float
    bounding_box: tuple[tuple[float, float], ...] = field(default=())


def _distance_block(points: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Euclidean distances from rows lo..hi-1 to every row.

    Direct difference formula: no gram-matrix shortcut, so nearby points do
    not lose precision to cancellation and every caller gets identical bits
    regardless of block size.
    """
    diff = points[lo:hi, None, :] - points[None, :, :]
    return np.sqrt((diff * diff).sum(-1))


def block_rows_for(n: int, dim: int, target_bytes: int = 1 << 26) -> int:
    """Block height keeping the (rows x n x dim) temporary near target_bytes."""
    rows = max(1, target_bytes // max(1, n * dim * 8))
    return int(min(rows, n))


def pairwise_distances(data: Dataset, metric: MetricTag = MetricTag.EUCLIDEAN) -> DistanceMatrix:
    """Full N x N Euclidean distance matrix (O(N^2) time and memory)."""
    if metric is not MetricTag.EUCLIDEAN:
        raise ValueError(f"unsupported metric: {metric}")
    pts = data.points
    n = data.n
    out = np.empty((n, n), dtype=np.float64)
    step = block_rows_for(n, data.dim)
    for lo in range(0, n, step):
        hi = min(lo + step, n)
        out[lo:hi] = _distance_block(pts, lo, hi)
    # (a-b)^2 == (b-a)^2 bitwise, so the result is exactly symmetric and the
    # diagonal is exactly zero; the DistanceMatrix validator re-checks both.
    return DistanceMatrix(out, metric)


def distances_from_point(data: Dataset, i: int, metric: MetricTag = MetricTag.EUCLIDEAN) -> np.ndarray:
    """Row i of the full distance matrix, computed without materializing it."""
    if metric is not MetricTag.EUCLIDEAN:
        raise ValueError(f"unsupported metric: {metric}")
    if not 0 <= i < data.n:
        raise IndexError(f"row index {i} out of range for {data.n} rows")
    return _distance_block(data.points, i, i + 1)[0]


def canonicalize_labels(raw) -> Labeling:
    """Remap arbitrary integer ids to 0..k-1 in first-occurrence order."""
    arr = np.asarray(raw, dtype=np.int64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("raw labels must be a non-empty 1-D sequence")
    _, first_pos, inverse = np.unique(arr, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first_pos, kind="stable"), kind="stable")
    return Labeling(order[inverse], k=len(first_pos))


def dataset_stats(data: Dataset, labels: Labeling) -> DatasetStats:
    """Cluster sizes, min/max size ratio, and the data bounding box."""
    if labels.n != data.n:
        raise ValueError("labeling length does not match dataset")
    sizes = labels.cluster_sizes()
    ratio = float(sizes.min() / sizes.max())
    lo = data.points.min(axis=0)
    hi = data.points.max(axis=0)
    box = tuple((float(a), float(b)) for a, b in zip(lo, hi))
    return DatasetStats(tuple(int(s) for s in sizes), ratio, box)
