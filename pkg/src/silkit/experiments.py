"""Study drivers behind the CLI experiment commands.

Each driver is a pure function of its arguments (seeds included), so every
experiment is reproducible and the CLI layer only handles files. Thread
counts never change results: parallel tasks are independent and collected
in index order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .clustering import KMeansConfig, global_kmeanspp
from .core import Dataset, Labeling
from .kselect import SweepResult, estimate_k, sweep
from .sampling import MonteCarloCell, monte_carlo_study
from .silhouette import full_report
from .synth import (
    NUCLEUS_CLUSTER,
    NoiseSpec,
    add_background_noise,
    generate_blobs,
    grow_nucleus,
    imbalance_demo_spec,
    randomize_except,
    separated_blobs_spec,
)

__all__ = [
    "imbalance_dataset",
    "NucleusStudyRow",
    "nucleus_study",
    "NoiseStudyRow",
    "noise_study",
    "SampleStudyResult",
    "sample_study",
    "imbalance_sweep",
]

# rng streams derived from one experiment seed
_GROW_OFFSET = 1
_RANDOMIZE_OFFSET = 2
_NOISE_OFFSET = 10

NUCLEUS_STDDEV = 0.05

# The separated four-blob layout leaves most of the expanded box empty, so
# background noise spread "uniformly in the data space" needs a wider field
# than the default bounding-box pad.
NOISE_STUDY_PAD = 0.75


def imbalance_dataset(
    nucleus_total: int = 10_000, points_per_cluster: int = 100, seed: int = 0
) -> tuple[Dataset, Labeling]:
    """The 12-cluster imbalance demo grown to the requested nucleus size."""
    if nucleus_total < points_per_cluster:
        raise ValueError("nucleus_total must be at least points_per_cluster")
    data, labels = generate_blobs(imbalance_demo_spec(points_per_cluster, seed))
    added = nucleus_total - points_per_cluster
    rng = np.random.default_rng(seed + _GROW_OFFSET)
    return grow_nucleus(data, labels, NUCLEUS_CLUSTER, added, NUCLEUS_STDDEV, rng)


@dataclass(frozen=True)
class NucleusStudyRow:
    nucleus_size: int
    micro_randomized: float
    macro_randomized: float
    micro_truth: float
    macro_truth: float


def nucleus_study(
    sizes=(100, 500, 1000, 2000, 5000, 10_000),
    *,
    points_per_cluster: int = 100,
    seed: int = 0,
    threads: int | None = None,
) -> list[NucleusStudyRow]:
    """Micro/macro scores of the randomized-except-nucleus labeling and the
    ground-truth labeling, per nucleus size.

    The random relabeling of the non-nucleus points is drawn once (same
    seed and draw order at every size) and excludes the nucleus label, so
    the nucleus cluster stays pure while it grows: its mean silhouette, and
    therefore the macro average, is flat across sizes, while the micro
    average rises with the nucleus share of the points.
    """
    k = len(imbalance_demo_spec(points_per_cluster, seed).centers)

    def one(size: int) -> NucleusStudyRow:
        data, truth = imbalance_dataset(size, points_per_cluster, seed)
        randomized = randomize_except(
            truth,
            NUCLEUS_CLUSTER,
            k,
            np.random.default_rng(seed + _RANDOMIZE_OFFSET),
            allow_kept_label=False,
        )
        rand_report = full_report(data, randomized)
        truth_report = full_report(data, truth)
        return NucleusStudyRow(
            nucleus_size=size,
            micro_randomized=rand_report.micro,
            macro_randomized=rand_report.macro,
            micro_truth=truth_report.micro,
            macro_truth=truth_report.macro,
        )

    sizes = list(sizes)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, sizes))
    return [one(s) for s in sizes]


@dataclass(frozen=True)
class NoiseStudyRow:
    level_pct: float
    n_noise: int
    estimate_micro: int
    estimate_macro: int


def noise_study(
    levels_pct=(0, 10, 20, 30, 40, 50),
    *,
    k_min: int = 2,
    k_max: int = 30,
    blobs: int = 4,
    points_per_cluster: int = 200,
    seed: int = 0,
    cluster_seed: int = 5,
    noise_pad: float = NOISE_STUDY_PAD,
    threads: int | None = None,
) -> list[NoiseStudyRow]:
    """Estimated number of clusters per background-noise level.

    For each level, noise is injected into the same separated-blob dataset,
    the clusterer sweeps k, and both aggregations pick their best k.
    """
    base, base_labels = generate_blobs(separated_blobs_spec(blobs, points_per_cluster, seed))

    def one(item) -> NoiseStudyRow:
        index, level = item
        spec = NoiseSpec(
            level=level / 100.0,
            rng_seed=seed + _NOISE_OFFSET + index,
            pad=noise_pad,
        )
        noisy = add_background_noise(base, base_labels, spec)
        config = KMeansConfig(k=k_max, rng_seed=cluster_seed)
        result = sweep(noisy.dataset, k_min, k_max, config)
        return NoiseStudyRow(
            level_pct=float(level),
            n_noise=noisy.n_noise,
            estimate_micro=estimate_k(result, "micro"),
            estimate_macro=estimate_k(result, "macro"),
        )

    items = list(enumerate(levels_pct))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, items))
    return [one(it) for it in items]


@dataclass(frozen=True)
class SampleStudyResult:
    cells: list[MonteCarloCell]
    full_score: float
    statistic: str


def sample_study(
    sizes=(50, 100, 200, 400, 800),
    runs: int = 30,
    *,
    nucleus_total: int = 10_000,
    seed: int = 0,
    sample_seed_base: int = 10,
    statistic: str = "macro",
    threads: int | None = None,
) -> SampleStudyResult:
    """Monte Carlo comparison of uniform vs cluster-balanced sampling on
    the imbalance demo dataset, against the full-dataset score."""
    data, labels = imbalance_dataset(nucleus_total, seed=seed)
    report = full_report(data, labels)
    full_score = report.macro if statistic == "macro" else report.micro
    cells = monte_carlo_study(
        data,
        labels,
        sizes,
        runs,
        seed_base=sample_seed_base,
        statistic=statistic,
        threads=threads,
    )
    return SampleStudyResult(cells=cells, full_score=float(full_score), statistic=statistic)


def imbalance_sweep(
    nucleus_total: int = 10_000,
    *,
    k_min: int = 2,
    k_max: int = 30,
    seed: int = 0,
    cluster_seed: int = 1,
    sample_size: int | None = 1200,
) -> SweepResult:
    """The k-estimation sweep on the imbalance demo dataset, scored with a
    cluster-balanced subsample per k (or fully when sample_size is None)."""
    data, _ = imbalance_dataset(nucleus_total, seed=seed)
    config = KMeansConfig(k=k_max, rng_seed=cluster_seed)
    solutions = global_kmeanspp(data, k_max, config)
    return sweep(
        data,
        k_min,
        k_max,
        config,
        sample_size=sample_size,
        sample_strategy="balanced",
        solutions=solutions,
    )
