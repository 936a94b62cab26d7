"""Estimating the number of clusters: sweep candidate k values, score each
solution with both silhouette aggregations, and pick the maximum.

Ties on the maximum resolve to the smallest k (a plateau of equal scores
should yield the most parsimonious model). Sweeps start at k=2 because the
silhouette needs a second cluster to compare against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import KMeansConfig, KMeansResult, global_kmeanspp
from .core import Dataset
from .sampling import SampleSpec, sample_and_score
from .silhouette import full_report

__all__ = ["SweepRow", "SweepResult", "sweep", "estimate_k"]

AGGREGATIONS = ("micro", "macro")


@dataclass(frozen=True)
class SweepRow:
    k: int
    micro: float
    macro: float
    sse: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    k_min: int
    k_max: int

    def __post_init__(self):
        if not self.rows:
            raise ValueError("sweep produced no rows")
        if self.k_min < 2:
            raise ValueError("sweep range must start at k >= 2")

    def column(self, aggregation: str) -> np.ndarray:
        if aggregation not in AGGREGATIONS:
            raise ValueError(f"aggregation must be one of {AGGREGATIONS}")
        return np.array([getattr(r, aggregation) for r in self.rows])

    @property
    def argmax_micro(self) -> int:
        return estimate_k(self, "micro")

    @property
    def argmax_macro(self) -> int:
        return estimate_k(self, "macro")


def sweep(
    data: Dataset,
    k_min: int,
    k_max: int,
    config: KMeansConfig,
    *,
    sample_size: int | None = None,
    sample_strategy: str = "balanced",
    sample_seed: int | None = None,
    solutions: dict[int, KMeansResult] | None = None,
) -> SweepResult:
    """Cluster for every k in [k_min, k_max] and score each solution.

    With ``sample_size`` set (and smaller than N), each solution is scored
    on a subsample: macro is the subsample's macro and micro re-weights the
    cluster means by full cluster sizes. Each k draws its own subsample
    with seed ``sample_seed + k``. ``solutions`` short-circuits clustering
    when the caller already ran global_kmeanspp on this data.
    """
    if not 2 <= k_min <= k_max <= data.n - 1:
        raise ValueError(f"need 2 <= k_min <= k_max <= N-1, got [{k_min}, {k_max}] with N={data.n}")
    if solutions is None:
        solutions = global_kmeanspp(data, k_max, config)
    if sample_seed is None:
        sample_seed = config.rng_seed

    rows = []
    for k in range(k_min, k_max + 1):
        result = solutions[k]
        labeling = result.labeling
        if sample_size is not None and sample_size < data.n:
            spec = SampleSpec(sample_strategy, sample_size, sample_seed + k)
            scored = sample_and_score(data, labeling, spec)
            if not scored.defined:
                raise RuntimeError(
                    f"subsample at k={k} lost all but one cluster; enlarge sample_size"
                )
            micro, macro = scored.micro_weighted, scored.report.macro
        else:
            report = full_report(data, labeling)
            micro, macro = report.micro, report.macro
        rows.append(SweepRow(k=k, micro=float(micro), macro=float(macro), sse=result.sse))
    return SweepResult(rows=tuple(rows), k_min=k_min, k_max=k_max)


def estimate_k(result: SweepResult, aggregation: str) -> int:
    """Smallest k attaining the maximum of the chosen score column."""
    column = result.column(aggregation)
    return result.rows[int(np.argmax(column))].k
