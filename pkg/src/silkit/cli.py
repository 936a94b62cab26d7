"""Command-line surface for dataset generation, scoring, and the study
experiments.

Every output file embeds its resolved configuration: CSV files as leading
``# key=value`` comment lines, JSON files under a ``config`` key. Re-running
a command with the same arguments (and any ``--threads`` value) reproduces
the file byte for byte. The SIL_SEED environment variable overrides --seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .clustering import KMeansConfig, global_kmeanspp
from .core import Dataset, Labeling, canonicalize_labels
from .experiments import (
    NOISE_STUDY_PAD,
    NUCLEUS_STDDEV,
    noise_study,
    nucleus_study,
    sample_study,
)
from .ingest import (
    ColumnSchema,
    impute_mean,
    load_csv,
    minmax_normalize,
    one_hot,
    read_dataset_csv,
    write_dataset_csv,
)
from .kselect import sweep
from .sampling import SampleSpec, sample_and_score
from .silhouette import SilhouetteUndefinedError, full_report
from .synth import (
    NUCLEUS_CLUSTER,
    NoiseSpec,
    add_background_noise,
    generate_blobs,
    grow_nucleus,
    imbalance_demo_spec,
    separated_blobs_spec,
)

PROFILES = ("even", "varied")


def _resolve_seed(seed: int) -> int:
    env = os.environ.get("SIL_SEED")
    return int(env) if env else seed


def _threads(value: int | None) -> int:
    return value if value else (os.cpu_count() or 1)


def _config(cmd: str, args: argparse.Namespace, keys: list[str]) -> dict:
    resolved = {"command": cmd, "version": __version__}
    for key in keys:
        value = getattr(args, key)
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        resolved[key.replace("_", "-")] = value
    return resolved


def _write_csv(path, config: dict, header: list[str], rows: list[list]):
    def fmt(v):
        if isinstance(v, float):
            return repr(v)
        return str(v)

    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        for key in sorted(config):
            fh.write(f"# {key}={config[key]}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _write_json(path, payload: dict):
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _load_dataset(args) -> Dataset:
    """Read a dataset: the canonical points+label CSV, or any CSV through
    the preprocessing pipeline when --schema is given."""
    if getattr(args, "schema", None):
        schema = ColumnSchema.from_file(args.schema)
        data = minmax_normalize(one_hot(impute_mean(load_csv(args.data, schema))))
        if getattr(args, "prepared_out", None):
            write_dataset_csv(
                args.prepared_out, data, header_lines={"source": args.data, "schema": args.schema}
            )
        return data
    return read_dataset_csv(args.data)


def _load_labels(args, data: Dataset) -> Labeling:
    if args.labels:
        raw = np.loadtxt(args.labels, dtype=np.int64, ndmin=1)
        if len(raw) != data.n:
            raise SystemExit(f"label file has {len(raw)} entries for {data.n} rows")
        return canonicalize_labels(raw)
    if data.truth_labels is None:
        raise SystemExit("dataset has no label column; pass --labels")
    return canonicalize_labels(data.truth_labels)


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.profile == "varied" or args.nucleus_extra > 0:
        spec = imbalance_demo_spec(args.n, seed)
        if args.k != len(spec.centers):
            raise SystemExit(
                f"the varied profile is the {len(spec.centers)}-cluster demo layout; use --k {len(spec.centers)}"
            )
    else:
        spec = separated_blobs_spec(args.k, args.n, seed, stddev=args.stddev)
    data, labels = generate_blobs(spec)
    if args.nucleus_extra > 0:
        rng = np.random.default_rng(seed + 1)
        data, labels = grow_nucleus(
            data, labels, NUCLEUS_CLUSTER, args.nucleus_extra, NUCLEUS_STDDEV, rng
        )
    if args.noise_pct > 0:
        noise = NoiseSpec(level=args.noise_pct / 100.0, rng_seed=seed + 2, pad=args.noise_pad)
        data = add_background_noise(data, labels, noise).dataset
    config = _config(
        "gen",
        args,
        ["k", "n", "profile", "nucleus_extra", "noise_pct", "noise_pad", "stddev"],
    )
    config["seed"] = seed
    write_dataset_csv(args.output, data, header_lines=config)
    print(f"wrote {data.n} rows to {args.output}")
    return 0


def cmd_score(args) -> int:
    seed = _resolve_seed(args.seed)
    data = _load_dataset(args)
    labels = _load_labels(args, data)
    config = _config("score", args, ["data", "labels", "sample", "strategy"])
    config["seed"] = seed
    payload = {"config": config}
    if args.sample:
        spec = SampleSpec(args.strategy, args.sample, seed)
        result = sample_and_score(data, labels, spec)
        payload["sample"] = {
            "strategy": args.strategy,
            "size": args.sample,
            "seed": seed,
            "defined": result.defined,
            "drawn_counts": [int(c) for c in result.drawn_counts],
            "surviving_clusters": [int(c) for c in result.surviving_clusters],
        }
        if result.defined:
            payload["report"] = result.report.to_dict()
            payload["sample"]["micro_weighted"] = result.micro_weighted
        else:
            payload["report"] = None  # silhouette undefined: data, not failure
    else:
        try:
            payload["report"] = full_report(data, labels).to_dict()
        except SilhouetteUndefinedError as exc:
            raise SystemExit(f"cannot score: {exc}") from None
    _write_json(args.output, payload)
    print(f"wrote report to {args.output}")
    return 0


def cmd_cluster(args) -> int:
    seed = _resolve_seed(args.seed)
    data = _load_dataset(args)
    config_obj = KMeansConfig(k=args.k, rng_seed=seed, n_candidates=args.candidates)
    results = global_kmeanspp(data, args.k, config_obj)
    result = results[args.k]
    config = _config("cluster", args, ["data", "k", "candidates"])
    config["seed"] = seed
    _write_json(args.output, {"config": config, **result.to_dict()})
    print(f"k={args.k} sse={result.sse:.6g} -> {args.output}")
    return 0


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args.seed)
    data = _load_dataset(args)
    config_obj = KMeansConfig(k=args.k_max, rng_seed=seed, n_candidates=args.candidates)
    result = sweep(
        data,
        args.k_min,
        args.k_max,
        config_obj,
        sample_size=args.sample,
        sample_strategy=args.strategy,
    )
    config = _config(
        "sweep", args, ["data", "k_min", "k_max", "sample", "strategy", "candidates"]
    )
    config["seed"] = seed
    config["argmax-micro"] = result.argmax_micro
    config["argmax-macro"] = result.argmax_macro
    if args.format == "json":
        _write_json(
            args.output,
            {
                "config": config,
                "rows": [
                    {"k": r.k, "micro": r.micro, "macro": r.macro, "sse": r.sse}
                    for r in result.rows
                ],
                "argmax_micro": result.argmax_micro,
                "argmax_macro": result.argmax_macro,
            },
        )
    else:
        _write_csv(
            args.output,
            config,
            ["k", "micro", "macro", "sse"],
            [[r.k, r.micro, r.macro, r.sse] for r in result.rows],
        )
    print(
        f"swept k in [{args.k_min}, {args.k_max}]: argmax_micro={result.argmax_micro} "
        f"argmax_macro={result.argmax_macro} -> {args.output}"
    )
    return 0


def cmd_nucleus_study(args) -> int:
    seed = _resolve_seed(args.seed)
    rows = nucleus_study(args.sizes, seed=seed, threads=_threads(args.threads))
    config = _config("nucleus-study", args, ["sizes"])
    config["seed"] = seed
    _write_csv(
        args.output,
        config,
        ["nucleus_size", "micro_randomized", "macro_randomized", "micro_truth", "macro_truth"],
        [
            [r.nucleus_size, r.micro_randomized, r.macro_randomized, r.micro_truth, r.macro_truth]
            for r in rows
        ],
    )
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def cmd_noise_study(args) -> int:
    seed = _resolve_seed(args.seed)
    rows = noise_study(
        args.levels,
        k_min=args.k_min,
        k_max=args.k_max,
        seed=seed,
        cluster_seed=args.cluster_seed,
        noise_pad=args.noise_pad,
        threads=_threads(args.threads),
    )
    config = _config(
        "noise-study", args, ["levels", "k_min", "k_max", "cluster_seed", "noise_pad"]
    )
    config["seed"] = seed
    _write_csv(
        args.output,
        config,
        ["level_pct", "n_noise", "estimate_micro", "estimate_macro"],
        [[r.level_pct, r.n_noise, r.estimate_micro, r.estimate_macro] for r in rows],
    )
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def cmd_sample_study(args) -> int:
    seed = _resolve_seed(args.seed)
    result = sample_study(
        args.sizes,
        args.runs,
        nucleus_total=args.nucleus,
        seed=seed,
        sample_seed_base=args.sample_seed_base,
        statistic=args.statistic,
        threads=_threads(args.threads),
    )
    config = _config(
        "sample-study",
        args,
        ["sizes", "runs", "nucleus", "statistic", "sample_seed_base"],
    )
    config["seed"] = seed
    config["full-score"] = repr(result.full_score)
    run_rows = []
    for cell in result.cells:
        for run, score in enumerate(cell.scores):
            defined = not np.isnan(score)
            run_rows.append(
                [cell.size, cell.strategy, run, repr(float(score)) if defined else "", defined]
            )
    _write_csv(args.output, config, ["L", "strategy", "run", "score", "defined"], run_rows)
    summary_rows = [
        [
            c.size,
            c.strategy,
            c.median,
            c.whisker_low,
            c.whisker_high,
            c.whisker_range,
            c.undefined_runs,
        ]
        for c in result.cells
    ]
    _write_csv(
        args.summary,
        config,
        ["L", "strategy", "median", "whisker_low", "whisker_high", "whisker_range", "undefined_runs"],
        summary_rows,
    )
    print(f"wrote {len(run_rows)} runs to {args.output} and summary to {args.summary}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="silkit",
        description="Silhouette scoring (micro/macro), balanced sampling, and k estimation",
    )
    parser.add_argument("--version", action="version", version=f"silkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate synthetic datasets")
    gen_sub = gen.add_subparsers(dest="generator", required=True)
    blobs = gen_sub.add_parser("blobs", help="isotropic Gaussian blobs")
    blobs.add_argument("--k", type=int, default=4, help="number of clusters")
    blobs.add_argument("--n", type=int, default=200, help="points per cluster")
    blobs.add_argument(
        "--profile",
        choices=PROFILES,
        default="even",
        help="even: equal blobs on a ring; varied: the 12-cluster imbalance demo",
    )
    blobs.add_argument("--nucleus-extra", type=int, default=0, help="points added to the nucleus cluster (implies --profile varied)")
    blobs.add_argument("--noise-pct", type=float, default=0.0, help="background noise level in percent")
    blobs.add_argument("--noise-pad", type=float, default=0.10, help="noise box padding per side (fraction of span)")
    blobs.add_argument("--stddev", type=float, default=1.0, help="blob stddev for the even profile")
    blobs.add_argument("--seed", type=int, default=0)
    blobs.add_argument("-o", "--output", required=True)
    blobs.set_defaults(func=cmd_gen)

    score = sub.add_parser("score", help="silhouette report for a labeled dataset")
    score.add_argument("--data", required=True, help="dataset CSV (last column = label)")
    score.add_argument("--schema", help="schema config JSON for preprocessing a raw CSV")
    score.add_argument("--prepared-out", help="write the preprocessed dataset CSV here for audit")
    score.add_argument("--labels", help="optional label file overriding the CSV label column")
    score.add_argument("--sample", type=int, help="score a subsample of this size")
    score.add_argument("--strategy", choices=("uniform", "balanced"), default="balanced")
    score.add_argument("--seed", type=int, default=0)
    score.add_argument("-o", "--output", required=True)
    score.set_defaults(func=cmd_score)

    cluster = sub.add_parser("cluster", help="global k-means++ clustering")
    cluster.add_argument("--data", required=True)
    cluster.add_argument("--schema", help="schema config JSON for preprocessing a raw CSV")
    cluster.add_argument("--prepared-out", help="write the preprocessed dataset CSV here for audit")
    cluster.add_argument("--k", type=int, required=True)
    cluster.add_argument("--candidates", type=int, default=10)
    cluster.add_argument("--seed", type=int, default=0)
    cluster.add_argument("-o", "--output", required=True)
    cluster.set_defaults(func=cmd_cluster)

    sweep_p = sub.add_parser("sweep", help="k-sweep with micro/macro silhouette scores")
    sweep_p.add_argument("--data", required=True)
    sweep_p.add_argument("--schema", help="schema config JSON for preprocessing a raw CSV")
    sweep_p.add_argument("--prepared-out", help="write the preprocessed dataset CSV here for audit")
    sweep_p.add_argument("--k-min", type=int, default=2)
    sweep_p.add_argument("--k-max", type=int, default=30)
    sweep_p.add_argument("--sample", type=int, help="balanced-sample size for scoring each k")
    sweep_p.add_argument("--strategy", choices=("uniform", "balanced"), default="balanced")
    sweep_p.add_argument("--candidates", type=int, default=10)
    sweep_p.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("-o", "--output", required=True)
    sweep_p.set_defaults(func=cmd_sweep)

    nucleus = sub.add_parser("nucleus-study", help="imbalance attack: score vs nucleus size")
    nucleus.add_argument("--sizes", type=_int_list, default=[100, 500, 1000, 2000, 5000, 10000])
    nucleus.add_argument("--seed", type=int, default=0)
    nucleus.add_argument("--threads", type=int)
    nucleus.add_argument("-o", "--output", required=True)
    nucleus.set_defaults(func=cmd_nucleus_study)

    noise = sub.add_parser("noise-study", help="estimated k per background-noise level")
    noise.add_argument("--levels", type=_float_list, default=[0, 10, 20, 30, 40, 50])
    noise.add_argument("--k-min", type=int, default=2)
    noise.add_argument("--k-max", type=int, default=30)
    noise.add_argument("--cluster-seed", type=int, default=5)
    noise.add_argument("--noise-pad", type=float, default=NOISE_STUDY_PAD)
    noise.add_argument("--seed", type=int, default=0)
    noise.add_argument("--threads", type=int)
    noise.add_argument("-o", "--output", required=True)
    noise.set_defaults(func=cmd_noise_study)

    samples = sub.add_parser("sample-study", help="uniform vs balanced sampling Monte Carlo")
    samples.add_argument("--sizes", type=_int_list, default=[50, 100, 200, 400, 800])
    samples.add_argument("--runs", type=int, default=30)
    samples.add_argument("--nucleus", type=int, default=10000, help="nucleus cluster size")
    samples.add_argument("--statistic", choices=("macro", "micro"), default="macro")
    samples.add_argument("--sample-seed-base", type=int, default=10)
    samples.add_argument("--seed", type=int, default=0)
    samples.add_argument("--threads", type=int)
    samples.add_argument("-o", "--output", required=True)
    samples.add_argument("--summary", required=True)
    samples.set_defaults(func=cmd_sample_study)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
