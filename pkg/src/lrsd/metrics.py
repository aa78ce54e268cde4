"""Detection scoring (precision/recall/F1) and the simulation benchmark."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .simulate import PatternSpec, generate
from .solver import SolverConfig, auto_config, detect, solve


@dataclass(frozen=True)
class DetectionReport:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    degenerate: bool = False   # a denominator was zero; affected metrics set to 0


def score(predicted: np.ndarray, truth: np.ndarray) -> DetectionReport:
    """Entrywise confusion counts and P/R/F1 of a mask against ground truth."""
    pred = np.asarray(predicted, dtype=bool)
    true = np.asarray(truth, dtype=bool)
    if pred.shape != true.shape:
        raise ValueError(f"mask shapes differ: {pred.shape} vs {true.shape}")
    tp = int((pred & true).sum())
    fp = int((pred & ~true).sum())
    fn = int((~pred & true).sum())
    tn = int((~pred & ~true).sum())

    degenerate = False
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision, degenerate = 0.0, True
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall, degenerate = 0.0, True
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1, degenerate = 0.0, True
    return DetectionReport(tp, fp, fn, tn, precision, recall, f1, degenerate)


@dataclass(frozen=True)
class BenchmarkRow:
    pattern_id: int
    divisor: float
    snr_mean: float
    precision_mean: float
    precision_std: float
    recall_mean: float
    recall_std: float
    f1_mean: float
    f1_std: float
    n_seeds: int


def run_cell(spec: PatternSpec, n_seeds: int, config: SolverConfig | None = None):
    """Generate/solve/detect/score one (pattern, divisor) cell over seeds."""
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    reports, snrs = [], []
    for i in range(n_seeds):
        inst = generate(
            PatternSpec(
                pattern_id=spec.pattern_id,
                d=spec.d,
                sparse_prob=spec.sparse_prob,
                sparse_value=spec.sparse_value,
                noise_sigma=spec.noise_sigma,
                signal_divisor=spec.signal_divisor,
                seed=spec.seed + i,
            )
        )
        cfg = config if config is not None else auto_config(inst.data)
        result = solve(inst.data, cfg)
        T = cfg.detection_threshold
        if T == "auto":
            T = auto_config(inst.data).detection_threshold
        reports.append(score(detect(result, T), inst.truth_mask))
        snrs.append(inst.snr)
    return reports, snrs


def benchmark(
    patterns: list[PatternSpec],
    n_seeds: int,
    config: SolverConfig | None = None,
) -> list[BenchmarkRow]:
    """Mean/std of P/R/F1 per pattern spec, averaged over consecutive seeds."""
    rows = []
    for spec in patterns:
        reports, snrs = run_cell(spec, n_seeds, config)
        ps = np.array([r.precision for r in reports])
        rs = np.array([r.recall for r in reports])
        fs = np.array([r.f1 for r in reports])
        rows.append(
            BenchmarkRow(
                pattern_id=spec.pattern_id,
                divisor=spec.signal_divisor,
                snr_mean=float(np.mean(snrs)),
                precision_mean=float(ps.mean()),
                precision_std=float(ps.std(ddof=1)) if len(ps) > 1 else 0.0,
                recall_mean=float(rs.mean()),
                recall_std=float(rs.std(ddof=1)) if len(rs) > 1 else 0.0,
                f1_mean=float(fs.mean()),
                f1_std=float(fs.std(ddof=1)) if len(fs) > 1 else 0.0,
                n_seeds=n_seeds,
            )
        )
    return rows


BENCH_COLUMNS = (
    "pattern",
    "divisor",
    "snr_mean",
    "precision_mean",
    "precision_std",
    "recall_mean",
    "recall_std",
    "f1_mean",
    "f1_std",
)


def write_benchmark_tsv(rows: list[BenchmarkRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("\t".join(BENCH_COLUMNS) + "\n")
        for r in rows:
            fh.write(
                "\t".join(
                    [
                        str(r.pattern_id),
                        f"{r.divisor:g}",
                        f"{r.snr_mean:.4f}",
                        f"{r.precision_mean:.4f}",
                        f"{r.precision_std:.4f}",
                        f"{r.recall_mean:.4f}",
                        f"{r.recall_std:.4f}",
                        f"{r.f1_mean:.4f}",
                        f"{r.f1_std:.4f}",
                    ]
                )
                + "\n"
            )
