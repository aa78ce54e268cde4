"""Synthetic benchmark generator: four planted bicluster/sparse patterns.

Each instance is a 100 x 50 matrix built from fixed rank-1 or rank-2 bicluster
factors (patterns 1/3), optionally plus independent sparse spikes (patterns
2/4), scaled down by a divisor, row/column shuffled, and corrupted with
i.i.d. Gaussian noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .matrix import DenseMatrix, read_tsv, write_tsv

N_ROWS, N_COLS = 100, 50


@dataclass(frozen=True)
class PatternSpec:
    pattern_id: int
    d: float = 50.0
    sparse_prob: float = 0.01
    sparse_value: float = 6.0
    noise_sigma: float = 1.0
    signal_divisor: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.pattern_id not in (1, 2, 3, 4):
            raise ValueError(f"pattern_id must be 1..4, got {self.pattern_id}")
        if not 0.0 <= self.sparse_prob <= 1.0:
            raise ValueError("sparse_prob must be a probability")
        if self.signal_divisor < 1.0:
            raise ValueError("signal_divisor must be >= 1")
        if self.noise_sigma <= 0:
            raise ValueError("noise_sigma must be positive")


@dataclass(frozen=True)
class SimulatedInstance:
    data: DenseMatrix          # signal + noise, shuffled
    truth_signal: DenseMatrix  # pre-noise signal, same shuffle as data
    truth_mask: np.ndarray     # boolean support of truth_signal
    row_perm: np.ndarray
    col_perm: np.ndarray
    snr: float
    spec: PatternSpec


def _steps(*runs):
    out = []
    for value, count in runs:
        out.extend([float(value)] * count)
    return np.array(out)


def factor_vectors() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four unit-norm bicluster factors (u1, v1, u2, v2).

    u's have length 100 (rows), v's length 50 (columns). u1/v1 define the
    single bicluster of patterns 1-2; u2/v2 add the overlapping second
    bicluster of patterns 3-4.
    """
    u1 = np.concatenate([[10, 9, 8, 7, 6, 5, 4, 3], _steps((2, 17), (0, 75))])
    v1 = np.concatenate([[10, -10, 8, -8, 5, -5], _steps((3, 5), (-3, 5), (0, 34))])
    u2 = np.concatenate([_steps((0, 13)), [10, 9, 8, 7, 6, 5, 4, 3], _steps((2, 17), (0, 62))])
    v2 = np.concatenate([_steps((0, 9)), [10, -9, 8, -7, 6, -5], _steps((4, 5), (-3, 5), (0, 25))])
    return tuple(x / np.linalg.norm(x) for x in (u1, v1, u2, v2))


def compute_snr(truth_signal, noise_sigma: float) -> float:
    """Root-mean-square of the signal over its support, divided by sigma."""
    a = truth_signal.values if isinstance(truth_signal, DenseMatrix) else np.asarray(truth_signal)
    support = a != 0
    if not support.any():
        raise ValueError("SNR is undefined for an all-zero signal")
    return float(np.sqrt((a[support] ** 2).mean()) / noise_sigma)


def generate(spec: PatternSpec) -> SimulatedInstance:
    """Build one seeded instance of the requested pattern.

    The seed is split into independent streams for the sparse draw, the
    shuffle, and the noise, so instances of patterns 1 and 2 (or 3 and 4)
    with the same seed differ only by the sparse spikes.
    """
    u1, v1, u2, v2 = factor_vectors()
    M = spec.d * np.outer(u1, v1)
    if spec.pattern_id >= 3:
        M = M + spec.d * np.outer(u2, v2)

    ss = np.random.SeedSequence(spec.seed)
    rng_sparse, rng_perm, rng_noise = (np.random.default_rng(s) for s in ss.spawn(3))
    if spec.pattern_id in (2, 4):
        spikes = rng_sparse.random((N_ROWS, N_COLS)) < spec.sparse_prob
        M = M + spec.sparse_value * spikes

    M = M / spec.signal_divisor
    row_perm = rng_perm.permutation(N_ROWS)
    col_perm = rng_perm.permutation(N_COLS)
    M = M[np.ix_(row_perm, col_perm)]
    noise = rng_noise.normal(0.0, spec.noise_sigma, M.shape)

    return SimulatedInstance(
        data=DenseMatrix(M + noise),
        truth_signal=DenseMatrix(M),
        truth_mask=M != 0,
        row_perm=row_perm,
        col_perm=col_perm,
        snr=compute_snr(M, spec.noise_sigma),
        spec=spec,
    )


def save_instance(inst: SimulatedInstance, outdir) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_tsv(inst.data, out / "data.tsv")
    write_tsv(inst.truth_signal, out / "truth.tsv")
    write_tsv(DenseMatrix(inst.truth_mask.astype(float)), out / "mask.tsv")
    spec = inst.spec
    meta = {
        "pattern": spec.pattern_id,
        "d": spec.d,
        "sparse_prob": spec.sparse_prob,
        "sparse_value": spec.sparse_value,
        "noise_sigma": spec.noise_sigma,
        "divisor": spec.signal_divisor,
        "seed": spec.seed,
        "snr": inst.snr,
        "row_perm": ",".join(map(str, inst.row_perm)),
        "col_perm": ",".join(map(str, inst.col_perm)),
    }
    with open(out / "meta.txt", "w") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def load_instance(indir) -> SimulatedInstance:
    src = Path(indir)
    meta = {}
    with open(src / "meta.txt") as fh:
        for line in fh:
            key, _, value = line.rstrip("\n").partition("=")
            meta[key] = value
    spec = PatternSpec(
        pattern_id=int(meta["pattern"]),
        d=float(meta["d"]),
        sparse_prob=float(meta["sparse_prob"]),
        sparse_value=float(meta["sparse_value"]),
        noise_sigma=float(meta["noise_sigma"]),
        signal_divisor=float(meta["divisor"]),
        seed=int(meta["seed"]),
    )
    return SimulatedInstance(
        data=read_tsv(src / "data.tsv"),
        truth_signal=read_tsv(src / "truth.tsv"),
        truth_mask=read_tsv(src / "mask.tsv").values.astype(bool),
        row_perm=np.array([int(x) for x in meta["row_perm"].split(",")]),
        col_perm=np.array([int(x) for x in meta["col_perm"].split(",")]),
        snr=float(meta["snr"]),
        spec=spec,
    )
