"""
Pairwise phoneme distance matrices and their CSV form.
"""

import csv
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..config import get_logger
from ..exceptions import DataError
from ..segment.segmentation import Phoneme
from .distance import SimilarityConfig, code_distances, encode

logger = get_logger(__name__)

CHUNK_PAIRS = 20000


@dataclass(frozen=True, eq=False)
class AffinityMatrix:
    """Symmetric distance matrix with zero diagonal; ids label rows and columns."""

    distances: np.ndarray
    ids: tuple[str, ...]

    def __post_init__(self):
        distances = np.array(self.distances, dtype=np.float64)
        n = len(self.ids)
        if distances.shape != (n, n):
            raise ValueError(f"Distance matrix must be {n}x{n}, got {distances.shape}")
        if np.any(np.diag(distances) != 0):
            raise ValueError("Distance matrix diagonal must be zero")
        if not np.array_equal(distances, distances.T):
            raise ValueError("Distance matrix must be symmetric")
        if np.any(distances < 0) or np.any(distances > 1):
            raise ValueError("Distances must lie in [0, 1]")
        distances.setflags(write=False)
        object.__setattr__(self, "distances", distances)
        object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def n(self) -> int:
        return len(self.ids)


def _bucket_pairs(lengths: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """Upper-triangle pairs grouped by (len_i, len_j)."""
    rows, cols = np.triu_indices(len(lengths), k=1)
    buckets: dict[tuple[int, int], np.ndarray] = {}
    keys = lengths[rows] * (lengths.max() + 1) + lengths[cols]
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    splits = np.nonzero(np.diff(sorted_keys))[0] + 1
    for group in np.split(order, splits):
        if len(group):
            buckets[(int(lengths[rows[group[0]]]), int(lengths[cols[group[0]]]))] = np.stack(
                [rows[group], cols[group]], axis=1
            )
    return buckets


def affinity_matrix(
    phonemes: Sequence[Phoneme],
    cfg: SimilarityConfig = SimilarityConfig(),
    workers: int = 1,
) -> AffinityMatrix:
    """
    Pairwise phoneme distances.

    Pairs are grouped by their two lengths so each group is one vectorized
    dynamic program; groups are split into chunks that may run on a thread
    pool. Every pair's value is independent of chunking, so the matrix is
    identical for any number of workers.
    """
    if not phonemes:
        raise DataError("Affinity matrix needs at least one phoneme")
    hands = {p.hand for p in phonemes}
    if len(hands) > 1:
        raise ValueError("Affinity matrices are built per hand; got phonemes of both hands")

    n = len(phonemes)
    distances = np.zeros((n, n))
    lengths = np.array([len(p) for p in phonemes], dtype=np.intp)
    codes = [encode(p.symbols) for p in phonemes]

    jobs = []
    if n > 1:
        for pairs in _bucket_pairs(lengths).values():
            a = np.stack([codes[i] for i in pairs[:, 0]])
            b = np.stack([codes[j] for j in pairs[:, 1]])
            for start in range(0, len(pairs), CHUNK_PAIRS):
                stop = start + CHUNK_PAIRS
                jobs.append((pairs[start:stop], a[start:stop], b[start:stop]))

    def run(job):
        pairs, a, b = job
        la = np.full(len(pairs), a.shape[1])
        lb = np.full(len(pairs), b.shape[1])
        return pairs, code_distances(a, la, b, lb, cfg)

    logger.info(f"Computing {n * (n - 1) // 2} phoneme distances in {len(jobs)} chunk(s) with {workers} worker(s)")
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run, job) for job in jobs]
            for future in as_completed(futures):
                pairs, values = future.result()
                distances[pairs[:, 0], pairs[:, 1]] = values
    else:
        for job in jobs:
            pairs, values = run(job)
            distances[pairs[:, 0], pairs[:, 1]] = values

    distances = distances + distances.T
    return AffinityMatrix(distances, tuple(p.id for p in phonemes))


def write_affinity_csv(matrix: AffinityMatrix, path: str | os.PathLike) -> None:
    """Header of phoneme ids, then one row per phoneme in 9-decimal fixed point."""
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(matrix.ids)
        for row in matrix.distances:
            writer.writerow(f"{value:.9f}" for value in row)


def read_affinity_csv(path: str | os.PathLike) -> AffinityMatrix:
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise DataError("Affinity CSV is empty", source=str(path))

    ids = tuple(rows[0])
    values = []
    for line_number, row in enumerate(rows[1:], start=2):
        if len(row) != len(ids):
            raise DataError(f"Expected {len(ids)} columns, got {len(row)}", source=str(path), line=line_number)
        try:
            values.append([float(v) for v in row])
        except ValueError as e:
            raise DataError(f"Not a number: {e}", source=str(path), line=line_number) from e
    try:
        return AffinityMatrix(np.array(values).reshape(len(values), len(ids)), ids)
    except ValueError as e:
        raise DataError(str(e), source=str(path)) from e
