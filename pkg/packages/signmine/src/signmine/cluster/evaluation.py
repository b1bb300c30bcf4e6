"""
Parameter sweeps and per-cluster listings.
"""

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from ..config import get_logger
from ..metric.affinity import AffinityMatrix
from ..metric.distance import SimilarityConfig
from ..segment.segmentation import Phoneme
from .clustering import Clustering, DbscanConfig, dbscan_cluster, grouping_cluster
from .silhouette import NOISE

logger = get_logger(__name__)

DEFAULT_THRESHOLDS = tuple(round(0.1 * k, 1) for k in range(11))
DEFAULT_MIN_SAMPLES = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class SweepRow:
    param: float
    n_clusters: int
    mean_size: float
    silhouette: Optional[float]
    noise_count: int


def sweep(
    matrix: AffinityMatrix,
    method: Literal["grouping", "dbscan"],
    grid: Sequence[float],
    eps: float = 0.5,
    deletion_cost: float = 1.0,
) -> list[SweepRow]:
    """
    Clusters the matrix once per grid value.

    For grouping the grid holds thresholds T; for DBSCAN it holds
    min_samples values at the fixed eps.
    """
    if not grid:
        raise ValueError("Sweep grid must not be empty")

    rows = []
    for value in grid:
        if method == "grouping":
            clustering = grouping_cluster(
                matrix, SimilarityConfig(threshold=value, deletion_cost=deletion_cost)
            )
        elif method == "dbscan":
            clustering = dbscan_cluster(matrix, DbscanConfig(eps=eps, min_samples=int(value)))
        else:
            raise ValueError(f"Unknown clustering method: {method}")
        rows.append(
            SweepRow(
                param=value,
                n_clusters=clustering.n_clusters,
                mean_size=clustering.mean_cluster_size,
                silhouette=clustering.silhouette,
                noise_count=clustering.noise_count,
            )
        )
    logger.info(f"{method} sweep over {len(rows)} parameter values")
    return rows


def cluster_sizes(clustering: Clustering) -> list[int]:
    """Member count of each cluster, indexed by label."""
    sizes = [0] * clustering.n_clusters
    for label in clustering.labels:
        if label != NOISE:
            sizes[label] += 1
    return sizes


def cluster_members(clustering: Clustering, phonemes: Sequence[Phoneme]) -> dict[int, list[Phoneme]]:
    """Phonemes of every cluster in label order; noise, if any, is listed under -1 last."""
    if len(phonemes) != len(clustering.labels):
        raise ValueError(f"{len(phonemes)} phonemes for {len(clustering.labels)} labels")
    members: dict[int, list[Phoneme]] = {label: [] for label in range(clustering.n_clusters)}
    for phoneme, label in zip(phonemes, clustering.labels):
        members.setdefault(int(label), []).append(phoneme)
    return members
