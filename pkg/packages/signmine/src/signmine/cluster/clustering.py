"""
Threshold grouping and DBSCAN over a phoneme affinity matrix.
"""

from dataclasses import dataclass, field
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import get_logger
from ..metric.affinity import AffinityMatrix
from ..metric.distance import SimilarityConfig
from .silhouette import NOISE, silhouette_score

logger = get_logger(__name__)


class DbscanConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    eps: float = Field(0.5, gt=0, description="Neighbourhood radius")
    min_samples: int = Field(3, ge=1, le=5, description="Neighbourhood size (self included) of a core point")


class UnionFind:
    """Disjoint sets over 0..n-1 with union by rank and path halving."""

    def __init__(self, n: int):
        self._parent = list(range(n))
        self._rank = [0] * n

    def find(self, p: int) -> int:
        parent = self._parent
        while p != parent[p]:
            p = parent[p] = parent[parent[p]]
        return p

    def union(self, p: int, q: int) -> None:
        i, j = self.find(p), self.find(q)
        if i == j:
            return
        if self._rank[i] < self._rank[j]:
            i, j = j, i
        self._parent[j] = i
        if self._rank[i] == self._rank[j]:
            self._rank[i] += 1


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Renumbers clusters 0, 1, ... in order of their smallest member; noise stays -1."""
    labels = np.asarray(labels)
    out = np.full(len(labels), NOISE, dtype=np.int64)
    mapping: dict[int, int] = {}
    for i, label in enumerate(labels):
        if label == NOISE:
            continue
        if label not in mapping:
            mapping[label] = len(mapping)
        out[i] = mapping[label]
    return out


@dataclass(frozen=True, eq=False)
class Clustering:
    labels: np.ndarray
    method: Literal["grouping", "dbscan"]
    params: dict[str, Any] = field(default_factory=dict)
    silhouette: Optional[float] = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        clustered = labels[labels != NOISE]
        if np.any(labels < NOISE):
            raise ValueError("Cluster labels must be >= -1")
        if len(clustered) and not np.array_equal(np.unique(clustered), np.arange(clustered.max() + 1)):
            raise ValueError("Cluster labels must be contiguous from 0")
        if self.method == "grouping" and len(clustered) != len(labels):
            raise ValueError("Grouping never labels noise")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_clusters(self) -> int:
        clustered = self.labels[self.labels != NOISE]
        return int(clustered.max()) + 1 if len(clustered) else 0

    @property
    def noise_count(self) -> int:
        return int(np.sum(self.labels == NOISE))

    @property
    def mean_cluster_size(self) -> float:
        if self.n_clusters == 0:
            return 0.0
        return (len(self.labels) - self.noise_count) / self.n_clusters


def _components(n: int, edges: np.ndarray) -> np.ndarray:
    uf = UnionFind(n)
    for i, j in edges:
        uf.union(int(i), int(j))
    return canonical_labels(np.array([uf.find(i) for i in range(n)]))


def grouping_cluster(matrix: AffinityMatrix, cfg: SimilarityConfig = SimilarityConfig()) -> Clustering:
    """
    Connected components of the similarity graph (edge where 1 - d >= T).

    The result does not depend on the order pairs are visited in.
    """
    similar = 1.0 - matrix.distances >= cfg.threshold
    edges = np.argwhere(np.triu(similar, k=1))
    labels = _components(matrix.n, edges)
    clustering = Clustering(
        labels,
        method="grouping",
        params={"threshold": cfg.threshold},
        silhouette=silhouette_score(matrix.distances, labels),
    )
    logger.info(f"Grouping at T={cfg.threshold}: {clustering.n_clusters} clusters over {matrix.n} phonemes")
    return clustering


def dbscan_cluster(matrix: AffinityMatrix, cfg: DbscanConfig = DbscanConfig()) -> Clustering:
    """
    DBSCAN on the precomputed distances.

    A point is core when at least min_samples points (itself included) lie
    within eps. Core points within eps of each other share a cluster; a
    border point joins the cluster of its lowest-index core neighbour; the
    rest is noise.
    """
    n = matrix.n
    neighbours = matrix.distances <= cfg.eps
    core = neighbours.sum(axis=1) >= cfg.min_samples

    core_edges = np.argwhere(np.triu(neighbours & core[:, None] & core[None, :], k=1))
    uf = UnionFind(n)
    for i, j in core_edges:
        uf.union(int(i), int(j))

    roots = np.full(n, NOISE, dtype=np.int64)
    for i in range(n):
        if core[i]:
            roots[i] = uf.find(i)
            continue
        core_neighbours = np.nonzero(neighbours[i] & core)[0]
        if len(core_neighbours):
            roots[i] = uf.find(int(core_neighbours[0]))

    labels = canonical_labels(roots)
    clustering = Clustering(
        labels,
        method="dbscan",
        params={"eps": cfg.eps, "min_samples": cfg.min_samples},
        silhouette=silhouette_score(matrix.distances, labels),
    )
    logger.info(
        f"DBSCAN eps={cfg.eps} min_samples={cfg.min_samples}: "
        f"{clustering.n_clusters} clusters, {clustering.noise_count} noise"
    )
    return clustering
