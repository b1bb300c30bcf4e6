"""
Silhouette coefficient over a precomputed distance matrix.
"""

from typing import TYPE_CHECKING, Optional

import numpy as np

from ..metric.affinity import AffinityMatrix

if TYPE_CHECKING:
    from .clustering import Clustering

NOISE = -1


def silhouette_score(distances: np.ndarray, labels: np.ndarray) -> Optional[float]:
    """
    Mean silhouette of the non-noise points, or None with fewer than 2 clusters.

    Points alone in their cluster score 0; a point whose a and b are both 0
    scores 0 as well.
    """
    labels = np.asarray(labels)
    keep = labels != NOISE
    labels = labels[keep]
    clusters, labels = np.unique(labels, return_inverse=True)
    if len(clusters) < 2:
        return None

    d = np.asarray(distances, dtype=np.float64)[np.ix_(keep, keep)]
    one_hot = np.zeros((len(labels), len(clusters)))
    one_hot[np.arange(len(labels)), labels] = 1.0
    sums = d @ one_hot
    counts = one_hot.sum(axis=0)

    rows = np.arange(len(labels))
    own_count = counts[labels]
    a = np.divide(sums[rows, labels], own_count - 1, out=np.zeros(len(labels)), where=own_count > 1)

    means = sums / counts
    means[rows, labels] = np.inf
    b = means.min(axis=1)

    denom = np.maximum(a, b)
    scores = np.divide(b - a, denom, out=np.zeros(len(labels)), where=denom > 0)
    scores[own_count <= 1] = 0.0
    return float(scores.mean())


def silhouette(matrix: AffinityMatrix, clustering: "Clustering") -> Optional[float]:
    return silhouette_score(matrix.distances, clustering.labels)
