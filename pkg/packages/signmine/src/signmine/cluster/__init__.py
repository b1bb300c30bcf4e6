from .clustering import (
    Clustering,
    DbscanConfig,
    UnionFind,
    canonical_labels,
    dbscan_cluster,
    grouping_cluster,
)
from .evaluation import (
    DEFAULT_MIN_SAMPLES,
    DEFAULT_THRESHOLDS,
    SweepRow,
    cluster_members,
    cluster_sizes,
    sweep,
)
from .projection import Projection2D, project_2d
from .silhouette import NOISE, silhouette, silhouette_score

__all__ = [
    "Clustering",
    "DbscanConfig",
    "UnionFind",
    "canonical_labels",
    "dbscan_cluster",
    "grouping_cluster",
    "DEFAULT_MIN_SAMPLES",
    "DEFAULT_THRESHOLDS",
    "SweepRow",
    "cluster_members",
    "cluster_sizes",
    "sweep",
    "Projection2D",
    "project_2d",
    "NOISE",
    "silhouette",
    "silhouette_score",
]
