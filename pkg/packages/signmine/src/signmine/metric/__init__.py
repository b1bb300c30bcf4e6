from .affinity import AffinityMatrix, affinity_matrix, read_affinity_csv, write_affinity_csv
from .distance import (
    SimilarityConfig,
    SymbolCost,
    phoneme_distance,
    sequence_distance,
    similar,
    symbol_distance,
)

__all__ = [
    "AffinityMatrix",
    "affinity_matrix",
    "read_affinity_csv",
    "write_affinity_csv",
    "SimilarityConfig",
    "SymbolCost",
    "phoneme_distance",
    "sequence_distance",
    "similar",
    "symbol_distance",
]
