"""
Symbol distance and the normalized weighted edit distance between phonemes.

Symbols are encoded as integer codes (sector * 3 + level) so that batches of
equal-shaped sequences can be compared with one vectorized dynamic program.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import EmptyPhoneme
from ..phonology.descriptors import SECTORS, LocationLevel, Symbol
from ..segment.segmentation import Phoneme

LEVELS = len(LocationLevel)
N_SYMBOLS = SECTORS * LEVELS
MAX_ORIENTATION_DISTANCE = SECTORS // 2
MAX_LOCATION_DISTANCE = LEVELS - 1


class SimilarityConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    threshold: float = Field(0.5, ge=0.0, le=1.0, description="Similarity threshold T")
    deletion_cost: float = Field(1.0, gt=0, description="Cost of inserting or deleting one symbol")


@dataclass(frozen=True)
class SymbolCost:
    orientation_distance: int
    location_distance: int

    @property
    def combined(self) -> float:
        return (
            self.orientation_distance / MAX_ORIENTATION_DISTANCE
            + self.location_distance / MAX_LOCATION_DISTANCE
        ) / 2


def symbol_distance(a: Symbol, b: Symbol) -> SymbolCost:
    """Circular sector distance and level distance of two (sector, level) symbols."""
    step = abs(a[0] - b[0]) % SECTORS
    return SymbolCost(
        orientation_distance=min(step, SECTORS - step),
        location_distance=abs(a[1] - b[1]),
    )


def symbol_code(symbol: Symbol) -> int:
    return symbol[0] * LEVELS + symbol[1]


def encode(symbols: Sequence[Symbol]) -> np.ndarray:
    return np.array([symbol_code(s) for s in symbols], dtype=np.intp)


@lru_cache(maxsize=1)
def cost_table() -> np.ndarray:
    """N_SYMBOLS x N_SYMBOLS substitution costs indexed by symbol code."""
    table = np.zeros((N_SYMBOLS, N_SYMBOLS))
    for a in range(N_SYMBOLS):
        for b in range(N_SYMBOLS):
            table[a, b] = symbol_distance(divmod(a, LEVELS), divmod(b, LEVELS)).combined
    table.setflags(write=False)
    return table


def _edit_costs(
    a: np.ndarray,
    la: np.ndarray,
    b: np.ndarray,
    lb: np.ndarray,
    indel: float,
) -> np.ndarray:
    """
    Weighted Levenshtein costs for a batch of padded code sequences.

    Row i of the table is computed for all pairs at once; a pair's cost is
    read off when i reaches its own length. Columns past lb[p] never feed
    columns at or before it, so padding does not leak into results.
    """
    table = cost_table()
    n_pairs, width_a = a.shape
    width_b = b.shape[1]
    result = np.empty(n_pairs)

    ramp = np.arange(width_b + 1) * indel
    prev = np.tile(ramp, (n_pairs, 1))
    rows = np.arange(n_pairs)
    done = la == 0
    result[done] = prev[rows[done], lb[done]]

    for i in range(1, width_a + 1):
        sub = table[a[:, i - 1][:, None], b]
        best = np.empty_like(prev)
        best[:, 0] = i * indel
        best[:, 1:] = np.minimum(prev[:, :-1] + sub, prev[:, 1:] + indel)
        # cur[j] = min(best[j], cur[j - 1] + indel), as a running minimum
        cur = np.minimum.accumulate(best - ramp, axis=1) + ramp
        done = la == i
        if np.any(done):
            result[done] = cur[rows[done], lb[done]]
        prev = cur
    return result


def _canonical_order(a, la, b, lb):
    """Puts the shorter (or lexicographically smaller) sequence first in every pair."""
    width = max(a.shape[1], b.shape[1])
    a = np.pad(a, ((0, 0), (0, width - a.shape[1])))
    b = np.pad(b, ((0, 0), (0, width - b.shape[1])))
    differs = a != b
    first = differs.argmax(axis=1)
    rows = np.arange(len(a))
    b_smaller = differs.any(axis=1) & (b[rows, first] < a[rows, first])
    swap = (lb < la) | ((lb == la) & b_smaller)
    return (
        np.where(swap[:, None], b, a),
        np.where(swap, lb, la),
        np.where(swap[:, None], a, b),
        np.where(swap, la, lb),
    )


def code_distances(
    a: np.ndarray,
    la: np.ndarray,
    b: np.ndarray,
    lb: np.ndarray,
    cfg: SimilarityConfig,
) -> np.ndarray:
    """
    Normalized distances for a batch of padded code sequences.

    Every pair is evaluated in a canonical orientation, so the result for
    (x, y) is bit-identical to the result for (y, x) and to the scalar call.
    """
    a = np.asarray(a, dtype=np.intp).reshape(len(la), -1)
    b = np.asarray(b, dtype=np.intp).reshape(len(lb), -1)
    la = np.asarray(la, dtype=np.intp)
    lb = np.asarray(lb, dtype=np.intp)
    if np.any(la == 0) or np.any(lb == 0):
        raise EmptyPhoneme("Cannot compare an empty symbol sequence")
    a, la, b, lb = _canonical_order(a, la, b, lb)
    # trim the padding beyond the longest real sequence on each side
    a = a[:, : la.max()]
    b = b[:, : lb.max()]
    costs = _edit_costs(a, la, b, lb, cfg.deletion_cost)
    normalizer = np.maximum(la, lb) * cfg.deletion_cost
    return np.minimum(costs / normalizer, 1.0)


def sequence_distance(
    a: Sequence[Symbol],
    b: Sequence[Symbol],
    cfg: SimilarityConfig = SimilarityConfig(),
) -> float:
    """
    Weighted edit distance between two symbol sequences, normalized to [0, 1].

    Substitutions cost the combined symbol distance; insertions and
    deletions cost cfg.deletion_cost. The raw cost is divided by
    max(|a|, |b|) * deletion_cost and capped at 1.

    Raises:
        EmptyPhoneme: Either sequence is empty.
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptyPhoneme("Cannot compare an empty symbol sequence")
    distances = code_distances(
        encode(a)[None, :], np.array([len(a)]), encode(b)[None, :], np.array([len(b)]), cfg
    )
    return float(distances[0])


def phoneme_distance(p: Phoneme, q: Phoneme, cfg: SimilarityConfig = SimilarityConfig()) -> float:
    if p.hand != q.hand:
        raise ValueError(f"Phonemes of different hands are not comparable: {p.id} vs {q.id}")
    return sequence_distance(p.symbols, q.symbols, cfg)


def similar(p: Phoneme, q: Phoneme, cfg: SimilarityConfig = SimilarityConfig()) -> bool:
    """1 - distance >= T."""
    return 1.0 - phoneme_distance(p, q, cfg) >= cfg.threshold
