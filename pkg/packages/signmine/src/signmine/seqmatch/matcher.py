"""
Finds pairs of similar spans of consecutive phonemes within one video.

Matching grows round by round. A span survives a round when some
non-overlapping span of the same length is similar to it; the next round
compares every pair of spans one phoneme longer whose prefix or suffix
survived, using the distance of the concatenated symbols. Pairs whose
symbol counts alone rule out similarity are skipped. Only matches not
contained in a longer reported match are returned.
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..config import get_logger
from ..metric.affinity import AffinityMatrix, affinity_matrix
from ..metric.distance import SimilarityConfig, code_distances, encode
from ..segment.segmentation import Phoneme

logger = get_logger(__name__)

DEFAULT_MAX_SPAN_LEN = 16
CHUNK_PAIRS = 20000
# slack for rounding in the dynamic program when pruning by length
ROUNDING_SLACK = 1e-9


@dataclass(frozen=True)
class PhonemeSpan:
    """Phonemes [start_index, stop_index) of a phoneme list."""

    start_index: int
    stop_index: int
    start_frame: int
    end_frame: int
    symbols: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.stop_index <= self.start_index:
            raise ValueError("A span holds at least one phoneme")

    @property
    def length(self) -> int:
        return self.stop_index - self.start_index

    @classmethod
    def of(cls, phonemes: Sequence[Phoneme], start: int, stop: int) -> "PhonemeSpan":
        members = phonemes[start:stop]
        return cls(
            start_index=start,
            stop_index=stop,
            start_frame=members[0].start_frame,
            end_frame=members[-1].end_frame,
            symbols=tuple(s for p in members for s in p.symbols),
        )

    def seconds(self, fps: float) -> str:
        return f"{self.start_frame / fps:.1f}s–{self.end_frame / fps:.1f}s"

    def to_record(self) -> dict:
        return {
            "start_index": self.start_index,
            "stop_index": self.stop_index,
            "start_frame": self.start_frame,
            "end_frame": self.end_frame,
        }


@dataclass(frozen=True)
class SpanMatch:
    a: PhonemeSpan
    b: PhonemeSpan
    similarity: float

    def describe(self, fps: float) -> str:
        return f"{self.a.seconds(fps)} vs {self.b.seconds(fps)}"

    def to_record(self, fps: Optional[float] = None) -> dict:
        record = {
            "a": self.a.to_record(),
            "b": self.b.to_record(),
            "length": self.a.length,
            "similarity": self.similarity,
        }
        if fps:
            record["seconds"] = self.describe(fps)
        return record


class _SpanCodes:
    """Concatenated symbol codes of all phonemes with per-phoneme offsets."""

    def __init__(self, phonemes: Sequence[Phoneme]):
        self.flat = np.concatenate([encode(p.symbols) for p in phonemes])
        self.offsets = np.concatenate([[0], np.cumsum([len(p) for p in phonemes])])

    def counts(self, starts: np.ndarray, length: int) -> np.ndarray:
        return self.offsets[starts + length] - self.offsets[starts]

    def gather(self, starts: np.ndarray, length: int) -> tuple[np.ndarray, np.ndarray]:
        """Padded codes and symbol counts of spans [start, start + length)."""
        begin = self.offsets[starts]
        counts = self.counts(starts, length)
        width = int(counts.max())
        index = np.minimum(begin[:, None] + np.arange(width), len(self.flat) - 1)
        return self.flat[index], counts


def _span_distances(
    codes: _SpanCodes,
    first: np.ndarray,
    second: np.ndarray,
    length: int,
    cfg: SimilarityConfig,
    workers: int,
) -> np.ndarray:
    def run(chunk: slice) -> np.ndarray:
        a, la = codes.gather(first[chunk], length)
        b, lb = codes.gather(second[chunk], length)
        return code_distances(a, la, b, lb, cfg)

    chunks = [slice(s, s + CHUNK_PAIRS) for s in range(0, len(first), CHUNK_PAIRS)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(run, chunks))
    else:
        parts = [run(chunk) for chunk in chunks]
    return np.concatenate(parts) if parts else np.empty(0)


def match_spans(
    phonemes: Sequence[Phoneme],
    cfg: SimilarityConfig = SimilarityConfig(),
    max_len: int = DEFAULT_MAX_SPAN_LEN,
    min_span_len: int = 1,
    matrix: Optional[AffinityMatrix] = None,
    workers: int = 1,
) -> list[SpanMatch]:
    """
    Similar, non-overlapping pairs of equal-length phoneme spans.

    Args:
        phonemes: Phonemes of one hand in time order.
        cfg: Similarity threshold and edit costs.
        max_len: Longest span, in phonemes.
        min_span_len: Shortest span reported.
        matrix: Precomputed affinity matrix of `phonemes`, if available.
        workers: Thread-pool size for span distances.

    Returns:
        Maximal matches ordered by (a.start_frame, b.start_frame, length).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    n = len(phonemes)
    if n < 2:
        return []
    if len({p.hand for p in phonemes}) > 1:
        raise ValueError("Span matching runs on the phonemes of one hand")

    if matrix is None:
        matrix = affinity_matrix(phonemes, cfg, workers=workers)
    pair_similar = 1.0 - matrix.distances >= cfg.threshold

    first, second = np.nonzero(np.triu(pair_similar, k=1))
    rounds = {1: (first, second, matrix.distances[first, second])}
    codes = _SpanCodes(phonemes)

    length = 1
    while length < max_len:
        first, second, _ = rounds[length]
        grow = length + 1
        # survived[i]: span [i, i + length) has a similar partner
        survived = np.zeros(n + 1, dtype=bool)
        survived[first] = True
        survived[second] = True
        starts = np.arange(n - grow + 1)
        candidates = starts[survived[starts] | survived[starts + 1]]
        rows, cols = np.triu_indices(len(candidates), k=1)
        first, second = candidates[rows], candidates[cols]
        la, lb = codes.counts(first, grow), codes.counts(second, grow)
        # at least |la - lb| insertions, so a wide count gap rules out similarity
        gap = np.abs(la - lb) / np.maximum(la, lb)
        keep = (first + grow <= second) & (1.0 - gap >= cfg.threshold - ROUNDING_SLACK)
        first, second = first[keep], second[keep]
        if len(first) == 0:
            break
        distances = _span_distances(codes, first, second, grow, cfg, workers)
        similar = 1.0 - distances >= cfg.threshold
        if not np.any(similar):
            break
        rounds[grow] = (first[similar], second[similar], distances[similar])
        length = grow
        logger.debug(f"Round {grow}: {int(similar.sum())} matching span pairs")

    # same-length matches never contain each other, so each round only
    # needs the marks left by longer rounds
    contained = {span_len: np.zeros((n, n), dtype=bool) for span_len in rounds if span_len < max(rounds)}
    matches = []
    for span_len in sorted(rounds, reverse=True):
        first, second, distances = rounds[span_len]
        if span_len in contained:
            maximal = ~contained[span_len][first, second]
            first, second, distances = first[maximal], second[maximal], distances[maximal]
        for shorter in range(1, span_len):
            mask = contained[shorter]
            for da in range(span_len - shorter + 1):
                for db in range(span_len - shorter + 1):
                    mask[first + da, second + db] = True
        if span_len < min_span_len:
            continue
        matches.extend(
            SpanMatch(
                a=PhonemeSpan.of(phonemes, i, i + span_len),
                b=PhonemeSpan.of(phonemes, j, j + span_len),
                similarity=1.0 - d,
            )
            for i, j, d in zip(first.tolist(), second.tolist(), distances.tolist())
        )
    matches.sort(key=lambda m: (m.a.start_frame, m.b.start_frame, m.a.length))
    logger.info(f"{len(matches)} maximal span matches (longest span {max(rounds)} phonemes)")
    return matches


def span_report(matches: Sequence[SpanMatch], fps: float) -> str:
    """Plain-text table of frame and second ranges per match."""
    lines = [f"{'frames_a':<16}{'frames_b':<16}{'seconds_a':<18}{'seconds_b':<18}similarity"]
    for m in matches:
        lines.append(
            f"{f'{m.a.start_frame}-{m.a.end_frame}':<16}"
            f"{f'{m.b.start_frame}-{m.b.end_frame}':<16}"
            f"{m.a.seconds(fps):<18}"
            f"{m.b.seconds(fps):<18}"
            f"{m.similarity:.3f}"
        )
    return "\n".join(lines)


def write_matches_json(matches: Sequence[SpanMatch], path: str | os.PathLike, fps: Optional[float] = None) -> None:
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump([m.to_record(fps) for m in matches], f, indent=2)
