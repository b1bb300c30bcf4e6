"""
Splits the per-frame phonology stream into phonemes at sign changes of the
hand-speed derivative.
"""

import json
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from ..config import get_logger
from ..exceptions import EmptyPhoneme, MalformedJson, TooShort
from ..ingest.keypoints import Side
from ..phonology.descriptors import LocationLevel, PhonoFrame, Symbol, SECTORS

logger = get_logger(__name__)

DEFAULT_MIN_LEN = 3


@dataclass(frozen=True, eq=False)
class SpeedSeries:
    """
    Centroid speed of one hand between consecutive frames.

    values[t] is the distance travelled from frame t to frame t+1 (canonical
    units per frame); valid[t] is False where either centroid is absent.
    """

    hand: Side
    values: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        valid = np.array(self.valid, dtype=bool)
        if values.shape != valid.shape or values.ndim != 1:
            raise ValueError("values and valid must be 1-D arrays of equal length")
        values = np.where(valid, values, 0.0)
        if np.any(values < 0):
            raise ValueError("Speeds must be non-negative")
        values.setflags(write=False)
        valid.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "valid", valid)

    def __len__(self) -> int:
        return len(self.values)

    def valid_runs(self) -> list[tuple[int, int]]:
        """Maximal runs of valid values as inclusive (start, end) pairs."""
        runs = []
        start = None
        for t, ok in enumerate(self.valid):
            if ok and start is None:
                start = t
            elif not ok and start is not None:
                runs.append((start, t - 1))
                start = None
        if start is not None:
            runs.append((start, len(self.valid) - 1))
        return runs


@dataclass(frozen=True)
class Phoneme:
    """A span [start_frame, end_frame) of one hand with one (sector, level) symbol per frame."""

    hand: Side
    start_frame: int
    end_frame: int
    symbols: tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "hand", Side(self.hand))
        object.__setattr__(self, "symbols", tuple((int(s), int(l)) for s, l in self.symbols))
        if not self.symbols:
            raise EmptyPhoneme(f"Phoneme {self.id} has no symbols")
        if self.end_frame <= self.start_frame:
            raise ValueError(f"Phoneme end {self.end_frame} must exceed start {self.start_frame}")
        if len(self.symbols) != self.end_frame - self.start_frame:
            raise ValueError(
                f"Phoneme {self.id} spans {self.end_frame - self.start_frame} frames "
                f"but has {len(self.symbols)} symbols"
            )
        for sector, level in self.symbols:
            if not (0 <= sector < SECTORS and 0 <= level < len(LocationLevel)):
                raise ValueError(f"Invalid symbol ({sector}, {level}) in phoneme {self.id}")

    @property
    def id(self) -> str:
        return f"{Side(self.hand).value}:{self.start_frame}-{self.end_frame}"

    def __len__(self) -> int:
        return len(self.symbols)

    def to_record(self) -> dict:
        return {
            "hand": self.hand.value,
            "start": self.start_frame,
            "end": self.end_frame,
            "symbols": [[s, l] for s, l in self.symbols],
        }

    @classmethod
    def from_record(cls, record: dict) -> "Phoneme":
        return cls(
            hand=Side(record["hand"]),
            start_frame=int(record["start"]),
            end_frame=int(record["end"]),
            symbols=tuple(tuple(s) for s in record["symbols"]),
        )


def speed_series(frames: Sequence[PhonoFrame], hand: Side) -> SpeedSeries:
    """
    Per-frame centroid speed of one hand.

    Raises:
        TooShort: Fewer than two frames.
    """
    hand = Side(hand)
    if len(frames) < 2:
        raise TooShort(f"Speed needs at least 2 frames, got {len(frames)}")

    centroids = np.zeros((len(frames), 2))
    present = np.zeros(len(frames), dtype=bool)
    for t, frame in enumerate(frames):
        centroid = frame.hand(hand).centroid
        if centroid is not None:
            centroids[t] = centroid
            present[t] = True

    steps = np.diff(centroids, axis=0)
    values = np.hypot(steps[:, 0], steps[:, 1])
    valid = present[:-1] & present[1:]
    return SpeedSeries(hand, values, valid)


def smooth_speed(series: SpeedSeries) -> SpeedSeries:
    """Centered 3-tap moving average; only valid neighbours contribute."""
    values = np.where(series.valid, series.values, 0.0)
    weights = series.valid.astype(np.float64)
    total = values.copy()
    count = weights.copy()
    total[1:] += values[:-1]
    count[1:] += weights[:-1]
    total[:-1] += values[1:]
    count[:-1] += weights[1:]
    smoothed = np.divide(total, count, out=np.zeros_like(total), where=count > 0)
    return SpeedSeries(series.hand, np.where(series.valid, smoothed, 0.0), series.valid)


def _signs(diff: np.ndarray, tolerance: float) -> np.ndarray:
    signs = np.sign(diff).astype(np.int8)
    signs[np.abs(diff) <= tolerance] = 0
    return signs


def segment_boundaries(series: SpeedSeries, tolerance: float = 0.0) -> list[int]:
    """
    Boundary positions (offsets into the frame list) of one speed series.

    Inside each valid run a boundary lands at t+1 whenever the sign of
    f'(t) = f(t+1) - f(t) differs from the sign of f'(t-1); differences with
    magnitude at or below `tolerance` have sign 0. The edges of every valid
    run are boundaries too, so absent stretches form their own segments.
    """
    n_frames = len(series) + 1
    boundaries: set[int] = set()
    for start, end in series.valid_runs():
        for edge in (start, end + 2):
            if 0 < edge < n_frames:
                boundaries.add(edge)
        run = series.values[start:end + 1]
        if len(run) < 3:
            continue
        signs = _signs(np.diff(run), tolerance)
        changes = np.nonzero(signs[1:] != signs[:-1])[0]
        # change between f'(t-1) and f'(t) with t = start + k + 1
        boundaries.update(int(start + k + 2) for k in changes)
    return sorted(boundaries)


def phonemes_from_boundaries(
    frames: Sequence[PhonoFrame],
    boundaries: Iterable[int],
    hand: Side,
    min_len: int = DEFAULT_MIN_LEN,
) -> list[Phoneme]:
    """
    Cuts the frame list at the boundaries and keeps segments that are at
    least `min_len` frames long and have a full symbol on every frame.
    """
    hand = Side(hand)
    cuts = sorted(set(boundaries))
    if cuts and (cuts[0] < 0 or cuts[-1] > len(frames)):
        raise ValueError(f"Boundaries must lie within [0, {len(frames)}]")
    edges = sorted({0, len(frames), *cuts})

    phonemes = []
    absent = short = 0
    for a, b in zip(edges[:-1], edges[1:]):
        symbols = [frames[k].hand(hand).symbol for k in range(a, b)]
        if any(s is None for s in symbols):
            absent += 1
            continue
        if b - a < min_len:
            short += 1
            continue
        start = frames[a].frame_index
        phonemes.append(Phoneme(hand, start, start + (b - a), tuple(symbols)))

    logger.debug(
        f"{hand.value}: kept {len(phonemes)} segment(s), dropped {absent} with absent symbols "
        f"and {short} shorter than {min_len} frames"
    )
    return phonemes


def segment_hand(
    frames: Sequence[PhonoFrame],
    hand: Side,
    min_len: int = DEFAULT_MIN_LEN,
    smoothing: bool = True,
    tolerance: float = 0.0,
) -> tuple[list[Phoneme], list[int]]:
    """Speed, boundaries and phonemes for one hand; returns (phonemes, boundary frame indices)."""
    hand = Side(hand)
    if len(frames) < 2:
        boundaries: list[int] = []
    else:
        series = speed_series(frames, hand)
        if smoothing:
            series = smooth_speed(series)
        boundaries = segment_boundaries(series, tolerance)
    phonemes = phonemes_from_boundaries(frames, boundaries, hand, min_len)
    offset = frames[0].frame_index if frames else 0
    logger.info(f"{hand.value}: {len(boundaries)} boundaries, {len(phonemes)} phonemes")
    return phonemes, [offset + b for b in boundaries]


def length_histogram(phonemes: Iterable[Phoneme]) -> dict[Side, Counter]:
    """Phoneme length counts per hand."""
    histogram = {side: Counter() for side in Side}
    for phoneme in phonemes:
        histogram[phoneme.hand][len(phoneme)] += 1
    return histogram


def write_phonemes_json(phonemes: Iterable[Phoneme], path: str | os.PathLike) -> None:
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump([p.to_record() for p in phonemes], f, separators=(",", ":"))


def phonemes_from_records(records: object, source: Optional[str] = None) -> list[Phoneme]:
    if not isinstance(records, list):
        raise MalformedJson("Phoneme list must be a JSON array", source=source)
    phonemes = []
    for position, record in enumerate(records):
        try:
            phonemes.append(Phoneme.from_record(record))
        except EmptyPhoneme:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedJson(f"Bad phoneme at position {position}: {e}", source=source) from e
    return phonemes


def read_phonemes_json(path: str | os.PathLike) -> list[Phoneme]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            records = json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedJson(f"Invalid JSON: {e.msg}", source=str(path), line=e.lineno) from e
    return phonemes_from_records(records, source=str(path))
