"""
Scripted synthetic signing with known ground truth.

A script lists hand targets; the right hand travels between consecutive
targets with a unimodal speed profile and then holds. Blocks of segments can
be repeated to plant verse repetitions. The body stays at a fixed canonical
pose and the left hand rests below the chest.
"""

import json
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..config import describe_validation_error, get_logger
from ..exceptions import InvalidScript, MalformedJson
from ..ingest.keypoints import BODY_POINTS, HAND_POINTS, KeypointFrame, PoseSequence, Side
from ..metric.distance import LEVELS, N_SYMBOLS, encode
from ..phonology.descriptors import SECTOR_WIDTH, SECTORS, PhonoFrame, describe_frame
from ..segment.segmentation import Phoneme

logger = get_logger(__name__)

# canonical BODY_25 pose: shoulders one unit apart, mid-shoulder at the origin
CANONICAL_BODY = np.array(
    [
        (0.0, -0.7),     # 0 nose
        (0.0, 0.0),      # 1 neck
        (-0.5, 0.0),     # 2 right shoulder
        (-0.7, 0.8),     # 3 right elbow
        (-0.6, 1.5),     # 4 right wrist
        (0.5, 0.0),      # 5 left shoulder
        (0.7, 0.8),      # 6 left elbow
        (0.6, 1.5),      # 7 left wrist
        (0.0, 1.6),      # 8 mid hip
        (-0.3, 1.6),     # 9 right hip
        (-0.3, 2.6),     # 10 right knee
        (-0.3, 3.5),     # 11 right ankle
        (0.3, 1.6),      # 12 left hip
        (0.3, 2.6),      # 13 left knee
        (0.3, 3.5),      # 14 left ankle
        (-0.12, -0.85),  # 15 right eye
        (0.12, -0.85),   # 16 left eye
        (-0.25, -0.8),   # 17 right ear
        (0.25, -0.8),    # 18 left ear
        (0.35, 3.7),     # 19 left big toe
        (0.4, 3.7),      # 20 left small toe
        (0.3, 3.6),      # 21 left heel
        (-0.35, 3.7),    # 22 right big toe
        (-0.4, 3.7),     # 23 right small toe
        (-0.3, 3.6),     # 24 right heel
    ]
)

# hand keypoints sit on a line through the centroid; the wrist (0) to
# middle metacarpal (9) direction is the hand direction
HAND_OFFSETS = -0.05 + 0.005 * np.arange(HAND_POINTS)


class Segment(BaseModel):
    model_config = ConfigDict(extra="forbid")

    position: tuple[float, float] = Field(..., description="Right-hand target in canonical units")
    sector: int = Field(..., ge=0, lt=SECTORS, description="Hand orientation sector while travelling and holding")
    hold_frames: int = Field(..., ge=1)
    travel_frames: int = Field(..., ge=1)


class Repeat(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: int = Field(..., ge=0, description="First segment of the block")
    stop: int = Field(..., description="One past the last segment of the block")
    count: int = Field(..., ge=1, description="Total occurrences of the block")


class Script(BaseModel):
    model_config = ConfigDict(extra="forbid")

    segments: list[Segment] = Field(..., min_length=1)
    repeats: list[Repeat] = Field(default_factory=list)
    noise_sigma: float = Field(0.0, ge=0)
    seed: int = 0
    fps: float = Field(25.0, gt=0)
    image_scale: float = Field(200.0, gt=0, description="Pixels per canonical unit")
    image_center: tuple[float, float] = (640.0, 360.0)
    left_rest: tuple[float, float] = (0.35, 1.4)
    left_sector: int = Field(2, ge=0, lt=SECTORS)

    @model_validator(mode="after")
    def check_repeats(self) -> "Script":
        blocks = sorted((r.start, r.stop) for r in self.repeats)
        for start, stop in blocks:
            if not start < stop <= len(self.segments):
                raise ValueError(f"Repeat block [{start}, {stop}) is outside the {len(self.segments)} segments")
        for (_, prev_stop), (start, _) in zip(blocks, blocks[1:]):
            if start < prev_stop:
                raise ValueError("Repeat blocks must not overlap")
        return self


@dataclass
class GroundTruth:
    true_boundaries: dict[Side, list[int]]
    joints: list[int]
    verse_spans: list[list[tuple[int, int]]]
    symbols_per_frame: list[PhonoFrame] = field(repr=False)

    def to_record(self) -> dict:
        return {
            "true_boundaries": {side.value: b for side, b in self.true_boundaries.items()},
            "joints": self.joints,
            "verse_spans": [[list(span) for span in spans] for spans in self.verse_spans],
            "symbols_per_frame": [f.to_record() for f in self.symbols_per_frame],
        }


def travel_weights(length: int) -> np.ndarray:
    """Strictly unimodal per-frame step sizes of one travel."""
    k = np.arange(1, length + 1, dtype=np.float64)
    if length % 2:
        return np.minimum(k, length + 1 - k)
    return np.where(k <= length / 2, k + 0.5, length + 1 - k)


def _expand(script: Script) -> tuple[list[Segment], list[list[tuple[int, int]]]]:
    """Unrolls repeat blocks in place; returns segments and, per repeat, segment ranges."""
    by_start = {r.start: r for r in script.repeats}
    expanded: list[Segment] = []
    ranges: dict[int, list[tuple[int, int]]] = {}
    k = 0
    while k < len(script.segments):
        repeat = by_start.get(k)
        if repeat is None:
            expanded.append(script.segments[k])
            k += 1
            continue
        block = script.segments[repeat.start:repeat.stop]
        spans = []
        for _ in range(repeat.count):
            spans.append((len(expanded), len(expanded) + len(block)))
            expanded.extend(block)
        ranges[repeat.start] = spans
        k = repeat.stop
    return expanded, [ranges[start] for start in sorted(ranges)]


def _hand_points(position: np.ndarray, sector: int) -> np.ndarray:
    angle = sector * SECTOR_WIDTH
    direction = np.array([np.cos(angle), np.sin(angle)])
    return position + HAND_OFFSETS[:, None] * direction


def _trajectory(segments: Sequence[Segment]) -> tuple[np.ndarray, np.ndarray, list[int], list[tuple[int, int]]]:
    """Per-frame right-hand positions and sectors, segment start frames and (departure, travel_frames) of each move."""
    positions = []
    sectors = []
    starts = []
    moves = []
    prev = np.array(segments[0].position, dtype=np.float64)
    for index, segment in enumerate(segments):
        starts.append(len(positions))
        target = np.array(segment.position, dtype=np.float64)
        if index == 0 or np.array_equal(target, prev):
            travel = np.tile(target, (segment.travel_frames, 1))
        else:
            moves.append((len(positions) - 1, segment.travel_frames))
            weights = travel_weights(segment.travel_frames)
            fraction = np.cumsum(weights) / weights.sum()
            travel = prev + fraction[:, None] * (target - prev)
            travel[-1] = target
        positions.extend(travel)
        positions.extend(np.tile(target, (segment.hold_frames, 1)))
        sectors.extend([segment.sector] * (segment.travel_frames + segment.hold_frames))
        prev = target
    return np.array(positions), np.array(sectors), starts, moves


def _intended_boundaries(moves: Sequence[tuple[int, int]], n_frames: int) -> list[int]:
    """
    Departure, peak-speed and arrival frames of every move.

    A boundary needs two speed steps on each side, so frames closer than two
    to either end of the video carry none.
    """
    boundaries = set()
    for departure, length in moves:
        peak = departure + int(np.argmax(travel_weights(length))) + 1
        arrival = departure + length + 1
        boundaries.update((departure, peak, arrival))
    return sorted(b for b in boundaries if 2 <= b <= n_frames - 2)


def _canonical_frames(script: Script, positions: np.ndarray, sectors: np.ndarray) -> np.ndarray:
    """(frames, 67, 2) keypoints in canonical units: body, left hand, right hand."""
    left = _hand_points(np.array(script.left_rest), script.left_sector)
    points = np.empty((len(positions), BODY_POINTS + 2 * HAND_POINTS, 2))
    points[:, :BODY_POINTS] = CANONICAL_BODY
    points[:, BODY_POINTS:BODY_POINTS + HAND_POINTS] = left
    for t, (position, sector) in enumerate(zip(positions, sectors)):
        points[t, BODY_POINTS + HAND_POINTS:] = _hand_points(position, int(sector))
    return points


def _to_frame(index: int, points: np.ndarray) -> KeypointFrame:
    rows = np.hstack([points, np.ones((len(points), 1))])
    return KeypointFrame(
        frame_index=index,
        body=rows[:BODY_POINTS],
        left_hand=rows[BODY_POINTS:BODY_POINTS + HAND_POINTS],
        right_hand=rows[BODY_POINTS + HAND_POINTS:],
    )


def _validate(script: Script | Mapping[str, Any]) -> Script:
    if isinstance(script, Script):
        return script
    try:
        return Script(**script)
    except ValidationError as e:
        raise InvalidScript(describe_validation_error(e)) from e


def generate(script: Script | Mapping[str, Any]) -> tuple[PoseSequence, GroundTruth]:
    """
    Renders a script to pixel-space keypoint frames plus ground truth.

    Jitter is drawn from numpy's PCG64 generator seeded with `script.seed`,
    in canonical units, before conversion to pixels; the same seed yields the
    same frames on every platform.

    Raises:
        InvalidScript: The script fails validation.
    """
    script = _validate(script)
    segments, verse_ranges = _expand(script)
    positions, sectors, starts, moves = _trajectory(segments)
    n_frames = len(positions)

    canonical = _canonical_frames(script, positions, sectors)
    rng = np.random.default_rng(script.seed)
    noisy = canonical
    if script.noise_sigma > 0:
        noisy = canonical + rng.normal(0.0, script.noise_sigma, size=canonical.shape)
    pixels = noisy * script.image_scale + np.array(script.image_center)
    frames = tuple(_to_frame(t, pixels[t]) for t in range(n_frames))

    true_boundaries = {Side.RIGHT: _intended_boundaries(moves, n_frames), Side.LEFT: []}

    ends = starts[1:] + [n_frames]
    verse_spans = [[(starts[a], ends[b - 1]) for a, b in spans] for spans in verse_ranges]
    symbols = [describe_frame(_to_frame(t, canonical[t])) for t in range(n_frames)]

    logger.info(
        f"Generated {n_frames} frames from {len(segments)} segments "
        f"({len(true_boundaries[Side.RIGHT])} boundaries, {sum(len(s) for s in verse_spans)} verse spans)"
    )
    sequence = PoseSequence(frames, fps=script.fps, source_id="synthetic")
    return sequence, GroundTruth(true_boundaries, [d for d, _ in moves], verse_spans, symbols)


def load_script(path: str | os.PathLike) -> Script:
    try:
        with open(path, "r", encoding="utf-8") as f:
            values = json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedJson(f"Invalid JSON: {e.msg}", source=str(path), line=e.lineno) from e
    if not isinstance(values, dict):
        raise InvalidScript("Script must be a JSON object", source=str(path))
    try:
        return Script(**values)
    except ValidationError as e:
        raise InvalidScript(describe_validation_error(e), source=str(path)) from e


def write_ground_truth(truth: GroundTruth, path: str | os.PathLike) -> None:
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(truth.to_record(), f, separators=(",", ":"))


def corrupt_phonemes(phonemes: Sequence[Phoneme], rate: float, seed: Optional[int] = 0) -> list[Phoneme]:
    """
    Replaces each symbol, with probability `rate`, by a different symbol
    drawn uniformly from the other 23.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"Corruption rate must be in [0, 1], got {rate}")
    rng = np.random.default_rng(seed)
    corrupted = []
    for phoneme in phonemes:
        codes = encode(phoneme.symbols)
        hit = rng.random(len(codes)) < rate
        shift = rng.integers(1, N_SYMBOLS, size=len(codes))
        codes = np.where(hit, (codes + shift) % N_SYMBOLS, codes)
        corrupted.append(
            Phoneme(
                phoneme.hand,
                phoneme.start_frame,
                phoneme.end_frame,
                tuple(divmod(int(c), LEVELS) for c in codes),
            )
        )
    return corrupted
