"""
Categorical hand descriptors: orientation sector and location level.

Angles are measured in image coordinates (y grows downward), so sector 2
points down the screen and sector 6 points up.
"""

import enum
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..config import get_logger
from ..exceptions import EmptyFrame, MalformedJson
from ..ingest.keypoints import (
    LEFT_EYE,
    LEFT_HIP,
    LEFT_SHOULDER,
    MID_HIP,
    MIDDLE_METACARPAL,
    RIGHT_EYE,
    RIGHT_HIP,
    RIGHT_SHOULDER,
    WRIST,
    KeypointFrame,
    PoseSequence,
    Side,
    iter_jsonl_records,
)

logger = get_logger(__name__)

SECTORS = 8
SECTOR_WIDTH = math.pi / 4


class LocationLevel(enum.IntEnum):
    EYE = 0
    SHOULDER = 1
    ABDOMEN = 2


# (body keypoint, level) in matrix row order
LANDMARKS: tuple[tuple[int, LocationLevel], ...] = (
    (RIGHT_EYE, LocationLevel.EYE),
    (LEFT_EYE, LocationLevel.EYE),
    (RIGHT_SHOULDER, LocationLevel.SHOULDER),
    (LEFT_SHOULDER, LocationLevel.SHOULDER),
    (MID_HIP, LocationLevel.ABDOMEN),
    (RIGHT_HIP, LocationLevel.ABDOMEN),
    (LEFT_HIP, LocationLevel.ABDOMEN),
)

Centroid = tuple[float, float]
Symbol = tuple[int, int]


@dataclass(frozen=True)
class HandState:
    """Phonological state of one hand in one frame; None means absent."""

    centroid: Optional[Centroid] = None
    orientation: Optional[int] = None
    location: Optional[LocationLevel] = None

    def __post_init__(self):
        if self.centroid is None and (self.orientation is not None or self.location is not None):
            raise ValueError("An absent hand cannot carry orientation or location")
        if self.orientation is not None and not 0 <= self.orientation < SECTORS:
            raise ValueError(f"Orientation sector must be in [0, {SECTORS - 1}], got {self.orientation}")

    @property
    def present(self) -> bool:
        return self.centroid is not None

    @property
    def symbol(self) -> Optional[Symbol]:
        """(sector, level) when both descriptors are known."""
        if self.orientation is None or self.location is None:
            return None
        return (self.orientation, int(self.location))

    def to_record(self) -> dict:
        return {
            "sector": self.orientation,
            "level": None if self.location is None else int(self.location),
            "present": self.present,
            "centroid": None if self.centroid is None else [self.centroid[0], self.centroid[1]],
        }

    @classmethod
    def from_record(cls, record: dict) -> "HandState":
        centroid = record.get("centroid")
        level = record.get("level")
        return cls(
            centroid=None if centroid is None else (float(centroid[0]), float(centroid[1])),
            orientation=record.get("sector"),
            location=None if level is None else LocationLevel(level),
        )


ABSENT = HandState()


@dataclass(frozen=True)
class PhonoFrame:
    frame_index: int
    right: HandState
    left: HandState

    def hand(self, side: Side) -> HandState:
        return self.right if Side(side) is Side.RIGHT else self.left

    def to_record(self) -> dict:
        return {"frame": self.frame_index, "right": self.right.to_record(), "left": self.left.to_record()}

    @classmethod
    def from_record(cls, record: dict) -> "PhonoFrame":
        return cls(
            frame_index=int(record["frame"]),
            right=HandState.from_record(record["right"]),
            left=HandState.from_record(record["left"]),
        )


@dataclass(frozen=True, eq=False)
class LocationMatrix:
    """Landmark-to-centroid distances; rows follow LANDMARKS, columns are (right, left). NaN marks invalid."""

    entries: np.ndarray

    def column(self, side: Side) -> np.ndarray:
        return self.entries[:, 0 if Side(side) is Side.RIGHT else 1]


def hand_centroid(hand: np.ndarray) -> Optional[Centroid]:
    """Mean of the hand keypoints with confidence > 0."""
    detected = hand[:, 2] > 0
    if not np.any(detected):
        return None
    x, y = hand[detected, :2].mean(axis=0)
    return (float(x), float(y))


def sector_of_angle(theta: float) -> int:
    return int(((theta + math.pi / 8) % (2 * math.pi)) // SECTOR_WIDTH) % SECTORS


def orientation_of(hand: np.ndarray) -> Optional[int]:
    """Sector of the wrist to middle-metacarpal direction."""
    p = hand[WRIST]
    q = hand[MIDDLE_METACARPAL]
    if p[2] <= 0 or q[2] <= 0:
        return None
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    if dx == 0 and dy == 0:
        return None
    return sector_of_angle(math.atan2(dy, dx))


def location_matrix(
    frame: KeypointFrame,
    right_centroid: Optional[Centroid],
    left_centroid: Optional[Centroid],
) -> LocationMatrix:
    """
    Euclidean distance from each body landmark to each hand centroid.

    Raises:
        EmptyFrame: Both centroids are absent.
    """
    if right_centroid is None and left_centroid is None:
        raise EmptyFrame(f"Frame {frame.frame_index}: no hand centroid to locate")

    entries = np.full((len(LANDMARKS), 2), np.nan)
    for column, centroid in enumerate((right_centroid, left_centroid)):
        if centroid is None:
            continue
        for row, (index, _) in enumerate(LANDMARKS):
            x, y, c = frame.body[index]
            if c > 0:
                entries[row, column] = math.hypot(x - centroid[0], y - centroid[1])
    return LocationMatrix(entries)


def location_level(matrix: LocationMatrix, side: Side) -> Optional[LocationLevel]:
    """Level of the nearest valid landmark; exact ties go to the higher level."""
    column = matrix.column(side)
    valid = ~np.isnan(column)
    if not np.any(valid):
        return None
    nearest = column[valid].min()
    return max(level for (_, level), d in zip(LANDMARKS, column) if d == nearest)


def describe_frame(frame: KeypointFrame) -> PhonoFrame:
    """Phonological description of a single normalized frame."""
    centroids = {side: hand_centroid(frame.hand(side)) for side in Side}
    if all(c is None for c in centroids.values()):
        return PhonoFrame(frame.frame_index, ABSENT, ABSENT)

    matrix = location_matrix(frame, centroids[Side.RIGHT], centroids[Side.LEFT])
    states = {}
    for side, centroid in centroids.items():
        if centroid is None:
            states[side] = ABSENT
            continue
        states[side] = HandState(
            centroid=centroid,
            orientation=orientation_of(frame.hand(side)),
            location=location_level(matrix, side),
        )
    return PhonoFrame(frame.frame_index, states[Side.RIGHT], states[Side.LEFT])


def extract_phonology(seq: PoseSequence, workers: int = 1) -> list[PhonoFrame]:
    """One PhonoFrame per input frame, in frame order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            frames = list(executor.map(describe_frame, seq.frames))
    else:
        frames = [describe_frame(frame) for frame in seq.frames]

    for side in Side:
        present = sum(f.hand(side).present for f in frames)
        logger.info(f"{side.value} hand present in {present}/{len(frames)} frames")
    return frames


def write_phonology_jsonl(frames: Iterable[PhonoFrame], path: str | os.PathLike) -> None:
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for frame in frames:
            f.write(json.dumps(frame.to_record(), separators=(",", ":")))
            f.write("\n")


def read_phonology_jsonl(path: str | os.PathLike) -> list[PhonoFrame]:
    frames = []
    for line_number, record in iter_jsonl_records(path):
        try:
            frames.append(PhonoFrame.from_record(record))
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise MalformedJson(f"Bad phonology record: {e}", source=str(path), line=line_number) from e
    return frames
