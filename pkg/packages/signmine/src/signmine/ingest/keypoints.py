"""
Parses OpenPose keypoint exports into typed frames and reads/writes the
keypoint JSON-lines stage artifact.
"""

import enum
import json
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np

from ..config import get_logger
from ..exceptions import DataError, MalformedJson, NoPersonDetected

logger = get_logger(__name__)

BODY_POINTS = 25
HAND_POINTS = 21

# BODY_25 layout
RIGHT_SHOULDER = 2
LEFT_SHOULDER = 5
MID_HIP = 8
RIGHT_HIP = 9
LEFT_HIP = 12
RIGHT_EYE = 15
LEFT_EYE = 16

# 21-point hand layout
WRIST = 0
MIDDLE_METACARPAL = 9

DEFAULT_FPS = 25.0

OPENPOSE_FILE_PATTERN = re.compile(r"_(\d{12})_keypoints\.json$")


class Side(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class Keypoint:
    """One detected 2-D point in image pixels (y grows downward)."""

    x: float
    y: float
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"Keypoint confidence must be in [0, 1], got {self.confidence}")

    @property
    def detected(self) -> bool:
        return self.confidence > 0


def _as_points(values: Any, count: int, name: str) -> np.ndarray:
    points = np.array(values, dtype=np.float64).reshape(-1, 3) if len(values) else np.zeros((0, 3))
    if points.shape != (count, 3):
        raise ValueError(f"{name} must hold exactly {count} [x, y, c] keypoints, got {points.shape[0]}")
    conf = points[:, 2]
    if np.any(np.isnan(points)) or np.any(conf < 0) or np.any(conf > 1):
        raise ValueError(f"{name} has confidences outside [0, 1] or NaN coordinates")
    # undetected points are (0, 0, 0)
    points[conf == 0] = 0.0
    points.setflags(write=False)
    return points


@dataclass(frozen=True, eq=False)
class KeypointFrame:
    """Body (25) and hand (21 + 21) keypoints of one video frame, as [x, y, c] rows."""

    frame_index: int
    body: np.ndarray
    left_hand: np.ndarray
    right_hand: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "body", _as_points(self.body, BODY_POINTS, "body"))
        object.__setattr__(self, "left_hand", _as_points(self.left_hand, HAND_POINTS, "left_hand"))
        object.__setattr__(self, "right_hand", _as_points(self.right_hand, HAND_POINTS, "right_hand"))

    @classmethod
    def zeros(cls, frame_index: int) -> "KeypointFrame":
        """An all-undetected frame, used where OpenPose found nobody."""
        return cls(
            frame_index=frame_index,
            body=np.zeros((BODY_POINTS, 3)),
            left_hand=np.zeros((HAND_POINTS, 3)),
            right_hand=np.zeros((HAND_POINTS, 3)),
        )

    def hand(self, side: Side) -> np.ndarray:
        return self.right_hand if Side(side) is Side.RIGHT else self.left_hand

    def keypoint(self, part: str, index: int) -> Keypoint:
        """Point `index` of "body", "left_hand" or "right_hand"."""
        x, y, c = getattr(self, part)[index]
        return Keypoint(float(x), float(y), float(c))

    def equals(self, other: "KeypointFrame", atol: float = 0.0) -> bool:
        """Same index and every coordinate within atol."""
        return (
            self.frame_index == other.frame_index
            and np.allclose(self.body, other.body, rtol=0.0, atol=atol)
            and np.allclose(self.left_hand, other.left_hand, rtol=0.0, atol=atol)
            and np.allclose(self.right_hand, other.right_hand, rtol=0.0, atol=atol)
        )

    def to_record(self) -> dict:
        """JSON-lines record: arrays of [x, y, c]."""
        return {
            "frame_index": self.frame_index,
            "body": self.body.tolist(),
            "left_hand": self.left_hand.tolist(),
            "right_hand": self.right_hand.tolist(),
        }

    @classmethod
    def from_record(cls, record: dict) -> "KeypointFrame":
        return cls(
            frame_index=int(record["frame_index"]),
            body=record["body"],
            left_hand=record["left_hand"],
            right_hand=record["right_hand"],
        )

    def to_openpose(self) -> dict:
        """OpenPose per-frame document with one person and flat [x, y, c] arrays."""
        return {
            "version": 1.3,
            "people": [
                {
                    "pose_keypoints_2d": self.body.ravel().tolist(),
                    "hand_left_keypoints_2d": self.left_hand.ravel().tolist(),
                    "hand_right_keypoints_2d": self.right_hand.ravel().tolist(),
                }
            ],
        }


@dataclass(frozen=True)
class PoseSequence:
    """Ordered frames of one video."""

    frames: tuple[KeypointFrame, ...]
    fps: float = DEFAULT_FPS
    source_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if not self.frames:
            raise DataError("A pose sequence needs at least one frame", source=self.source_id or None)
        if self.fps <= 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        first = self.frames[0].frame_index
        for offset, frame in enumerate(self.frames):
            if frame.frame_index != first + offset:
                raise DataError(
                    f"Frame indices must be contiguous; expected {first + offset}, got {frame.frame_index}",
                    source=self.source_id or None,
                )

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)


def _flat_points(person: dict, key: str, count: int) -> list:
    values = person.get(key)
    if values is None or len(values) == 0:
        return np.zeros((count, 3)).tolist()
    if not isinstance(values, list) or len(values) != count * 3:
        raise MalformedJson(f"'{key}' must hold {count * 3} numbers")
    return values


def parse_keypoint_file(raw: bytes | str, frame_index: int = 0) -> KeypointFrame:
    """
    Parses one OpenPose per-frame JSON document.

    Only the first detected person is used. Missing keypoint arrays become
    all-zero keypoints.

    Args:
        raw: The JSON document.
        frame_index: Index assigned to the returned frame.

    Returns:
        The parsed KeypointFrame.

    Raises:
        MalformedJson: The document is not JSON or has the wrong layout.
        NoPersonDetected: The `people` list is empty.
    """
    try:
        document = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise MalformedJson(f"Unparseable keypoint document: {e}") from e

    if not isinstance(document, dict) or not isinstance(document.get("people"), list):
        raise MalformedJson("Keypoint document must be an object with a 'people' list")

    people = document["people"]
    if not people:
        raise NoPersonDetected("No person detected in frame")

    person = people[0]
    if not isinstance(person, dict):
        raise MalformedJson("Entries of 'people' must be objects")

    try:
        return KeypointFrame(
            frame_index=frame_index,
            body=_flat_points(person, "pose_keypoints_2d", BODY_POINTS),
            left_hand=_flat_points(person, "hand_left_keypoints_2d", HAND_POINTS),
            right_hand=_flat_points(person, "hand_right_keypoints_2d", HAND_POINTS),
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, MalformedJson):
            raise
        raise MalformedJson(str(e)) from e


def _parse_openpose_path(path: Path, frame_index: int) -> KeypointFrame:
    try:
        return parse_keypoint_file(path.read_bytes(), frame_index=frame_index)
    except NoPersonDetected:
        logger.debug(f"No person in {path.name}; using an all-zero frame")
        return KeypointFrame.zeros(frame_index)
    except MalformedJson as e:
        raise MalformedJson(e.message, source=str(path)) from e


def read_openpose_directory(
    directory: str | os.PathLike,
    fps: float = DEFAULT_FPS,
    workers: int = 1,
    source_id: Optional[str] = None,
) -> PoseSequence:
    """
    Reads a directory of `<prefix>_%012d_keypoints.json` files.

    Files are parsed in parallel; frames are assembled in frame-number order.
    Frame numbers missing between the first and last file become all-zero
    frames so indices keep matching the source video.
    """
    directory = Path(directory)
    numbered: dict[int, Path] = {}
    for path in directory.iterdir():
        match = OPENPOSE_FILE_PATTERN.search(path.name)
        if not match:
            continue
        number = int(match.group(1))
        if number in numbered:
            raise DataError(f"Duplicate frame number {number}", source=str(path))
        numbered[number] = path

    if not numbered:
        raise DataError("No '*_%012d_keypoints.json' files found", source=str(directory))

    numbers = sorted(numbered)
    logger.info(f"Parsing {len(numbers)} keypoint files from '{directory}' with {workers} worker(s)")

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        parsed = list(executor.map(lambda n: _parse_openpose_path(numbered[n], n), numbers))

    by_number = dict(zip(numbers, parsed))
    frames = []
    missing = 0
    for number in range(numbers[0], numbers[-1] + 1):
        frame = by_number.get(number)
        if frame is None:
            missing += 1
            frame = KeypointFrame.zeros(number)
        frames.append(frame)
    if missing:
        logger.warning(f"{missing} frame file(s) missing in '{directory}'; filled with all-zero frames")

    return PoseSequence(tuple(frames), fps=fps, source_id=source_id or directory.name)


def iter_jsonl_records(path: str | os.PathLike) -> Iterable[tuple[int, dict]]:
    """Yields (line number, parsed object) for every non-blank line."""
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedJson(f"Invalid JSON: {e.msg}", source=str(path), line=line_number) from e
            if not isinstance(record, dict):
                raise MalformedJson("Each line must hold a JSON object", source=str(path), line=line_number)
            yield line_number, record


def read_keypoints_jsonl(
    path: str | os.PathLike,
    fps: float = DEFAULT_FPS,
    source_id: Optional[str] = None,
) -> PoseSequence:
    """Reads the keypoint JSON-lines artifact, one frame object per line."""
    frames = []
    for line_number, record in iter_jsonl_records(path):
        try:
            frames.append(KeypointFrame.from_record(record))
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedJson(f"Bad frame record: {e}", source=str(path), line=line_number) from e
    if not frames:
        raise DataError("No frames found", source=str(path))
    return PoseSequence(tuple(frames), fps=fps, source_id=source_id or Path(path).stem)


def read_keypoints(
    path: str | os.PathLike,
    fps: float = DEFAULT_FPS,
    workers: int = 1,
) -> PoseSequence:
    """Reads either an OpenPose output directory or a keypoint JSON-lines file."""
    if Path(path).is_dir():
        return read_openpose_directory(path, fps=fps, workers=workers)
    return read_keypoints_jsonl(path, fps=fps)


def write_keypoints_jsonl(seq: PoseSequence, path: str | os.PathLike) -> None:
    """Writes one compact JSON object per frame."""
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for frame in seq.frames:
            f.write(json.dumps(frame.to_record(), separators=(",", ":")))
            f.write("\n")
    logger.info(f"Wrote {len(seq)} frames to '{path}'")
