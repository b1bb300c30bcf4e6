"""
Shoulder-based normalization of keypoint frames.

Every frame is scaled uniformly so that the shoulder distance becomes the
target distance and then translated so that the shoulder midpoint lands on
the target center.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import get_logger
from ..exceptions import DegenerateShoulders, NoValidFrame
from .keypoints import LEFT_SHOULDER, RIGHT_SHOULDER, KeypointFrame, PoseSequence

logger = get_logger(__name__)


class NormalizationPolicy(str, enum.Enum):
    PER_FRAME = "per_frame"
    FIRST_FRAME = "first_frame"


@dataclass(frozen=True)
class NormalizationParams:
    """
    Affine map x' = r_x * x + t_x, y' = r_y * y + t_y, with the shoulder
    distance and mid-shoulder point it was derived to produce.
    """

    r_x: float
    r_y: float
    t_x: float
    t_y: float
    target_shoulder_distance: float = 1.0
    target_center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (self.r_x > 0 and self.r_y > 0):
            raise ValueError("Normalization scale factors must be positive")

    def apply_points(self, points: np.ndarray) -> np.ndarray:
        out = np.array(points, dtype=np.float64)
        detected = out[:, 2] > 0
        out[detected, 0] = out[detected, 0] * self.r_x + self.t_x
        out[detected, 1] = out[detected, 1] * self.r_y + self.t_y
        out[~detected] = 0.0
        return out

    def apply(self, frame: KeypointFrame) -> KeypointFrame:
        return KeypointFrame(
            frame_index=frame.frame_index,
            body=self.apply_points(frame.body),
            left_hand=self.apply_points(frame.left_hand),
            right_hand=self.apply_points(frame.right_hand),
        )


def compute_normalization(
    frame: KeypointFrame,
    target_shoulder_distance: float = 1.0,
    target_center: tuple[float, float] = (0.0, 0.0),
) -> NormalizationParams:
    """
    Derives the scale-then-translate map for one frame from its shoulders.

    Raises:
        DegenerateShoulders: A shoulder is undetected or both coincide.
    """
    right = frame.keypoint("body", RIGHT_SHOULDER)
    left = frame.keypoint("body", LEFT_SHOULDER)
    if not (right.detected and left.detected):
        raise DegenerateShoulders(f"Frame {frame.frame_index}: shoulder not detected")

    distance = float(np.hypot(left.x - right.x, left.y - right.y))
    if distance == 0.0:
        raise DegenerateShoulders(f"Frame {frame.frame_index}: shoulders coincide")

    r = target_shoulder_distance / distance
    mid_x = (right.x + left.x) / 2.0
    mid_y = (right.y + left.y) / 2.0
    return NormalizationParams(
        r_x=r,
        r_y=r,
        t_x=target_center[0] - r * mid_x,
        t_y=target_center[1] - r * mid_y,
        target_shoulder_distance=target_shoulder_distance,
        target_center=(float(target_center[0]), float(target_center[1])),
    )


def normalize_sequence(
    seq: PoseSequence,
    policy: NormalizationPolicy | str = NormalizationPolicy.PER_FRAME,
    target_shoulder_distance: float = 1.0,
    target_center: tuple[float, float] = (0.0, 0.0),
) -> PoseSequence:
    """
    Normalizes every frame of a sequence.

    With `per_frame`, frames whose shoulders are unusable reuse the most
    recent valid parameters; frames before the first valid one use that
    first valid frame's parameters. With `first_frame`, the parameters of
    the first valid frame apply to the whole sequence.

    Raises:
        NoValidFrame: No frame has two distinct detected shoulders.
    """
    policy = NormalizationPolicy(policy)

    params: list[Optional[NormalizationParams]] = []
    for frame in seq.frames:
        try:
            params.append(compute_normalization(frame, target_shoulder_distance, target_center))
        except DegenerateShoulders:
            params.append(None)

    first_valid = next((p for p in params if p is not None), None)
    if first_valid is None:
        raise NoValidFrame("No frame has two distinct detected shoulders", source=seq.source_id or None)

    if policy is NormalizationPolicy.FIRST_FRAME:
        resolved = [first_valid] * len(params)
    else:
        resolved = []
        current = first_valid
        for p in params:
            if p is not None:
                current = p
            resolved.append(current)

    reused = sum(p is None for p in params)
    if reused:
        logger.info(f"{reused} of {len(params)} frame(s) reused neighbouring normalization parameters")

    frames = tuple(p.apply(frame) for p, frame in zip(resolved, seq.frames))
    return PoseSequence(frames, fps=seq.fps, source_id=seq.source_id)
