from .keypoints import (
    BODY_POINTS,
    HAND_POINTS,
    Keypoint,
    KeypointFrame,
    PoseSequence,
    Side,
    parse_keypoint_file,
    read_keypoints,
    read_keypoints_jsonl,
    read_openpose_directory,
    write_keypoints_jsonl,
)
from .normalization import (
    NormalizationParams,
    NormalizationPolicy,
    compute_normalization,
    normalize_sequence,
)

__all__ = [
    "BODY_POINTS",
    "HAND_POINTS",
    "Keypoint",
    "KeypointFrame",
    "PoseSequence",
    "Side",
    "parse_keypoint_file",
    "read_keypoints",
    "read_keypoints_jsonl",
    "read_openpose_directory",
    "write_keypoints_jsonl",
    "NormalizationParams",
    "NormalizationPolicy",
    "compute_normalization",
    "normalize_sequence",
]
