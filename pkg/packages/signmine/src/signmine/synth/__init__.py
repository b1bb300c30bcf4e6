from .generator import (
    GroundTruth,
    Repeat,
    Script,
    Segment,
    corrupt_phonemes,
    generate,
    load_script,
    travel_weights,
    write_ground_truth,
)

__all__ = [
    "GroundTruth",
    "Repeat",
    "Script",
    "Segment",
    "corrupt_phonemes",
    "generate",
    "load_script",
    "travel_weights",
    "write_ground_truth",
]
