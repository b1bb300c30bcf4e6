from .segmentation import (
    Phoneme,
    SpeedSeries,
    length_histogram,
    phonemes_from_boundaries,
    phonemes_from_records,
    read_phonemes_json,
    segment_boundaries,
    segment_hand,
    smooth_speed,
    speed_series,
    write_phonemes_json,
)

__all__ = [
    "Phoneme",
    "SpeedSeries",
    "length_histogram",
    "phonemes_from_boundaries",
    "phonemes_from_records",
    "read_phonemes_json",
    "segment_boundaries",
    "segment_hand",
    "smooth_speed",
    "speed_series",
    "write_phonemes_json",
]
