from .descriptors import (
    LANDMARKS,
    HandState,
    LocationLevel,
    LocationMatrix,
    PhonoFrame,
    describe_frame,
    extract_phonology,
    hand_centroid,
    location_level,
    location_matrix,
    orientation_of,
    read_phonology_jsonl,
    write_phonology_jsonl,
)

__all__ = [
    "LANDMARKS",
    "HandState",
    "LocationLevel",
    "LocationMatrix",
    "PhonoFrame",
    "describe_frame",
    "extract_phonology",
    "hand_centroid",
    "location_level",
    "location_matrix",
    "orientation_of",
    "read_phonology_jsonl",
    "write_phonology_jsonl",
]
