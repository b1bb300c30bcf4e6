"""
Pytest configuration and shared fixtures for all tests.
"""

import os
import sys
import tempfile
from typing import Callable, Generator, Optional, Sequence

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)
sys.path.insert(0, os.path.join(ROOT, "packages", "signmine", "src"))

os.environ.setdefault("SIGNMINE_LOG_LEVEL", "WARNING")
os.environ.setdefault("SIGNMINE_WORKERS", "1")

from signmine.ingest.keypoints import BODY_POINTS, HAND_POINTS, KeypointFrame, PoseSequence, Side
from signmine.phonology.descriptors import SECTOR_WIDTH
from signmine.segment.segmentation import Phoneme
from signmine.synth.generator import CANONICAL_BODY, HAND_OFFSETS


def hand_rows(position: Sequence[float], sector: int) -> np.ndarray:
    """21 detected hand keypoints centred on `position`, pointing along `sector`."""
    angle = sector * SECTOR_WIDTH
    direction = np.array([np.cos(angle), np.sin(angle)])
    points = np.asarray(position, dtype=np.float64) + HAND_OFFSETS[:, None] * direction
    return np.hstack([points, np.ones((HAND_POINTS, 1))])


def build_frame(
    index: int = 0,
    right: Optional[Sequence[float]] = (0.0, 0.3),
    right_sector: int = 0,
    left: Optional[Sequence[float]] = None,
    left_sector: int = 2,
    scale: float = 1.0,
    offset: Sequence[float] = (0.0, 0.0),
) -> KeypointFrame:
    """Canonical body plus hands, then mapped to x * scale + offset."""
    body = np.hstack([CANONICAL_BODY, np.ones((BODY_POINTS, 1))])
    right_hand = hand_rows(right, right_sector) if right is not None else np.zeros((HAND_POINTS, 3))
    left_hand = hand_rows(left, left_sector) if left is not None else np.zeros((HAND_POINTS, 3))

    def place(rows: np.ndarray) -> np.ndarray:
        out = rows.copy()
        detected = out[:, 2] > 0
        out[detected, :2] = out[detected, :2] * scale + np.asarray(offset)
        return out

    return KeypointFrame(index, place(body), place(left_hand), place(right_hand))


@pytest.fixture
def temp_dir():
    """Create a temporary directory for file operations."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield tmpdir


@pytest.fixture
def frame_factory() -> Callable[..., KeypointFrame]:
    """Builds keypoint frames around the canonical body."""
    return build_frame


@pytest.fixture
def pixel_sequence() -> PoseSequence:
    """Ten pixel-space frames with the right hand sweeping sideways."""
    frames = tuple(
        build_frame(t, right=(-0.4 + 0.08 * t, 0.3), right_sector=t % 8, scale=180.0, offset=(620.0, 340.0))
        for t in range(10)
    )
    return PoseSequence(frames, fps=25.0, source_id="sweep")


@pytest.fixture
def phoneme_factory() -> Callable[..., Phoneme]:
    """Builds a phoneme from a list of (sector, level) symbols."""

    def make(symbols, start: int = 0, hand: Side = Side.RIGHT) -> Phoneme:
        symbols = tuple(tuple(s) for s in symbols)
        return Phoneme(Side(hand), start, start + len(symbols), symbols)

    return make


@pytest.fixture
def random_phonemes() -> Callable[..., list[Phoneme]]:
    """Seeded random right-hand phonemes laid out back to back."""

    def make(count: int, seed: int = 0, min_len: int = 3, max_len: int = 6, sectors: int = 8) -> list[Phoneme]:
        rng = np.random.default_rng(seed)
        phonemes = []
        start = 0
        for _ in range(count):
            length = int(rng.integers(min_len, max_len + 1))
            symbols = tuple(
                (int(s), int(l)) for s, l in zip(rng.integers(0, sectors, length), rng.integers(0, 3, length))
            )
            phonemes.append(Phoneme(Side.RIGHT, start, start + length, symbols))
            start += length
        return phonemes

    return make


@pytest.fixture
def client() -> Generator:
    """FastAPI test client for the analysis service."""
    from fastapi.testclient import TestClient

    from api.main import app

    with TestClient(app) as test_client:
        yield test_client
