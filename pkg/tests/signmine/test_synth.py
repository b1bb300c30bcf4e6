"""
Tests for scripted synthetic keypoint generation.
"""

import json
import os

import numpy as np
import pytest

from signmine.exceptions import InvalidScript, MalformedJson
from signmine.ingest.keypoints import Side
from signmine.ingest.normalization import normalize_sequence
from signmine.phonology.descriptors import extract_phonology
from signmine.segment.segmentation import segment_hand
from signmine.synth.generator import (
    Script,
    corrupt_phonemes,
    generate,
    load_script,
    travel_weights,
    write_ground_truth,
)

SHOULDER = (-0.45, 0.2)
ABDOMEN = (0.0, 1.3)
FACE = (0.0, -0.6)


def segment(position, sector=0, hold=10, travel=5) -> dict:
    return {"position": list(position), "sector": sector, "hold_frames": hold, "travel_frames": travel}


def right_hands(seq) -> np.ndarray:
    return np.stack([frame.right_hand for frame in seq.frames])


def recovered_boundaries(seq) -> list[int]:
    frames = extract_phonology(normalize_sequence(seq))
    _, boundaries = segment_hand(frames, Side.RIGHT, min_len=1, smoothing=False)
    return boundaries


class TestTravelWeights:
    """Tests for the per-travel speed profile."""

    @pytest.mark.parametrize("length", range(1, 10))
    def test_strictly_unimodal(self, length):
        """Test steps rise strictly then fall strictly."""
        weights = travel_weights(length)
        assert len(weights) == length
        assert (weights > 0).all()
        peak = int(np.argmax(weights))
        assert (np.diff(weights[:peak + 1]) > 0).all()
        assert (np.diff(weights[peak:]) < 0).all()


class TestGenerate:
    """Tests for generate."""

    def test_single_hold(self):
        """Test one segment without noise is a motionless hand."""
        seq, truth = generate({"segments": [segment(SHOULDER, hold=5, travel=1)]})
        assert len(seq) == 6
        hands = right_hands(seq)
        assert (hands == hands[0]).all()
        assert truth.true_boundaries == {Side.RIGHT: [], Side.LEFT: []}
        assert truth.joints == []

    def test_two_segments(self):
        """Test the joint and the speed extrema of one travel."""
        seq, truth = generate({"segments": [segment(SHOULDER, hold=10, travel=1), segment(ABDOMEN)]})
        assert len(seq) == 26
        assert truth.joints == [10]
        assert truth.true_boundaries[Side.RIGHT] == [10, 13, 16]
        assert truth.true_boundaries[Side.LEFT] == []

    def test_boundaries_from_geometry(self):
        """Test even travels, a one-frame hold and a departure too close to the start."""
        script = {
            "segments": [
                segment(SHOULDER, hold=1, travel=1),
                segment(ABDOMEN, hold=1, travel=4),
                segment(FACE, hold=3, travel=2),
            ]
        }
        seq, truth = generate(script)
        assert len(seq) == 12
        assert truth.joints == [1, 6]
        # departure 1 has a single speed step before it; arrival 6 is also the next departure
        assert truth.true_boundaries[Side.RIGHT] == [3, 6, 7, 9]
        assert recovered_boundaries(seq) == [3, 6, 7, 9]

    def test_noiseless_segmentation_recovers_truth(self):
        """Test the real ingest and segment stages find the intended boundaries."""
        script = {
            "segments": [
                segment(SHOULDER, hold=6, travel=1),
                segment(ABDOMEN, sector=2, travel=4),
                segment(FACE, sector=5, hold=8, travel=7),
                segment(SHOULDER, sector=1, travel=6),
            ]
        }
        seq, truth = generate(script)
        assert recovered_boundaries(seq) == truth.true_boundaries[Side.RIGHT]
        assert set(truth.joints) <= set(truth.true_boundaries[Side.RIGHT])

    def test_symbols_match_ground_truth(self):
        """Test extracted symbols agree with the recorded per-frame symbols."""
        seq, truth = generate({"segments": [segment(SHOULDER, sector=3, travel=1), segment(FACE, sector=6)]})
        frames = extract_phonology(normalize_sequence(seq))
        assert [f.right.symbol for f in frames] == [f.right.symbol for f in truth.symbols_per_frame]
        assert len(truth.symbols_per_frame) == len(seq)

    def test_pixel_space(self):
        """Test canonical units are scaled and centred into the image."""
        seq, _ = generate({"segments": [segment(SHOULDER, travel=1)], "image_scale": 100.0})
        body = seq.frames[0].body
        assert body[2, :2].tolist() == [590.0, 360.0]
        assert body[5, :2].tolist() == [690.0, 360.0]
        assert seq.fps == 25.0

    def test_same_seed_identical(self):
        """Test jitter is reproducible per seed."""
        script = {"segments": [segment(SHOULDER, travel=1), segment(ABDOMEN)], "noise_sigma": 0.01, "seed": 7}
        first, _ = generate(script)
        second, _ = generate(script)
        other, _ = generate({**script, "seed": 8})
        assert np.array_equal(right_hands(first), right_hands(second))
        assert not np.array_equal(right_hands(first), right_hands(other))

    def test_verse_spans(self):
        """Test repeated blocks are unrolled and their repetitions share symbols."""
        script = {
            "segments": [
                segment(FACE, sector=1, travel=1),
                segment(SHOULDER, sector=0, hold=4, travel=3),
                segment(ABDOMEN, sector=2, hold=5, travel=4),
                segment(FACE, sector=1, hold=3, travel=6),
                segment(SHOULDER, sector=4),
            ],
            "repeats": [{"start": 1, "stop": 4, "count": 3}],
        }
        seq, truth = generate(script)
        assert len(truth.verse_spans) == 1
        spans = truth.verse_spans[0]
        assert len(spans) == 3
        assert all(end - start == 25 for start, end in spans)
        assert spans[0][0] == 11
        assert spans[1][0] == spans[0][1] and spans[2][0] == spans[1][1]
        assert spans[2][1] < len(seq)

        def symbols(span):
            return [f.right.symbol for f in truth.symbols_per_frame[span[0]:span[1]]]

        assert symbols(spans[0]) == symbols(spans[1]) == symbols(spans[2])

    def test_script_model_accepted(self):
        """Test a Script instance works as well as a mapping."""
        script = Script(segments=[segment(SHOULDER, travel=1)])
        seq, _ = generate(script)
        assert len(seq) == 11

    @pytest.mark.parametrize(
        "script",
        [
            {"segments": []},
            {"segments": [segment(SHOULDER, hold=0)]},
            {"segments": [segment(SHOULDER, sector=8)]},
            {"segments": [segment(SHOULDER)], "noise_sigma": -0.1},
            {"segments": [segment(SHOULDER)] * 3, "repeats": [{"start": 1, "stop": 5, "count": 2}]},
            {"segments": [segment(SHOULDER)] * 3, "repeats": [{"start": 2, "stop": 2, "count": 2}]},
            {
                "segments": [segment(SHOULDER)] * 3,
                "repeats": [{"start": 0, "stop": 2, "count": 2}, {"start": 1, "stop": 3, "count": 2}],
            },
            {"segments": [segment(SHOULDER)], "tempo": 3},
        ],
    )
    def test_invalid_script(self, script):
        """Test invalid scripts raise InvalidScript."""
        with pytest.raises(InvalidScript):
            generate(script)


class TestScriptFiles:
    """Tests for load_script and write_ground_truth."""

    def test_load(self, temp_dir):
        """Test a script file is read and validated."""
        path = os.path.join(temp_dir, "script.json")
        with open(path, "w") as f:
            json.dump({"segments": [segment(SHOULDER)], "seed": 4}, f)
        script = load_script(path)
        assert script.seed == 4
        assert script.segments[0].hold_frames == 10

    def test_bad_json(self, temp_dir):
        """Test unparsable JSON raises MalformedJson."""
        path = os.path.join(temp_dir, "script.json")
        with open(path, "w") as f:
            f.write('{"segments": [\n')
        with pytest.raises(MalformedJson):
            load_script(path)

    @pytest.mark.parametrize("document", [[], {"segments": [], "seed": 1}])
    def test_invalid_document(self, temp_dir, document):
        """Test a non-object or invalid script names the file."""
        path = os.path.join(temp_dir, "script.json")
        with open(path, "w") as f:
            json.dump(document, f)
        with pytest.raises(InvalidScript) as exc_info:
            load_script(path)
        assert exc_info.value.source == path

    def test_write_ground_truth(self, temp_dir):
        """Test the ground-truth record layout."""
        _, truth = generate({"segments": [segment(SHOULDER, hold=10, travel=1), segment(ABDOMEN)]})
        path = os.path.join(temp_dir, "truth", "ground_truth.json")
        write_ground_truth(truth, path)
        with open(path) as f:
            record = json.load(f)
        assert record["true_boundaries"] == {"right": [10, 13, 16], "left": []}
        assert record["joints"] == [10]
        assert record["verse_spans"] == []
        assert len(record["symbols_per_frame"]) == 26


class TestCorruptPhonemes:
    """Tests for corrupt_phonemes."""

    def test_rate_zero(self, random_phonemes):
        """Test nothing changes at rate 0."""
        phonemes = random_phonemes(10, seed=1)
        assert corrupt_phonemes(phonemes, 0.0) == phonemes

    def test_rate_one(self, random_phonemes):
        """Test every symbol changes at rate 1 and spans are kept."""
        phonemes = random_phonemes(10, seed=1)
        corrupted = corrupt_phonemes(phonemes, 1.0, seed=3)
        for before, after in zip(phonemes, corrupted):
            assert (after.start_frame, after.end_frame, after.hand) == (before.start_frame, before.end_frame, before.hand)
            assert all(a != b for a, b in zip(before.symbols, after.symbols))

    def test_seeded(self, random_phonemes):
        """Test the same seed corrupts the same symbols."""
        phonemes = random_phonemes(10, seed=2)
        assert corrupt_phonemes(phonemes, 0.3, seed=5) == corrupt_phonemes(phonemes, 0.3, seed=5)

    def test_invalid_rate(self, random_phonemes):
        """Test the rate must be a probability."""
        with pytest.raises(ValueError):
            corrupt_phonemes(random_phonemes(2), 1.5)
