"""
Tests for speed-based segmentation into phonemes.
"""

import json
import os
from collections import Counter

import numpy as np
import pytest

from signmine.exceptions import EmptyPhoneme, MalformedJson, TooShort
from signmine.ingest.keypoints import Side
from signmine.phonology.descriptors import ABSENT, HandState, LocationLevel, PhonoFrame
from signmine.segment.segmentation import (
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


def series(values, valid=None) -> SpeedSeries:
    values = np.asarray(values, dtype=np.float64)
    if valid is None:
        valid = np.ones(len(values), dtype=bool)
    return SpeedSeries(Side.RIGHT, values, valid)


def track(xs, sector=0, level=LocationLevel.SHOULDER, start=0):
    """Right-hand PhonoFrames along x; None marks an absent hand."""
    frames = []
    for t, x in enumerate(xs):
        right = ABSENT if x is None else HandState((float(x), 0.0), sector, level)
        frames.append(PhonoFrame(start + t, right, ABSENT))
    return frames


class TestSegmentBoundaries:
    """Tests for segment_boundaries."""

    def test_reference_fixture(self):
        """Test f = [1, 2, 3, 2, 1, 2] gives boundaries {3, 5}."""
        assert segment_boundaries(series([1, 2, 3, 2, 1, 2])) == [3, 5]

    @pytest.mark.parametrize("seed", range(5))
    def test_piecewise_ramps(self, seed):
        """Test ramps with random lengths and slopes split exactly after each turning point."""
        rng = np.random.default_rng(seed)
        values = [50.0]
        turns = []
        for leg in range(8):
            sign = 1.0 if leg % 2 == 0 else -1.0
            for _ in range(int(rng.integers(1, 6))):
                values.append(values[-1] + sign * float(rng.uniform(0.5, 2.0)))
            turns.append(len(values) - 1)
        # the end of the last ramp is not a turning point
        turns.pop()
        assert segment_boundaries(series(values)) == [t + 1 for t in turns]

    def test_monotone_has_no_boundary(self):
        """Test a steadily accelerating hand is one segment."""
        assert segment_boundaries(series([0.1, 0.2, 0.3, 0.4])) == []

    def test_constant_then_rise(self):
        """Test a change from flat to rising speed is a sign change."""
        assert segment_boundaries(series([1, 1, 1, 2, 3])) == [3]

    def test_tolerance_flattens_jitter(self):
        """Test differences within tolerance count as sign 0."""
        values = [1.0, 1.001, 0.999, 1.0, 1.001]
        assert segment_boundaries(series(values)) != []
        assert segment_boundaries(series(values), tolerance=0.01) == []

    def test_invalid_stretch_edges(self):
        """Test absent stretches are cut out at their edges."""
        valid = np.array([True, True, False, False, True, True])
        assert segment_boundaries(series([1, 1, 0, 0, 1, 1], valid)) == [3, 4]

    def test_short_series(self):
        """Test fewer than three speeds give no sign change."""
        assert segment_boundaries(series([1.0, 2.0])) == []

    def test_boundaries_sorted_and_unique(self):
        """Test output is strictly increasing."""
        rng = np.random.default_rng(3)
        result = segment_boundaries(series(rng.random(200)))
        assert result == sorted(set(result))
        assert all(0 < b < 201 for b in result)


class TestSpeedSeries:
    """Tests for speed_series and smooth_speed."""

    def test_speeds(self):
        """Test speed is the centroid step length."""
        s = speed_series(track([0.0, 3.0, 3.0, 4.0]), Side.RIGHT)
        assert s.values.tolist() == [3.0, 0.0, 1.0]
        assert s.valid.all()

    def test_absent_hand_invalidates_neighbours(self):
        """Test steps touching an absent frame are invalid."""
        s = speed_series(track([0.0, 1.0, None, 2.0, 3.0]), Side.RIGHT)
        assert s.valid.tolist() == [True, False, False, True]
        assert s.valid_runs() == [(0, 0), (3, 3)]

    def test_too_short(self):
        """Test one frame raises TooShort."""
        with pytest.raises(TooShort):
            speed_series(track([0.0]), Side.RIGHT)

    def test_smoothing(self):
        """Test the centred 3-tap average over valid neighbours."""
        smoothed = smooth_speed(series([3.0, 0.0, 3.0, 6.0]))
        assert smoothed.values.tolist() == pytest.approx([1.5, 2.0, 3.0, 4.5])

    def test_smoothing_skips_invalid(self):
        """Test invalid values neither contribute nor get filled."""
        valid = np.array([True, False, True])
        smoothed = smooth_speed(series([2.0, 9.0, 4.0], valid))
        assert smoothed.values.tolist() == [2.0, 0.0, 4.0]

    def test_rejects_mismatched_shapes(self):
        """Test values and mask must align."""
        with pytest.raises(ValueError):
            SpeedSeries(Side.RIGHT, np.zeros(3), np.ones(2, dtype=bool))


class TestPhonemesFromBoundaries:
    """Tests for phonemes_from_boundaries."""

    def test_cuts_and_filters_short(self):
        """Test segments shorter than min_len are dropped."""
        frames = track(range(10))
        phonemes = phonemes_from_boundaries(frames, [2, 6], Side.RIGHT, min_len=3)
        assert [(p.start_frame, p.end_frame) for p in phonemes] == [(2, 6), (6, 10)]

    def test_drops_segments_with_absent_symbols(self):
        """Test a segment touching an absent frame is discarded."""
        xs = [0, 1, 2, 3, None, 5, 6, 7, 8]
        phonemes = phonemes_from_boundaries(track(xs), [4, 5], Side.RIGHT, min_len=1)
        assert [(p.start_frame, p.end_frame) for p in phonemes] == [(0, 4), (5, 9)]

    def test_missing_orientation_is_absent_symbol(self):
        """Test a present hand without orientation has no symbol."""
        frames = track([0, 1, 2, 3])
        frames[1] = PhonoFrame(1, HandState((1.0, 0.0), None, LocationLevel.EYE), ABSENT)
        assert phonemes_from_boundaries(frames, [], Side.RIGHT, min_len=1) == []

    def test_frame_index_offset(self):
        """Test phoneme frames follow the source frame indices."""
        phonemes = phonemes_from_boundaries(track(range(6), start=100), [3], Side.RIGHT, min_len=3)
        assert [p.id for p in phonemes] == ["right:100-103", "right:103-106"]

    def test_rejects_out_of_range(self):
        """Test boundaries outside the frame list are rejected."""
        with pytest.raises(ValueError):
            phonemes_from_boundaries(track(range(4)), [9], Side.RIGHT)


class TestSegmentHand:
    """Tests for segment_hand."""

    def test_travel_and_hold(self):
        """Test a move-hold-move pattern splits at departure, peak speed and arrival."""
        xs = [0, 0, 0, 1, 3, 4, 4, 4, 4, 5, 7, 8, 8, 8]
        phonemes, boundaries = segment_hand(track(xs, start=10), Side.RIGHT, min_len=1, smoothing=False)
        # departs at 2 and 8, fastest step ends at 4 and 10, first rest step ends at 6 and 12
        assert boundaries == [12, 14, 16, 18, 20, 22]
        assert sum(len(p) for p in phonemes) == len(xs)

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_hold_move_cycles(self, k):
        """Test cycles of k-frame phonemes give k as the most common length."""
        steps = [*range(1, k), k, *range(k - 1, 0, -1)]
        xs = [0] * (k + 1)
        for _ in range(6):
            for step in steps:
                xs.append(xs[-1] + step)
            xs.extend([xs[-1]] * (k + 1))
        phonemes, _ = segment_hand(track(xs), Side.RIGHT, smoothing=False)
        lengths = Counter(len(p) for p in phonemes)
        # the first rest, two per cycle, and every hold but the last, which is one frame longer
        assert lengths.most_common(1)[0] == (k, 18)

    def test_left_hand_absent(self):
        """Test an always-absent hand yields no phonemes."""
        phonemes, _ = segment_hand(track(range(8)), Side.LEFT)
        assert phonemes == []

    def test_single_frame(self):
        """Test one frame gives no boundaries and respects min_len."""
        phonemes, boundaries = segment_hand(track([0.0]), Side.RIGHT, min_len=1)
        assert boundaries == []
        assert len(phonemes) == 1


class TestPhoneme:
    """Tests for the Phoneme type."""

    def test_identity(self):
        """Test id, length and hand coercion."""
        p = Phoneme("left", 4, 6, ((1, 0), (2, 2)))
        assert p.hand is Side.LEFT
        assert p.id == "left:4-6"
        assert len(p) == 2

    def test_empty(self):
        """Test a phoneme without symbols raises EmptyPhoneme."""
        with pytest.raises(EmptyPhoneme):
            Phoneme(Side.RIGHT, 0, 1, ())

    @pytest.mark.parametrize(
        "start,end,symbols",
        [(3, 3, ((0, 0),)), (0, 2, ((0, 0),)), (0, 1, ((8, 0),)), (0, 1, ((0, 3),))],
    )
    def test_invalid(self, start, end, symbols):
        """Test bad spans and symbols are rejected."""
        with pytest.raises(ValueError):
            Phoneme(Side.RIGHT, start, end, symbols)


class TestPhonemeArtifacts:
    """Tests for phoneme JSON and the length histogram."""

    def test_write_then_read(self, temp_dir, random_phonemes):
        """Test the phoneme list survives the artifact."""
        phonemes = random_phonemes(5)
        path = os.path.join(temp_dir, "phonemes.json")
        write_phonemes_json(phonemes, path)
        assert read_phonemes_json(path) == phonemes

    def test_bad_record(self):
        """Test a malformed record names its position."""
        with pytest.raises(MalformedJson) as exc_info:
            phonemes_from_records([{"hand": "right", "start": 0}], source="x.json")
        assert "position 0" in str(exc_info.value)

    def test_not_a_list(self, temp_dir):
        """Test a non-array document is rejected."""
        path = os.path.join(temp_dir, "phonemes.json")
        with open(path, "w") as f:
            json.dump({"hand": "right"}, f)
        with pytest.raises(MalformedJson):
            read_phonemes_json(path)

    def test_length_histogram(self, phoneme_factory):
        """Test counts per hand and length."""
        phonemes = [
            phoneme_factory([(0, 0)] * 3),
            phoneme_factory([(0, 0)] * 3, start=3),
            phoneme_factory([(1, 1)] * 5, hand=Side.LEFT),
        ]
        histogram = length_histogram(phonemes)
        assert histogram[Side.RIGHT] == {3: 2}
        assert histogram[Side.LEFT] == {5: 1}
