"""
Tests for api/schemas.py - request and response models.
"""

import pytest
from pydantic import ValidationError

from api import schemas


class TestPhonemeClusteringRequest:
    """Tests for the phoneme clustering request."""

    def test_defaults(self):
        """Test grouping at T = 0.5 is the default."""
        request = schemas.PhonemeClusteringRequest(
            phonemes=[{"hand": "right", "start": 0, "end": 2, "symbols": [[0, 0], [1, 1]]}]
        )
        assert request.method == "grouping"
        assert request.threshold == 0.5
        assert request.min_samples == 3
        assert request.phonemes[0].symbols == [[0, 0], [1, 1]]

    @pytest.mark.parametrize(
        "body",
        [
            {"phonemes": []},
            {"phonemes": [{"hand": "both", "start": 0, "end": 1, "symbols": [[0, 0]]}]},
            {"phonemes": [{"hand": "right", "start": 0, "end": 1, "symbols": []}]},
            {"phonemes": [{"hand": "right", "start": -1, "end": 1, "symbols": [[0, 0]]}]},
            {"phonemes": [{"hand": "right", "start": 0, "end": 1, "symbols": [[0, 0]], "label": 2}]},
            {"phonemes": [{"hand": "right", "start": 0, "end": 1, "symbols": [[0, 0]]}], "threshold": 1.1},
            {"phonemes": [{"hand": "right", "start": 0, "end": 1, "symbols": [[0, 0]]}], "method": "kmeans"},
            {"phonemes": [{"hand": "right", "start": 0, "end": 1, "symbols": [[0, 0]]}], "eps": 0},
            {"phonemes": [{"hand": "right", "start": 0, "end": 1, "symbols": [[0, 0]]}], "min_samples": 6},
        ],
    )
    def test_rejected(self, body):
        """Test invalid requests fail validation."""
        with pytest.raises(ValidationError):
            schemas.PhonemeClusteringRequest(**body)


class TestResponses:
    """Tests for the response models."""

    def test_hand_report(self):
        """Test a hand without phonemes has no clustering."""
        report = schemas.HandReport(hand="left", phonemes=0)
        assert report.clustering is None
        assert report.matches == []
        assert report.length_histogram == {}

    def test_clustering_summary_silhouette_optional(self):
        """Test the silhouette may be undefined."""
        summary = schemas.ClusteringSummary(
            method="grouping", n_clusters=1, noise_count=0, mean_cluster_size=4.0
        )
        assert summary.silhouette is None

    def test_span_match_length(self):
        """Test a span match has at least one phoneme."""
        span = {"start_frame": 0, "end_frame": 3, "seconds": "0.0s–0.1s"}
        with pytest.raises(ValidationError):
            schemas.SpanMatchInfo(a=span, b=span, length=0, similarity=1.0)
