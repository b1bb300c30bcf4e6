"""
Blocking analysis jobs behind the /analyses routes.

Each function takes already-validated input, calls the signmine library
and shapes the result into response schemas.
"""

import os
import tempfile

from signmine.cluster.clustering import Clustering
from signmine.config import PipelineConfig
from signmine.ingest.keypoints import read_keypoints_jsonl
from signmine.metric.affinity import affinity_matrix
from signmine.metric.distance import SimilarityConfig
from signmine.pipeline import HandAnalysis, cluster_matrix, run_pipeline
from signmine.segment.segmentation import Phoneme, length_histogram
from signmine.seqmatch.matcher import PhonemeSpan, SpanMatch

from .. import schemas
from ..config import get_logger

logger = get_logger(__name__)


def clustering_summary(clustering: Clustering) -> schemas.ClusteringSummary:
    return schemas.ClusteringSummary(
        method=clustering.method,
        n_clusters=clustering.n_clusters,
        noise_count=clustering.noise_count,
        mean_cluster_size=clustering.mean_cluster_size,
        silhouette=clustering.silhouette,
    )


def _span_range(span: PhonemeSpan, fps: float) -> schemas.SpanRange:
    return schemas.SpanRange(start_frame=span.start_frame, end_frame=span.end_frame, seconds=span.seconds(fps))


def _match_info(match: SpanMatch, fps: float) -> schemas.SpanMatchInfo:
    return schemas.SpanMatchInfo(
        a=_span_range(match.a, fps),
        b=_span_range(match.b, fps),
        length=match.a.length,
        similarity=match.similarity,
    )


def hand_report(analysis: HandAnalysis, fps: float) -> schemas.HandReport:
    histogram = length_histogram(analysis.phonemes).get(analysis.hand, {})
    return schemas.HandReport(
        hand=analysis.hand.value,
        phonemes=len(analysis.phonemes),
        length_histogram={length: histogram[length] for length in sorted(histogram)},
        clustering=clustering_summary(analysis.clustering) if analysis.clustering else None,
        matches=[_match_info(m, fps) for m in analysis.matches],
    )


def analyze_keypoints(raw: bytes, filename: str, config: PipelineConfig) -> schemas.KeypointAnalysisResponse:
    """
    Runs the whole pipeline on an uploaded keypoint JSON-lines file.

    Raises:
        DataError: The upload cannot be parsed or analyzed.
    """
    fd, path = tempfile.mkstemp(suffix=".jsonl", prefix="signmine_upload_")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(raw)
        seq = read_keypoints_jsonl(path, fps=config.fps, source_id=os.path.splitext(filename)[0])
    finally:
        os.remove(path)

    logger.info(f"Analyzing '{filename}': {len(seq)} frames")
    result = run_pipeline(seq, config)
    return schemas.KeypointAnalysisResponse(
        frames=len(seq),
        fps=seq.fps,
        hands=[hand_report(analysis, seq.fps) for analysis in result.hands.values()],
    )


def cluster_phonemes(request: schemas.PhonemeClusteringRequest) -> schemas.PhonemeClusteringResponse:
    """
    Clusters one hand's phonemes posted in the segment artifact format.

    Raises:
        ValueError: A phoneme is malformed or the list mixes hands.
    """
    phonemes = [Phoneme.from_record(p.model_dump()) for p in request.phonemes]
    config = PipelineConfig(
        method=request.method,
        threshold=request.threshold,
        deletion_cost=request.deletion_cost,
        eps=request.eps,
        min_samples=request.min_samples,
        workers=1,
    )
    matrix = affinity_matrix(
        phonemes, SimilarityConfig(threshold=request.threshold, deletion_cost=request.deletion_cost)
    )
    clustering = cluster_matrix(matrix, config)
    logger.info(f"Clustered {len(phonemes)} phonemes into {clustering.n_clusters} clusters ({request.method})")
    return schemas.PhonemeClusteringResponse(
        ids=list(matrix.ids),
        labels=[int(label) for label in clustering.labels],
        clustering=clustering_summary(clustering),
    )
