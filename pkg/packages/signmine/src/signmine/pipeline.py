"""
End-to-end orchestration: keypoints -> phonology -> phonemes -> clusters -> span matches.

Shared by the command-line front end and the HTTP service.
"""

import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cluster.clustering import Clustering, DbscanConfig, dbscan_cluster, grouping_cluster
from .cluster.evaluation import DEFAULT_MIN_SAMPLES, DEFAULT_THRESHOLDS, SweepRow, sweep
from .cluster.projection import Projection2D, project_2d
from .config import PipelineConfig, get_logger
from .ingest.keypoints import PoseSequence, Side, write_keypoints_jsonl
from .ingest.normalization import normalize_sequence
from .metric.affinity import AffinityMatrix, affinity_matrix, write_affinity_csv
from .metric.distance import SimilarityConfig
from .phonology.descriptors import PhonoFrame, extract_phonology, write_phonology_jsonl
from .reporting import (
    write_clustering_csv,
    write_json,
    write_lengths_csv,
    write_projection_csv,
    write_sweep_csv,
)
from .segment.segmentation import Phoneme, length_histogram, segment_hand, write_phonemes_json
from .seqmatch.matcher import SpanMatch, match_spans, write_matches_json

logger = get_logger(__name__)

KEYPOINTS_FILE = "keypoints.normalized.jsonl"
PHONOLOGY_FILE = "phonology.jsonl"
PHONEMES_FILE = "phonemes.json"
BOUNDARIES_FILE = "boundaries.json"
LENGTHS_FILE = "lengths.csv"
SUMMARY_FILE = "summary.json"


def similarity_config(config: PipelineConfig) -> SimilarityConfig:
    return SimilarityConfig(threshold=config.threshold, deletion_cost=config.deletion_cost)


def dbscan_config(config: PipelineConfig) -> DbscanConfig:
    return DbscanConfig(eps=config.eps, min_samples=config.min_samples)


def cluster_matrix(matrix: AffinityMatrix, config: PipelineConfig) -> Clustering:
    if config.method == "dbscan":
        return dbscan_cluster(matrix, dbscan_config(config))
    return grouping_cluster(matrix, similarity_config(config))


@dataclass
class HandAnalysis:
    hand: Side
    phonemes: list[Phoneme]
    boundaries: list[int]
    matrix: Optional[AffinityMatrix] = None
    clustering: Optional[Clustering] = None
    grouping_sweep: list[SweepRow] = field(default_factory=list)
    dbscan_sweep: list[SweepRow] = field(default_factory=list)
    projection: Optional[Projection2D] = None
    matches: list[SpanMatch] = field(default_factory=list)


@dataclass
class PipelineResult:
    sequence: PoseSequence
    phonology: list[PhonoFrame]
    hands: dict[Side, HandAnalysis]


def segment_all(frames: Sequence[PhonoFrame], config: PipelineConfig) -> dict[Side, tuple[list[Phoneme], list[int]]]:
    return {
        side: segment_hand(
            frames,
            side,
            min_len=config.min_phoneme_len,
            smoothing=config.smoothing,
            tolerance=config.speed_tolerance,
        )
        for side in Side
    }


def analyze_hand(
    side: Side,
    phonemes: list[Phoneme],
    boundaries: list[int],
    config: PipelineConfig,
) -> HandAnalysis:
    """Affinity, clustering, sweeps, projection and span matching for one hand."""
    analysis = HandAnalysis(side, phonemes, boundaries)
    if not phonemes:
        logger.warning(f"{side.value}: no phonemes; skipping clustering and matching")
        return analysis

    cfg = similarity_config(config)
    analysis.matrix = affinity_matrix(phonemes, cfg, workers=config.workers)
    analysis.clustering = cluster_matrix(analysis.matrix, config)
    analysis.grouping_sweep = sweep(
        analysis.matrix, "grouping", DEFAULT_THRESHOLDS, deletion_cost=config.deletion_cost
    )
    analysis.dbscan_sweep = sweep(analysis.matrix, "dbscan", DEFAULT_MIN_SAMPLES, eps=config.eps)
    if len(phonemes) >= 3:
        analysis.projection = project_2d(analysis.matrix)
    else:
        logger.warning(f"{side.value}: {len(phonemes)} phoneme(s) are too few for a projection")
    analysis.matches = match_spans(
        phonemes,
        cfg,
        max_len=config.max_span_len,
        min_span_len=config.min_span_len,
        matrix=analysis.matrix,
        workers=config.workers,
    )
    return analysis


def run_pipeline(seq: PoseSequence, config: PipelineConfig) -> PipelineResult:
    """Runs every stage on raw (pixel-space) keypoints."""
    normalized = normalize_sequence(
        seq,
        policy=config.normalization_policy,
        target_shoulder_distance=config.target_shoulder_distance,
    )
    frames = extract_phonology(normalized, workers=config.workers)
    segmented = segment_all(frames, config)
    hands = {
        side: analyze_hand(side, phonemes, boundaries, config)
        for side, (phonemes, boundaries) in segmented.items()
    }
    return PipelineResult(normalized, frames, hands)


def summarize(result: PipelineResult, config: PipelineConfig) -> dict:
    """Summary record; excludes settings that cannot change results (workers, paths)."""
    hands = {}
    for side, analysis in result.hands.items():
        clustering = analysis.clustering
        hands[side.value] = {
            "phonemes": len(analysis.phonemes),
            "boundaries": len(analysis.boundaries),
            "clusters": clustering.n_clusters if clustering else 0,
            "noise": clustering.noise_count if clustering else 0,
            "mean_cluster_size": clustering.mean_cluster_size if clustering else 0.0,
            "silhouette": clustering.silhouette if clustering else None,
            "matches": len(analysis.matches),
        }
    return {
        "frames": len(result.sequence),
        "fps": result.sequence.fps,
        "config": config.model_dump(exclude={"workers", "input", "output_dir"}),
        "hands": hands,
    }


def write_artifacts(result: PipelineResult, output_dir: str | os.PathLike, config: PipelineConfig) -> dict:
    """Writes every stage artifact into output_dir and returns the summary."""
    os.makedirs(output_dir, exist_ok=True)

    def out(name: str) -> str:
        return os.path.join(output_dir, name)

    write_keypoints_jsonl(result.sequence, out(KEYPOINTS_FILE))
    write_phonology_jsonl(result.phonology, out(PHONOLOGY_FILE))

    all_phonemes = [p for side in Side for p in result.hands[side].phonemes]
    write_phonemes_json(all_phonemes, out(PHONEMES_FILE))
    write_json({side.value: result.hands[side].boundaries for side in Side}, out(BOUNDARIES_FILE))
    write_lengths_csv(length_histogram(all_phonemes), out(LENGTHS_FILE))

    for side in Side:
        analysis = result.hands[side]
        if analysis.matrix is None:
            continue
        write_affinity_csv(analysis.matrix, out(f"affinity_{side.value}.csv"))
        write_clustering_csv(analysis.clustering, analysis.phonemes, out(f"clustering_{side.value}.csv"))
        write_sweep_csv(analysis.grouping_sweep, out(f"sweep_grouping_{side.value}.csv"))
        write_sweep_csv(analysis.dbscan_sweep, out(f"sweep_dbscan_{side.value}.csv"))
        if analysis.projection is not None:
            write_projection_csv(
                analysis.projection,
                analysis.matrix.ids,
                analysis.clustering.labels,
                out(f"projection_{side.value}.csv"),
            )
        write_matches_json(analysis.matches, out(f"matches_{side.value}.json"), fps=config.fps)

    summary = summarize(result, config)
    write_json(summary, out(SUMMARY_FILE))
    logger.info(f"Wrote pipeline artifacts to '{output_dir}'")
    return summary
