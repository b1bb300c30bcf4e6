"""
Command-line front end for the signmine phoneme mining pipeline.

Every subcommand reads the previous stage's artifact from disk, writes its
own artifacts and prints a one-line summary. Exit status: 0 on success,
1 on usage errors, 2 on data errors.
"""

import argparse
import os
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from signmine.cluster.clustering import Clustering
from signmine.cluster.evaluation import DEFAULT_MIN_SAMPLES, DEFAULT_THRESHOLDS, sweep
from signmine.cluster.projection import project_2d
from signmine.cluster.silhouette import silhouette
from signmine.config import (
    PipelineConfig,
    describe_validation_error,
    get_logger,
    load_pipeline_config,
    set_log_level,
)
from signmine.exceptions import DataError, UsageError
from signmine.ingest.keypoints import Side, read_keypoints, read_keypoints_jsonl, write_keypoints_jsonl
from signmine.ingest.normalization import normalize_sequence
from signmine.metric.affinity import affinity_matrix, read_affinity_csv, write_affinity_csv
from signmine.phonology.descriptors import extract_phonology, read_phonology_jsonl, write_phonology_jsonl
from signmine.pipeline import (
    BOUNDARIES_FILE,
    KEYPOINTS_FILE,
    LENGTHS_FILE,
    PHONEMES_FILE,
    PHONOLOGY_FILE,
    cluster_matrix,
    run_pipeline,
    segment_all,
    similarity_config,
    write_artifacts,
)
from signmine.reporting import (
    format_number,
    read_clustering_csv,
    write_clustering_csv,
    write_json,
    write_lengths_csv,
    write_projection_csv,
    write_sweep_csv,
)
from signmine.segment.segmentation import length_histogram, read_phonemes_json, write_phonemes_json
from signmine.seqmatch.matcher import match_spans, span_report, write_matches_json
from signmine.synth.generator import generate, load_script, write_ground_truth

logger = get_logger("signmine.cli")

# flag dest -> PipelineConfig field
CONFIG_FLAGS = (
    "fps",
    "min_phoneme_len",
    "smoothing",
    "speed_tolerance",
    "threshold",
    "deletion_cost",
    "method",
    "eps",
    "min_samples",
    "max_span_len",
    "min_span_len",
    "normalization_policy",
    "target_shoulder_distance",
    "workers",
    "input",
    "output_dir",
)

PROJECTION_FILE = "projection.csv"


class CommandLineParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser() -> CommandLineParser:
    common = CommandLineParser(add_help=False)
    common.add_argument("input", nargs="?", help="Input file or directory of the stage")
    common.add_argument("-o", "--output-dir", dest="output_dir", help="Directory for the stage artifacts")
    common.add_argument("--config", help="Flat JSON config file; flags override it")
    common.add_argument("--workers", type=int, help="Thread-pool size (defaults to SIGNMINE_WORKERS)")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--fps", type=float, help="Frames per second of the source video")
    common.add_argument("--min-phoneme-len", type=int, help="Shortest phoneme kept, in frames")
    common.add_argument("--smoothing", action=argparse.BooleanOptionalAction, default=None,
                        help="3-tap smoothing of hand speed before segmentation")
    common.add_argument("--speed-tolerance", type=float, help="|f'| at or below this has sign 0")
    common.add_argument("--threshold", type=float, help="Similarity threshold T in [0, 1]")
    common.add_argument("--deletion-cost", type=float, help="Insertion/deletion cost of the edit distance")
    common.add_argument("--method", help="Clustering method: grouping or dbscan")
    common.add_argument("--eps", type=float, help="DBSCAN radius")
    common.add_argument("--min-samples", type=int, help="DBSCAN neighbourhood size")
    common.add_argument("--max-span-len", type=int, help="Longest matched span, in phonemes")
    common.add_argument("--min-span-len", type=int, help="Shortest reported span, in phonemes")
    common.add_argument("--normalization-policy", help="per_frame or first_frame")
    common.add_argument("--target-shoulder-distance", type=float)
    common.add_argument("--hand", choices=[s.value for s in Side], help="Restrict to one hand")

    parser = CommandLineParser(prog="signmine", description="Mine phonemes and repeated spans from sign-language keypoints.")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=CommandLineParser)
    subparsers.required = True

    ingest_parser = subparsers.add_parser("ingest", parents=[common], help="OpenPose directory or keypoint JSONL -> normalized keypoint JSONL")
    ingest_parser.add_argument("--output", help=f"Output file (default: {KEYPOINTS_FILE} in the output directory)")
    extract_parser = subparsers.add_parser("extract", parents=[common], help="normalized keypoint JSONL -> phonology JSONL")
    extract_parser.add_argument("--output", help=f"Output file (default: {PHONOLOGY_FILE} in the output directory)")
    subparsers.add_parser("segment", parents=[common], help="phonology JSONL -> phonemes, boundaries, length histogram")
    subparsers.add_parser("cluster", parents=[common], help="phonemes JSON -> affinity and clustering CSV per hand")
    sweep_parser = subparsers.add_parser("sweep", parents=[common], help="phonemes JSON -> sweep CSV per hand")
    sweep_parser.add_argument("--grid", help="Comma-separated thresholds (grouping) or min_samples (dbscan)")
    silhouette_parser = subparsers.add_parser("silhouette", parents=[common], help="affinity CSV + clustering CSV -> score")
    silhouette_parser.add_argument("--clustering", required=True, help="Clustering CSV of the same phonemes")
    project_parser = subparsers.add_parser("project", parents=[common], help="affinity CSV -> 2-D projection CSV")
    project_parser.add_argument("--clustering", help="Clustering CSV supplying the label column")
    project_parser.add_argument("--output", help=f"Output file (default: {PROJECTION_FILE} in the output directory)")
    subparsers.add_parser("match", parents=[common], help="phonemes JSON -> span matches per hand")
    subparsers.add_parser("synth", parents=[common], help="script JSON -> synthetic keypoints and ground truth")
    subparsers.add_parser("pipeline", parents=[common], help="keypoints -> every artifact")
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    overrides = {name: getattr(args, name, None) for name in CONFIG_FLAGS}
    try:
        return load_pipeline_config(args.config, overrides)
    except ValidationError as e:
        raise UsageError(f"Invalid option value: {describe_validation_error(e)}") from e


def _require(value: Optional[str], what: str) -> str:
    if not value:
        raise UsageError(f"Missing {what}")
    return value


def _hands(args: argparse.Namespace) -> list[Side]:
    return [Side(args.hand)] if args.hand else list(Side)


def _output_file(args: argparse.Namespace, config: PipelineConfig, name: str) -> str:
    return args.output or os.path.join(config.output_dir or ".", name)


def cmd_ingest(args, config: PipelineConfig) -> str:
    source = _require(config.input, "input path")
    output = _output_file(args, config, KEYPOINTS_FILE)
    seq = read_keypoints(source, fps=config.fps, workers=config.workers)
    normalized = normalize_sequence(
        seq, policy=config.normalization_policy, target_shoulder_distance=config.target_shoulder_distance
    )
    write_keypoints_jsonl(normalized, output)
    return f"ingest: {len(normalized)} frames -> {output}"


def cmd_extract(args, config: PipelineConfig) -> str:
    source = _require(config.input, "normalized keypoint file")
    output = _output_file(args, config, PHONOLOGY_FILE)
    frames = extract_phonology(read_keypoints_jsonl(source, fps=config.fps), workers=config.workers)
    write_phonology_jsonl(frames, output)
    return f"extract: {len(frames)} frames -> {output}"


def cmd_segment(args, config: PipelineConfig) -> str:
    source = _require(config.input, "phonology file")
    output_dir = config.output_dir or "."
    frames = read_phonology_jsonl(source)
    segmented = segment_all(frames, config)
    phonemes = [p for side in Side for p in segmented[side][0]]
    write_phonemes_json(phonemes, os.path.join(output_dir, PHONEMES_FILE))
    write_json({side.value: segmented[side][1] for side in Side}, os.path.join(output_dir, BOUNDARIES_FILE))
    write_lengths_csv(length_histogram(phonemes), os.path.join(output_dir, LENGTHS_FILE))
    counts = ", ".join(f"{side.value} {len(segmented[side][0])}" for side in Side)
    return f"segment: {counts} phonemes -> {output_dir}"


def cmd_cluster(args, config: PipelineConfig) -> str:
    source = _require(config.input, "phonemes file")
    output_dir = config.output_dir or "."
    phonemes = read_phonemes_json(source)
    parts = []
    for side in _hands(args):
        members = [p for p in phonemes if p.hand is side]
        if not members:
            continue
        matrix = affinity_matrix(members, similarity_config(config), workers=config.workers)
        clustering = cluster_matrix(matrix, config)
        write_affinity_csv(matrix, os.path.join(output_dir, f"affinity_{side.value}.csv"))
        write_clustering_csv(clustering, members, os.path.join(output_dir, f"clustering_{side.value}.csv"))
        parts.append(
            f"{side.value} {clustering.n_clusters} clusters ({clustering.noise_count} noise, "
            f"silhouette {format_number(clustering.silhouette) or 'undefined'})"
        )
    return f"cluster [{config.method}]: " + ("; ".join(parts) or "no phonemes")


def cmd_sweep(args, config: PipelineConfig) -> str:
    source = _require(config.input, "phonemes file")
    output_dir = config.output_dir or "."
    if args.grid:
        try:
            grid = [float(v) if config.method == "grouping" else int(v) for v in args.grid.split(",")]
        except ValueError as e:
            raise UsageError(f"Invalid --grid: {e}") from e
        if config.method == "dbscan" and not all(1 <= v <= 5 for v in grid):
            raise UsageError("Invalid --grid: min_samples values must lie in [1, 5]")
    else:
        grid = list(DEFAULT_THRESHOLDS if config.method == "grouping" else DEFAULT_MIN_SAMPLES)

    phonemes = read_phonemes_json(source)
    written = 0
    for side in _hands(args):
        members = [p for p in phonemes if p.hand is side]
        if not members:
            continue
        matrix = affinity_matrix(members, similarity_config(config), workers=config.workers)
        rows = sweep(matrix, config.method, grid, eps=config.eps, deletion_cost=config.deletion_cost)
        write_sweep_csv(rows, os.path.join(output_dir, f"sweep_{config.method}_{side.value}.csv"))
        written += 1
    return f"sweep [{config.method}]: {len(grid)} values x {written} hand(s) -> {output_dir}"


def cmd_silhouette(args, config: PipelineConfig) -> str:
    matrix = read_affinity_csv(_require(config.input, "affinity CSV"))
    ids, labels = read_clustering_csv(args.clustering)
    if tuple(ids) != matrix.ids:
        raise DataError("Clustering rows do not match the affinity matrix ids", source=args.clustering)
    method = "dbscan" if min(labels, default=0) < 0 else "grouping"
    try:
        clustering = Clustering(labels, method=method)
    except ValueError as e:
        raise DataError(str(e), source=args.clustering) from e
    score = silhouette(matrix, clustering)
    return f"silhouette: {format_number(score) or 'undefined'}"


def cmd_project(args, config: PipelineConfig) -> str:
    matrix = read_affinity_csv(_require(config.input, "affinity CSV"))
    output = _output_file(args, config, PROJECTION_FILE)
    labels = [0] * matrix.n
    if args.clustering:
        ids, labels = read_clustering_csv(args.clustering)
        if tuple(ids) != matrix.ids:
            raise DataError("Clustering rows do not match the affinity matrix ids", source=args.clustering)
    projection = project_2d(matrix)
    write_projection_csv(projection, matrix.ids, labels, output)
    return f"project: {matrix.n} phonemes (explained {projection.explained[0]:.3f}, {projection.explained[1]:.3f}) -> {output}"


def cmd_match(args, config: PipelineConfig) -> str:
    source = _require(config.input, "phonemes file")
    output_dir = config.output_dir or "."
    phonemes = read_phonemes_json(source)
    parts = []
    for side in _hands(args):
        members = [p for p in phonemes if p.hand is side]
        matches = match_spans(
            members,
            similarity_config(config),
            max_len=config.max_span_len,
            min_span_len=config.min_span_len,
            workers=config.workers,
        )
        write_matches_json(matches, os.path.join(output_dir, f"matches_{side.value}.json"), fps=config.fps)
        if matches:
            print(span_report(matches, config.fps))
        parts.append(f"{side.value} {len(matches)}")
    return "match: " + ", ".join(parts) + " span matches"


def cmd_synth(args, config: PipelineConfig) -> str:
    script = load_script(_require(config.input, "script file"))
    output_dir = config.output_dir or "."
    seq, truth = generate(script)
    write_keypoints_jsonl(seq, os.path.join(output_dir, "keypoints.jsonl"))
    write_ground_truth(truth, os.path.join(output_dir, "ground_truth.json"))
    return f"synth: {len(seq)} frames, {len(truth.true_boundaries[Side.RIGHT])} right-hand boundaries -> {output_dir}"


def cmd_pipeline(args, config: PipelineConfig) -> str:
    source = _require(config.input, "input path")
    output_dir = config.output_dir or "signmine_output"
    seq = read_keypoints(source, fps=config.fps, workers=config.workers)
    summary = write_artifacts(run_pipeline(seq, config), output_dir, config)
    hands = ", ".join(
        f"{name} {h['phonemes']} phonemes/{h['clusters']} clusters/{h['matches']} matches"
        for name, h in summary["hands"].items()
    )
    return f"pipeline: {summary['frames']} frames; {hands} -> {output_dir}"


HANDLERS = {
    "ingest": cmd_ingest,
    "extract": cmd_extract,
    "segment": cmd_segment,
    "cluster": cmd_cluster,
    "sweep": cmd_sweep,
    "silhouette": cmd_silhouette,
    "project": cmd_project,
    "match": cmd_match,
    "synth": cmd_synth,
    "pipeline": cmd_pipeline,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Parses argv, runs one subcommand and returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.log_level:
            try:
                set_log_level(args.log_level)
            except ValueError as e:
                raise UsageError(str(e)) from e
        config = resolve_config(args)
        summary = HANDLERS[args.command](args, config)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e.filename or ''}: {e.strerror}", file=sys.stderr)
        return 2

    print(summary)
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
