"""
CSV and JSON writers for the stage artifacts.

Numbers are written with 9 significant digits and a '.' decimal separator;
undefined values are written as empty cells (CSV) or null (JSON).
"""

import csv
import json
import os
from typing import Any, Iterable, Mapping, Optional, Sequence

from .cluster.clustering import Clustering
from .cluster.evaluation import SweepRow
from .cluster.projection import Projection2D
from .config import get_logger
from .exceptions import DataError
from .ingest.keypoints import Side
from .segment.segmentation import Phoneme

logger = get_logger(__name__)


def format_number(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{value:.9g}"


def _ensure_parent(path: str | os.PathLike) -> None:
    output_dir = os.path.dirname(os.fspath(path))
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(format_number(v) if isinstance(v, float) or v is None else v for v in row)
    logger.debug(f"Wrote '{path}'")


def write_json(data: Any, path: str | os.PathLike) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    logger.debug(f"Wrote '{path}'")


def write_lengths_csv(histograms: Mapping[Side, Mapping[int, int]], path: str | os.PathLike) -> None:
    """Rows of `hand,length_frames,count`, right hand first, lengths ascending."""
    rows = [
        (side.value, length, histograms[side][length])
        for side in Side
        if side in histograms
        for length in sorted(histograms[side])
    ]
    write_csv(path, ("hand", "length_frames", "count"), rows)


def write_clustering_csv(clustering: Clustering, phonemes: Sequence[Phoneme], path: str | os.PathLike) -> None:
    rows = [(p.id, p.start_frame, p.end_frame, int(label)) for p, label in zip(phonemes, clustering.labels)]
    write_csv(path, ("phoneme_id", "start", "end", "label"), rows)


def write_sweep_csv(rows: Sequence[SweepRow], path: str | os.PathLike) -> None:
    write_csv(
        path,
        ("param", "n_clusters", "mean_size", "silhouette", "noise_count"),
        ((float(r.param), r.n_clusters, float(r.mean_size), r.silhouette, r.noise_count) for r in rows),
    )


def write_projection_csv(
    projection: Projection2D,
    ids: Sequence[str],
    labels: Sequence[int],
    path: str | os.PathLike,
) -> None:
    rows = [
        (phoneme_id, float(x), float(y), int(label))
        for phoneme_id, (x, y), label in zip(ids, projection.coords, labels)
    ]
    write_csv(path, ("phoneme_id", "x", "y", "label"), rows)


def read_clustering_csv(path: str | os.PathLike) -> tuple[list[str], list[int]]:
    """Phoneme ids and labels of a clustering CSV, in row order."""
    ids, labels = [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for line_number, row in enumerate(csv.DictReader(f), start=2):
            try:
                ids.append(row["phoneme_id"])
                labels.append(int(row["label"]))
            except (KeyError, TypeError, ValueError) as e:
                raise DataError(f"Bad clustering row: {e}", source=str(path), line=line_number) from e
    return ids, labels
