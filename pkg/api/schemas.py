from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


# --- Shared ---
class SpanRange(BaseModel):
    start_frame: int
    end_frame: int
    seconds: str = Field(..., description="Time range, e.g. '4.0s–7.0s'")


class SpanMatchInfo(BaseModel):
    a: SpanRange
    b: SpanRange
    length: int = Field(..., ge=1, description="Span length in phonemes")
    similarity: float


class ClusteringSummary(BaseModel):
    method: Literal["grouping", "dbscan"]
    n_clusters: int
    noise_count: int
    mean_cluster_size: float
    silhouette: Optional[float] = Field(None, description="Null when fewer than two clusters")


# --- Keypoint analysis ---
class HandReport(BaseModel):
    hand: Literal["right", "left"]
    phonemes: int
    length_histogram: Dict[int, int] = Field(default_factory=dict, description="Phoneme length in frames -> count")
    clustering: Optional[ClusteringSummary] = None
    matches: List[SpanMatchInfo] = Field(default_factory=list)


class KeypointAnalysisResponse(BaseModel):
    frames: int
    fps: float
    hands: List[HandReport]


# --- Phoneme clustering ---
class PhonemeIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hand: Literal["right", "left"]
    start: int = Field(..., ge=0)
    end: int = Field(..., ge=0)
    symbols: List[List[int]] = Field(..., min_length=1, description="(sector, level) pairs, one per frame")


class PhonemeClusteringRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    phonemes: List[PhonemeIn] = Field(..., min_length=1)
    method: Literal["grouping", "dbscan"] = "grouping"
    threshold: float = Field(0.5, ge=0.0, le=1.0)
    deletion_cost: float = Field(1.0, gt=0)
    eps: float = Field(0.5, gt=0)
    min_samples: int = Field(3, ge=1, le=5)


class PhonemeClusteringResponse(BaseModel):
    ids: List[str]
    labels: List[int]
    clustering: ClusteringSummary
