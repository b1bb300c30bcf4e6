import asyncio
from functools import partial
from typing import Optional

from fastapi import APIRouter, File, Form, HTTPException, UploadFile
from pydantic import ValidationError

from signmine.config import PipelineConfig, describe_validation_error
from signmine.exceptions import DataError

from .. import schemas
from ..config import get_logger, get_max_upload_bytes
from ..services.analysis import analyze_keypoints, cluster_phonemes

logger = get_logger(__name__)

ACCEPTED_CONTENT_TYPES = {
    "application/jsonl",
    "application/x-ndjson",
    "application/json",
    "application/octet-stream",
    "text/plain",
}

router = APIRouter(
    prefix="/analyses",
    tags=["Analyses"],
)


@router.post("/keypoints", response_model=schemas.KeypointAnalysisResponse)
async def analyze_keypoint_upload(
    file: UploadFile = File(...),
    fps: float = Form(default=25.0),
    threshold: float = Form(default=0.5),
    method: str = Form(default="grouping"),
    eps: float = Form(default=0.5),
    min_samples: int = Form(default=3),
    max_span_len: int = Form(default=16),
    smoothing: bool = Form(default=True),
    min_span_len: Optional[int] = Form(default=None),
):
    if not file.filename:
        raise HTTPException(status_code=400, detail="No filename provided")
    if file.content_type and file.content_type.split(";")[0].strip() not in ACCEPTED_CONTENT_TYPES:
        raise HTTPException(status_code=400, detail="Invalid file type. Upload a keypoint JSON-lines file.")

    limit = get_max_upload_bytes()
    raw = await file.read(limit + 1)
    if len(raw) > limit:
        raise HTTPException(status_code=413, detail=f"Upload exceeds {limit} bytes")
    if not raw.strip():
        raise HTTPException(status_code=400, detail="Uploaded file is empty")

    try:
        config = PipelineConfig(
            fps=fps,
            threshold=threshold,
            method=method,
            eps=eps,
            min_samples=min_samples,
            max_span_len=max_span_len,
            smoothing=smoothing,
            **({"min_span_len": min_span_len} if min_span_len is not None else {}),
        )
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=describe_validation_error(e))

    loop = asyncio.get_running_loop()
    try:
        return await loop.run_in_executor(None, partial(analyze_keypoints, raw, file.filename, config))
    except DataError as e:
        logger.warning(f"Rejected '{file.filename}': {e}")
        raise HTTPException(status_code=422, detail=str(e))


@router.post("/phonemes", response_model=schemas.PhonemeClusteringResponse)
async def cluster_phoneme_list(request: schemas.PhonemeClusteringRequest):
    loop = asyncio.get_running_loop()
    try:
        return await loop.run_in_executor(None, partial(cluster_phonemes, request))
    except ValueError as e:
        # DataError included
        raise HTTPException(status_code=422, detail=str(e))
