"""
Exception hierarchy shared by every signmine stage.
"""

from typing import Optional


class SignmineError(Exception):
    """Base class for all signmine errors."""


class UsageError(SignmineError):
    """Invalid command-line usage (unknown flag, bad flag value)."""


class DataError(SignmineError, ValueError):
    """Input data cannot be processed. Optionally names the file and line."""

    def __init__(self, message: str, source: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.source = source
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.source and self.line is not None:
            return f"{self.source}:{self.line}: {self.message}"
        if self.source:
            return f"{self.source}: {self.message}"
        return self.message


class ConfigError(DataError):
    """Configuration file is unreadable or holds invalid values."""


# ingest
class MalformedJson(DataError):
    """Keypoint document is not valid JSON or has the wrong layout."""


class NoPersonDetected(DataError):
    """Keypoint document holds an empty `people` list."""


class DegenerateShoulders(DataError):
    """Shoulders are undetected or coincident; the frame cannot anchor normalization."""


class NoValidFrame(DataError):
    """No frame of a sequence anchors normalization."""


# phonology
class EmptyFrame(DataError):
    """Neither hand has a centroid in the frame."""


# segment
class TooShort(DataError):
    """Sequence is too short for the requested computation."""


# metric
class EmptyPhoneme(DataError):
    """A phoneme or symbol sequence has no symbols."""


# cluster
class TooFewPoints(DataError):
    """Too few points for a projection."""


# synth
class InvalidScript(DataError):
    """Synthesis script fails validation."""
