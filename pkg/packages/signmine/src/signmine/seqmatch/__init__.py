from .matcher import (
    DEFAULT_MAX_SPAN_LEN,
    PhonemeSpan,
    SpanMatch,
    match_spans,
    span_report,
    write_matches_json,
)

__all__ = [
    "DEFAULT_MAX_SPAN_LEN",
    "PhonemeSpan",
    "SpanMatch",
    "match_spans",
    "span_report",
    "write_matches_json",
]
