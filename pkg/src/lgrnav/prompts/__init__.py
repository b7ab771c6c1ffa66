from .builder import (
    PromptBundle,
    build_bundle,
    build_ranking_prompt,
    build_room_prompt,
    render_ranking_response,
)
from .parser import ParsedRanking, RankedEntry, extract_target_room, parse_ranking_response, parse_room_response
from .transcript import TranscriptLog, TranscriptRecord, read_transcript

__all__ = [
    "PromptBundle",
    "build_bundle",
    "build_ranking_prompt",
    "build_room_prompt",
    "render_ranking_response",
    "ParsedRanking",
    "RankedEntry",
    "extract_target_room",
    "parse_ranking_response",
    "parse_room_response",
    "TranscriptLog",
    "TranscriptRecord",
    "read_transcript",
]
