import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from lgrnav.categories import DEFAULT_CATEGORIES, RoomCategoryList, normalize_category
from lgrnav.errors import (
    CountMismatchError,
    DuplicateRankError,
    DuplicateStepError,
    MissingStepError,
    NoRankingBlockError,
    ResponseParseError,
    UnknownCategoryError,
    UnparseableResponseError,
)
from lgrnav.ranking.scores import RankVector

_ANSWER_PREFIX = re.compile(r"^\s*(?:response\s+for\s+od\d+|step\s+\d+)\s*:\s*", re.IGNORECASE)
_CATEGORY_TOKEN = re.compile(r"[a-z][a-z _\-]*")
_RANKED_LINE = re.compile(
    r"^\s*(\d+)\s*[.)]\s*\[?\s*(.+?)\s+from\s+step\s+(\d+)\s*\]?\s*\.?\s*$",
    re.IGNORECASE,
)
_DECORATION = "\"'`*[]. "


@dataclass(frozen=True)
class RankedEntry:
    rank: int
    room: str
    step: int


@dataclass(frozen=True)
class ParsedRanking:
    """A validated ranking block; ``entries`` are ordered by rank."""

    entries: Tuple[RankedEntry, ...]

    @property
    def step_order(self) -> List[int]:
        """Step numbers from rank 1 downwards."""
        return [e.step for e in self.entries]

    def to_rank_vector(self) -> RankVector:
        """Ranks indexed by direction, where step ``k`` is direction ``k - 1``."""
        return RankVector.from_order([step - 1 for step in self.step_order])


def _category_token(line: str) -> str:
    return _ANSWER_PREFIX.sub("", line, count=1).strip(_DECORATION)


def parse_room_response(text: str, categories: RoomCategoryList = DEFAULT_CATEGORIES) -> str:
    """
    Extract the room category from a per-view answer.

    The first non-blank line is used. An optional ``Response for odN:`` or
    ``Step N:`` prefix and surrounding quotes or brackets are ignored.

    :raises UnparseableResponseError: If no category token can be read.
    :raises UnknownCategoryError: If the token is not one of ``categories``.
    """
    line = next((ln for ln in text.splitlines() if ln.strip()), "")
    token = normalize_category(_category_token(line))
    if not token or not _CATEGORY_TOKEN.fullmatch(token):
        raise UnparseableResponseError(f"no room category in response {text[:80]!r}")
    if token not in {normalize_category(c) for c in categories}:
        raise UnknownCategoryError(f"{token!r} is not one of {list(categories)}")
    return token


def _ranking_block(text: str) -> List[re.Match]:
    block: List[re.Match] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        match = _RANKED_LINE.match(line)
        if match:
            block.append(match)
        elif block:
            break
    return block


def parse_ranking_response(text: str, expected_count: int) -> ParsedRanking:
    """
    Parse the ranked list of room answers.

    The first contiguous block of ``<rank>. <room> from Step <k>`` lines is
    read; blank lines inside it are skipped. Ranks must be 1..N and steps
    must each appear exactly once.

    :raises NoRankingBlockError: If no ranked line is found.
    :raises DuplicateRankError: If a rank repeats.
    :raises DuplicateStepError: If a step is ranked twice.
    :raises CountMismatchError: If a rank or step falls outside 1..N.
    :raises MissingStepError: If the block ranks fewer than N steps.
    """
    if expected_count < 1:
        raise ValueError(f"expected_count must be at least 1, got {expected_count}")
    block = _ranking_block(text)
    if not block:
        raise NoRankingBlockError("no ranked list found in response")

    entries: List[RankedEntry] = []
    ranks, steps = set(), set()
    for match in block:
        rank, step = int(match.group(1)), int(match.group(3))
        if rank in ranks:
            raise DuplicateRankError(f"rank {rank} appears twice")
        if step in steps:
            raise DuplicateStepError(f"step {step} is ranked twice")
        if not 1 <= rank <= expected_count or not 1 <= step <= expected_count:
            raise CountMismatchError(f"rank {rank} or step {step} outside 1..{expected_count}")
        ranks.add(rank)
        steps.add(step)
        entries.append(RankedEntry(rank, normalize_category(match.group(2).strip(_DECORATION)), step))

    # distinct in-range steps, so a short block is the only way to miss one
    if len(entries) < expected_count:
        missing = sorted(set(range(1, expected_count + 1)) - steps)
        raise MissingStepError(f"steps {missing} were not ranked")

    return ParsedRanking(tuple(sorted(entries, key=lambda e: e.rank)))


def extract_target_room(text: str, categories: RoomCategoryList = DEFAULT_CATEGORIES) -> Optional[str]:
    """
    Room the model names for the target itself, if it names one.

    Ranked lines and per-step answers are skipped; the first remaining line
    that reads as a known category wins.
    """
    for line in text.splitlines():
        if not line.strip() or _RANKED_LINE.match(line) or _ANSWER_PREFIX.match(line):
            continue
        try:
            return parse_room_response(line, categories)
        except ResponseParseError:
            continue
    return None
