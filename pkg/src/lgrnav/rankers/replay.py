import logging
import threading
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Union

from lgrnav.errors import ResponseParseError, TranscriptDivergenceError, TranscriptExhaustedError
from lgrnav.prompts.parser import extract_target_room, parse_ranking_response, parse_room_response
from lgrnav.prompts.transcript import RANKING, ROOM, TranscriptLog, TranscriptRecord, read_transcript
from lgrnav.rankers.base import Ranker, RankerRequest, RankerResponse

logger = logging.getLogger(__name__)


class ReplayRanker(Ranker):
    """
    Answers queries from a recorded transcript.

    Records are grouped by episode and consumed in order, one query at a time:
    the room exchange of every view followed by the ranking exchange. Each
    recorded prompt must equal the prompt the request renders.
    """

    name = "replay"

    def __init__(self, records: Iterable[TranscriptRecord]) -> None:
        self._streams: Dict[str, List[TranscriptRecord]] = defaultdict(list)
        for record in records:
            self._streams[record.episode].append(record)
        self._cursors: Dict[str, int] = defaultdict(int)
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ReplayRanker":
        return cls(read_transcript(path))

    def _take(self, episode: str, count: int) -> List[TranscriptRecord]:
        with self._lock:
            stream = self._streams.get(episode, [])
            start = self._cursors[episode]
            if start + count > len(stream):
                raise TranscriptExhaustedError(
                    f"transcript for episode {episode!r} has no exchange left at record {start}")
            self._cursors[episode] = start + count
            return stream[start:start + count]

    def rank(self, request: RankerRequest) -> RankerResponse:
        bundle = request.prompts()
        records = self._take(request.episode_id, bundle.response_count + 1)
        expected = [(ROOM, p) for p in bundle.room_prompts] + [(RANKING, bundle.ranking_prompt)]
        for number, (record, (kind, prompt)) in enumerate(zip(records, expected)):
            if record.kind != kind or record.prompt != prompt:
                raise TranscriptDivergenceError(
                    f"episode {request.episode_id!r} query {request.query_index}: "
                    f"exchange {number} does not match the recorded {record.kind} prompt")

        try:
            rooms = tuple(parse_room_response(r.response, request.categories) for r in records[:-1])
            parsed = parse_ranking_response(records[-1].response, bundle.response_count)
        except ResponseParseError as e:
            raise TranscriptDivergenceError(f"recorded response is not usable: {e}") from e

        logger.debug("replayed query %d of episode %r", request.query_index, request.episode_id)
        return RankerResponse(
            per_direction_room=rooms,
            direction_ranks=parsed.to_rank_vector(),
            transcript=tuple(records),
            target_room=extract_target_room(records[-1].response, request.categories),
        )


class RecordingRanker(Ranker):
    """Passes queries to ``inner`` and appends every exchange it reports to ``log``."""

    def __init__(self, inner: Ranker, log: TranscriptLog) -> None:
        self.inner = inner
        self.log = log
        self.name = inner.name

    def rank(self, request: RankerRequest) -> RankerResponse:
        response = self.inner.rank(request)
        self.log.append(response.transcript)
        return response
