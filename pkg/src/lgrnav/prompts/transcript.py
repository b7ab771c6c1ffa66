import json
import logging
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from lgrnav.errors import ScenarioFormatError

logger = logging.getLogger(__name__)

ROOM = "room"
RANKING = "ranking"
_KINDS = (ROOM, RANKING)


@dataclass(frozen=True)
class TranscriptRecord:
    """One prompt/response exchange with the ranking model."""

    episode: str
    step: int
    kind: str
    prompt: str
    response: str

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")

    def to_native(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_native(cls, data: Dict[str, Any]) -> "TranscriptRecord":
        try:
            return cls(
                episode=str(data["episode"]),
                step=int(data["step"]),
                kind=data["kind"],
                prompt=data["prompt"],
                response=data["response"],
            )
        except (KeyError, TypeError) as e:
            raise ScenarioFormatError(f"malformed transcript record {data!r}") from e


def read_transcript(path: Union[str, Path]) -> List[TranscriptRecord]:
    """
    Load a JSON Lines transcript.

    :raises ScenarioFormatError: On a line that is not a transcript record.
    """
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise ScenarioFormatError(f"{path}:{number}: invalid JSON") from e
            records.append(TranscriptRecord.from_native(data))
    logger.debug("read %d transcript records from %s", len(records), path)
    return records


class TranscriptLog:
    """
    Append-only transcript shared by concurrent episodes.

    Records are kept in memory and, when ``path`` is set, appended to it as
    JSON Lines as they arrive.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None) -> None:
        self.path = Path(path) if path is not None else None
        self._records: List[TranscriptRecord] = []
        self._lock = threading.Lock()
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def append(self, records: Iterable[TranscriptRecord]) -> None:
        batch = list(records)
        with self._lock:
            self._records.extend(batch)
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as f:
                    for record in batch:
                        f.write(json.dumps(record.to_native(), ensure_ascii=False) + "\n")

    @property
    def records(self) -> List[TranscriptRecord]:
        with self._lock:
            return list(self._records)
