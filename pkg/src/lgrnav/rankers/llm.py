import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import requests

from lgrnav.errors import EndpointConfigError, RankerParseFailure, RankerTransportError, ResponseParseError
from lgrnav.prompts.parser import extract_target_room, parse_ranking_response, parse_room_response
from lgrnav.prompts.transcript import RANKING, ROOM, TranscriptRecord
from lgrnav.rankers.base import Ranker, RankerRequest, RankerResponse

logger = logging.getLogger(__name__)

Message = Dict[str, str]


@dataclass(frozen=True)
class EndpointConfig:
    """
    OpenAI-compatible chat completion endpoint.

    :param url: Full URL of the chat completions resource.
    :param api_key: Bearer token; sent only when non-empty.
    :param requests_per_minute: Upper bound on outbound requests, shared by all episodes.
    :param retries: Extra attempts per exchange when the answer cannot be parsed.
    """

    url: str
    api_key: str = ""
    model: str = "gemini-1.5-flash"
    requests_per_minute: float = 30.0
    timeout: float = 30.0
    retries: int = 2

    def __post_init__(self) -> None:
        if not self.url:
            raise EndpointConfigError("endpoint url is not set (LGR_LLM_ENDPOINT)")
        if self.requests_per_minute <= 0:
            raise EndpointConfigError(f"requests_per_minute must be positive, got {self.requests_per_minute}")
        if self.timeout <= 0:
            raise EndpointConfigError(f"timeout must be positive, got {self.timeout}")
        if self.retries < 0:
            raise EndpointConfigError(f"retries must be nonnegative, got {self.retries}")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "EndpointConfig":
        """
        Read ``LGR_LLM_ENDPOINT``, ``LGR_LLM_API_KEY``, ``LGR_LLM_MODEL``,
        ``LGR_LLM_RPM``, ``LGR_LLM_TIMEOUT`` and ``LGR_LLM_RETRIES``.

        :raises EndpointConfigError: If the endpoint is unset or a number is malformed.
        """
        env = os.environ if environ is None else environ
        try:
            return cls(
                url=env.get("LGR_LLM_ENDPOINT", ""),
                api_key=env.get("LGR_LLM_API_KEY", ""),
                model=env.get("LGR_LLM_MODEL", "gemini-1.5-flash"),
                requests_per_minute=float(env.get("LGR_LLM_RPM", "30")),
                timeout=float(env.get("LGR_LLM_TIMEOUT", "30")),
                retries=int(env.get("LGR_LLM_RETRIES", "2")),
            )
        except ValueError as e:
            if isinstance(e, EndpointConfigError):
                raise
            raise EndpointConfigError(f"malformed endpoint setting: {e}") from e


class RateLimiter:
    """Spaces calls at least ``60 / requests_per_minute`` seconds apart across threads."""

    def __init__(
            self,
            requests_per_minute: float,
            clock: Callable[[], float] = time.monotonic,
            sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.interval = 60.0 / requests_per_minute
        self._clock = clock
        self._sleep = sleep
        self._next = 0.0
        self._lock = threading.Lock()

    def wait(self) -> None:
        with self._lock:
            now = self._clock()
            delay = self._next - now
            if delay > 0:
                self._sleep(delay)
                now += delay
            self._next = now + self.interval


class LlmRanker(Ranker):
    """
    Ranks views by asking a chat model.

    Each view gets its own room question. The ranking question is then asked
    with the room exchanges as conversation history, so the model can refer to
    them as steps. Unparseable answers are retried; the response
    carries the accepted exchanges only.
    """

    name = "llm"

    def __init__(
            self,
            config: EndpointConfig,
            session: Optional[requests.Session] = None,
            rate_limiter: Optional[RateLimiter] = None,
    ) -> None:
        self.config = config
        self.session = session if session is not None else requests.Session()
        self.rate_limiter = rate_limiter if rate_limiter is not None else RateLimiter(config.requests_per_minute)

    def _complete(self, messages: List[Message]) -> str:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        payload: Dict[str, Any] = {"model": self.config.model, "messages": messages, "temperature": 0}

        self.rate_limiter.wait()
        try:
            response = self.session.post(self.config.url, json=payload, headers=headers, timeout=self.config.timeout)
            response.raise_for_status()
            return response.json()["choices"][0]["message"]["content"]
        except requests.RequestException as e:
            logger.error("request to %s failed: %s", self.config.url, e)
            raise RankerTransportError(f"request to {self.config.url} failed: {e}") from e
        except (KeyError, IndexError, TypeError, ValueError) as e:
            logger.error("malformed completion payload from %s", self.config.url)
            raise RankerTransportError(f"malformed completion payload: {e}") from e

    def _ask(self, messages: List[Message], parse: Callable[[str], Any]) -> Tuple[str, Any]:
        last_error: Optional[ResponseParseError] = None
        for attempt in range(self.config.retries + 1):
            text = self._complete(messages)
            try:
                return text, parse(text)
            except ResponseParseError as e:
                last_error = e
                logger.warning("unusable answer (%s), attempt %d of %d", e.rule, attempt + 1, self.config.retries + 1)
        raise RankerParseFailure(f"no usable answer after {self.config.retries + 1} attempts: {last_error}", last_error)

    def rank(self, request: RankerRequest) -> RankerResponse:
        bundle = request.prompts()
        history: List[Message] = []
        records: List[TranscriptRecord] = []
        rooms = []
        for prompt in bundle.room_prompts:
            text, room = self._ask([{"role": "user", "content": prompt}],
                                   lambda t: parse_room_response(t, request.categories))
            rooms.append(room)
            history += [{"role": "user", "content": prompt}, {"role": "assistant", "content": text}]
            records.append(TranscriptRecord(request.episode_id, request.query_index, ROOM, prompt, text))

        text, parsed = self._ask(history + [{"role": "user", "content": bundle.ranking_prompt}],
                                 lambda t: parse_ranking_response(t, bundle.response_count))
        records.append(TranscriptRecord(request.episode_id, request.query_index, RANKING, bundle.ranking_prompt, text))

        return RankerResponse(
            per_direction_room=tuple(rooms),
            direction_ranks=parsed.to_rank_vector(),
            transcript=tuple(records),
            target_room=extract_target_room(text, request.categories),
        )


def llm_rank(request: RankerRequest, config: EndpointConfig) -> RankerResponse:
    """Rank ``request`` with a one-off client for ``config``."""
    return LlmRanker(config).rank(request)
