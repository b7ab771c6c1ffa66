from unittest.mock import MagicMock

import pytest
import requests

from lgrnav.errors import (
    EndpointConfigError,
    RankerParseFailure,
    RankerTransportError,
    UnknownCategoryError,
)
from lgrnav.prompts.transcript import RANKING, ROOM
from lgrnav.rankers.base import RankerRequest
from lgrnav.rankers.llm import EndpointConfig, LlmRanker, RateLimiter, llm_rank

VIEWS = [["oven"], ["bed"], [], ["toilet"], ["sofa"], ["desk"], ["dryer"], ["tv"]]
ROOMS = ["kitchen", "bedroom", "living-room", "bathroom", "living room", "home office", "laundry room", "bedroom"]
RANKING_TEXT = "\n".join(f"{i}. {ROOMS[step - 1]} from Step {step}"
                         for i, step in enumerate([2, 8, 3, 5, 6, 1, 7, 4], start=1))


def completion(text):
    response = MagicMock()
    response.json.return_value = {"choices": [{"message": {"content": text}}]}
    return response


@pytest.fixture
def config():
    """
    Endpoint settings with two parse retries.
    """
    return EndpointConfig(url="http://model.test/v1/chat/completions", api_key="secret", retries=2)


@pytest.fixture
def limiter():
    """
    A rate limiter that never waits.
    """
    return MagicMock(spec=RateLimiter)


def make_ranker(config, limiter, answers):
    session = MagicMock()
    session.post.side_effect = [completion(a) for a in answers]
    return LlmRanker(config, session=session, rate_limiter=limiter), session


def test_rank_valid_answers(config, limiter):
    """
    Eight room answers and one ranking give a full response and transcript.
    """
    ranker, session = make_ranker(config, limiter, [f"Response for od{i + 1}: {r}" for i, r in enumerate(ROOMS)]
                                  + [RANKING_TEXT])
    response = ranker.rank(RankerRequest("bed", VIEWS, episode_id="ep"))
    assert response.per_direction_room[2] == "living room"
    assert response.direction_ranks.order() == [1, 7, 2, 4, 5, 0, 6, 3]
    assert [r.kind for r in response.transcript] == [ROOM] * 8 + [RANKING]
    assert session.post.call_count == 9
    assert limiter.wait.call_count == 9

    args, kwargs = session.post.call_args
    assert args == (config.url,)
    assert kwargs["headers"]["Authorization"] == "Bearer secret"
    assert kwargs["json"]["temperature"] == 0
    messages = kwargs["json"]["messages"]
    assert len(messages) == 17
    assert messages[1] == {"role": "assistant", "content": "Response for od1: kitchen"}


def test_garbage_then_valid(config, limiter):
    """
    Unusable answers are retried until one parses.
    """
    answers = ["I am not sure", "attic", "kitchen"] + ROOMS[1:] + [RANKING_TEXT]
    ranker, session = make_ranker(config, limiter, answers)
    response = ranker.rank(RankerRequest("bed", VIEWS))
    assert response.per_direction_room[0] == "kitchen"
    assert session.post.call_count == 11
    assert response.transcript[0].response == "kitchen"


def test_always_garbage(config, limiter):
    """
    After the last retry the ranker gives up with the last parse error.
    """
    ranker, session = make_ranker(config, limiter, ["attic"] * 3)
    with pytest.raises(RankerParseFailure) as info:
        ranker.rank(RankerRequest("bed", VIEWS))
    assert isinstance(info.value.cause, UnknownCategoryError)
    assert session.post.call_count == 3


def test_transport_error(config, limiter):
    """
    Connection failures surface as transport errors.
    """
    session = MagicMock()
    session.post.side_effect = requests.ConnectionError("refused")
    ranker = LlmRanker(config, session=session, rate_limiter=limiter)
    with pytest.raises(RankerTransportError):
        ranker.rank(RankerRequest("bed", VIEWS))


def test_http_error_status(config, limiter):
    """
    An error status from the endpoint is a transport error.
    """
    response = MagicMock()
    response.raise_for_status.side_effect = requests.HTTPError("503")
    session = MagicMock()
    session.post.return_value = response
    with pytest.raises(RankerTransportError):
        LlmRanker(config, session=session, rate_limiter=limiter).rank(RankerRequest("bed", VIEWS))


def test_malformed_payload(config, limiter):
    """
    A payload without choices is a transport error.
    """
    response = MagicMock()
    response.json.return_value = {"error": "quota"}
    session = MagicMock()
    session.post.return_value = response
    with pytest.raises(RankerTransportError):
        LlmRanker(config, session=session, rate_limiter=limiter).rank(RankerRequest("bed", VIEWS))


def test_no_authorization_without_key(limiter):
    """
    The bearer header is sent only when a key is configured.
    """
    config = EndpointConfig(url="http://model.test")
    ranker, session = make_ranker(config, limiter, ROOMS + [RANKING_TEXT])
    ranker.rank(RankerRequest("bed", VIEWS))
    assert "Authorization" not in session.post.call_args.kwargs["headers"]


def test_from_env():
    """
    Settings are read from LGR_LLM_* variables.
    """
    config = EndpointConfig.from_env({
        "LGR_LLM_ENDPOINT": "http://model.test",
        "LGR_LLM_RPM": "12",
        "LGR_LLM_RETRIES": "0",
    })
    assert config.url == "http://model.test"
    assert config.requests_per_minute == 12.0
    assert config.retries == 0
    assert config.model == "gemini-1.5-flash"


@pytest.mark.parametrize("environ", [
    {},
    {"LGR_LLM_ENDPOINT": "http://model.test", "LGR_LLM_RPM": "fast"},
    {"LGR_LLM_ENDPOINT": "http://model.test", "LGR_LLM_RPM": "0"},
    {"LGR_LLM_ENDPOINT": "http://model.test", "LGR_LLM_RETRIES": "-1"},
])
def test_from_env_errors(environ):
    """
    A missing endpoint or malformed number is a configuration error.
    """
    with pytest.raises(EndpointConfigError):
        EndpointConfig.from_env(environ)


def test_rate_limiter_spacing():
    """
    Calls closer than the interval sleep for the remainder.
    """
    now = [100.0]
    sleeps = []

    def sleep(seconds):
        sleeps.append(seconds)
        now[0] += seconds

    limiter = RateLimiter(60.0, clock=lambda: now[0], sleep=sleep)
    limiter.wait()
    now[0] += 0.25
    limiter.wait()
    now[0] += 5.0
    limiter.wait()
    assert sleeps == [pytest.approx(0.75)]


def test_llm_rank_one_off_client(monkeypatch):
    """
    llm_rank opens its own session for the given endpoint.
    """
    session = MagicMock()
    session.post.side_effect = [completion(f"Response for od{i + 1}: {r}") for i, r in enumerate(ROOMS)] + [
        completion(RANKING_TEXT)]
    monkeypatch.setattr(requests, "Session", lambda: session)
    config = EndpointConfig(url="http://model.test/v1/chat/completions", requests_per_minute=1e6)
    response = llm_rank(RankerRequest("bed", VIEWS), config)
    assert response.direction_ranks.order() == [1, 7, 2, 4, 5, 0, 6, 3]
    assert session.post.call_count == 9
    assert "Authorization" not in session.post.call_args.kwargs["headers"]
