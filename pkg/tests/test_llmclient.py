"""Generation backends: mock synthesis, retry policy, HTTP client, rate limiting."""

from __future__ import annotations

import random

import httpx
import pytest

from oracles import span_contained
from rada.llmclient import (
    AuthError,
    BACKOFF_CAP_SECONDS,
    CompletionRecord,
    ENV_API_KEY,
    ENV_ENDPOINT,
    ENV_MODEL,
    GenerationParams,
    HttpChatBackend,
    LlmBackend,
    LlmError,
    MockLlmBackend,
    ProtocolError,
    TokenBucket,
    TransientBackendError,
    mock_generate_from_context,
)
from rada.promptgen import (
    KIND_EXTRACTIVE_QA,
    KIND_MMLU_V1,
    KIND_MMLU_V2,
    parse_generation,
    render_augmentation_prompt,
)

WORDS = [
    "amber", "basalt", "cedar", "dune", "ember", "fjord", "grove", "heath",
    "islet", "jetty", "knoll", "lagoon", "mesa", "nook", "oasis", "prairie",
]


def _qa_prompt(target: str):
    return render_augmentation_prompt(KIND_EXTRACTIVE_QA, [], target)


def test_generation_params_defaults_and_validation() -> None:
    params = GenerationParams()
    assert params.temperature == 0.7
    assert params.max_new_tokens == 512
    assert params.max_retries == 3
    with pytest.raises(ValueError):
        GenerationParams(temperature=-0.1)
    with pytest.raises(ValueError):
        GenerationParams(max_new_tokens=0)
    with pytest.raises(ValueError):
        GenerationParams(max_retries=6)
    with pytest.raises(ValueError):
        GenerationParams(max_retries=-1)


def test_mock_generation_is_deterministic_per_seed() -> None:
    prompt = _qa_prompt("amber basalt cedar dune ember fjord grove heath islet")
    assert mock_generate_from_context(prompt, seed=3) == mock_generate_from_context(
        prompt, seed=3
    )
    assert mock_generate_from_context(prompt, seed=3) != mock_generate_from_context(
        prompt, seed=4
    )


def test_mock_qa_answers_are_spans_of_the_target() -> None:
    rng = random.Random(123)
    for case in range(100):
        target = " ".join(rng.choices(WORDS, k=rng.randint(1, 14)))
        prompt = _qa_prompt(target)
        raw = mock_generate_from_context(prompt, seed=case)
        parsed = parse_generation(KIND_EXTRACTIVE_QA, raw)
        assert span_contained(parsed.answer, target)
        expected_question = " ".join(target.split()[:8]) + "?"
        assert parsed.question == expected_question


def test_mock_mmlu_v1_options_are_distinct_with_answer_among_them() -> None:
    rng = random.Random(456)
    for case in range(100):
        target = " ".join(rng.choices(WORDS, k=rng.randint(3, 10))) + "?"
        prompt = render_augmentation_prompt(KIND_MMLU_V1, [], target)
        raw = mock_generate_from_context(prompt, seed=case)
        parsed = parse_generation(KIND_MMLU_V1, raw)
        assert len(parsed.options) == 4
        assert len(set(parsed.options)) == 4
        assert parsed.answer in parsed.options


def test_mock_mmlu_v2_answer_comes_from_given_options() -> None:
    options = ["spring tide", "neap tide", "slack tide", "ebb tide"]
    prompt = render_augmentation_prompt(KIND_MMLU_V2, [], options)
    raw = mock_generate_from_context(prompt, seed=9)
    parsed = parse_generation(KIND_MMLU_V2, raw)
    assert parsed.answer in options
    assert parsed.question == "spring tide?"


def test_mock_uses_last_target_line_not_demo_lines() -> None:
    from rada.promptgen import Demonstration

    demo = Demonstration(context="decoy passage", question="decoy?", answer="decoy")
    prompt = render_augmentation_prompt(
        KIND_EXTRACTIVE_QA, [demo, demo, demo], "real target words here"
    )
    raw = mock_generate_from_context(prompt, seed=0)
    parsed = parse_generation(KIND_EXTRACTIVE_QA, raw)
    assert span_contained(parsed.answer, "real target words here")
    assert "decoy" not in parsed.answer


def test_mock_backend_scripted_response_overrides_synthesis() -> None:
    prompt = _qa_prompt("amber basalt cedar")
    backend = MockLlmBackend(script={prompt.digest: "Question: q? Answer: amber"})
    record = backend.complete(prompt)
    assert isinstance(record, CompletionRecord)
    assert record.raw_text == "Question: q? Answer: amber"
    assert record.prompt_digest == prompt.digest
    assert record.backend_name == "mock"
    assert record.attempt_count == 1


def test_mock_backend_identity_includes_seed() -> None:
    assert MockLlmBackend(seed=7).identity() == {"name": "mock", "seed": 7}
    assert MockLlmBackend().deterministic is True


class _FlakyBackend(LlmBackend):
    name = "flaky"

    def __init__(self, failures: int, sleeps: list[float], backoff_base: float = 0.5):
        super().__init__(backoff_base=backoff_base, sleep=sleeps.append)
        self.failures = failures
        self.calls = 0

    def _generate_once(self, prompt, params) -> str:
        self.calls += 1
        if self.calls <= self.failures:
            raise TransientBackendError("flap")
        return "Question: q? Answer: a"


def test_complete_retries_transient_failures_with_exponential_backoff() -> None:
    sleeps: list[float] = []
    backend = _FlakyBackend(failures=2, sleeps=sleeps)
    prompt = _qa_prompt("amber basalt")
    record = backend.complete(prompt, GenerationParams(max_retries=3))
    assert record.attempt_count == 3
    assert sleeps == [0.5, 1.0]


def test_complete_exhausts_retry_budget_and_raises() -> None:
    sleeps: list[float] = []
    backend = _FlakyBackend(failures=99, sleeps=sleeps)
    with pytest.raises(TransientBackendError):
        backend.complete(_qa_prompt("amber"), GenerationParams(max_retries=2))
    assert backend.calls == 3
    assert sleeps == [0.5, 1.0]


def test_complete_zero_retries_fails_on_first_transient() -> None:
    backend = _FlakyBackend(failures=1, sleeps=[])
    with pytest.raises(TransientBackendError):
        backend.complete(_qa_prompt("amber"), GenerationParams(max_retries=0))
    assert backend.calls == 1


def test_complete_caps_backoff_delay() -> None:
    sleeps: list[float] = []
    backend = _FlakyBackend(failures=2, sleeps=sleeps, backoff_base=20.0)
    backend.complete(_qa_prompt("amber"), GenerationParams(max_retries=3))
    assert sleeps == [20.0, BACKOFF_CAP_SECONDS]


class _RefusingBackend(LlmBackend):
    name = "refusing"

    def __init__(self, error: Exception):
        super().__init__(sleep=lambda _s: None)
        self.error = error
        self.calls = 0

    def _generate_once(self, prompt, params) -> str:
        self.calls += 1
        raise self.error


def test_auth_and_protocol_errors_are_never_retried() -> None:
    for error in (AuthError("no"), ProtocolError("bad shape")):
        backend = _RefusingBackend(error)
        with pytest.raises(type(error)):
            backend.complete(_qa_prompt("amber"), GenerationParams(max_retries=5))
        assert backend.calls == 1


def _http_backend(handler, **kwargs) -> HttpChatBackend:
    return HttpChatBackend(
        endpoint="http://llm.test/chat",
        transport=httpx.MockTransport(handler),
        sleep=lambda _s: None,
        **kwargs,
    )


def test_http_backend_success_and_request_shape() -> None:
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        import json

        seen["body"] = json.loads(request.content)
        seen["auth"] = request.headers.get("authorization")
        return httpx.Response(
            200, json={"choices": [{"message": {"content": "Question: q? Answer: a"}}]}
        )

    backend = _http_backend(handler, api_key="k123", model="tiny")
    prompt = _qa_prompt("amber basalt cedar")
    record = backend.complete(
        prompt, GenerationParams(temperature=0.2, max_new_tokens=64, stop_sequences=["\n\n"])
    )
    assert record.raw_text == "Question: q? Answer: a"
    assert record.backend_name == "http"
    assert seen["auth"] == "Bearer k123"
    assert seen["body"]["model"] == "tiny"
    assert seen["body"]["temperature"] == 0.2
    assert seen["body"]["max_tokens"] == 64
    assert seen["body"]["stop"] == ["\n\n"]
    assert seen["body"]["messages"] == [{"role": "user", "content": prompt.text}]


def test_http_backend_omits_stop_when_unset() -> None:
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        import json

        seen["body"] = json.loads(request.content)
        return httpx.Response(
            200, json={"choices": [{"message": {"content": "ok"}}]}
        )

    _http_backend(handler).complete(_qa_prompt("amber"), GenerationParams())
    assert "stop" not in seen["body"]


def test_http_backend_auth_failure_is_immediate() -> None:
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        return httpx.Response(401)

    backend = _http_backend(handler)
    with pytest.raises(AuthError):
        backend.complete(_qa_prompt("amber"), GenerationParams(max_retries=4))
    assert calls["n"] == 1


def test_http_backend_retries_server_errors() -> None:
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        if calls["n"] < 3:
            return httpx.Response(500)
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    record = _http_backend(handler).complete(_qa_prompt("amber"), GenerationParams())
    assert record.attempt_count == 3
    assert record.raw_text == "ok"


def test_http_backend_timeout_is_transient() -> None:
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        if calls["n"] == 1:
            raise httpx.ConnectTimeout("slow")
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    record = _http_backend(handler).complete(_qa_prompt("amber"), GenerationParams())
    assert record.attempt_count == 2


def test_http_backend_protocol_errors() -> None:
    def missing_choices(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"nope": True})

    with pytest.raises(ProtocolError):
        _http_backend(missing_choices).complete(_qa_prompt("a"), GenerationParams())

    def non_text_content(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"choices": [{"message": {"content": 5}}]})

    with pytest.raises(ProtocolError):
        _http_backend(non_text_content).complete(_qa_prompt("a"), GenerationParams())

    def odd_status(request: httpx.Request) -> httpx.Response:
        return httpx.Response(302)

    with pytest.raises(ProtocolError):
        _http_backend(odd_status).complete(_qa_prompt("a"), GenerationParams())


def test_http_backend_requires_endpoint(monkeypatch) -> None:
    monkeypatch.delenv(ENV_ENDPOINT, raising=False)
    with pytest.raises(LlmError):
        HttpChatBackend()


def test_http_backend_reads_environment(monkeypatch) -> None:
    monkeypatch.setenv(ENV_ENDPOINT, "http://llm.env/chat")
    monkeypatch.setenv(ENV_MODEL, "env-model")
    monkeypatch.setenv(ENV_API_KEY, "env-key")
    backend = HttpChatBackend(transport=httpx.MockTransport(lambda r: httpx.Response(500)))
    assert backend.identity() == {
        "name": "http",
        "endpoint": "http://llm.env/chat",
        "model": "env-model",
    }


def test_token_bucket_blocks_until_refill() -> None:
    clock = {"t": 0.0}
    sleeps: list[float] = []

    def fake_sleep(seconds: float) -> None:
        sleeps.append(seconds)
        clock["t"] += seconds

    bucket = TokenBucket(rate_per_sec=2.0, capacity=1.0, clock=lambda: clock["t"], sleep=fake_sleep)
    bucket.acquire()
    assert sleeps == []
    bucket.acquire()
    assert sleeps == [pytest.approx(0.5)]


def test_token_bucket_rejects_nonpositive_rate() -> None:
    with pytest.raises(ValueError):
        TokenBucket(rate_per_sec=0.0)


def test_http_backend_applies_rate_limiter() -> None:
    clock = {"t": 0.0}
    sleeps: list[float] = []

    def fake_sleep(seconds: float) -> None:
        sleeps.append(seconds)
        clock["t"] += seconds

    limiter = TokenBucket(rate_per_sec=1.0, capacity=1.0, clock=lambda: clock["t"], sleep=fake_sleep)

    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    backend = _http_backend(handler, limiter=limiter)
    backend.complete(_qa_prompt("amber"), GenerationParams())
    backend.complete(_qa_prompt("amber"), GenerationParams())
    assert len(sleeps) == 1
