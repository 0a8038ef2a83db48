"""Generation backends behind one interface: a chat-completion HTTP client and a
deterministic offline mock.

The mock synthesizes well-formed completions from the prompt's own target
block, so the whole pipeline (including the span filter) runs end to end with
no network. The default test suite never leaves the process.
"""

from __future__ import annotations

import hashlib
import os
import threading
import time
from dataclasses import dataclass, field

import httpx

from .promptgen import (
    AUGMENTATION_KINDS,
    KIND_EXTRACTIVE_QA,
    KIND_MMLU_V1,
    RenderedPrompt,
    format_options,
    split_options,
)

ENV_ENDPOINT = "RADA_LLM_ENDPOINT"
ENV_API_KEY = "RADA_LLM_API_KEY"
ENV_MODEL = "RADA_LLM_MODEL"

BACKOFF_CAP_SECONDS = 30.0


class LlmError(RuntimeError):
    pass


class AuthError(LlmError):
    """Authentication/authorization failure; never retried."""


class TransientBackendError(LlmError):
    """Timeouts, network failures, 408/429/5xx; retried with backoff."""


class ProtocolError(LlmError):
    """The backend answered, but not in the expected shape; not retried."""


@dataclass
class GenerationParams:
    temperature: float = 0.7
    max_new_tokens: int = 512
    stop_sequences: list[str] = field(default_factory=list)
    request_timeout: float = 30.0
    max_retries: int = 3

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_new_tokens < 1:
            raise ValueError(f"max_new_tokens must be >= 1, got {self.max_new_tokens}")
        if not 0 <= self.max_retries <= 5:
            raise ValueError(f"max_retries must be in [0, 5], got {self.max_retries}")


@dataclass
class CompletionRecord:
    prompt_digest: str
    raw_text: str
    backend_name: str
    latency: float
    attempt_count: int


def _target_line(prompt: RenderedPrompt) -> str:
    labels = {
        "extractive_qa": "Context: ",
        "mmlu_v1": "Question: ",
        "mmlu_v2": "Answer Options: ",
    }
    if prompt.template_kind not in labels:
        raise LlmError(f"not an augmentation prompt: {prompt.template_kind!r}")
    label = labels[prompt.template_kind]
    target = None
    for line in prompt.text.splitlines():
        if line.startswith(label):
            target = line[len(label):]
    if target is None:
        raise LlmError("prompt has no target block")
    return target


def mock_generate_from_context(prompt: RenderedPrompt, seed: int = 0) -> str:
    """Deterministically fabricate a parseable completion from the target block.

    Extractive QA answers are contiguous token spans of the target context, so
    the strict span filter accepts them by construction. MMLU v1 emits four
    distinct options with the answer among them; v2 picks its answer from the
    given options.
    """
    target = _target_line(prompt)
    digest = hashlib.blake2b(f"{seed}:{prompt.digest}".encode("utf-8"), digest_size=16).digest()
    h1 = int.from_bytes(digest[:8], "big")
    h2 = int.from_bytes(digest[8:], "big")

    if prompt.template_kind == KIND_EXTRACTIVE_QA:
        tokens = target.split()
        question = " ".join(tokens[:8]) + "?"
        n = len(tokens)
        span_len = 1 + h1 % min(6, n)
        start = h2 % (n - span_len + 1)
        answer = " ".join(tokens[start : start + span_len])
        return f"Question: {question}\nAnswer: {answer}"

    if prompt.template_kind == KIND_MMLU_V1:
        stem = " ".join(target.split()[:4])
        options = [f"{stem} variant {i}" for i in range(1, 5)]
        return f"Answer Options: {format_options(options)}\nAnswer: {options[h1 % 4]}"

    options = split_options(target)
    question = " ".join(options[0].split()[:8]) + "?"
    return f"Question: {question}\nAnswer: {options[h1 % 4]}"


class LlmBackend:
    """Base backend: subclasses implement one generation attempt; ``complete``
    adds bounded exponential-backoff retries for transient failures only."""

    name = "base"
    deterministic = False

    def __init__(self, backoff_base: float = 0.5, sleep=time.sleep):
        self.backoff_base = backoff_base
        self._sleep = sleep

    def _generate_once(self, prompt: RenderedPrompt, params: GenerationParams) -> str:
        raise NotImplementedError

    def identity(self) -> dict:
        return {"name": self.name}

    def complete(self, prompt: RenderedPrompt, params: GenerationParams | None = None) -> CompletionRecord:
        params = params or GenerationParams()
        started = time.perf_counter()
        delay = self.backoff_base
        attempts = 0
        while True:
            attempts += 1
            try:
                text = self._generate_once(prompt, params)
            except TransientBackendError:
                if attempts > params.max_retries:
                    raise
                self._sleep(min(delay, BACKOFF_CAP_SECONDS))
                delay *= 2
                continue
            return CompletionRecord(
                prompt_digest=prompt.digest,
                raw_text=text,
                backend_name=self.name,
                latency=time.perf_counter() - started,
                attempt_count=attempts,
            )


class MockLlmBackend(LlmBackend):
    """Offline backend: scripted responses by prompt digest, else synthesized."""

    name = "mock"
    deterministic = True

    def __init__(self, script: dict[str, str] | None = None, seed: int = 0):
        super().__init__(backoff_base=0.0, sleep=lambda _s: None)
        self.script = dict(script) if script else {}
        self.seed = seed

    def identity(self) -> dict:
        return {"name": self.name, "seed": self.seed}

    def _generate_once(self, prompt: RenderedPrompt, params: GenerationParams) -> str:
        scripted = self.script.get(prompt.digest)
        if scripted is not None:
            return scripted
        return mock_generate_from_context(prompt, seed=self.seed)


class TokenBucket:
    """Thread-safe token-bucket limiter bounding requests per second."""

    def __init__(self, rate_per_sec: float, capacity: float | None = None,
                 clock=time.monotonic, sleep=time.sleep):
        if rate_per_sec <= 0:
            raise ValueError(f"rate_per_sec must be > 0, got {rate_per_sec}")
        self.rate = rate_per_sec
        self.capacity = capacity if capacity is not None else max(1.0, rate_per_sec)
        self.tokens = self.capacity
        self._clock = clock
        self._sleep = sleep
        self._updated = clock()
        self._lock = threading.Lock()

    def _refill(self) -> None:
        now = self._clock()
        self.tokens = min(self.capacity, self.tokens + (now - self._updated) * self.rate)
        self._updated = now

    def acquire(self) -> None:
        with self._lock:
            self._refill()
            while self.tokens < 1.0:
                self._sleep((1.0 - self.tokens) / self.rate)
                self._refill()
            self.tokens -= 1.0


class HttpChatBackend(LlmBackend):
    """Client for a chat-completions endpoint (JSON messages array, single user turn).

    Endpoint, key, and model come from arguments or the RADA_LLM_* environment
    variables. 401/403 fail immediately; 408/429/5xx and network errors are
    retried by ``complete``.
    """

    name = "http"
    deterministic = False

    def __init__(
        self,
        endpoint: str | None = None,
        api_key: str | None = None,
        model: str | None = None,
        limiter: TokenBucket | None = None,
        transport: httpx.BaseTransport | None = None,
        backoff_base: float = 0.5,
        sleep=time.sleep,
    ):
        super().__init__(backoff_base=backoff_base, sleep=sleep)
        self.endpoint = endpoint or os.environ.get(ENV_ENDPOINT)
        if not self.endpoint:
            raise LlmError(f"no endpoint configured (set {ENV_ENDPOINT})")
        self.model = model or os.environ.get(ENV_MODEL) or "default"
        self.limiter = limiter
        headers = {}
        key = api_key or os.environ.get(ENV_API_KEY)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self._client = httpx.Client(headers=headers, transport=transport)

    def identity(self) -> dict:
        return {"name": self.name, "endpoint": self.endpoint, "model": self.model}

    def _generate_once(self, prompt: RenderedPrompt, params: GenerationParams) -> str:
        if self.limiter is not None:
            self.limiter.acquire()
        body: dict = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt.text}],
            "temperature": params.temperature,
            "max_tokens": params.max_new_tokens,
        }
        if params.stop_sequences:
            body["stop"] = list(params.stop_sequences)
        try:
            response = self._client.post(self.endpoint, json=body, timeout=params.request_timeout)
        except httpx.TimeoutException as exc:
            raise TransientBackendError(f"request timed out: {exc}")
        except httpx.HTTPError as exc:
            raise TransientBackendError(f"network failure: {exc}")
        if response.status_code in (401, 403):
            raise AuthError(f"authentication rejected (HTTP {response.status_code})")
        if response.status_code in (408, 429) or response.status_code >= 500:
            raise TransientBackendError(f"HTTP {response.status_code}")
        if response.status_code != 200:
            raise ProtocolError(f"unexpected HTTP {response.status_code}")
        try:
            text = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"malformed completion response: {exc}")
        if not isinstance(text, str):
            raise ProtocolError(f"completion content is {type(text).__name__}, not text")
        return text
