"""Clients for the external sequence-generation service.

Wire contract (HTTP POST, JSON)::

    request:  {"sentences": ["..."], "num_beams": N, "max_length": M}
    response: {"results": [[{"sequence": "...", "score": 1.23}, ...], ...],
               "score_kind": "nll"}        # optional, "nll" (default) or "logprob"

The outer ``results`` list is aligned with the request sentences; each inner
list holds at most ``num_beams`` hypotheses.  Hypothesis scores are stored as
negative log-likelihoods: when a service declares ``"score_kind": "logprob"``
the client negates scores on the way in, so downstream ranking sees one
convention.

``MockGenerationClient`` replays a canned fixture (the response hypothesis
lists keyed by sentence text) and makes the whole pipeline runnable offline.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import requests

from .errors import (
    BadStatusError,
    RequestTimeoutError,
    SchemaMismatchError,
    TransportError,
)
from .ranking import BeamHypothesis

logger = logging.getLogger(__name__)

_RETRYABLE_STATUSES = {502, 503, 504}
_SCORE_KINDS = {"nll", "logprob"}


@dataclass(frozen=True)
class GenerationRequest:
    sentences: tuple[str, ...]
    num_beams: int = 1
    max_length: int = 256

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if not self.sentences:
            raise ValueError("request must contain at least one sentence")
        if self.num_beams < 1:
            raise ValueError("num_beams must be >= 1")
        if self.max_length < 1:
            raise ValueError("max_length must be >= 1")

    def payload(self) -> dict:
        return {
            "sentences": list(self.sentences),
            "num_beams": self.num_beams,
            "max_length": self.max_length,
        }


@dataclass(frozen=True)
class GenerationResponse:
    """Per input sentence, an ordered list of hypotheses (scores as NLL)."""

    results: tuple[tuple[BeamHypothesis, ...], ...]


class GenerationClient(Protocol):
    def generate(self, request: GenerationRequest) -> GenerationResponse: ...


def _hypotheses_from_wire(items, score_kind: str, path: str) -> tuple[BeamHypothesis, ...]:
    if not isinstance(items, list):
        raise SchemaMismatchError(path, "expected a list of hypotheses")
    hypotheses = []
    for index, item in enumerate(items):
        item_path = f"{path}[{index}]"
        if not isinstance(item, dict):
            raise SchemaMismatchError(item_path, "expected an object")
        sequence = item.get("sequence")
        score = item.get("score")
        if not isinstance(sequence, str):
            raise SchemaMismatchError(f"{item_path}.sequence", "expected a string")
        if not isinstance(score, (int, float)) or isinstance(score, bool):
            raise SchemaMismatchError(f"{item_path}.score", "expected a number")
        value = float(score)
        if score_kind == "logprob":
            value = -value
        try:
            hypotheses.append(BeamHypothesis(sequence, value))
        except ValueError as exc:
            raise SchemaMismatchError(f"{item_path}.score", str(exc)) from exc
    return tuple(hypotheses)


def _response_from_wire(payload, request: GenerationRequest) -> GenerationResponse:
    if not isinstance(payload, dict):
        raise SchemaMismatchError("$", "expected a JSON object")
    score_kind = payload.get("score_kind", "nll")
    if score_kind not in _SCORE_KINDS:
        raise SchemaMismatchError("$.score_kind", f"unknown value {score_kind!r}")
    results = payload.get("results")
    if not isinstance(results, list):
        raise SchemaMismatchError("$.results", "expected a list")
    if len(results) != len(request.sentences):
        raise SchemaMismatchError(
            "$.results",
            f"expected {len(request.sentences)} entries, got {len(results)}",
        )
    parsed = []
    for index, items in enumerate(results):
        hypotheses = _hypotheses_from_wire(items, score_kind, f"$.results[{index}]")
        if len(hypotheses) > request.num_beams:
            raise SchemaMismatchError(
                f"$.results[{index}]",
                f"{len(hypotheses)} hypotheses exceed num_beams={request.num_beams}",
            )
        parsed.append(hypotheses)
    return GenerationResponse(tuple(parsed))


class HttpGenerationClient:
    """Batch client with bounded retry on transient failures.

    Transient failures (connection errors, timeouts, HTTP 502/503/504) are
    retried up to ``attempts`` times with exponential backoff
    (``backoff_base * 2**n`` seconds after the n-th failure); anything else
    fails immediately.
    """

    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = 60.0,
        attempts: int = 3,
        backoff_base: float = 0.5,
    ):
        if attempts < 1:
            raise ValueError("attempts must be >= 1")
        self.endpoint = endpoint
        self.timeout = timeout
        self.attempts = attempts
        self.backoff_base = backoff_base

    def generate(self, request: GenerationRequest) -> GenerationResponse:
        last_error: Exception | None = None
        for attempt in range(self.attempts):
            if attempt:
                time.sleep(self.backoff_base * 2 ** (attempt - 1))
            try:
                response = requests.post(
                    self.endpoint, json=request.payload(), timeout=self.timeout
                )
            except requests.Timeout as exc:
                last_error = RequestTimeoutError(str(exc))
                logger.warning("generation request timed out (attempt %d)", attempt + 1)
                continue
            except requests.ConnectionError as exc:
                last_error = TransportError("connection", str(exc))
                logger.warning("generation request failed to connect (attempt %d)", attempt + 1)
                continue
            except requests.RequestException as exc:
                raise TransportError("request", str(exc)) from exc

            if response.status_code in _RETRYABLE_STATUSES:
                last_error = BadStatusError(response.status_code)
                logger.warning(
                    "generation service answered %d (attempt %d)",
                    response.status_code,
                    attempt + 1,
                )
                continue
            if not 200 <= response.status_code < 300:
                raise BadStatusError(response.status_code, response.text[:200])
            try:
                payload = response.json()
            except ValueError as exc:
                raise SchemaMismatchError("$", "response body is not JSON") from exc
            return _response_from_wire(payload, request)
        assert last_error is not None
        raise last_error


class MockGenerationClient:
    """Deterministic replay of a canned sentence→hypotheses fixture.

    The fixture maps sentence text to wire-format hypothesis lists.  A
    sentence missing from the fixture yields an empty hypothesis list when
    ``missing_ok`` (the default), else raises ``KeyError``.  Hypothesis lists
    longer than the requested beam count are truncated.
    """

    def __init__(
        self,
        fixture: Mapping[str, Sequence[Mapping]],
        *,
        missing_ok: bool = True,
        score_kind: str = "nll",
    ):
        if score_kind not in _SCORE_KINDS:
            raise ValueError(f"unknown score_kind {score_kind!r}")
        self.fixture = dict(fixture)
        self.missing_ok = missing_ok
        self.score_kind = score_kind

    @classmethod
    def from_file(cls, path: str | Path, *, missing_ok: bool = True) -> "MockGenerationClient":
        with open(path, encoding="utf-8") as handle:
            return cls(json.load(handle), missing_ok=missing_ok)

    def generate(self, request: GenerationRequest) -> GenerationResponse:
        results = []
        for sentence in request.sentences:
            items = self.fixture.get(sentence)
            if items is None:
                if not self.missing_ok:
                    raise KeyError(sentence)
                items = []
            hypotheses = _hypotheses_from_wire(
                list(items), self.score_kind, f"$.fixture[{sentence!r}]"
            )
            results.append(hypotheses[: request.num_beams])
        return GenerationResponse(tuple(results))
