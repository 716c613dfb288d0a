"""Aggregation of facts across beam hypotheses into a ranked, distinct list.

Each decoded hypothesis carries one sequence-level score (by convention the
negative log-likelihood of the whole sequence).  A fact extracted from
several hypotheses accumulates their scores; a fact repeated within one
hypothesis counts that hypothesis once, because the score belongs to the
sequence, not to fact occurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import NoBeamsError
from .facts import FactKey, GeneratedFact, KeyMode, fact_key
from .grammar import ParseDiagnostics, parse_lenient


class Aggregation(Enum):
    #: score = sum of raw hypothesis scores (the paper-literal rule).
    SUM_RAW = "sum-raw"
    #: score = sum of exp(-score) over hypotheses, i.e. the total sequence
    #: probability when scores are NLLs.
    SUM_EXP_NEGATIVE = "sum-prob"


@dataclass(frozen=True)
class BeamHypothesis:
    """One decoded sequence with its sequence-level model score."""

    sequence: str
    score: float

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValueError(f"hypothesis score must be finite, got {self.score!r}")


@dataclass(frozen=True)
class ScoredFact:
    fact: GeneratedFact
    score: float
    beam_count: int


class _Bucket:
    __slots__ = ("fact", "score", "beam_count", "first_beam", "first_pos")

    def __init__(self, fact: GeneratedFact, first_beam: int, first_pos: int):
        self.fact = fact
        self.score = 0.0
        self.beam_count = 0
        self.first_beam = first_beam
        self.first_pos = first_pos


def aggregate_fact_lists(
    fact_lists: Sequence[Sequence[GeneratedFact]],
    scores: Sequence[float],
    *,
    key_mode: KeyMode = KeyMode.FULL,
    aggregation: Aggregation = Aggregation.SUM_RAW,
) -> list[ScoredFact]:
    """Rank distinct facts given per-hypothesis fact lists and scores.

    Output order: score descending, then beam_count descending, then first
    appearance (hypothesis index, position within hypothesis) ascending.
    """
    buckets: dict[tuple[str, ...], _Bucket] = {}
    for beam_index, (facts, score) in enumerate(zip(fact_lists, scores)):
        contribution = score if aggregation is Aggregation.SUM_RAW else math.exp(-score)
        seen: set[tuple[str, ...]] = set()
        for pos, fact in enumerate(facts):
            key = fact_key(fact, key_mode).key
            if key in seen:
                continue
            seen.add(key)
            bucket = buckets.get(key)
            if bucket is None:
                bucket = buckets[key] = _Bucket(fact, beam_index, pos)
            bucket.score += contribution
            bucket.beam_count += 1

    ordered = sorted(
        buckets.values(),
        key=lambda b: (-b.score, -b.beam_count, b.first_beam, b.first_pos),
    )
    return [ScoredFact(b.fact, b.score, b.beam_count) for b in ordered]


def rank_facts_with_diagnostics(
    beams: Sequence[BeamHypothesis],
    *,
    key_mode: KeyMode = KeyMode.FULL,
    aggregation: Aggregation = Aggregation.SUM_RAW,
) -> tuple[list[ScoredFact], list[ParseDiagnostics]]:
    """Parse every hypothesis leniently and rank the distinct facts.

    Unparseable content contributes nothing; the per-hypothesis parse
    diagnostics are returned alongside the ranking.
    """
    if not beams:
        raise NoBeamsError("rank_facts requires at least one hypothesis")

    fact_lists: list[list[GeneratedFact]] = []
    diagnostics: list[ParseDiagnostics] = []
    for beam in beams:
        facts, diag = parse_lenient(beam.sequence)
        fact_lists.append(facts)
        diagnostics.append(diag)
    ranked = aggregate_fact_lists(
        fact_lists,
        [beam.score for beam in beams],
        key_mode=key_mode,
        aggregation=aggregation,
    )
    return ranked, diagnostics


def rank_facts(
    beams: Sequence[BeamHypothesis],
    *,
    key_mode: KeyMode = KeyMode.FULL,
    aggregation: Aggregation = Aggregation.SUM_RAW,
) -> list[ScoredFact]:
    """Ranked distinct facts aggregated over all parseable hypotheses."""
    ranked, _ = rank_facts_with_diagnostics(
        beams, key_mode=key_mode, aggregation=aggregation
    )
    return ranked
