"""End-to-end batch driver: split, generate, parse, rank, link, emit.

Documents are processed independently (optionally on a bounded worker pool)
and results are yielded in input order, so a run is a pure function of its
inputs: same corpus, same fixture/service behaviour, same store and config
give byte-identical output.  A failure while processing one sentence is
recorded in the run summary and never affects other sentences.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, Iterator

from .client import GenerationClient, GenerationRequest
from .emit import ExtractionDocument
from .errors import EmptyFieldError, FactlineError
from .facts import KeyMode, SourceText
from .grammar import parse_strict
from .linkstore import LinkedFact, LinkStore
from .ranking import Aggregation, BeamHypothesis, aggregate_fact_lists, rank_facts_with_diagnostics
from .splitter import split_sentences

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusDocument:
    doc_id: str
    text: str

    def __post_init__(self):
        if not self.doc_id:
            raise EmptyFieldError("doc_id")


@dataclass
class PipelineConfig:
    client: GenerationClient
    store: LinkStore
    num_beams: int = 5
    max_length: int = 256
    aggregation: Aggregation = Aggregation.SUM_RAW
    dedup: KeyMode = KeyMode.FULL
    strict: bool = False
    batch_size: int = 32
    workers: int = 1

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.num_beams < 1:
            raise ValueError("num_beams must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class RunSummary:
    documents: int = 0
    sentences: int = 0
    sentences_ok: int = 0
    sentences_failed: int = 0
    facts: int = 0
    linked_ids: int = 0
    parse_recovered_facts: int = 0
    parse_skipped_spans: int = 0
    failures: list[dict] = field(default_factory=list)

    def merge(self, other: "RunSummary") -> None:
        self.documents += other.documents
        self.sentences += other.sentences
        self.sentences_ok += other.sentences_ok
        self.sentences_failed += other.sentences_failed
        self.facts += other.facts
        self.linked_ids += other.linked_ids
        self.parse_recovered_facts += other.parse_recovered_facts
        self.parse_skipped_spans += other.parse_skipped_spans
        self.failures.extend(other.failures)

    def as_dict(self) -> dict:
        return {
            "documents": self.documents,
            "sentences": self.sentences,
            "sentences_ok": self.sentences_ok,
            "sentences_failed": self.sentences_failed,
            "facts": self.facts,
            "linked_ids": self.linked_ids,
            "parse_recovered_facts": self.parse_recovered_facts,
            "parse_skipped_spans": self.parse_skipped_spans,
            "failures": self.failures,
        }


def _count_linked_ids(linked: LinkedFact) -> int:
    return sum(
        value is not None
        for value in (
            linked.subject_id,
            linked.subject_type_id,
            linked.relation_id,
            linked.object_id,
            linked.object_type_id,
        )
    )


def _batched(items: list, size: int) -> Iterator[list]:
    for start in range(0, len(items), size):
        yield items[start : start + size]


def _process_sentence(
    sentence: SourceText,
    hypotheses: tuple[BeamHypothesis, ...],
    cfg: PipelineConfig,
    summary: RunSummary,
) -> ExtractionDocument:
    if not hypotheses:
        ranked = []
    elif cfg.strict:
        fact_lists = [parse_strict(h.sequence) for h in hypotheses]
        ranked = aggregate_fact_lists(
            fact_lists,
            [h.score for h in hypotheses],
            key_mode=cfg.dedup,
            aggregation=cfg.aggregation,
        )
    else:
        ranked, diagnostics = rank_facts_with_diagnostics(
            hypotheses, key_mode=cfg.dedup, aggregation=cfg.aggregation
        )
        for diag in diagnostics:
            if diag.skipped_spans:
                summary.parse_recovered_facts += diag.recovered_count
                summary.parse_skipped_spans += len(diag.skipped_spans)

    linked = tuple(cfg.store.link_fact(scored) for scored in ranked)
    summary.facts += len(linked)
    summary.linked_ids += sum(_count_linked_ids(item) for item in linked)
    return ExtractionDocument(sentence_id=sentence.id, sentence=sentence.text, facts=linked)


def _process_document(
    doc: CorpusDocument, cfg: PipelineConfig
) -> tuple[list[ExtractionDocument], RunSummary]:
    summary = RunSummary(documents=1)
    sentences = split_sentences(doc.text, id_prefix=f"{doc.doc_id}:")
    summary.sentences = len(sentences)
    outputs: list[ExtractionDocument] = []

    for batch in _batched(sentences, cfg.batch_size):
        request = GenerationRequest(
            sentences=tuple(s.text for s in batch),
            num_beams=cfg.num_beams,
            max_length=cfg.max_length,
        )
        try:
            response = cfg.client.generate(request)
        except Exception as exc:
            logger.error("generation failed for %s: %s", doc.doc_id, exc)
            for sentence in batch:
                summary.sentences_failed += 1
                summary.failures.append({"sentence_id": sentence.id, "error": str(exc)})
            continue
        for sentence, hypotheses in zip(batch, response.results):
            try:
                outputs.append(_process_sentence(sentence, hypotheses, cfg, summary))
                summary.sentences_ok += 1
            except Exception as exc:
                if not isinstance(exc, FactlineError):
                    logger.exception("unexpected failure on %s", sentence.id)
                summary.sentences_failed += 1
                summary.failures.append({"sentence_id": sentence.id, "error": str(exc)})
    return outputs, summary


def run_pipeline_by_document(
    docs: Iterable[CorpusDocument],
    cfg: PipelineConfig,
    summary: RunSummary | None = None,
) -> Iterator[tuple[CorpusDocument, list[ExtractionDocument]]]:
    """Process a corpus document by document, preserving input order.

    Documents are streamed: with ``workers`` > 1 a bounded window runs on a
    thread pool (the link store is read-only during a run), but results are
    always yielded in input order.
    """
    run_summary = summary if summary is not None else RunSummary()
    doc_iter = iter(docs)
    seen_ids: set[str] = set()

    def check_unique(doc: CorpusDocument) -> CorpusDocument:
        if doc.doc_id in seen_ids:
            raise ValueError(f"duplicate doc_id {doc.doc_id!r} in corpus")
        seen_ids.add(doc.doc_id)
        return doc

    if cfg.workers == 1:
        for doc in doc_iter:
            check_unique(doc)
            outputs, doc_summary = _process_document(doc, cfg)
            run_summary.merge(doc_summary)
            yield doc, outputs
        return

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        while True:
            window = [check_unique(d) for d in islice(doc_iter, cfg.workers * 2)]
            if not window:
                break
            results = pool.map(lambda d: _process_document(d, cfg), window)
            for doc, (outputs, doc_summary) in zip(window, results):
                run_summary.merge(doc_summary)
                yield doc, outputs


def run_pipeline(
    docs: Iterable[CorpusDocument],
    cfg: PipelineConfig,
    summary: RunSummary | None = None,
) -> Iterator[ExtractionDocument]:
    """Flat stream of per-sentence extraction documents over the corpus."""
    for _, outputs in run_pipeline_by_document(docs, cfg, summary):
        yield from outputs
