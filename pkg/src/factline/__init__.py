"""Toolkit for turning linearized knowledge-generation output into linked knowledge graphs.

The pieces, in pipeline order: sentence splitting (:mod:`factline.splitter`),
generation-service clients (:mod:`factline.client`), the fact grammar with
strict and lenient parsers (:mod:`factline.grammar`), beam-score fact ranking
(:mod:`factline.ranking`), Wikidata label linking (:mod:`factline.linkstore`),
JSON / N-Triples emission (:mod:`factline.emit`), extraction metrics
(:mod:`factline.metrics`) and the batch driver (:mod:`factline.pipeline`).
"""

from ._scan import SCAN_BACKEND
from .client import (
    GenerationClient,
    GenerationRequest,
    GenerationResponse,
    HttpGenerationClient,
    MockGenerationClient,
)
from .emit import ExtractionDocument, IriPolicy, document_from_json, to_json, to_ntriples
from .enrich import InverseMaps, RowOutcome, enrich_alignments
from .facts import (
    EntityAnnotation,
    FactKey,
    GeneratedFact,
    KeyMode,
    SourceText,
    dedup_facts,
    fact_key,
    sort_facts,
)
from .grammar import (
    FACT_RE,
    ParseDiagnostics,
    SkippedSpan,
    fact_to_string,
    linearize,
    parse_lenient,
    parse_strict,
)
from .linkstore import BuildReport, LinkKind, LinkRecord, LinkStore, LinkedFact, read_tsv_records
from .metrics import (
    PRF,
    Dimension,
    EvalRecord,
    eval_records_from_jsonl,
    render_table,
    score_macro_rel,
    score_micro,
)
from .pipeline import CorpusDocument, PipelineConfig, RunSummary, run_pipeline, run_pipeline_by_document
from .ranking import (
    Aggregation,
    BeamHypothesis,
    ScoredFact,
    aggregate_fact_lists,
    rank_facts,
    rank_facts_with_diagnostics,
)
from .splitter import DEFAULT_ABBREVIATIONS, sentence_spans, split_sentences

__version__ = "0.1.0"

__all__ = [
    "Aggregation",
    "BeamHypothesis",
    "BuildReport",
    "CorpusDocument",
    "DEFAULT_ABBREVIATIONS",
    "Dimension",
    "EntityAnnotation",
    "EvalRecord",
    "ExtractionDocument",
    "FACT_RE",
    "FactKey",
    "GeneratedFact",
    "GenerationClient",
    "GenerationRequest",
    "GenerationResponse",
    "HttpGenerationClient",
    "InverseMaps",
    "IriPolicy",
    "KeyMode",
    "LinkKind",
    "LinkRecord",
    "LinkStore",
    "LinkedFact",
    "MockGenerationClient",
    "PRF",
    "ParseDiagnostics",
    "PipelineConfig",
    "RowOutcome",
    "RunSummary",
    "SCAN_BACKEND",
    "ScoredFact",
    "SkippedSpan",
    "SourceText",
    "aggregate_fact_lists",
    "dedup_facts",
    "document_from_json",
    "enrich_alignments",
    "eval_records_from_jsonl",
    "fact_key",
    "fact_to_string",
    "linearize",
    "parse_lenient",
    "parse_strict",
    "rank_facts",
    "rank_facts_with_diagnostics",
    "read_tsv_records",
    "render_table",
    "run_pipeline",
    "run_pipeline_by_document",
    "score_macro_rel",
    "score_micro",
    "sentence_spans",
    "sort_facts",
    "split_sentences",
    "to_json",
    "to_ntriples",
]
