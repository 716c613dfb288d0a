"""Command-line interface.

Subcommands: ``parse`` (end-to-end batch extraction), ``link build`` /
``link lookup`` (label→ID store), ``eval`` (scoring), ``emit`` (re-serialize
stored documents), ``report`` (type/entity frequency tables), ``enrich``
(alignment-row enrichment).  Logs go to standard error; ``parse`` exits 0 on
full success, 1 when some sentences failed, 2 on unusable configuration.
"""

from __future__ import annotations

import json
import logging
import re
import sys
from collections import Counter
from pathlib import Path
from typing import Iterator

import click

from .client import HttpGenerationClient, MockGenerationClient
from .emit import ExtractionDocument, IriPolicy, document_from_json, to_json, to_ntriples
from .enrich import InverseMaps, enrich_alignments
from .errors import EmptyDatasetError, FactlineError, MalformedRecordError, MalformedRowError, StorageError
from .facts import KeyMode
from .linkstore import LinkKind, LinkStore, read_tsv_records
from .metrics import Dimension, eval_records_from_jsonl, render_table, score_macro_rel, score_micro
from .pipeline import CorpusDocument, PipelineConfig, RunSummary, run_pipeline_by_document
from .ranking import Aggregation

logger = logging.getLogger(__name__)

_SAFE_NAME_RE = re.compile(r"[^A-Za-z0-9._-]")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


# ---------------------------------------------------------------------------
# corpus helpers
# ---------------------------------------------------------------------------

def _iter_corpus_file(path: Path) -> Iterator[CorpusDocument]:
    if path.suffix == ".jsonl":
        with path.open(encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    payload = json.loads(line)
                    yield CorpusDocument(payload["doc_id"], payload["text"])
    else:
        yield CorpusDocument(path.stem, path.read_text(encoding="utf-8"))


def _iter_corpus(path: Path) -> Iterator[CorpusDocument]:
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix in {".txt", ".jsonl"})
        if not files:
            raise click.UsageError(f"no .txt or .jsonl documents under {path}")
        for file in files:
            yield from _iter_corpus_file(file)
    else:
        yield from _iter_corpus_file(path)


def _safe_name(doc_id: str) -> str:
    return _SAFE_NAME_RE.sub("_", doc_id)


def _write_document_outputs(
    outdir: Path, doc: CorpusDocument, outputs: list[ExtractionDocument], output_format: str
) -> None:
    name = _safe_name(doc.doc_id)
    if output_format == "json":
        text = "".join(to_json(item) + "\n" for item in outputs)
        (outdir / f"{name}.jsonl").write_text(text, encoding="utf-8")
    else:
        policy = IriPolicy()
        lines: dict[str, None] = {}
        for item in outputs:
            for line in to_ntriples(item, policy):
                lines.setdefault(line)
        text = "".join(line + "\n" for line in lines)
        (outdir / f"{name}.nt").write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# parse
# ---------------------------------------------------------------------------

@main.command("parse")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="Corpus: a .txt file, a .jsonl file of {doc_id, text}, or a directory of either.")
@click.option("--store", "store_path", type=click.Path(path_type=Path), required=True,
              help="Link store built with 'factline link build'.")
@click.option("--output", "output_dir", type=click.Path(path_type=Path), required=True)
@click.option("--format", "output_format", type=click.Choice(["json", "nt"]), default="json",
              show_default=True)
@click.option("--beams", type=int, default=5, show_default=True,
              help="Hypotheses requested per sentence.")
@click.option("--max-length", type=int, default=256, show_default=True)
@click.option("--mock", "mock_path", type=click.Path(exists=True, path_type=Path),
              help="Canned sentence→hypotheses fixture (offline mode).")
@click.option("--endpoint", help="Generation service URL.")
@click.option("--aggregation", type=click.Choice([a.value for a in Aggregation]),
              default=Aggregation.SUM_RAW.value, show_default=True)
@click.option("--dedup", type=click.Choice([m.value for m in KeyMode]),
              default=KeyMode.FULL.value, show_default=True)
@click.option("--strict", is_flag=True, help="Reject malformed hypotheses instead of recovering.")
@click.option("--batch-size", type=int, default=32, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--summary", "summary_path", type=click.Path(path_type=Path),
              help="Write the run summary as JSON to this path.")
def parse_command(
    input_path: Path,
    store_path: Path,
    output_dir: Path,
    output_format: str,
    beams: int,
    max_length: int,
    mock_path: Path | None,
    endpoint: str | None,
    aggregation: str,
    dedup: str,
    strict: bool,
    batch_size: int,
    workers: int,
    summary_path: Path | None,
) -> None:
    """Extract, rank and link facts from a document corpus."""
    if (mock_path is None) == (endpoint is None):
        raise click.UsageError("exactly one of --mock or --endpoint is required")
    try:
        if mock_path is not None:
            client = MockGenerationClient.from_file(mock_path)
        else:
            client = HttpGenerationClient(endpoint)
        store = LinkStore.open(store_path)
        cfg = PipelineConfig(
            client=client,
            store=store,
            num_beams=beams,
            max_length=max_length,
            aggregation=Aggregation(aggregation),
            dedup=KeyMode(dedup),
            strict=strict,
            batch_size=batch_size,
            workers=workers,
        )
    except (StorageError, ValueError, OSError) as exc:
        logger.error("fatal: %s", exc)
        sys.exit(2)

    output_dir.mkdir(parents=True, exist_ok=True)
    summary = RunSummary()
    try:
        with store:
            for doc, outputs in run_pipeline_by_document(_iter_corpus(input_path), cfg, summary):
                _write_document_outputs(output_dir, doc, outputs, output_format)
    except (StorageError, ValueError, json.JSONDecodeError, OSError) as exc:
        logger.error("fatal: %s", exc)
        sys.exit(2)

    if summary_path is not None:
        summary_path.write_text(
            json.dumps(summary.as_dict(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
    logger.info(
        "documents=%d sentences=%d ok=%d failed=%d facts=%d linked_ids=%d",
        summary.documents,
        summary.sentences,
        summary.sentences_ok,
        summary.sentences_failed,
        summary.facts,
        summary.linked_ids,
    )
    sys.exit(0 if summary.sentences_failed == 0 else 1)


# ---------------------------------------------------------------------------
# link
# ---------------------------------------------------------------------------

@main.group()
def link() -> None:
    """Build and query the label→ID store."""


@link.command("build")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="TSV: kind<TAB>label<TAB>id, kinds entity|type|relation.")
@click.option("--store", "store_path", type=click.Path(path_type=Path), required=True)
@click.option("--case-insensitive", is_flag=True,
              help="Match labels case-insensitively (off: Wikidata labels are case-significant).")
def link_build(input_path: Path, store_path: Path, case_insensitive: bool) -> None:
    """Ingest a label dump into a new store (first record wins per label)."""
    try:
        with input_path.open(encoding="utf-8") as handle:
            store = LinkStore.build(
                read_tsv_records(handle), store_path, case_insensitive=case_insensitive
            )
    except (MalformedRecordError, StorageError) as exc:
        raise click.ClickException(str(exc)) from exc
    report = store.build_report
    store.close()
    click.echo(
        f"entries={report.entries} collisions={report.collisions} duplicates={report.duplicates}"
    )


@link.command("lookup")
@click.option("--store", "store_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--kind", type=click.Choice([k.value for k in LinkKind]), required=True)
@click.option("--label", required=True)
def link_lookup(store_path: Path, kind: str, label: str) -> None:
    """Print the Wikidata id for a label, or null when absent."""
    try:
        with LinkStore.open(store_path) as store:
            found = store.lookup(LinkKind(kind), label)
    except StorageError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(found if found is not None else "null")


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

@main.command("eval")
@click.option("--records", "records_path", type=click.Path(exists=True, path_type=Path),
              required=True, help="JSONL of {sentence_id, gold, predicted} records.")
@click.option("--dim", type=click.Choice([d.value for d in Dimension]),
              help="Score a single dimension (default: print the full table).")
@click.option("--avg", type=click.Choice(["micro", "macro"]), default="micro", show_default=True)
def eval_command(records_path: Path, dim: str | None, avg: str) -> None:
    """Score predicted facts against gold facts."""
    with records_path.open(encoding="utf-8") as handle:
        records = eval_records_from_jsonl(handle)
    try:
        if dim is None:
            click.echo(render_table(records))
            return
        if avg == "macro":
            if dim != Dimension.REL.value:
                raise click.UsageError("macro averaging is reported for --dim rel only")
            prf = score_macro_rel(records)
        else:
            prf = score_micro(records, Dimension(dim))
    except EmptyDatasetError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(
        json.dumps(
            {
                "dimension": dim,
                "average": avg,
                "precision": prf.precision,
                "recall": prf.recall,
                "f1": prf.f1,
                "tp": prf.tp,
                "fp": prf.fp,
                "fn": prf.fn,
            }
        )
    )


# ---------------------------------------------------------------------------
# emit / report
# ---------------------------------------------------------------------------

def _document_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.suffix == ".jsonl")
    return [path]


def _read_documents(path: Path) -> list[ExtractionDocument]:
    with path.open(encoding="utf-8") as handle:
        return [document_from_json(line) for line in handle if line.strip()]


@main.command("emit")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="A .jsonl document file or a directory of them.")
@click.option("--format", "output_format", type=click.Choice(["json", "nt"]), required=True)
@click.option("--output", "output_dir", type=click.Path(path_type=Path),
              help="Write files here instead of standard output.")
def emit_command(input_path: Path, output_format: str, output_dir: Path | None) -> None:
    """Re-serialize stored extraction documents as canonical JSON or N-Triples."""
    policy = IriPolicy()
    for file in _document_files(input_path):
        try:
            documents = _read_documents(file)
        except (FactlineError, KeyError, ValueError) as exc:
            raise click.ClickException(f"{file}: {exc}") from exc
        if output_format == "json":
            text = "".join(to_json(doc) + "\n" for doc in documents)
            suffix = ".jsonl"
        else:
            lines: dict[str, None] = {}
            for doc in documents:
                for line in to_ntriples(doc, policy):
                    lines.setdefault(line)
            text = "".join(line + "\n" for line in lines)
            suffix = ".nt"
        if output_dir is None:
            click.echo(text, nl=False)
        else:
            output_dir.mkdir(parents=True, exist_ok=True)
            (output_dir / (file.stem + suffix)).write_text(text, encoding="utf-8")


@main.command("report")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--top", type=int, default=20, show_default=True)
@click.option("--type", "type_label", help="List entities of this type instead of the overview.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def report_command(input_path: Path, top: int, type_label: str | None, as_json: bool) -> None:
    """Frequency tables of types and entities over emitted JSON documents."""
    type_counts: Counter[str] = Counter()
    entity_counts: Counter[str] = Counter()
    entities_of_type: Counter[str] = Counter()
    for file in _document_files(input_path):
        for doc in _read_documents(file):
            for linked in doc.facts:
                fact = linked.fact.fact
                for endpoint in (fact.subject, fact.object):
                    type_counts[endpoint.type_label] += 1
                    entity_counts[endpoint.label] += 1
                    if type_label is not None and endpoint.type_label == type_label:
                        entities_of_type[endpoint.label] += 1

    if type_label is not None:
        rows = entities_of_type.most_common(top)
        if as_json:
            click.echo(json.dumps({"type": type_label, "entities": rows}, ensure_ascii=False))
        else:
            click.echo(f"entities of type {type_label!r}:")
            for label, count in rows:
                click.echo(f"{count:6d}  {label}")
        return

    if as_json:
        click.echo(
            json.dumps(
                {
                    "types": type_counts.most_common(top),
                    "entities": entity_counts.most_common(top),
                },
                ensure_ascii=False,
            )
        )
        return
    click.echo("top types:")
    for label, count in type_counts.most_common(top):
        click.echo(f"{count:6d}  {label}")
    click.echo("top entities:")
    for label, count in entity_counts.most_common(top):
        click.echo(f"{count:6d}  {label}")


# ---------------------------------------------------------------------------
# enrich
# ---------------------------------------------------------------------------

@main.command("enrich")
@click.option("--input", "input_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="JSONL of alignment rows.")
@click.option("--maps", "maps_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="JSON with item_labels, property_labels and instance_of maps.")
@click.option("--output", "output_path", type=click.Path(path_type=Path), required=True)
@click.option("--rejects", "rejects_path", type=click.Path(path_type=Path), required=True)
@click.option("--store", "store_path", type=click.Path(exists=True, path_type=Path),
              help="Optional link store used to cross-check resolved labels.")
def enrich_command(
    input_path: Path,
    maps_path: Path,
    output_path: Path,
    rejects_path: Path,
    store_path: Path | None,
) -> None:
    """Add labels, types and target sequences to alignment rows."""
    maps = InverseMaps.from_file(maps_path)
    store = LinkStore.open(store_path) if store_path is not None else None
    accepted = rejected = 0
    try:
        with input_path.open(encoding="utf-8") as rows, \
                output_path.open("w", encoding="utf-8") as out, \
                rejects_path.open("w", encoding="utf-8") as rej:
            for outcome in enrich_alignments(rows, maps, store):
                if outcome.accepted:
                    out.write(json.dumps(outcome.enriched, ensure_ascii=False) + "\n")
                    accepted += 1
                else:
                    rej.write(json.dumps(outcome.rejected, ensure_ascii=False) + "\n")
                    rejected += 1
    except MalformedRowError as exc:
        raise click.ClickException(str(exc)) from exc
    finally:
        if store is not None:
            store.close()
    click.echo(f"enriched={accepted} rejected={rejected}")


if __name__ == "__main__":
    main()
