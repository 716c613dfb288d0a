"""Enrichment of distant-supervision alignment rows into training rows.

Input rows pair a sentence with one aligned triple given as surface forms
plus Wikidata ids (the usual Wikipedia-abstract/Wikidata alignment shape)::

    {"id": "...", "text": "...",
     "subject": "surface form", "subject_id": "Q...",
     "relation_id": "P...",
     "object": "surface form", "object_id": "Q..."}

Enrichment resolves entity labels, relation labels and entity types from
id→label inverse maps and attaches the canonical linearized target sequence,
ready for sequence-to-sequence training.  Rows that cannot be fully resolved
go to a rejects stream with a reason instead of failing the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import DelimiterInFieldError, EmptyFieldError, MalformedRowError
from .facts import EntityAnnotation, GeneratedFact
from .grammar import linearize
from .linkstore import LinkKind, LinkStore

_REQUIRED_KEYS = ("text", "subject", "subject_id", "relation_id", "object", "object_id")


@dataclass(frozen=True)
class InverseMaps:
    """id→label maps plus the instance-of relation used to type entities."""

    item_labels: Mapping[str, str]
    property_labels: Mapping[str, str]
    instance_of: Mapping[str, str]

    @classmethod
    def from_payload(cls, payload: Mapping) -> "InverseMaps":
        return cls(
            item_labels=dict(payload.get("item_labels", {})),
            property_labels=dict(payload.get("property_labels", {})),
            instance_of=dict(payload.get("instance_of", {})),
        )

    @classmethod
    def from_file(cls, path) -> "InverseMaps":
        with open(path, encoding="utf-8") as handle:
            return cls.from_payload(json.load(handle))


@dataclass(frozen=True)
class RowOutcome:
    """One enriched row or one reject, never both."""

    enriched: dict | None = None
    rejected: dict | None = None

    @property
    def accepted(self) -> bool:
        return self.enriched is not None


class _Unresolved(Exception):
    def __init__(self, reason: str):
        self.reason = reason


def _resolve_endpoint(maps: InverseMaps, entity_id: str) -> tuple[str, str, str]:
    label = maps.item_labels.get(entity_id)
    if label is None:
        raise _Unresolved("unresolved-entity-id")
    type_id = maps.instance_of.get(entity_id)
    if type_id is None:
        raise _Unresolved("unresolved-type-id")
    type_label = maps.item_labels.get(type_id)
    if type_label is None:
        raise _Unresolved("unresolved-type-id")
    return label, type_id, type_label


def _check_store(store: LinkStore, kind: LinkKind, label: str, expected_id: str) -> None:
    if store.lookup(kind, label) != expected_id:
        raise _Unresolved("store-inconsistent-label")


def enrich_row(row: Mapping, maps: InverseMaps, store: LinkStore | None = None) -> RowOutcome:
    def reject(reason: str) -> RowOutcome:
        return RowOutcome(rejected={"reason": reason, "row": dict(row)})

    try:
        subject_label, subject_type_id, subject_type = _resolve_endpoint(maps, row["subject_id"])
        object_label, object_type_id, object_type = _resolve_endpoint(maps, row["object_id"])
        relation_label = maps.property_labels.get(row["relation_id"])
        if relation_label is None:
            raise _Unresolved("unresolved-relation-id")
        if store is not None:
            _check_store(store, LinkKind.ENTITY, subject_label, row["subject_id"])
            _check_store(store, LinkKind.ENTITY, object_label, row["object_id"])
            _check_store(store, LinkKind.RELATION, relation_label, row["relation_id"])
            _check_store(store, LinkKind.TYPE, subject_type, subject_type_id)
            _check_store(store, LinkKind.TYPE, object_type, object_type_id)
        fact = GeneratedFact(
            subject=EntityAnnotation(row["subject"], subject_label, subject_type),
            relation=relation_label,
            object=EntityAnnotation(row["object"], object_label, object_type),
        )
    except _Unresolved as exc:
        return reject(exc.reason)
    except (DelimiterInFieldError, EmptyFieldError):
        # Labels with reserved characters (or blank surface forms) cannot be
        # expressed in the target syntax.
        return reject("unlinearizable-field")

    enriched = {
        "text": row["text"],
        "subject": {
            "mention": fact.subject.mention,
            "id": row["subject_id"],
            "label": fact.subject.label,
            "type": fact.subject.type_label,
            "type_id": subject_type_id,
        },
        "relation": {"id": row["relation_id"], "label": fact.relation},
        "object": {
            "mention": fact.object.mention,
            "id": row["object_id"],
            "label": fact.object.label,
            "type": fact.object.type_label,
            "type_id": object_type_id,
        },
        "target": linearize(row["text"], [fact]),
    }
    if "id" in row:
        enriched = {"id": row["id"], **enriched}
    return RowOutcome(enriched=enriched)


def enrich_alignments(
    rows: Iterable[str | Mapping],
    maps: InverseMaps,
    store: LinkStore | None = None,
) -> Iterator[RowOutcome]:
    """Enrich alignment rows one by one; every input row yields one outcome.

    ``rows`` may be JSON strings (e.g. lines of a JSONL file) or mappings.
    Structurally broken rows raise :class:`MalformedRowError` with their
    1-based position; resolution problems become rejects, not errors.
    """
    for line_number, raw in enumerate(rows, start=1):
        if isinstance(raw, str):
            if not raw.strip():
                continue
            try:
                row = json.loads(raw)
            except ValueError as exc:
                raise MalformedRowError(line_number, f"invalid JSON: {exc}") from exc
        else:
            row = raw
        if not isinstance(row, Mapping):
            raise MalformedRowError(line_number, "row is not an object")
        missing = [key for key in _REQUIRED_KEYS if key not in row]
        if missing:
            raise MalformedRowError(line_number, f"missing keys: {', '.join(missing)}")
        if not all(isinstance(row[key], str) for key in _REQUIRED_KEYS):
            raise MalformedRowError(line_number, "all required fields must be strings")
        yield enrich_row(row, maps, store)
