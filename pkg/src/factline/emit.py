"""Serialization of linked, scored facts into JSON documents and N-Triples.

The JSON document schema (fixed key order, absent ids as ``null``)::

    {
      "sentence_id": "...",
      "sentence": "...",
      "facts": [
        {
          "score": 1.6,
          "beam_count": 2,
          "subject":  {"mention": "...", "label": "...", "type": "...",
                       "label_id": "Q...", "type_id": "Q..."},
          "relation": {"label": "...", "id": "P..."},
          "object":   {"mention": "...", "label": "...", "type": "...",
                       "label_id": null, "type_id": null}
        }
      ]
    }

Output is UTF-8 and byte-deterministic: equal documents always serialize to
equal bytes, so documents can be streamed line-delimited and compared against
golden files.

RDF emission produces N-Triples lines: one relation triple per fact, one
``rdf:type`` triple per endpoint, and ``rdfs:label`` triples for both entity
labels and both type labels, de-duplicated across facts.  Nodes whose label
was linked use the Wikidata namespaces; unlinked labels get a local IRI
minted deterministically from (kind, normalized label).
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass
from typing import Any

from .facts import ASCII_WHITESPACE, EntityAnnotation, GeneratedFact
from .linkstore import LinkedFact
from .ranking import ScoredFact

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

_SLUG_RE = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class ExtractionDocument:
    """All facts extracted from one sentence, in rank order."""

    sentence_id: str
    sentence: str
    facts: tuple[LinkedFact, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "facts", tuple(self.facts))
        scores = [linked.fact.score for linked in self.facts]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError("facts must be ordered by score descending")


@dataclass(frozen=True)
class IriPolicy:
    """Namespaces and the minting rule for node IRIs."""

    wikidata_entity_base: str = "http://www.wikidata.org/entity/"
    wikidata_property_base: str = "http://www.wikidata.org/prop/direct/"
    local_namespace: str = "http://example.org/kg/"
    hash_algorithm: str = "sha256"

    def mint(self, kind: str, label: str) -> str:
        """Deterministic local IRI for an unlinked label.

        Injective per (kind, label) up to hash collision; a readable slug is
        kept in front of the digest when the label has ASCII content.
        """
        normalized = unicodedata.normalize("NFC", label).strip(ASCII_WHITESPACE)
        digest = hashlib.new(
            self.hash_algorithm, f"{kind}\x00{normalized}".encode("utf-8")
        ).hexdigest()[:16]
        slug = _SLUG_RE.sub("-", normalized.lower()).strip("-")[:40].strip("-")
        name = f"{slug}-{digest}" if slug else digest
        return f"{self.local_namespace}{kind}/{name}"


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _endpoint_payload(annotation: EntityAnnotation, label_id: str | None, type_id: str | None) -> dict:
    return {
        "mention": annotation.mention,
        "label": annotation.label,
        "type": annotation.type_label,
        "label_id": label_id,
        "type_id": type_id,
    }


def to_json(doc: ExtractionDocument) -> str:
    """Canonical single-line JSON for one document (no trailing newline)."""
    payload = {
        "sentence_id": doc.sentence_id,
        "sentence": doc.sentence,
        "facts": [
            {
                "score": linked.fact.score,
                "beam_count": linked.fact.beam_count,
                "subject": _endpoint_payload(
                    linked.fact.fact.subject, linked.subject_id, linked.subject_type_id
                ),
                "relation": {"label": linked.fact.fact.relation, "id": linked.relation_id},
                "object": _endpoint_payload(
                    linked.fact.fact.object, linked.object_id, linked.object_type_id
                ),
            }
            for linked in doc.facts
        ],
    }
    return json.dumps(payload, ensure_ascii=False)


def _linked_from_payload(payload: dict[str, Any]) -> LinkedFact:
    subject = payload["subject"]
    obj = payload["object"]
    relation = payload["relation"]
    fact = GeneratedFact(
        subject=EntityAnnotation(subject["mention"], subject["label"], subject["type"]),
        relation=relation["label"],
        object=EntityAnnotation(obj["mention"], obj["label"], obj["type"]),
    )
    scored = ScoredFact(fact, payload["score"], payload["beam_count"])
    return LinkedFact(
        fact=scored,
        subject_id=subject["label_id"],
        subject_type_id=subject["type_id"],
        relation_id=relation["id"],
        object_id=obj["label_id"],
        object_type_id=obj["type_id"],
    )


def document_from_json(text: str) -> ExtractionDocument:
    """Inverse of :func:`to_json`."""
    payload = json.loads(text)
    return ExtractionDocument(
        sentence_id=payload["sentence_id"],
        sentence=payload["sentence"],
        facts=tuple(_linked_from_payload(item) for item in payload["facts"]),
    )


# ---------------------------------------------------------------------------
# N-Triples
# ---------------------------------------------------------------------------

def _escape_literal(value: str) -> str:
    out = []
    for ch in value:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _iri_triple(s: str, p: str, o: str) -> str:
    return f"<{s}> <{p}> <{o}> ."


def _label_triple(s: str, label: str) -> str:
    return f'<{s}> <{RDFS_LABEL}> "{_escape_literal(label)}" .'


def to_ntriples(doc: ExtractionDocument, policy: IriPolicy | None = None) -> list[str]:
    """N-Triples lines for one document, de-duplicated, in first-emission order.

    Per fact: the relation triple, an ``rdf:type`` triple for each endpoint,
    and ``rdfs:label`` triples for the two entity labels and the two type
    labels (so unlinked graphs stay human-readable).  Rank scores are not
    representable in plain triples and live in the JSON output only.
    """
    policy = policy or IriPolicy()
    lines: list[str] = []
    seen: set[str] = set()

    def emit(line: str) -> None:
        if line not in seen:
            seen.add(line)
            lines.append(line)

    for linked in doc.facts:
        fact = linked.fact.fact
        subject_iri = (
            policy.wikidata_entity_base + linked.subject_id
            if linked.subject_id
            else policy.mint("entity", fact.subject.label)
        )
        object_iri = (
            policy.wikidata_entity_base + linked.object_id
            if linked.object_id
            else policy.mint("entity", fact.object.label)
        )
        relation_iri = (
            policy.wikidata_property_base + linked.relation_id
            if linked.relation_id
            else policy.mint("relation", fact.relation)
        )
        subject_type_iri = (
            policy.wikidata_entity_base + linked.subject_type_id
            if linked.subject_type_id
            else policy.mint("type", fact.subject.type_label)
        )
        object_type_iri = (
            policy.wikidata_entity_base + linked.object_type_id
            if linked.object_type_id
            else policy.mint("type", fact.object.type_label)
        )

        emit(_iri_triple(subject_iri, relation_iri, object_iri))
        emit(_iri_triple(subject_iri, RDF_TYPE, subject_type_iri))
        emit(_iri_triple(object_iri, RDF_TYPE, object_type_iri))
        emit(_label_triple(subject_iri, fact.subject.label))
        emit(_label_triple(object_iri, fact.object.label))
        emit(_label_triple(subject_type_iri, fact.subject.type_label))
        emit(_label_triple(object_type_iri, fact.object.type_label))

    return lines
