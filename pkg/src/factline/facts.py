"""Canonical fact value types, distinctness keys and the appearance-order sort.

Every other module works in terms of :class:`GeneratedFact`: a subject and an
object annotation (surface mention, canonical entity label, entity-type label)
joined by a relation label.  Fields are trimmed at construction and must not
contain any of the reserved delimiter characters of the bracketed target
syntax, so a validly constructed fact can always be serialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import DelimiterInFieldError, EmptyFieldError

#: Characters with a structural role in the linearized syntax; rejected inside
#: any fact field.
RESERVED_CHARS = "[]()|#$"

#: Trimming at construction removes ASCII whitespace only; interior
#: whitespace is preserved verbatim.
ASCII_WHITESPACE = " \t\n\r\f\v"


def _clean_field(name: str, value: str) -> str:
    trimmed = value.strip(ASCII_WHITESPACE)
    if not trimmed:
        raise EmptyFieldError(name)
    for char in RESERVED_CHARS:
        if char in trimmed:
            raise DelimiterInFieldError(name, trimmed, char)
    return trimmed


@dataclass(frozen=True)
class EntityAnnotation:
    """One endpoint of a fact: surface mention, entity label, type label."""

    mention: str
    label: str
    type_label: str

    def __post_init__(self):
        object.__setattr__(self, "mention", _clean_field("mention", self.mention))
        object.__setattr__(self, "label", _clean_field("label", self.label))
        object.__setattr__(self, "type_label", _clean_field("type_label", self.type_label))


@dataclass(frozen=True)
class GeneratedFact:
    """A single extracted fact: (subject annotation, relation label, object annotation)."""

    subject: EntityAnnotation
    relation: str
    object: EntityAnnotation

    def __post_init__(self):
        object.__setattr__(self, "relation", _clean_field("relation", self.relation))


@dataclass(frozen=True)
class SourceText:
    """An input sentence with a caller-supplied identifier."""

    text: str
    id: str = ""

    def __post_init__(self):
        if not self.text:
            raise EmptyFieldError("text")


class KeyMode(Enum):
    """Distinctness criterion for fact de-duplication.

    FULL compares all seven fields; TRIPLE_ONLY compares only
    (subject label, relation, object label), collapsing facts that differ in
    mention or type text.
    """

    FULL = "full"
    TRIPLE_ONLY = "triple"


@dataclass(frozen=True)
class FactKey:
    mode: KeyMode
    key: tuple[str, ...]


def fact_key(fact: GeneratedFact, mode: KeyMode = KeyMode.FULL) -> FactKey:
    """Deterministic identity key for a fact under the given mode."""
    if mode is KeyMode.FULL:
        key = (
            fact.subject.mention,
            fact.subject.label,
            fact.subject.type_label,
            fact.relation,
            fact.object.mention,
            fact.object.label,
            fact.object.type_label,
        )
    else:
        key = (fact.subject.label, fact.relation, fact.object.label)
    return FactKey(mode, key)


def _mention_position(text: str, mention: str) -> float:
    # First exact, case-sensitive occurrence; unfindable mentions sort last.
    index = text.find(mention)
    return float(index) if index >= 0 else float("inf")


def sort_facts(text: SourceText | str, facts: Iterable[GeneratedFact]) -> list[GeneratedFact]:
    """Order facts by first appearance of the subject mention in the text.

    Ties are broken by the first appearance of the object mention.  Mentions
    that do not occur in the text sort after all found mentions at that key
    level; the sort is stable, so fully tied facts keep their input order.
    """
    body = text.text if isinstance(text, SourceText) else text
    return sorted(
        facts,
        key=lambda f: (
            _mention_position(body, f.subject.mention),
            _mention_position(body, f.object.mention),
        ),
    )


def dedup_facts(facts: Sequence[GeneratedFact], mode: KeyMode = KeyMode.FULL) -> list[GeneratedFact]:
    """Drop repeated facts under the given key mode, keeping first occurrences."""
    seen: set[FactKey] = set()
    kept = []
    for fact in facts:
        key = fact_key(fact, mode)
        if key not in seen:
            seen.add(key)
            kept.append(fact)
    return kept
