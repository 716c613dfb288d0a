"""Serialization and parsing of the linearized fact syntax.

The target syntax is a regular language over seven reserved characters::

    sequence := fact (WS '$' WS fact)*
    fact     := '[' '(' field '#' field '#' field ')' WS '|' field '|' WS
                '(' field '#' field '#' field ')' ']'
    field    := WS text-without-reserved-chars WS
    WS       := zero or more ASCII spaces

Reserved characters ``[ ] ( ) | # $`` never occur inside fields, which makes
parsing deterministic.  Canonical emission puts exactly one space around
``#``, ``|`` and ``$`` and none inside parenthesis boundaries::

    [(mention # label # type) | relation | (mention # label # type)]

joined with `` $ `` between facts.

Two parsers are provided.  ``parse_strict`` accepts only sequences that match
the grammar end to end (modulo whitespace padding) and reports the first
deviation with its byte offset; it is meant for fixtures and round-trip
checks.  ``parse_lenient`` scans arbitrary text for every maximal substring
matching the single-fact pattern and reports the spans it had to skip; it is
the default for raw model output, which may be truncated or malformed.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._scan import FACT_RE, SCAN_BACKEND, scan_facts
from .errors import EmptyFieldError, SequenceSyntaxError
from .facts import ASCII_WHITESPACE, RESERVED_CHARS, EntityAnnotation, GeneratedFact, SourceText, sort_facts

__all__ = [
    "FACT_RE",
    "SCAN_BACKEND",
    "ParseDiagnostics",
    "SkippedSpan",
    "fact_to_string",
    "linearize",
    "parse_lenient",
    "parse_strict",
]

_FIELD_NAMES = (
    "subject mention",
    "subject label",
    "subject type",
    "relation",
    "object mention",
    "object label",
    "object type",
)


@dataclass(frozen=True)
class SkippedSpan:
    """A region of input the lenient parser could not use."""

    start: int
    end: int
    reason: str


@dataclass(frozen=True)
class ParseDiagnostics:
    recovered_count: int
    skipped_spans: tuple[SkippedSpan, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.skipped_spans


def fact_to_string(fact: GeneratedFact) -> str:
    """Canonical serialization of a single fact."""
    s, o = fact.subject, fact.object
    return (
        f"[({s.mention} # {s.label} # {s.type_label})"
        f" | {fact.relation} |"
        f" ({o.mention} # {o.label} # {o.type_label})]"
    )


def linearize(text: SourceText | str, facts) -> str:
    """Serialize facts into one canonical target sequence.

    Facts are ordered by appearance of their mentions in ``text`` first (see
    :func:`factline.facts.sort_facts`); an empty collection yields ``""``.
    """
    ordered = sort_facts(text, facts)
    return " $ ".join(fact_to_string(fact) for fact in ordered)


def _fact_from_trimmed(fields: list[str]) -> GeneratedFact:
    return GeneratedFact(
        subject=EntityAnnotation(fields[0], fields[1], fields[2]),
        relation=fields[3],
        object=EntityAnnotation(fields[4], fields[5], fields[6]),
    )


# ---------------------------------------------------------------------------
# strict parsing
# ---------------------------------------------------------------------------

def _expect(s: str, pos: int, char: str, expected: str) -> int:
    if pos >= len(s) or s[pos] != char:
        raise SequenceSyntaxError(pos, expected, s[pos] if pos < len(s) else "")
    return pos + 1


def _skip_spaces(s: str, pos: int) -> int:
    while pos < len(s) and s[pos] == " ":
        pos += 1
    return pos


def _read_field(s: str, pos: int, name: str, terminator: str, expected: str) -> tuple[str, int]:
    start = pos
    while pos < len(s) and s[pos] not in RESERVED_CHARS:
        pos += 1
    if pos >= len(s) or s[pos] != terminator:
        raise SequenceSyntaxError(pos, expected, s[pos] if pos < len(s) else "")
    raw = s[start:pos].strip(ASCII_WHITESPACE)
    if not raw:
        raise EmptyFieldError(name, offset=start)
    return raw, pos + 1


def _parse_fact_strict(s: str, pos: int) -> tuple[GeneratedFact, int]:
    fields: list[str] = []
    pos = _expect(s, pos, "[", "'['")
    pos = _expect(s, pos, "(", "'('")
    for name, term in zip(_FIELD_NAMES[0:3], "##)"):
        raw, pos = _read_field(s, pos, name, term, f"'{term}'")
        fields.append(raw)
    pos = _skip_spaces(s, pos)
    pos = _expect(s, pos, "|", "'|'")
    raw, pos = _read_field(s, pos, _FIELD_NAMES[3], "|", "'|'")
    fields.append(raw)
    pos = _skip_spaces(s, pos)
    pos = _expect(s, pos, "(", "'('")
    for name, term in zip(_FIELD_NAMES[4:7], "##)"):
        raw, pos = _read_field(s, pos, name, term, f"'{term}'")
        fields.append(raw)
    pos = _expect(s, pos, "]", "']'")
    return _fact_from_trimmed(fields), pos


def parse_strict(sequence: str) -> list[GeneratedFact]:
    """Parse a sequence that must match the grammar in full.

    Raises :class:`SequenceSyntaxError` at the first deviation and
    :class:`EmptyFieldError` when a field trims to nothing.  The empty (or
    all-space) sequence parses to an empty fact list.
    """
    pos = _skip_spaces(sequence, 0)
    end = len(sequence)
    while end > pos and sequence[end - 1] == " ":
        end -= 1
    if pos == end:
        return []
    facts = []
    while True:
        fact, pos = _parse_fact_strict(sequence, pos)
        facts.append(fact)
        pos = _skip_spaces(sequence, pos)
        if pos >= end:
            return facts
        pos = _expect(sequence, pos, "$", "'$' or end of input")
        pos = _skip_spaces(sequence, pos)


# ---------------------------------------------------------------------------
# lenient parsing
# ---------------------------------------------------------------------------

def _is_blank(gap: str) -> bool:
    return not gap.strip(ASCII_WHITESPACE)


def _is_separator(gap: str) -> bool:
    stripped = gap.strip(ASCII_WHITESPACE)
    return stripped == "$"


def parse_lenient(sequence: str) -> tuple[list[GeneratedFact], ParseDiagnostics]:
    """Extract every substring matching the single-fact pattern.

    Total function: never raises on malformed input.  Matched spans whose
    fields trim to nothing are rejected; those spans, and any gap that is not
    benign whitespace or a single ``$`` separator, are reported in the
    diagnostics in ascending, non-overlapping order.
    """
    matches = scan_facts(sequence)
    facts: list[GeneratedFact] = []
    skipped: list[SkippedSpan] = []

    if not matches:
        if not _is_blank(sequence):
            skipped.append(SkippedSpan(0, len(sequence), "no-facts"))
        return facts, ParseDiagnostics(0, tuple(skipped))

    prev_end = 0
    for index, match in enumerate(matches):
        start, end = match[0], match[1]
        if start > prev_end:
            gap = sequence[prev_end:start]
            if index == 0:
                if not _is_blank(gap):
                    skipped.append(SkippedSpan(prev_end, start, "leading-garbage"))
            elif not _is_separator(gap):
                skipped.append(SkippedSpan(prev_end, start, "malformed-separator"))
        trimmed = [field.strip(ASCII_WHITESPACE) for field in match[2:]]
        if all(trimmed):
            facts.append(_fact_from_trimmed(trimmed))
        else:
            skipped.append(SkippedSpan(start, end, "empty-field"))
        prev_end = end

    if prev_end < len(sequence):
        gap = sequence[prev_end:]
        if not _is_blank(gap):
            skipped.append(SkippedSpan(prev_end, len(sequence), "trailing-garbage"))

    return facts, ParseDiagnostics(len(facts), tuple(skipped))
