"""Rule-based, offset-preserving sentence splitting.

A sentence boundary is a run of ``. ! ?`` followed by whitespace and an
uppercase letter or digit.  A period does not split after a stop-listed
abbreviation, nor (by default) after a single letter, which covers initials
like "J. Smith".  Spans never include surrounding whitespace, and every
input character belongs to exactly one span or to inter-sentence whitespace,
so the original text can be reconstructed from spans plus gaps.
"""

from __future__ import annotations

from typing import FrozenSet

from .facts import SourceText

_TERMINALS = ".!?"

DEFAULT_ABBREVIATIONS = frozenset(
    {
        "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "Gen.", "Rep.", "Sen.",
        "Jr.", "Sr.", "Co.", "Corp.", "Inc.", "Ltd.", "No.", "Nos.", "Vol.",
        "Fig.", "Figs.", "Eq.", "Sec.", "Ch.", "pp.", "p.", "cf.", "vs.",
        "etc.", "e.g.", "i.e.", "al.", "ca.", "approx.",
    }
)


def _token_before(text: str, end: int) -> str:
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:end]


def sentence_spans(
    text: str,
    *,
    abbreviations: FrozenSet[str] = DEFAULT_ABBREVIATIONS,
    single_letter_abbreviations: bool = True,
) -> list[tuple[int, int]]:
    """Half-open (start, end) spans of sentences, in order, whitespace-free."""
    n = len(text)
    boundaries: list[int] = []
    i = 0
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        j = i
        while j < n and text[j] in _TERMINALS:
            j += 1
        k = j
        while k < n and text[k].isspace():
            k += 1
        is_boundary = k > j and k < n and (text[k].isupper() or text[k].isdigit())
        if is_boundary and text[i:j] == ".":
            token = _token_before(text, j)
            if token in abbreviations:
                is_boundary = False
            elif single_letter_abbreviations and len(token) == 2 and token[0].isalpha():
                is_boundary = False
        if is_boundary:
            boundaries.append(j)
        i = j

    spans: list[tuple[int, int]] = []
    start = 0
    for boundary in boundaries + [n]:
        s, e = start, boundary
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if e > s:
            spans.append((s, e))
        start = boundary
    return spans


def split_sentences(
    text: str,
    *,
    id_prefix: str = "s",
    abbreviations: FrozenSet[str] = DEFAULT_ABBREVIATIONS,
    single_letter_abbreviations: bool = True,
) -> list[SourceText]:
    """Sentences as :class:`SourceText` values with ids ``<prefix><index>``."""
    spans = sentence_spans(
        text,
        abbreviations=abbreviations,
        single_letter_abbreviations=single_letter_abbreviations,
    )
    return [
        SourceText(text=text[s:e], id=f"{id_prefix}{index}")
        for index, (s, e) in enumerate(spans)
    ]
