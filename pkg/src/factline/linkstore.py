"""Label-to-ID lookup maps for entities, types and relations.

The store is a single SQLite file with one logical map per link kind.  It is
built once from a TSV dump reduction (``kind<TAB>label<TAB>id``, UTF-8, one
record per line) and then used read-only; labels the generation model
invented simply miss, which the lookup reports as ``None`` rather than an
error.

Label normalization is Unicode NFC plus ASCII-whitespace trim; matching is
case-sensitive unless the store was built with ``case_insensitive=True``.
The normalization choice is persisted inside the store so a reopened store
answers exactly like the freshly built one.
"""

from __future__ import annotations

import logging
import re
import sqlite3
import threading
import unicodedata
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .errors import MalformedRecordError, StorageError
from .facts import ASCII_WHITESPACE
from .ranking import ScoredFact

logger = logging.getLogger(__name__)

QID_RE = re.compile(r"Q[0-9]+\Z")
PID_RE = re.compile(r"P[0-9]+\Z")


class LinkKind(Enum):
    ENTITY = "entity"
    TYPE = "type"
    RELATION = "relation"


def _id_pattern(kind: LinkKind) -> re.Pattern[str]:
    return PID_RE if kind is LinkKind.RELATION else QID_RE


@dataclass(frozen=True)
class LinkRecord:
    kind: LinkKind
    label: str
    id: str

    def __post_init__(self):
        if not self.label.strip(ASCII_WHITESPACE):
            raise ValueError("label must be non-empty")
        if not _id_pattern(self.kind).match(self.id):
            raise ValueError(f"id {self.id!r} does not match the {self.kind.value} pattern")


@dataclass(frozen=True)
class LinkedFact:
    """A scored fact augmented with the five optional Wikidata IDs."""

    fact: ScoredFact
    subject_id: str | None = None
    subject_type_id: str | None = None
    relation_id: str | None = None
    object_id: str | None = None
    object_type_id: str | None = None

    def __post_init__(self):
        for name, value, pattern in (
            ("subject_id", self.subject_id, QID_RE),
            ("subject_type_id", self.subject_type_id, QID_RE),
            ("relation_id", self.relation_id, PID_RE),
            ("object_id", self.object_id, QID_RE),
            ("object_type_id", self.object_type_id, QID_RE),
        ):
            if value is not None and not pattern.match(value):
                raise ValueError(f"{name} {value!r} does not match the id pattern")


@dataclass(frozen=True)
class BuildReport:
    entries: int
    collisions: int
    duplicates: int


def read_tsv_records(lines: Iterable[str] | TextIO) -> Iterator[LinkRecord]:
    """Yield link records from ``kind<TAB>label<TAB>id`` lines.

    Blank lines are skipped.  Raises :class:`MalformedRecordError` with the
    1-based line number on any structural problem.
    """
    kinds = {k.value: k for k in LinkKind}
    for line_number, line in enumerate(lines, start=1):
        stripped = line.rstrip("\n").rstrip("\r")
        if not stripped.strip(ASCII_WHITESPACE):
            continue
        parts = stripped.split("\t")
        if len(parts) != 3:
            raise MalformedRecordError(line_number, f"expected 3 tab-separated columns, got {len(parts)}")
        kind_text, label, id_text = parts
        kind = kinds.get(kind_text)
        if kind is None:
            raise MalformedRecordError(line_number, f"unknown kind {kind_text!r}")
        try:
            yield LinkRecord(kind, label, id_text)
        except ValueError as exc:
            raise MalformedRecordError(line_number, str(exc)) from exc


class LinkStore:
    """Persistent label→ID maps, one per :class:`LinkKind`.

    Single-writer during :meth:`build`; afterwards read-only and safe for
    concurrent lookups (queries are serialized on an internal lock).
    """

    _SCHEMA = """
        CREATE TABLE IF NOT EXISTS links (
            kind  TEXT NOT NULL,
            label TEXT NOT NULL,
            id    TEXT NOT NULL,
            PRIMARY KEY (kind, label)
        );
        CREATE TABLE IF NOT EXISTS meta (
            key   TEXT PRIMARY KEY,
            value TEXT NOT NULL
        );
    """

    def __init__(self, connection: sqlite3.Connection, path: Path, case_insensitive: bool):
        self._conn = connection
        self._lock = threading.Lock()
        self.path = path
        self.case_insensitive = case_insensitive
        self.build_report: BuildReport | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        records: Iterable[LinkRecord],
        path: str | Path,
        *,
        case_insensitive: bool = False,
    ) -> "LinkStore":
        """Ingest records into a new store at ``path`` (first record wins).

        Re-ingesting a label with a different id is counted as a collision;
        exact duplicate records are counted separately.  The report is kept
        on the returned store and logged.
        """
        path = Path(path)
        try:
            conn = sqlite3.connect(path, check_same_thread=False)
            conn.executescript(cls._SCHEMA)
            conn.execute("DELETE FROM links")
            conn.execute("DELETE FROM meta")
            store = cls(conn, path, case_insensitive)
            entries = collisions = duplicates = 0
            with conn:
                conn.execute(
                    "INSERT INTO meta (key, value) VALUES ('case_insensitive', ?)",
                    ("1" if case_insensitive else "0",),
                )
                for record in records:
                    label = store._normalize(record.label)
                    row = conn.execute(
                        "SELECT id FROM links WHERE kind = ? AND label = ?",
                        (record.kind.value, label),
                    ).fetchone()
                    if row is None:
                        conn.execute(
                            "INSERT INTO links (kind, label, id) VALUES (?, ?, ?)",
                            (record.kind.value, label, record.id),
                        )
                        entries += 1
                    elif row[0] == record.id:
                        duplicates += 1
                    else:
                        collisions += 1
        except sqlite3.Error as exc:
            raise StorageError(f"cannot build link store at {path}: {exc}") from exc
        store.build_report = BuildReport(entries, collisions, duplicates)
        if collisions:
            logger.warning("link store %s: %d colliding labels (first id kept)", path, collisions)
        logger.info("link store %s: %d entries", path, entries)
        return store

    @classmethod
    def open(cls, path: str | Path) -> "LinkStore":
        path = Path(path)
        if not path.exists():
            raise StorageError(f"link store {path} does not exist")
        try:
            conn = sqlite3.connect(path, check_same_thread=False)
            row = conn.execute(
                "SELECT value FROM meta WHERE key = 'case_insensitive'"
            ).fetchone()
        except sqlite3.Error as exc:
            raise StorageError(f"cannot open link store at {path}: {exc}") from exc
        if row is None:
            raise StorageError(f"{path} is not a link store (missing metadata)")
        return cls(conn, path, case_insensitive=row[0] == "1")

    def close(self) -> None:
        self._conn.close()

    def __enter__(self) -> "LinkStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- queries -----------------------------------------------------------

    def _normalize(self, label: str) -> str:
        normalized = unicodedata.normalize("NFC", label).strip(ASCII_WHITESPACE)
        return normalized.casefold() if self.case_insensitive else normalized

    def lookup(self, kind: LinkKind, label: str) -> str | None:
        """The ingested id for a label, or ``None`` when Wikidata has no entry."""
        try:
            with self._lock:
                row = self._conn.execute(
                    "SELECT id FROM links WHERE kind = ? AND label = ?",
                    (kind.value, self._normalize(label)),
                ).fetchone()
        except sqlite3.Error as exc:
            raise StorageError(f"lookup failed on {self.path}: {exc}") from exc
        return row[0] if row else None

    def count(self, kind: LinkKind | None = None) -> int:
        try:
            with self._lock:
                if kind is None:
                    row = self._conn.execute("SELECT COUNT(*) FROM links").fetchone()
                else:
                    row = self._conn.execute(
                        "SELECT COUNT(*) FROM links WHERE kind = ?", (kind.value,)
                    ).fetchone()
        except sqlite3.Error as exc:
            raise StorageError(f"count failed on {self.path}: {exc}") from exc
        return row[0]

    def link_fact(self, scored: ScoredFact) -> LinkedFact:
        """Attach Wikidata ids to a fact's five labels; absent labels stay ``None``."""
        fact = scored.fact
        return LinkedFact(
            fact=scored,
            subject_id=self.lookup(LinkKind.ENTITY, fact.subject.label),
            subject_type_id=self.lookup(LinkKind.TYPE, fact.subject.type_label),
            relation_id=self.lookup(LinkKind.RELATION, fact.relation),
            object_id=self.lookup(LinkKind.ENTITY, fact.object.label),
            object_type_id=self.lookup(LinkKind.TYPE, fact.object.type_label),
        )
