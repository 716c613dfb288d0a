"""Exception types raised across the package."""

from __future__ import annotations


class FactlineError(Exception):
    """Base class for all package errors."""


class DelimiterInFieldError(FactlineError, ValueError):
    """A fact field contains one of the reserved delimiter characters."""

    def __init__(self, field_name: str, value: str, char: str):
        self.field_name = field_name
        self.value = value
        self.char = char
        super().__init__(f"reserved character {char!r} in {field_name}: {value!r}")


class EmptyFieldError(FactlineError, ValueError):
    """A fact field is empty after whitespace trimming."""

    def __init__(self, field_name: str, offset: int | None = None):
        self.field_name = field_name
        self.offset = offset
        at = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"empty {field_name}{at}")


class SequenceSyntaxError(FactlineError, ValueError):
    """Strict parse failed; carries the first deviation and the expected token."""

    def __init__(self, offset: int, expected: str, found: str = ""):
        self.offset = offset
        self.expected = expected
        self.found = found
        shown = found if found else "end of input"
        super().__init__(f"expected {expected} at offset {offset}, found {shown!r}")


class NoBeamsError(FactlineError, ValueError):
    """rank_facts was called with an empty hypothesis list."""


class MalformedRecordError(FactlineError, ValueError):
    """A link-record line could not be parsed."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


class StorageError(FactlineError):
    """The link store could not be created, opened or queried."""


class EmptyDatasetError(FactlineError, ValueError):
    """An evaluation was requested over zero records."""


class MalformedRowError(FactlineError, ValueError):
    """An alignment row could not be parsed."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


class GenerationClientError(FactlineError):
    """Base class for generation-service client failures."""


class TransportError(GenerationClientError):
    """The request never produced an HTTP response."""

    def __init__(self, kind: str, detail: str = ""):
        self.kind = kind
        super().__init__(f"transport failure ({kind}){': ' + detail if detail else ''}")


class RequestTimeoutError(TransportError):
    """The request exceeded its deadline."""

    def __init__(self, detail: str = ""):
        super().__init__("timeout", detail)


class BadStatusError(GenerationClientError):
    """The service answered with a non-success HTTP status."""

    def __init__(self, code: int, detail: str = ""):
        self.code = code
        super().__init__(f"HTTP {code}{': ' + detail if detail else ''}")


class SchemaMismatchError(GenerationClientError):
    """The response body does not match the wire schema."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")
