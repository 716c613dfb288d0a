"""Pure-Python reference scanner for the bracketed fact syntax.

The single-fact pattern below is the published extraction regex.  Because
every field class excludes all seven reserved characters, the pattern is
fully deterministic: each subexpression's extent is forced by the next
structural character and backtracking can never produce an alternative
match.  The compiled scanner in ``_scan_c`` reimplements exactly this
left-to-right maximal scan; ``scan_facts`` must stay behaviourally identical
in both modules.
"""

from __future__ import annotations

import re

_FIELD = r"([^\[\]()|#$]*)"

#: One linearized fact: [(mention # label # type) | relation | (mention # label # type)]
FACT_RE = re.compile(
    r"\[\("
    + _FIELD + r"\#" + _FIELD + r"\#" + _FIELD
    + r"\)[ ]*\|" + _FIELD + r"\|[ ]*\("
    + _FIELD + r"\#" + _FIELD + r"\#" + _FIELD
    + r"\)\]"
)


def scan_facts(text: str) -> list[tuple]:
    """Return ``(start, end, f1..f7)`` for every fact-pattern match, in text order."""
    return [(m.start(), m.end(), *m.groups()) for m in FACT_RE.finditer(text)]
