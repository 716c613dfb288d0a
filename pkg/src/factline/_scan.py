"""Backend selection for the fact scanner.

Prefers the compiled extension; set ``FACTLINE_PURE_PYTHON=1`` to force the
pure-Python scanner (used by the benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

from ._scan_py import FACT_RE, scan_facts as scan_facts_py

if os.environ.get("FACTLINE_PURE_PYTHON"):
    scan_facts = scan_facts_py
    SCAN_BACKEND = "python"
else:
    try:
        from ._scan_c import scan_facts  # type: ignore[no-redef]

        SCAN_BACKEND = "c"
    except ImportError:
        scan_facts = scan_facts_py
        SCAN_BACKEND = "python"

__all__ = ["FACT_RE", "SCAN_BACKEND", "scan_facts", "scan_facts_py"]
