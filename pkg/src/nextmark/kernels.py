"""Scoring-kernel backend selection.

The candidate-scoring pass (every particle against every mark) dominates the
per-click cost, so it has a compiled implementation in ``nextmark._core``
with a NumPy fallback in ``nextmark._kernels_py``. The backend is chosen
once at import:

* default -- compiled if the extension built, otherwise the fallback;
* ``NEXTMARK_BACKEND=python`` -- force the fallback;
* ``NEXTMARK_BACKEND=compiled`` -- require the extension (ImportError if
  it is missing).

Both implementations are kept importable for the cross-checking tests and
the ``nextmark bench`` comparison.
"""

from __future__ import annotations

import os

from ._kernels_py import mark_scores as mark_scores_python

try:
    from ._core import mark_scores as mark_scores_compiled
except ImportError:
    mark_scores_compiled = None

_requested = os.environ.get("NEXTMARK_BACKEND", "").strip().lower()
if _requested in {"python", "py"}:
    BACKEND = "python"
elif _requested == "compiled":
    if mark_scores_compiled is None:
        raise ImportError(
            "NEXTMARK_BACKEND=compiled but the nextmark._core extension is not built")
    BACKEND = "compiled"
elif _requested:
    raise ImportError(f"unknown NEXTMARK_BACKEND value: {_requested!r}")
else:
    BACKEND = "compiled" if mark_scores_compiled is not None else "python"

mark_scores = mark_scores_compiled if BACKEND == "compiled" else mark_scores_python
