"""Kernel selection: compiled extension if available, numpy fallback otherwise.

Set CUTLAB_PURE=1 to force the fallback (used by the kernel benchmark and by
the cross-checking tests).
"""

from __future__ import annotations

import os

from . import _pykern

if os.environ.get("CUTLAB_PURE"):
    _impl = _pykern
    USING = "numpy"
else:
    try:
        from .. import _core as _impl  # type: ignore[attr-defined]

        USING = "compiled"
    except ImportError:
        _impl = _pykern
        USING = "numpy"

cut_value = _impl.cut_value
min_cut_scan = _impl.min_cut_scan
separation_violation = _impl.separation_violation
min_isolating = _impl.min_isolating
expansion_violation = _impl.expansion_violation
best_conductance_cut = _impl.best_conductance_cut

__all__ = [
    "USING",
    "cut_value",
    "min_cut_scan",
    "separation_violation",
    "min_isolating",
    "expansion_violation",
    "best_conductance_cut",
]
