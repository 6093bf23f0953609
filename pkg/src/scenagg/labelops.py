"""Backend selection for the hot label kernels.

Prefers the compiled extension; falls back to the numpy implementation when
the extension was not built. ``SCENAGG_PURE_PYTHON=1`` forces the fallback,
which is how the benchmark and the backend-equivalence tests compare the two.
"""

from __future__ import annotations

import os

if os.environ.get("SCENAGG_PURE_PYTHON"):
    from . import _labelops_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _labelops as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _labelops_py as _impl
        BACKEND = "python"

pareto_keep = _impl.pareto_keep
min_pairing = _impl.min_pairing
PAIRING_MAX = _impl.PAIRING_MAX
