"""Search kernels with a compiled fast path and a pure-Python fallback.

At import time the compiled Cython backend is preferred when present;
set SHADELAB_KERNEL=py (or =c) to force a backend.  Both backends make
identical traversal decisions, so results -- values, witnesses, clique
and closure counts, explored-node counters, budget verdicts -- are
byte-identical; only speed differs.
"""

from __future__ import annotations

import os

from ._common import KernelBudgetExceeded

_forced = os.environ.get("SHADELAB_KERNEL", "").strip().lower()

if _forced in ("py", "python"):
    from . import _pykern as _backend
elif _forced in ("c", "cython", "compiled"):
    from . import _ckern as _backend  # type: ignore[no-redef]
else:
    try:
        from . import _ckern as _backend  # type: ignore[no-redef]
    except ImportError:
        from . import _pykern as _backend

BACKEND = _backend.BACKEND
max_clique = _backend.max_clique
max_union_weight_maximal_cliques = _backend.max_union_weight_maximal_cliques
next_closure_max_product = _backend.next_closure_max_product

__all__ = [
    "BACKEND",
    "KernelBudgetExceeded",
    "max_clique",
    "max_union_weight_maximal_cliques",
    "next_closure_max_product",
]
