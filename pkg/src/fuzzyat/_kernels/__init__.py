"""Kernel selection.

The compiled Cython kernels are used when the extension built; otherwise the
pure-Python fallback takes over transparently.  Set FUZZYAT_PURE_PYTHON=1 to
force the fallback (used by the benchmark and the parity tests).  Both
implementations are bit-identical in their results.
"""

import os

from . import pure

try:
    from . import _fast as _compiled
except ImportError:  # extension not built
    _compiled = None

if os.environ.get("FUZZYAT_PURE_PYTHON"):
    _active = pure
else:
    _active = _compiled if _compiled is not None else pure

IMPLEMENTATION = "compiled" if _active is _compiled and _compiled is not None else "python"

zadeh_pairs = _active.zadeh_pairs
oracle_accumulate = _active.oracle_accumulate


def implementations():
    """All available kernel implementations, keyed by name."""
    out = {"python": pure}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
