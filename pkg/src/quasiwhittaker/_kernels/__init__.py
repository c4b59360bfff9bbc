"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it imports; set
``QUASIWHITTAKER_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pure

BACKEND = "python"
row_reduce = _pure.row_reduce
act_monomial = _pure.act_monomial

if os.environ.get("QUASIWHITTAKER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None
    else:
        BACKEND = "cython"
        row_reduce = _ckernels.row_reduce
        act_monomial = _ckernels.act_monomial


def backends():
    """Map of available backend name -> module."""
    out = {"python": _pure}
    try:
        from . import _ckernels as ck
    except ImportError:
        return out
    out["cython"] = ck
    return out
