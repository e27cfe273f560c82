"""Kernel selection: compiled core when importable, pure Python otherwise.

Set ``QREC_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("QREC_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as kernels
    NAME = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
        NAME = "cython"
    except ImportError:  # extension not built
        from . import _fallback as kernels
        NAME = "python"

from ._fallback import (  # noqa: E402
    FITTING,
    INJ,
    ISO,
    NONZERO_NOT_INJ,
    NONZERO_NOT_ISO,
    NONZERO_NOT_SURJ,
    SURJ,
)

__all__ = [
    "kernels", "NAME", "ISO", "SURJ", "INJ", "NONZERO_NOT_ISO",
    "NONZERO_NOT_SURJ", "NONZERO_NOT_INJ", "FITTING",
]
