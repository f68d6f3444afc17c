"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``KATOFORMS_PURE=1`` to force the pure-Python kernels (useful for
benchmark comparisons and for debugging the compiled path).
"""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("KATOFORMS_PURE") == "1":
    _impl = _fallback
    IMPL_NAME = "python (forced)"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        IMPL_NAME = "compiled"
    except ImportError:
        _impl = _fallback
        IMPL_NAME = "python (fallback)"

poly_add = _impl.poly_add
poly_mul = _impl.poly_mul
gauss_solve = _impl.gauss_solve
