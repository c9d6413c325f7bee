"""Kernel selection: compiled extension if built, pure Python otherwise.

Set MWLAT_PURE=1 to force the Python kernel (used by the tests and the
benchmark to compare both implementations).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("MWLAT_PURE") == "1":
    _mod = _kernel_py
else:
    try:
        from . import _termmul as _mod  # type: ignore
    except ImportError:
        _mod = _kernel_py

IMPL = _mod.IMPL
terms_add = _mod.terms_add
terms_neg = _mod.terms_neg
terms_scale = _mod.terms_scale
terms_mul = _mod.terms_mul
reduce_terms = _mod.reduce_terms
