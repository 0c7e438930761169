"""Kernel selection: compiled extension when built, pure Python otherwise.

Set CADKIT_PURE_PYTHON=1 to force the pure-Python kernels (used by the
benchmark to compare both implementations).
"""

from __future__ import annotations

import os

if os.environ.get("CADKIT_PURE_PYTHON"):
    from cadkit import _kernel_py as _impl
else:
    try:
        from cadkit import _kernel_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from cadkit import _kernel_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
add_terms = _impl.add_terms
sub_terms = _impl.sub_terms
mul_terms = _impl.mul_terms
scale_terms = _impl.scale_terms
mul_monomial = _impl.mul_monomial
