"""Kernel selection.

The distance and component kernels exist twice: a Cython extension
(``_native``) and a pure-Python fallback (``_pure``) with identical contracts.
The extension is preferred when importable; set ``WDCOLOR_PURE=1`` to force
the fallback (the benchmark and the cross-checking tests do this).
"""

import os

if os.environ.get("WDCOLOR_PURE"):
    from wdcolor._kernels import _pure as _impl
else:
    try:
        from wdcolor._kernels import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from wdcolor._kernels import _pure as _impl

IMPL = _impl.IMPL
I64_INF = int(_impl.I64_INF)
all_pairs_scaled = _impl.all_pairs_scaled
label_components = _impl.label_components


def implementations():
    """All importable kernel modules, keyed by name. Used by the benchmark."""
    from wdcolor._kernels import _pure

    impls = {"pure": _pure}
    try:
        from wdcolor._kernels import _native  # type: ignore[attr-defined]

        impls["native"] = _native
    except ImportError:
        pass
    return impls
