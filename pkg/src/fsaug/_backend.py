"""Kernel backend selection.

The compiled extension (fsaug._kernels) is used when it imported cleanly;
otherwise the numpy fallback takes over. FSAUG_BACKEND=python forces the
fallback, FSAUG_BACKEND=compiled fails loudly if the extension is missing.
"""

from __future__ import annotations

import os

from . import _kernels_py


def _select():
    want = os.environ.get("FSAUG_BACKEND", "").strip().lower()
    if want == "python":
        return _kernels_py
    try:
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    except ImportError:
        if want == "compiled":
            raise ImportError(
                "FSAUG_BACKEND=compiled but the fsaug._kernels extension is not built"
            )
        return _kernels_py


kernels = _select()
BACKEND_NAME: str = kernels.BACKEND_NAME
