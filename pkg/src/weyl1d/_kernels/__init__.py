"""Hot kernels: compiled Cython module with a pure-Python fallback.

The compiled module is used when it was built and ``WEYL1D_PURE_PYTHON`` is
unset (or ``0``).  Both expose ``pencil_counts`` and ``bisect_eigenvalues``
with identical signatures.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pencil_py

try:
    from . import _pencil as _compiled
except ImportError:  # extension not built
    _compiled = None


def available_backends() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def get_backend(name: str) -> ModuleType:
    if name == "python":
        return _pencil_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> str:
    forced = os.environ.get("WEYL1D_PURE_PYTHON", "").strip()
    if forced and forced != "0":
        return "python"
    return "compiled" if _compiled is not None else "python"


BACKEND = _select()
_impl = get_backend(BACKEND)
pencil_counts = _impl.pencil_counts
bisect_eigenvalues = _impl.bisect_eigenvalues

__all__ = ["BACKEND", "available_backends", "get_backend", "pencil_counts", "bisect_eigenvalues"]
