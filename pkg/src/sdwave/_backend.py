"""Kernel backend selection.

The compiled extension is preferred; ``SDWAVE_BACKEND=python`` forces the
numpy fallback (useful for benchmarking and for checking the two agree).
"""

import importlib.util
import os

from . import _fallback

name = "python"
kernels = _fallback

if os.environ.get("SDWAVE_BACKEND", "").lower() != "python":
    try:
        from . import _kernels
    except ImportError:  # extension not built
        pass
    else:
        kernels = _kernels
        name = "cython"


def available():
    """Names of every backend importable in this environment."""
    found = ["python"]
    if importlib.util.find_spec(f"{__package__}._kernels") is None:
        return found
    return found + ["cython"]


def get(backend=None):
    if backend is None:
        return kernels
    if backend == "python":
        return _fallback
    if backend == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {backend!r}")
