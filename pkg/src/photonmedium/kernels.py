"""Backend selection for the pairwise integrand kernels.

The compiled Cython extension is preferred when importable; the pure-numpy
fallback is used otherwise.  Set ``PHOTONMEDIUM_BACKEND=python`` or
``=compiled`` to force a choice (forcing ``compiled`` raises if the extension
was not built).  Both backends are deterministic; they may differ from each
other in the last floating-point bits because summation order and libm
vectorization differ.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built: pure-Python install
    _kernels_c = None


def _select(name: str | None) -> ModuleType:
    if name in (None, "", "auto"):
        return _kernels_c if _kernels_c is not None else _kernels_py
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _kernels_c is None:
            raise ImportError(
                "PHOTONMEDIUM_BACKEND=compiled but the photonmedium._kernels "
                "extension is not built (reinstall with a C compiler available)"
            )
        return _kernels_c
    raise ValueError(f"unknown kernel backend {name!r}; use auto, compiled or python")


_active = _select(os.environ.get("PHOTONMEDIUM_BACKEND"))


def get_backend(name: str | None = None) -> ModuleType:
    """Return a kernel module: the active one, or an explicit choice by name."""
    if name is None:
        return _active
    return _select(name)


def backend_name() -> str:
    return _active.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _kernels_c is not None else ("python",)


def pair_product_sum(*args, **kwargs):
    return _active.pair_product_sum(*args, **kwargs)


def pair_values(*args, **kwargs):
    return _active.pair_values(*args, **kwargs)
