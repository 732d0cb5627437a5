"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-Python mirror is used. Both honour the same bit-level contracts, so
the choice affects speed only, never results. ``get_kernels`` lets
benchmarks and tests pin a backend explicitly.
"""

from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels as _compiled
except ImportError:
    _compiled = None

_active: ModuleType = _compiled if _compiled is not None else _pykernels

ACTIVE_BACKEND: str = _active.BACKEND_NAME

sample_edges_kernel = _active.sample_edges_kernel
edge_betweenness_kernel = _active.edge_betweenness_kernel


def available_backends() -> tuple[str, ...]:
    return ("python", "c") if _compiled is not None else ("python",)


def get_kernels(backend: str | None = None) -> ModuleType:
    """Return the kernel module for ``backend`` (``None`` = active one)."""
    if backend is None:
        return _active
    if backend == "python":
        return _pykernels
    if backend == "c":
        if _compiled is None:
            raise RuntimeError("compiled kernel backend is not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
