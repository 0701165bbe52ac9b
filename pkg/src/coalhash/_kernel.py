"""Selects the replay kernel at import: compiled extension if available,
otherwise the pure-Python twin.  ``HAVE_COMPILED`` records which one is live;
``benchmarks/bench_kernel.py`` compares the two."""

from __future__ import annotations

try:
    from ._core import replay

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on the build environment
    from ._core_py import replay

    HAVE_COMPILED = False

__all__ = ["replay", "HAVE_COMPILED"]
