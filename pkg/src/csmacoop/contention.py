"""Import-time selection between the compiled contention kernel and the
pure-python fallback.

The compiled twin is used whenever the extension module built; set the
environment variable CSMACOOP_PURE=1 (or pass force_pure=True) to force
the fallback. Both produce identical results for identical seeds.
"""

from __future__ import annotations

import os

from ._contention_py import PyContentionSampler

try:
    from ._ckernel import CContentionSampler
except ImportError:  # extension not built; fallback only
    CContentionSampler = None


def compiled_available() -> bool:
    return CContentionSampler is not None


def _pure_forced() -> bool:
    return os.environ.get("CSMACOOP_PURE", "") not in ("", "0")


def make_sampler(bit_generator, tau: float, n_nodes: int, force_pure: bool = False):
    """Contention sampler over the given numpy bit generator."""
    if force_pure or _pure_forced() or CContentionSampler is None:
        return PyContentionSampler(bit_generator, tau, n_nodes)
    return CContentionSampler(bit_generator, tau, n_nodes)
