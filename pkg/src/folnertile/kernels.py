"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``FOLNERTILE_PURE=1`` to force the fallback.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("FOLNERTILE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def greedy_select(seed_cells, seed_slot, diff_ptr, diff_offsets, dominated):
    return _impl.greedy_select(
        np.ascontiguousarray(seed_cells, dtype=np.int64),
        np.ascontiguousarray(seed_slot, dtype=np.int64),
        np.ascontiguousarray(diff_ptr, dtype=np.int64),
        np.ascontiguousarray(diff_offsets, dtype=np.int64),
        dominated,
    )


def hit_counts(mask, offsets, cells):
    return _impl.hit_counts(
        np.ascontiguousarray(mask, dtype=np.uint8),
        np.ascontiguousarray(offsets, dtype=np.int64),
        np.ascontiguousarray(cells, dtype=np.int64),
    )


def mix64(seed, coords):
    coords = np.ascontiguousarray(np.atleast_2d(coords), dtype=np.int64)
    return _impl.mix64(int(seed) & 0xFFFFFFFFFFFFFFFF, coords)


def unit_uniform(seed, coords):
    """Deterministic uniforms in [0, 1) keyed by (seed, coordinate row)."""
    return (mix64(seed, coords) >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def derive_seed(root, *keys):
    """Child seed (63-bit, so it fits an int64 coordinate) from a root seed and integer keys."""
    return int(mix64(root, np.asarray([keys], dtype=np.int64))[0]) >> 1
