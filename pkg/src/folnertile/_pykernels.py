"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``.

Every function here must return bit-identical results to its compiled twin;
``tests/test_kernels.py`` checks that on random inputs.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_COORD = np.uint64(0xD6E8FEB86659FD93)


def greedy_select(seed_cells, seed_slot, diff_ptr, diff_offsets, dominated):
    """Walk seeds in the given order, keeping each one not yet dominated.

    Keeping a seed marks ``cell + diff_offsets[diff_ptr[slot]:diff_ptr[slot+1]]``
    as dominated. ``dominated`` is updated in place. Returns the positions
    (into ``seed_cells``) of the kept seeds.
    """
    chosen = []
    for i in range(len(seed_cells)):
        cell = seed_cells[i]
        if dominated[cell]:
            continue
        chosen.append(i)
        slot = seed_slot[i]
        dominated[cell + diff_offsets[diff_ptr[slot]:diff_ptr[slot + 1]]] = 1
    return np.asarray(chosen, dtype=np.int64)


def hit_counts(mask, offsets, cells):
    """counts[i] = sum(mask[cells[i] + o] for o in offsets)."""
    out = np.zeros(len(cells), dtype=np.int32)
    for o in offsets:
        out += mask[cells + o]
    return out


def _splitmix(z):
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def mix64(seed, coords):
    """Stable 64-bit hash of (seed, row) for each row of an int64 matrix."""
    coords = np.ascontiguousarray(coords, dtype=np.int64)
    n, d = coords.shape
    with np.errstate(over="ignore"):
        h = _splitmix(np.full(n, seed, dtype=np.uint64))
        ucoords = coords.view(np.uint64)
        for j in range(d):
            h = _splitmix(h ^ (ucoords[:, j] * _COORD))
    return h
