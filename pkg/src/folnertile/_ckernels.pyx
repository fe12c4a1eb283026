# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t, int32_t

cnp.import_array()


def greedy_select(const int64_t[:] seed_cells, const int64_t[:] seed_slot,
                  const int64_t[:] diff_ptr, const int64_t[:] diff_offsets,
                  uint8_t[:] dominated):
    cdef Py_ssize_t n = seed_cells.shape[0]
    cdef Py_ssize_t i, k, nsel = 0
    cdef int64_t cell, slot
    cdef cnp.ndarray[int64_t, ndim=1] chosen = np.empty(n, dtype=np.int64)
    for i in range(n):
        cell = seed_cells[i]
        if dominated[cell]:
            continue
        chosen[nsel] = i
        nsel += 1
        slot = seed_slot[i]
        for k in range(diff_ptr[slot], diff_ptr[slot + 1]):
            dominated[cell + diff_offsets[k]] = 1
    return chosen[:nsel].copy()


def hit_counts(const uint8_t[:] mask, const int64_t[:] offsets, const int64_t[:] cells):
    cdef Py_ssize_t n = cells.shape[0]
    cdef Py_ssize_t m = offsets.shape[0]
    cdef Py_ssize_t i, k
    cdef int32_t acc
    cdef int64_t base
    cdef cnp.ndarray[int32_t, ndim=1] out = np.zeros(n, dtype=np.int32)
    for i in range(n):
        base = cells[i]
        acc = 0
        for k in range(m):
            acc += mask[base + offsets[k]]
        out[i] = acc
    return out


cdef inline uint64_t _splitmix(uint64_t z) nogil:
    z = z + <uint64_t>0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def mix64(uint64_t seed, const int64_t[:, :] coords):
    cdef Py_ssize_t n = coords.shape[0]
    cdef Py_ssize_t d = coords.shape[1]
    cdef Py_ssize_t i, j
    cdef uint64_t h
    cdef cnp.ndarray[uint64_t, ndim=1] out = np.empty(n, dtype=np.uint64)
    for i in range(n):
        h = _splitmix(seed)
        for j in range(d):
            h = _splitmix(h ^ (<uint64_t>coords[i, j] * <uint64_t>0xD6E8FEB86659FD93))
        out[i] = h
    return out
