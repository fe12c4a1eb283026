"""Group elements of Z^d, finite subsets, and exact set algebra.

Composition is written multiplicatively (``a * b``) even though the concrete
group is the additive lattice Z^d, so the rest of the package reads like the
group-theoretic statements it implements. Left action convention throughout:
``R * s`` is ``{r * s : r in R}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GroupElement:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) < 1:
            raise DimensionError("group elements need dimension >= 1")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(-c for c in self.coords))

    def __repr__(self):
        return f"g{self.coords}"


def element(*coords) -> GroupElement:
    if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
        coords = tuple(coords[0])
    return GroupElement(tuple(coords))


def identity(dim: int) -> GroupElement:
    return GroupElement((0,) * dim)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.dim != b.dim:
        raise DimensionError(f"cannot compose elements of dimension {a.dim} and {b.dim}")
    return GroupElement(tuple(x + y for x, y in zip(a.coords, b.coords)))


def inverse(a: GroupElement) -> GroupElement:
    return a.inverse()


def _as_coords(e) -> tuple:
    if isinstance(e, GroupElement):
        return e.coords
    if isinstance(e, (int, np.integer)):
        return (int(e),)
    return tuple(int(c) for c in e)


class FiniteGroupSet:
    """Immutable finite subset of Z^d.

    Backed by a read-only ``(n, d)`` int64 array of unique rows in
    lexicographic order; a frozenset of coordinate tuples is built on first
    membership query.
    """

    __slots__ = ("_arr", "_dim", "_set", "_hash")

    def __init__(self, elements: Iterable = (), dim: Optional[int] = None):
        rows = [_as_coords(e) for e in elements]
        if rows:
            d = len(rows[0])
            if dim is not None and dim != d:
                raise DimensionError(f"expected dimension {dim}, got {d}")
            if any(len(r) != d for r in rows):
                raise DimensionError("mixed dimensions in one set")
            arr = np.unique(np.asarray(rows, dtype=np.int64).reshape(len(rows), d), axis=0)
        else:
            if dim is None:
                raise DimensionError("empty set needs an explicit dimension")
            d = dim
            arr = np.empty((0, d), dtype=np.int64)
        self._init(arr, d)

    def _init(self, arr, d):
        arr.setflags(write=False)
        self._arr = arr
        self._dim = d
        self._set = None
        self._hash = None

    @classmethod
    def from_array(cls, arr, dim: Optional[int] = None) -> "FiniteGroupSet":
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if dim in (None, 1) else arr.reshape(-1, dim)
        d = arr.shape[1] if dim is None else dim
        if arr.shape[1] != d:
            raise DimensionError(f"expected dimension {d}, got {arr.shape[1]}")
        if len(arr):
            arr = np.unique(arr, axis=0)
        return cls._from_sorted(np.ascontiguousarray(arr), d)

    @classmethod
    def _from_sorted(cls, arr, d) -> "FiniteGroupSet":
        # caller guarantees unique rows in lexicographic order
        obj = cls.__new__(cls)
        obj._init(arr, d)
        return obj

    @classmethod
    def empty(cls, dim: int) -> "FiniteGroupSet":
        return cls((), dim=dim)

    @classmethod
    def box(cls, lower, upper) -> "FiniteGroupSet":
        """Lattice box ``prod [lower_i, upper_i)``."""
        lower = _as_coords(lower)
        upper = _as_coords(upper)
        axes = [np.arange(lo, hi, dtype=np.int64) for lo, hi in zip(lower, upper)]
        d = len(axes)
        if any(len(a) == 0 for a in axes):
            return cls.empty(d)
        mesh = np.meshgrid(*axes, indexing="ij")
        arr = np.stack([m.ravel() for m in mesh], axis=1)
        return cls._from_sorted(np.ascontiguousarray(arr), d)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def array(self) -> np.ndarray:
        return self._arr

    def tuples(self) -> frozenset:
        if self._set is None:
            self._set = frozenset(map(tuple, self._arr.tolist()))
        return self._set

    def __len__(self):
        return len(self._arr)

    def __iter__(self):
        for row in self._arr.tolist():
            yield GroupElement(tuple(row))

    def __contains__(self, e) -> bool:
        return _as_coords(e) in self.tuples()

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupSet):
            return NotImplemented
        return self._dim == other._dim and np.array_equal(self._arr, other._arr)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, self._arr.tobytes()))
        return self._hash

    def __repr__(self):
        if len(self) <= 8:
            inner = ", ".join(str(tuple(r)) for r in self._arr.tolist())
        else:
            inner = f"{len(self)} elements"
        return f"FiniteGroupSet[{self._dim}]({{{inner}}})"

    def _check(self, other):
        if self._dim != other._dim:
            raise DimensionError(f"dimension mismatch: {self._dim} vs {other._dim}")

    def union(self, *others) -> "FiniteGroupSet":
        for o in others:
            self._check(o)
        return FiniteGroupSet.from_array(np.concatenate([self._arr] + [o._arr for o in others]), self._dim)

    def intersection(self, other) -> "FiniteGroupSet":
        self._check(other)
        keep = other.tuples()
        return FiniteGroupSet._from_sorted(self._arr[self._mask(keep)], self._dim)

    def difference(self, other) -> "FiniteGroupSet":
        self._check(other)
        drop = other.tuples()
        return FiniteGroupSet._from_sorted(self._arr[~self._mask(drop)], self._dim)

    def _mask(self, members):
        return np.fromiter((tuple(r) in members for r in self._arr.tolist()), dtype=bool, count=len(self))

    def issubset(self, other) -> bool:
        self._check(other)
        return self.tuples() <= other.tuples()

    def isdisjoint(self, other) -> bool:
        self._check(other)
        return self.tuples().isdisjoint(other.tuples())

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __le__ = issubset

    def translate(self, g) -> "FiniteGroupSet":
        """Right translate ``A * g``; lexicographic order is preserved."""
        g = np.asarray(_as_coords(g), dtype=np.int64)
        if len(g) != self._dim:
            raise DimensionError(f"dimension mismatch: {self._dim} vs {len(g)}")
        return FiniteGroupSet._from_sorted(self._arr + g, self._dim)

    def is_box(self) -> bool:
        """True when the set fills its bounding box."""
        if not len(self):
            return False
        lo, hi = self.bounds()
        return len(self) == int(np.prod(hi - lo + 1))

    def bounds(self):
        """(lower, upper) inclusive coordinate bounds; None for the empty set."""
        if not len(self):
            return None
        return self._arr.min(axis=0), self._arr.max(axis=0)


def set_inverse(A: FiniteGroupSet) -> FiniteGroupSet:
    return FiniteGroupSet.from_array(-A.array, A.dim)


def set_product(A: FiniteGroupSet, B: FiniteGroupSet) -> FiniteGroupSet:
    """``{a * b : a in A, b in B}``, deduplicated."""
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} vs {B.dim}")
    if not len(A) or not len(B):
        return FiniteGroupSet.empty(A.dim)
    d = A.dim
    if A.is_box() and B.is_box():
        (la, ha), (lb, hb) = A.bounds(), B.bounds()
        return FiniteGroupSet.box(la + lb, ha + hb + 1)
    if len(A) > len(B):
        A, B = B, A
    # mark sums in a dense grid over the bounding box, a few rows of A at a time
    (la, ha), (lb, hb) = A.bounds(), B.bounds()
    grid = Grid(la + lb, ha + hb)
    if grid.size > 10 ** 8:  # sparse and spread out: sort-based instead
        sums = (A.array[:, None, :] + B.array[None, :, :]).reshape(-1, d)
        return FiniteGroupSet.from_array(sums, d)
    mask = np.zeros(grid.size, dtype=bool)
    base = grid.index(B.array + la)
    offs = grid.offsets(A.array - la)
    step = max(1, (1 << 22) // len(B))
    for i in range(0, len(offs), step):
        mask[(offs[i:i + step, None] + base[None, :]).ravel()] = True
    return FiniteGroupSet._from_sorted(grid.coords(np.flatnonzero(mask)), d)


def boundary(R: FiniteGroupSet, S: FiniteGroupSet, universe_hint: Optional[FiniteGroupSet] = None) -> FiniteGroupSet:
    """The R-boundary of S: points s with R*s meeting both S and its complement.

    Only points of ``R^{-1} * S`` can have ``R*s`` meet S, so those are the
    candidates. For each candidate the number of r with ``r*s`` in S is the
    multiplicity of s among the differences ``t - r`` (t in S, r in R); s is
    on the boundary iff that count is positive and below |R|.

    ``universe_hint`` restricts the candidates (prunes, never adds points).
    """
    if not len(R):
        raise ValueError("boundary needs a nonempty R")
    if R.dim != S.dim:
        raise DimensionError(f"dimension mismatch: {R.dim} vs {S.dim}")
    if not len(S):
        return FiniteGroupSet.empty(S.dim)
    diffs = (S.array[None, :, :] - R.array[:, None, :]).reshape(-1, S.dim)
    cand, counts = np.unique(diffs, axis=0, return_counts=True)
    out = cand[counts < len(R)]
    result = FiniteGroupSet._from_sorted(np.ascontiguousarray(out), S.dim)
    if universe_hint is not None:
        result = result.intersection(universe_hint)
    return result


def average(f: Callable, A: FiniteGroupSet) -> float:
    """Mean of f over A, summed with ``math.fsum`` (correctly rounded)."""
    if not len(A):
        raise ValueError("average over an empty set")
    vals = []
    for a in A:
        v = f(a)
        if v is None:
            raise ValueError(f"f is undefined at {a}")
        vals.append(float(v))
    return math.fsum(vals) / len(vals)


class Grid:
    """Dense row-major indexing of a lattice box, for the compiled kernels.

    ``lower``/``upper`` are inclusive bounds. Linear offsets of difference
    vectors are valid as long as both endpoints lie inside the box.
    """

    def __init__(self, lower, upper):
        self.lower = np.asarray(lower, dtype=np.int64)
        self.upper = np.asarray(upper, dtype=np.int64)
        self.shape = tuple(int(s) for s in (self.upper - self.lower + 1))
        strides = [1] * len(self.shape)
        for i in range(len(self.shape) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.shape[i + 1]
        self.strides = np.asarray(strides, dtype=np.int64)
        self.size = int(np.prod(self.shape, dtype=object))

    @classmethod
    def covering(cls, *arrays) -> "Grid":
        arrays = [a for a in arrays if len(a)]
        lo = np.min([a.min(axis=0) for a in arrays], axis=0)
        hi = np.max([a.max(axis=0) for a in arrays], axis=0)
        return cls(lo, hi)

    def index(self, coords) -> np.ndarray:
        return (np.asarray(coords, dtype=np.int64) - self.lower) @ self.strides

    def offsets(self, vectors) -> np.ndarray:
        return np.asarray(vectors, dtype=np.int64) @ self.strides

    def coords(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty((len(idx), len(self.shape)), dtype=np.int64)
        rem = idx.copy()
        for j, s in enumerate(self.strides):
            out[:, j], rem = np.divmod(rem, s)
        return out + self.lower

    def mask(self, S: FiniteGroupSet) -> np.ndarray:
        m = np.zeros(self.size, dtype=np.uint8)
        if len(S):
            m[self.index(S.array)] = 1
        return m
