"""Scale-function families: pointwise strictly increasing ℓ_1(x) < ℓ_2(x) < ...

A family is evaluated at "points", which are group elements for families
living on the group and sample states for families living on the space the
group acts on. :class:`PullbackScales` turns the latter into the former
along one orbit.
"""

from __future__ import annotations

import math
import struct
from typing import Callable, Optional

import numpy as np

from . import kernels
from .group import GroupElement


class ScaleFamilyError(ValueError):
    pass


def point_key(p) -> tuple:
    """Integer tuple identifying a point, for hashing."""
    if isinstance(p, GroupElement):
        return p.coords
    key = getattr(p, "key", None)
    if key is not None:
        return tuple(key)
    if isinstance(p, float):
        return (struct.unpack("<q", struct.pack("<d", p))[0],)
    if isinstance(p, (int, np.integer)):
        return (int(p),)
    return tuple(int(c) for c in p)


class ScaleFunctionFamily:
    """Base class. Subclasses define :meth:`value`; ``None`` ends the sequence.

    The generic band search walks i = 1, 2, ... and enforces strict
    increase; subclasses with a closed form override :meth:`first_at_least`.
    """

    name = "custom"
    max_index = 10 ** 6

    def value(self, x, i: int) -> Optional[int]:
        raise NotImplementedError

    def values(self, x):
        prev = None
        for i in range(1, self.max_index + 1):
            v = self.value(x, i)
            if v is None:
                return
            if prev is not None and v <= prev:
                raise ScaleFamilyError(f"ℓ is not strictly increasing at {x}: ℓ_{i - 1}={prev}, ℓ_{i}={v}")
            prev = v
            yield i, v

    def first_at_least(self, x, p: int):
        """(j, ℓ_j(x)) for the least j with ℓ_j(x) >= p, or None."""
        for i, v in self.values(x):
            if v >= p:
                return i, v
        return None

    def first_in_band(self, x, lo: int, hi: int):
        """(j, ℓ_j(x)) for the least j with ℓ_j(x) in [lo, hi], or None."""
        hit = self.first_at_least(x, lo)
        if hit is None or hit[1] > hi:
            return None
        return hit

    def describe(self) -> str:
        return self.name


class IndexScales(ScaleFunctionFamily):
    """ℓ_i(x) = i everywhere: every scale is available at every point."""

    name = "index"

    def value(self, x, i):
        return i

    def first_at_least(self, x, p):
        p = max(p, 1)
        return p, p


class AffineScales(ScaleFunctionFamily):
    """ℓ_i(x) = a*i + b, the same at every point."""

    def __init__(self, a: int, b: int = 0):
        if a < 1 or a + b < 1:
            raise ScaleFamilyError("affine family needs a >= 1 and a + b >= 1")
        self.a, self.b = a, b
        self.name = f"affine:{a},{b}"

    def value(self, x, i):
        return self.a * i + self.b

    def first_at_least(self, x, p):
        i = max(1, -((self.b - p) // self.a))
        return i, self.a * i + self.b


class CallableScales(ScaleFunctionFamily):
    """Wraps ``fn(x, i) -> int | None``."""

    def __init__(self, fn: Callable, name: str = "callable", max_index: int = 10 ** 6):
        self.fn = fn
        self.name = name
        self.max_index = max_index

    def value(self, x, i):
        return self.fn(x, i)


class SparseScales(ScaleFunctionFamily):
    """``base`` on a hash-selected fraction ``keep`` of points, empty elsewhere."""

    def __init__(self, base: ScaleFunctionFamily, keep: float, salt: int = 0):
        self.base, self.keep, self.salt = base, float(keep), int(salt)
        self.name = f"sparse:{keep}"
        self._memo = {}

    def _alive(self, x) -> bool:
        key = point_key(x)
        hit = self._memo.get(key)
        if hit is None:
            hit = bool(kernels.unit_uniform(self.salt, np.asarray([key]))[0] < self.keep)
            self._memo[key] = hit
        return hit

    def value(self, x, i):
        return self.base.value(x, i) if self._alive(x) else None

    def first_at_least(self, x, p):
        return self.base.first_at_least(x, p) if self._alive(x) else None


class PullbackScales(ScaleFunctionFamily):
    """ℓ^x_i(γ) = ℓ_i(γ·x): a family on the space pulled back to the group."""

    def __init__(self, base: ScaleFunctionFamily, action, x):
        self.base, self.action, self.x = base, action, x
        self.name = base.describe()
        self.max_index = base.max_index

    def value(self, g, i):
        return self.base.value(self.action.act(g, self.x), i)

    def first_at_least(self, g, p):
        return self.base.first_at_least(self.action.act(g, self.x), p)

    def first_in_band(self, g, lo, hi):
        return self.base.first_in_band(self.action.act(g, self.x), lo, hi)


def parse_scales(spec: str) -> ScaleFunctionFamily:
    """Build a synthetic family from a short string.

    ``index``, ``affine:A,B``, ``sparse:Q`` (index family kept on a fraction Q
    of points) or ``sparse:Q,SALT``.
    """
    kind, _, arg = spec.partition(":")
    if kind == "index":
        return IndexScales()
    if kind == "affine":
        a, _, b = arg.partition(",")
        return AffineScales(int(a), int(b or 0))
    if kind == "sparse":
        q, _, salt = arg.partition(",")
        return SparseScales(IndexScales(), float(q), int(salt or 0))
    raise ScaleFamilyError(f"unknown scale family {spec!r}")


def fraction_needed(m: int, eta, r: int) -> int:
    """Least count c with c/m > 1 - eta^2/r."""
    return math.floor((1 - eta * eta / r) * m) + 1
