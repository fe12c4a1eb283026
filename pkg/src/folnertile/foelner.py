"""Følner families in Z^d and their Tempelman / tempered ratios.

All ratios are exact ``Fraction`` values. A report over a finite prefix is
evidence about that prefix only, and is labelled as such.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .group import FiniteGroupSet, boundary, set_inverse, set_product


class FamilyError(ValueError):
    pass


class FolnerSequence:
    """An indexed family n -> F_n (n >= 1) of finite subsets of Z^d.

    ``generator`` maps an index to a FiniteGroupSet. The built-in families
    are ``box`` (``[0, n)^d``) and ``centered`` (``[-(n-1), n-1]^d``); both
    have closed-form boundary counts against each other, used by
    :meth:`boundary_size` to avoid enumerating huge sets.
    """

    def __init__(self, dim: int, generator: Optional[Callable[[int], FiniteGroupSet]] = None,
                 name: str = "custom", max_index: Optional[int] = None):
        if dim < 1:
            raise FamilyError("dimension must be >= 1")
        self.dim = dim
        self.name = name
        self.max_index = max_index
        self._gen = generator
        self._sets = {}
        self._diffs = {}
        self._ratios = {}
        self._lock = threading.Lock()

    @classmethod
    def box(cls, dim: int) -> "FolnerSequence":
        return cls(dim, lambda n: FiniteGroupSet.box((0,) * dim, (n,) * dim), name="box")

    @classmethod
    def centered(cls, dim: int) -> "FolnerSequence":
        return cls(dim, lambda n: FiniteGroupSet.box((1 - n,) * dim, (n,) * dim), name="centered")

    @classmethod
    def named(cls, name: str, dim: int) -> "FolnerSequence":
        if name == "box":
            return cls.box(dim)
        if name == "centered":
            return cls.centered(dim)
        raise FamilyError(f"unknown Følner family {name!r}")

    @property
    def is_box_family(self) -> bool:
        return self.name in ("box", "centered")

    def _check_index(self, n):
        if n < 1:
            raise FamilyError(f"Følner index must be >= 1, got {n}")
        if self.max_index is not None and n > self.max_index:
            raise FamilyError(f"index {n} exceeds the available prefix {self.max_index}")

    def __getitem__(self, n: int) -> FiniteGroupSet:
        return self.folner_set(n)

    def folner_set(self, n: int) -> FiniteGroupSet:
        self._check_index(n)
        s = self._sets.get(n)
        if s is None:
            if self._gen is None:
                raise FamilyError("family has no generator")
            s = self._gen(n)
            if s.dim != self.dim:
                raise FamilyError(f"F_{n} has dimension {s.dim}, expected {self.dim}")
            if not len(s):
                raise FamilyError(f"F_{n} is empty")
            with self._lock:
                self._sets.setdefault(n, s)
        return s

    def difference_set(self, n: int) -> FiniteGroupSet:
        """``F_n^{-1} F_n`` (cached)."""
        d = self._diffs.get(n)
        if d is None:
            F = self.folner_set(n)
            d = set_product(set_inverse(F), F)
            with self._lock:
                self._diffs.setdefault(n, d)
        return d

    def tempelman_ratio(self, n: int) -> Fraction:
        """``|U_{k<=n} F_k^{-1} F_n| / |F_n|`` at one index (cached)."""
        r = self._ratios.get(n)
        if r is None:
            inv = FiniteGroupSet.empty(self.dim).union(*(set_inverse(self.folner_set(k)) for k in range(1, n + 1)))
            F = self.folner_set(n)
            r = Fraction(len(set_product(inv, F)), len(F))
            with self._lock:
                self._ratios.setdefault(n, r)
        return r

    def size(self, n: int) -> int:
        """|F_n| without building the set, for the built-in families."""
        if self.name == "box":
            return n ** self.dim
        if self.name == "centered":
            return (2 * n - 1) ** self.dim
        return len(self.folner_set(n))

    def side(self, n: int) -> int:
        return n if self.name == "box" else 2 * n - 1

    def boundary_size(self, m: int, n: int) -> int:
        """``|∂_{F_m} F_n|``.

        For box-shaped families, ``F_m * s`` meets F_n for s in a box of side
        ``a + b - 1`` and lies inside it for s in a box of side ``b - a + 1``
        (a, b the sides of F_m, F_n), so the boundary count is the difference
        of the two volumes. Other families are enumerated.
        """
        if self.is_box_family:
            a, b = self.side(m), self.side(n)
            return (a + b - 1) ** self.dim - max(0, b - a + 1) ** self.dim
        return len(boundary(self.folner_set(m), self.folner_set(n)))

    def check_increasing(self, N: int) -> bool:
        return all(self.folner_set(k).issubset(self.folner_set(k + 1)) for k in range(1, N))


def folner_set(seq: FolnerSequence, n: int) -> FiniteGroupSet:
    return seq.folner_set(n)


def folner_ratio(seq: FolnerSequence, R: FiniteGroupSet, n: int) -> Fraction:
    F = seq.folner_set(n)
    return Fraction(len(boundary(R, F)), len(F))


@dataclass
class TempelmanReport:
    kind: str  # "tempelman" (k <= n) or "tempered" (k < n)
    N: int
    sizes: list
    union_sizes: list
    ratios: list
    sup_ratio: Fraction
    least_integer_C: int
    analytic_constant: Optional[int] = None
    label: str = field(default="prefix evidence")

    def as_rows(self):
        return [(n, s, r) for n, s, r in zip(range(1, self.N + 1), self.sizes, self.ratios)]


def _union_report(seq: FolnerSequence, N: int, strict: bool) -> TempelmanReport:
    if N < 1:
        raise FamilyError(f"prefix length must be >= 1, got {N}")
    # product distributes over union: U_{k} F_k^{-1} F_n = (U_k F_k^{-1}) F_n
    inv_union = None
    sizes, union_sizes, ratios = [], [], []
    for n in range(1, N + 1):
        F = seq.folner_set(n)
        inv = set_inverse(F)
        if strict:
            U = set_product(inv_union, F) if inv_union is not None else FiniteGroupSet.empty(seq.dim)
            inv_union = inv if inv_union is None else inv_union.union(inv)
        else:
            inv_union = inv if inv_union is None else inv_union.union(inv)
            U = set_product(inv_union, F)
        sizes.append(len(F))
        union_sizes.append(len(U))
        ratios.append(Fraction(len(U), len(F)))
    sup = max(ratios)
    analytic = 2 ** seq.dim if seq.is_box_family else None
    return TempelmanReport(
        kind="tempered" if strict else "tempelman",
        N=N,
        sizes=sizes,
        union_sizes=union_sizes,
        ratios=ratios,
        sup_ratio=sup,
        least_integer_C=math.ceil(sup),
        analytic_constant=analytic,
    )


def tempelman_report(seq: FolnerSequence, N: int) -> TempelmanReport:
    """Ratios ``|U_{k<=n} F_k^{-1} F_n| / |F_n|`` for n <= N."""
    return _union_report(seq, N, strict=False)


def tempered_report(seq: FolnerSequence, N: int) -> TempelmanReport:
    """As :func:`tempelman_report` with the union over k < n."""
    return _union_report(seq, N, strict=True)


def tempelman_constant(seq: FolnerSequence, N: int) -> int:
    return tempelman_report(seq, N).least_integer_C


def ratio_table(seq: FolnerSequence, N: int):
    """Rows for the CSV dump: n, |F_n|, Tempelman and tempered ratios."""
    t = tempelman_report(seq, N)
    s = tempered_report(seq, N)
    rows = []
    for n in range(1, N + 1):
        a, b = t.ratios[n - 1], s.ratios[n - 1]
        rows.append((n, t.sizes[n - 1], a.numerator, a.denominator, b.numerator, b.denominator))
    return t, s, rows
