"""Greedy Vitali covering by translates of Følner sets.

Given seeds S and a scale for each seed, repeatedly take the largest
remaining scale t, the lexicographically least undominated seed x with that
scale, place the tile ``F_t * x`` and mark ``F_t^{-1} F_t * x`` dominated.
For an increasing family the tiles are pairwise disjoint, and each step adds
|F_t| covered points against at most C|F_t| dominated points, which gives
``C |K| >= |S ∪ K|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import kernels
from .foelner import FolnerSequence
from .group import FiniteGroupSet, GroupElement, Grid, _as_coords


class ScaleError(ValueError):
    pass


@dataclass(frozen=True)
class Tile:
    center: GroupElement
    scale: int
    footprint: FiniteGroupSet

    def as_record(self):
        return {"center": list(self.center.coords), "scale": self.scale, "footprint_size": len(self.footprint)}


@dataclass
class VitaliResult:
    tiles: list
    K: FiniteGroupSet
    D: FiniteGroupSet
    S: FiniteGroupSet
    C: int
    certificate: Fraction  # |K| / |S ∪ K|

    @property
    def covered(self) -> int:
        return len(self.K)


@dataclass
class Verdict:
    ok: bool
    violations: list = field(default_factory=list)

    def as_dict(self):
        return {"ok": self.ok, "violations": list(self.violations)}


def _normalize_scales(S: FiniteGroupSet, scales: Mapping) -> dict:
    table = {}
    for k, v in scales.items():
        table[_as_coords(k)] = int(v)
    missing = [t for t in S.tuples() if t not in table]
    if missing:
        raise ScaleError(f"scale undefined at {len(missing)} seed(s), e.g. {sorted(missing)[0]}")
    return table


def vitali_cover(S: FiniteGroupSet, scales: Mapping, seq: FolnerSequence, C: int) -> VitaliResult:
    """Run the greedy covering on seeds S with ``scales[x]`` the index for x."""
    table = _normalize_scales(S, scales)
    sc = np.fromiter((table[t] for t in map(tuple, S.array.tolist())), dtype=np.int64, count=len(S))
    return cover_arrays(S, sc, seq, C)


def cover_arrays(S: FiniteGroupSet, sc: np.ndarray, seq: FolnerSequence, C: int) -> VitaliResult:
    """:func:`vitali_cover` with scales given as an array aligned to ``S.array``."""
    d = S.dim
    if not len(S):
        empty = FiniteGroupSet.empty(d)
        return VitaliResult([], empty, empty, S, C, Fraction(1))

    pts = S.array
    sc = np.asarray(sc, dtype=np.int64)
    if sc.min() < 1:
        raise ScaleError("scales must be >= 1")
    if seq.max_index is not None and sc.max() > seq.max_index:
        raise ScaleError(f"scale {int(sc.max())} exceeds the available prefix {seq.max_index}")

    used = sorted(set(sc.tolist()), reverse=True)
    slot_of = {t: i for i, t in enumerate(used)}
    diffs = [seq.difference_set(t).array for t in used]
    feet = [seq.folner_set(t).array for t in used]

    # S is already lexicographic; a stable sort on -scale gives the greedy order
    order = np.argsort(-sc, kind="stable")
    pts, sc = pts[order], sc[order]
    slots = np.fromiter((slot_of[t] for t in sc.tolist()), dtype=np.int64, count=len(sc))

    lo = pts.min(axis=0) + np.min([a.min(axis=0) for a in diffs], axis=0)
    hi = pts.max(axis=0) + np.max([a.max(axis=0) for a in diffs], axis=0)
    grid = Grid(lo, hi)
    diff_lin = [grid.offsets(a) for a in diffs]
    ptr = np.zeros(len(used) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(a) for a in diff_lin])
    dominated = np.zeros(grid.size, dtype=np.uint8)
    chosen = kernels.greedy_select(grid.index(pts), slots, ptr, np.concatenate(diff_lin), dominated)

    tiles = []
    k_parts, d_parts = [], []
    for i in chosen.tolist():
        center = pts[i]
        slot = int(slots[i])
        foot = feet[slot] + center
        tiles.append(Tile(GroupElement(tuple(center.tolist())), int(sc[i]), FiniteGroupSet._from_sorted(foot, d)))
        k_parts.append(foot)
        d_parts.append(diffs[slot] + center)
    K = FiniteGroupSet.from_array(np.concatenate(k_parts), d)
    D = FiniteGroupSet.from_array(np.concatenate(d_parts), d)
    union = len(S.tuples() | K.tuples())
    return VitaliResult(tiles, K, D, S, C, Fraction(len(K), union))


def verify_vitali(result: VitaliResult, S: FiniteGroupSet, scales: Mapping, C: int,
                  seq: FolnerSequence = None) -> Verdict:
    """Re-derive the covering's claims from the raw tiles, without the kernel.

    Checks: tiles pairwise disjoint; K equals the union of footprints;
    ``C |K| >= |S ∪ K|``; every tile centre is a seed with the tile's scale;
    the reported certificate is right; every seed lies in D. With ``seq``
    given, also checks each footprint is ``F_t * center`` and that the
    Tempelman bound ``|U_{k<=t} F_k^{-1} F_t| <= C |F_t|`` holds at every
    scale used (the covering hypothesis).
    """
    violations = []
    table = {_as_coords(k): int(v) for k, v in scales.items()}
    seeds = S.tuples()

    owner = {}
    clashes = set()
    for idx, tile in enumerate(result.tiles):
        for cell in tile.footprint.tuples():
            j = owner.setdefault(cell, idx)
            if j != idx:
                clashes.add((j, idx))
    if clashes:
        violations.append(f"disjointness: {len(clashes)} overlapping tile pair(s), e.g. {sorted(clashes)[0]}")

    covered = set(owner)
    if covered != set(result.K.tuples()):
        violations.append("K differs from the union of tile footprints")

    union = len(seeds | covered)
    if C * len(covered) < union:
        violations.append(f"packing: C*|K| = {C * len(covered)} < |S ∪ K| = {union}")
    if union and result.certificate != Fraction(len(covered), union):
        violations.append("certificate does not match |K| / |S ∪ K|")

    for tile in result.tiles:
        c = tile.center.coords
        if c not in seeds:
            violations.append(f"tile centre {c} is not a seed")
        elif table.get(c) != tile.scale:
            violations.append(f"tile at {c} has scale {tile.scale}, seed scale is {table.get(c)}")

    if not seeds <= result.D.tuples():
        violations.append("some seed is not dominated at termination")

    if seq is not None:
        for tile in result.tiles:
            if tile.footprint != seq.folner_set(tile.scale).translate(tile.center):
                violations.append(f"footprint at {tile.center.coords} is not F_{tile.scale} * center")
        for t in sorted({tile.scale for tile in result.tiles}):
            ratio = seq.tempelman_ratio(t)
            if ratio > C:
                violations.append(f"hypothesis: Tempelman ratio {ratio} at scale {t} exceeds C={C}")

    return Verdict(not violations, violations)

