import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folnertile.foelner import FolnerSequence
from folnertile.group import FiniteGroupSet, element
from folnertile.vitali import ScaleError, Tile, verify_vitali, vitali_cover

from oracles import box, disjoint_subfamilies, greedy_vitali

Z1 = FolnerSequence.box(1)
Z2 = FolnerSequence.box(2)


def run(points, scales, seq=Z1, C=2):
    S = FiniteGroupSet(points, dim=seq.dim)
    table = dict(zip([tuple(p) if not isinstance(p, int) else (p,) for p in points], scales))
    return S, table, vitali_cover(S, table, seq, C)


def test_single_point():
    S, table, res = run([(4,)], [3])
    assert [t.center for t in res.tiles] == [element(4)]
    assert res.K.tuples() == {(4,), (5,), (6,)}
    assert 2 * len(res.K) >= len(S.tuples() | res.K.tuples())
    assert verify_vitali(res, S, table, 2, Z1).ok


def test_two_disjoint_tiles():
    S, table, res = run([0, 5], [3, 3])
    assert [t.center.coords for t in res.tiles] == [(0,), (5,)]
    assert res.K.tuples() == {(0,), (1,), (2,), (5,), (6,), (7,)}
    assert res.certificate == 1
    # dominated set after both steps: {-2..2} from the first, {3..7} from the second
    assert res.D.tuples() == {(x,) for x in range(-2, 8)}
    assert verify_vitali(res, S, table, 2, Z1).ok


def test_larger_scale_first_and_domination():
    S, table, res = run([0, 1], [2, 3])
    assert [(t.center.coords, t.scale) for t in res.tiles] == [((1,), 3)]
    assert res.K.tuples() == {(1,), (2,), (3,)}
    assert res.D.tuples() == {(x,) for x in range(-1, 4)}
    assert len(S.tuples() | res.K.tuples()) == 4
    assert res.certificate == pytest.approx(3 / 4) and res.certificate.denominator == 4
    assert verify_vitali(res, S, table, 2, Z1).ok


def test_tile_record():
    _, _, res = run([0, 5], [3, 3])
    assert res.tiles[0].as_record() == {"center": [0], "scale": 3, "footprint_size": 3}


def test_missing_scale_is_an_error():
    S = FiniteGroupSet([0, 1])
    with pytest.raises(ScaleError):
        vitali_cover(S, {(0,): 2}, Z1, 2)


def test_scale_beyond_prefix():
    short = FolnerSequence(1, lambda n: FiniteGroupSet.box((0,), (n,)), name="short", max_index=4)
    with pytest.raises(ScaleError):
        vitali_cover(FiniteGroupSet([0]), {(0,): 5}, short, 2)


def test_nonpositive_scale():
    with pytest.raises(ScaleError):
        vitali_cover(FiniteGroupSet([0]), {(0,): 0}, Z1, 2)


def test_empty_seed_set():
    res = vitali_cover(FiniteGroupSet.empty(2), {}, Z2, 4)
    assert res.tiles == [] and len(res.K) == 0


# -- negative controls for the verifier -------------------------------------

def test_verifier_flags_overlap():
    S, table, res = run([0, 5], [3, 3])
    extra = Tile(element(1), 3, Z1.folner_set(3).translate(element(1)))
    bad = dataclasses.replace(res, tiles=res.tiles + [extra], K=res.K.union(extra.footprint))
    v = verify_vitali(bad, S, table, 2)
    assert not v.ok
    assert any(s.startswith("disjointness") for s in v.violations)


def test_verifier_flags_shrunk_K():
    S = FiniteGroupSet([0, 1, 2, 3, 4, 5])
    table = {(x,): 1 for x in range(6)}
    res = vitali_cover(S, table, Z1, 2)
    assert verify_vitali(res, S, table, 2).ok
    keep = res.tiles[:2]
    K = FiniteGroupSet.empty(1).union(*[t.footprint for t in keep])
    bad = dataclasses.replace(res, tiles=keep, K=K)
    v = verify_vitali(bad, S, table, 2)
    assert not v.ok
    assert any(s.startswith("packing") for s in v.violations)


def test_verifier_flags_wrong_scale_and_non_seed():
    S, table, res = run([0, 5], [3, 3])
    moved = Tile(element(20), 3, Z1.folner_set(3).translate(element(20)))
    bad = dataclasses.replace(res, tiles=[res.tiles[0], moved], K=res.tiles[0].footprint.union(moved.footprint))
    v = verify_vitali(bad, S, table, 2)
    assert any("not a seed" in s for s in v.violations)
    relabel = dataclasses.replace(res.tiles[0], scale=2)
    v = verify_vitali(dataclasses.replace(res, tiles=[relabel, res.tiles[1]]), S, table, 2, Z1)
    assert any("scale" in s for s in v.violations)


def test_verifier_flags_tempelman_hypothesis():
    S, table, res = run([0, 5], [3, 3], C=1)
    v = verify_vitali(res, S, table, 1, Z1)
    assert any(s.startswith("hypothesis") for s in v.violations)


# -- properties -------------------------------------------------------------

def instances(d, max_points=30, max_scale=6, span=25):
    pts = st.sets(st.tuples(*[st.integers(-span, span)] * d), min_size=1, max_size=max_points)
    return pts.flatmap(lambda P: st.tuples(
        st.just(sorted(P)), st.lists(st.integers(1, max_scale), min_size=len(P), max_size=len(P))))


def _footprint(seq):
    return lambda t: seq.folner_set(t).tuples()


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(st.just(d), instances(d))))
def test_matches_literal_greedy(args):
    d, (pts, scales) = args
    seq = FolnerSequence.box(d)
    table = dict(zip(pts, scales))
    res = vitali_cover(FiniteGroupSet(pts, dim=d), table, seq, 2 ** d)
    chosen, K, D = greedy_vitali(pts, table, _footprint(seq))
    assert [t.center.coords for t in res.tiles] == chosen
    assert res.K.tuples() == K
    assert res.D.tuples() == D


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(st.just(d), instances(d, 50, 8))))
def test_invariants(args):
    d, (pts, scales) = args
    seq = FolnerSequence.box(d)
    C = 2 ** d
    S = FiniteGroupSet(pts, dim=d)
    table = dict(zip(pts, scales))
    res = vitali_cover(S, table, seq, C)
    assert verify_vitali(res, S, table, C, seq).ok
    # disjointness and packing, recounted here on plain sets
    cells = [t.footprint.tuples() for t in res.tiles]
    assert sum(len(c) for c in cells) == len(set().union(*cells))
    assert C * len(res.K) >= len(set(pts) | res.K.tuples())
    got = [t.scale for t in res.tiles]
    assert got == sorted(got, reverse=True)
    assert set(pts) <= res.D.tuples()
    again = vitali_cover(FiniteGroupSet(list(reversed(pts)), dim=d), table, seq, C)
    assert [(t.center, t.scale) for t in again.tiles] == [(t.center, t.scale) for t in res.tiles]


@settings(max_examples=60, deadline=None)
@given(instances(1, 8, 3, 10))
def test_exhaustive_subfamily_oracle(inst):
    pts, scales = inst
    check_against_subfamilies(pts, scales)


def check_against_subfamilies(pts, scales, C=2):
    """Greedy K is one of the disjoint subfamilies and meets the 1/C bound."""
    table = dict(zip(pts, scales))
    S = FiniteGroupSet(pts, dim=1)
    res = vitali_cover(S, table, Z1, C)
    tiles = [{(x[0] + f[0],) for f in box(table[x], 1)} for x in pts]
    families = dict(disjoint_subfamilies(tiles))
    chosen = sum(1 << pts.index(t.center.coords) for t in res.tiles)
    assert chosen in families and families[chosen] == res.K.tuples()
    union = len(set(pts) | res.K.tuples())
    assert C * len(res.K) >= union
    best = max(len(u) for u in families.values())
    assert best >= len(res.K)
    return res


def test_exhaustive_sweep_small_instances():
    rng = random.Random(2024)
    for _ in range(400):
        k = rng.randint(1, 8)
        pts = sorted((x,) for x in rng.sample(range(-6, 7), k))
        check_against_subfamilies(pts, [rng.randint(1, 3) for _ in pts])
