import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folnertile.group import (
    DimensionError,
    FiniteGroupSet,
    GroupElement,
    average,
    boundary,
    compose,
    element,
    identity,
    inverse,
    set_inverse,
    set_product,
)

from oracles import naive_boundary


def coords(d, lo=-6, hi=6):
    return st.tuples(*[st.integers(lo, hi)] * d)


def point_sets(d, max_size=20, min_size=0, lo=-6, hi=6):
    return st.sets(coords(d, lo, hi), min_size=min_size, max_size=max_size)


# -- elements ---------------------------------------------------------------

def test_compose_examples():
    assert compose(element(1, 2), element(3, -1)) == element(4, 1)
    assert compose(identity(2), element(5, 7)) == element(5, 7)
    a = element(-3, 4)
    assert a * inverse(a) == identity(2)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionError):
        compose(element(1), element(1, 2))


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(coords(d), coords(d), coords(d))))
def test_group_axioms(triple):
    a, b, c = (GroupElement(t) for t in triple)
    e = identity(a.dim)
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * a.inverse() == e == a.inverse() * a


# -- sets -------------------------------------------------------------------

def test_set_inverse_examples():
    assert set_inverse(FiniteGroupSet([0, 1, 2])) == FiniteGroupSet([0, -1, -2])
    assert set_inverse(FiniteGroupSet.empty(1)) == FiniteGroupSet.empty(1)
    assert set_inverse(FiniteGroupSet([(1, 1)])) == FiniteGroupSet([(-1, -1)])


def test_set_product_examples():
    two = FiniteGroupSet.box((0,), (2,))
    assert set_product(two, two) == FiniteGroupSet([0, 1, 2])
    A = FiniteGroupSet([(3, 1), (0, -2), (5, 5)])
    assert set_product(A, FiniteGroupSet([identity(2)])) == A
    # all 6 sums of {-1,0} and {0,1,2}, deduplicated: the largest is 0 + 2
    sums = {a + b for a in (-1, 0) for b in (0, 1, 2)}
    assert sums == {-1, 0, 1, 2}
    assert set_product(FiniteGroupSet([-1, 0]), FiniteGroupSet([0, 1, 2])) == FiniteGroupSet(sorted(sums))


def test_set_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        set_product(FiniteGroupSet([1]), FiniteGroupSet([(1, 1)]))


@settings(max_examples=150)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(point_sets(d, 12), point_sets(d, 12), st.just(d))))
def test_set_product_matches_double_loop(args):
    A, B, d = args
    expect = {tuple(x + y for x, y in zip(a, b)) for a in A for b in B}
    got = set_product(FiniteGroupSet(A, dim=d), FiniteGroupSet(B, dim=d))
    assert got.tuples() == expect
    assert len(got) <= len(A) * len(B)


def test_set_product_of_boxes_is_box():
    A = FiniteGroupSet.box((0, -1), (3, 2))
    B = FiniteGroupSet.box((-2, 0), (1, 4))
    assert set_product(A, B) == FiniteGroupSet.box((-2, -1), (3, 5))


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(point_sets(d, 15), st.just(d))))
def test_inverse_involution_and_identity(args):
    A, d = args
    S = FiniteGroupSet(A, dim=d)
    assert set_inverse(set_inverse(S)) == S
    assert set_product(S, FiniteGroupSet([identity(d)])) == S


@given(point_sets(2, 25))
def test_canonical_order(A):
    rows = list(FiniteGroupSet(A, dim=2).tuples())
    S1 = FiniteGroupSet(list(A), dim=2)
    S2 = FiniteGroupSet(sorted(A, reverse=True), dim=2)
    assert [e.coords for e in S1] == [e.coords for e in S2] == sorted(rows)
    assert len(S1) == len(A)


def test_box_contents():
    assert FiniteGroupSet.box((0, 0), (2, 2)).tuples() == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert len(FiniteGroupSet.box((0,), (0,))) == 0


def test_set_operations():
    A = FiniteGroupSet([0, 1, 2, 3])
    B = FiniteGroupSet([2, 3, 4])
    assert A.union(B) == FiniteGroupSet(range(5))
    assert A.intersection(B) == FiniteGroupSet([2, 3])
    assert A.difference(B) == FiniteGroupSet([0, 1])
    assert FiniteGroupSet([2]).issubset(B) and not A.issubset(B)
    assert A.isdisjoint(FiniteGroupSet([7]))
    assert A.translate(element(10)) == FiniteGroupSet([10, 11, 12, 13])
    assert element(3) in A and (9,) not in A


def test_empty_set_needs_dim():
    with pytest.raises(DimensionError):
        FiniteGroupSet([])


# -- boundary ---------------------------------------------------------------

def test_boundary_interval():
    R = FiniteGroupSet([-1, 0, 1])
    S = FiniteGroupSet.box((0,), (10,))
    B = boundary(R, S)
    assert B == FiniteGroupSet([-1, 0, 9, 10])
    assert B.tuples() == naive_boundary(R.tuples(), S.tuples())


def test_boundary_singleton_R_is_empty():
    S = FiniteGroupSet([(0, 0), (3, 1), (-2, 5)])
    assert len(boundary(FiniteGroupSet([identity(2)]), S)) == 0


def test_boundary_square_frame():
    R = FiniteGroupSet(itertools.product((-1, 0, 1), repeat=2))
    S = FiniteGroupSet.box((0, 0), (4, 4))
    expect = {s for s in itertools.product(range(-2, 6), repeat=2)
              if any((s[0] + a, s[1] + b) in S.tuples() for a, b in R.tuples())
              and any((s[0] + a, s[1] + b) not in S.tuples() for a, b in R.tuples())}
    got = boundary(R, S)
    assert got.tuples() == expect
    # the 6x6 ring outside plus the 4x4 ring inside: 36 - 4 = 32
    assert len(got) == 32


def test_boundary_empty_R():
    with pytest.raises(ValueError):
        boundary(FiniteGroupSet.empty(1), FiniteGroupSet([1]))


def test_boundary_hint_only_prunes():
    R = FiniteGroupSet([-1, 0, 1])
    S = FiniteGroupSet.box((0,), (10,))
    full = boundary(R, S)
    hint = FiniteGroupSet.box((-5,), (15,))
    assert boundary(R, S, hint) == full


@settings(max_examples=300)
@given(st.integers(1, 2).flatmap(
    lambda d: st.tuples(point_sets(d, 20, 1, -3, 3), point_sets(d, 20, 0), st.just(d))))
def test_boundary_matches_naive(args):
    R, S, d = args
    got = boundary(FiniteGroupSet(R, dim=d), FiniteGroupSet(S, dim=d))
    assert got.tuples() == naive_boundary(R, S)


@settings(max_examples=150)
@given(st.integers(1, 2).flatmap(
    lambda d: st.tuples(point_sets(d, 10, 0, -3, 3), point_sets(d, 10, 0, -3, 3), point_sets(d, 20), st.just(d))))
def test_boundary_monotone_in_R(args):
    R, extra, S, d = args
    e = (0,) * d
    small = FiniteGroupSet(R | {e}, dim=d)
    big = FiniteGroupSet(R | extra | {e}, dim=d)
    Sset = FiniteGroupSet(S, dim=d)
    assert boundary(small, Sset).issubset(boundary(big, Sset))


# -- averages ---------------------------------------------------------------

def test_average_examples():
    A = FiniteGroupSet(range(10))
    assert average(lambda g: 2.5, A) == 2.5
    B = {0, 3, 7}
    assert average(lambda g: float(g.coords[0] in B), A) == 3 / 10
    assert average(lambda g: g.coords[0], A) == 4.5


def test_average_errors():
    with pytest.raises(ValueError):
        average(lambda g: 1.0, FiniteGroupSet.empty(1))
    with pytest.raises(ValueError):
        average(lambda g: None if g.coords[0] == 2 else 1.0, FiniteGroupSet(range(4)))


@given(point_sets(2, 30, 1), st.integers(0, 2 ** 32 - 1))
def test_average_within_range(A, salt):
    S = FiniteGroupSet(A, dim=2)
    rng = np.random.default_rng(salt)
    table = {a: float(rng.normal()) for a in A}
    avg = average(lambda g: table[g.coords], S)
    lo, hi = min(table.values()), max(table.values())
    assert lo - 1e-12 <= avg <= hi + 1e-12
