import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folnertile.foelner import (
    FamilyError,
    FolnerSequence,
    folner_ratio,
    folner_set,
    ratio_table,
    tempelman_report,
    tempered_report,
)
from folnertile.group import FiniteGroupSet, boundary, identity

from oracles import box, centered_box, naive_boundary, naive_union_ratio


def test_folner_set_examples():
    assert folner_set(FolnerSequence.box(1), 3).tuples() == {(0,), (1,), (2,)}
    assert folner_set(FolnerSequence.box(2), 2).tuples() == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert folner_set(FolnerSequence.box(1), 1).tuples() == {(0,)}


def test_folner_set_rejects_zero():
    with pytest.raises(FamilyError):
        FolnerSequence.box(1).folner_set(0)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_sizes_and_identity(d):
    seq = FolnerSequence.box(d)
    for n in range(1, 6):
        F = seq.folner_set(n)
        assert len(F) == n ** d == seq.size(n)
        assert identity(d) in F
        assert F.tuples() == box(n, d)


def test_centered_family():
    seq = FolnerSequence.centered(2)
    assert seq.folner_set(3).tuples() == centered_box(3, 2)
    assert seq.check_increasing(6)


def test_named_family_rejects_unknown():
    with pytest.raises(FamilyError):
        FolnerSequence.named("balls", 2)


@pytest.mark.parametrize("seq", [FolnerSequence.box(1), FolnerSequence.box(2), FolnerSequence.centered(2)])
def test_increasing(seq):
    assert seq.check_increasing(8)
    for k, n in itertools.combinations(range(1, 8), 2):
        assert seq.folner_set(k).issubset(seq.folner_set(n))


def test_custom_generator_checked_for_monotonicity():
    shrinking = FolnerSequence(1, lambda n: FiniteGroupSet([n]), name="moving")
    assert not shrinking.check_increasing(3)


def test_folner_ratio_examples():
    R = FiniteGroupSet([-1, 0, 1])
    seq = FolnerSequence.box(1)
    # boundary of [0,10) is {-1, 0, 9, 10}
    assert folner_ratio(seq, R, 10) == Fraction(4, 10)
    assert folner_ratio(seq, FiniteGroupSet([0]), 7) == 0


def test_folner_ratio_square_against_enumeration():
    seq = FolnerSequence.box(2)
    R = FiniteGroupSet(itertools.product((-1, 0, 1), repeat=2))
    prev = None
    for n in (10, 20, 40):
        r = folner_ratio(seq, R, n)
        assert r == Fraction(len(naive_boundary(R.tuples(), box(n, 2))), n * n)
        assert r < Fraction(4 * (2 * n + 2), n * n)
        if prev is not None:
            assert r < prev
        prev = r


@pytest.mark.parametrize("d,m,n", [(1, 4, 9), (1, 7, 3), (2, 3, 5), (2, 5, 2), (3, 2, 3), (2, 1, 4)])
def test_closed_form_boundary_matches_enumeration(d, m, n):
    seq = FolnerSequence.box(d)
    assert seq.boundary_size(m, n) == len(naive_boundary(box(m, d), box(n, d)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(1, 9), st.integers(1, 12))
def test_closed_form_boundary_property(d, m, n):
    seq = FolnerSequence.box(d)
    direct = boundary(seq.folner_set(m), seq.folner_set(n))
    assert seq.boundary_size(m, n) == len(direct)


# -- Tempelman / tempered ---------------------------------------------------

def test_tempelman_d1_prefix64():
    rep = tempelman_report(FolnerSequence.box(1), 64)
    for n in range(1, 65):
        assert rep.ratios[n - 1] == Fraction(2 * n - 1, n)
    assert rep.sup_ratio == Fraction(127, 64)
    assert rep.least_integer_C == 2
    assert rep.analytic_constant == 2
    assert rep.label == "prefix evidence"


def test_tempelman_d2_prefix16_against_oracle():
    rep = tempelman_report(FolnerSequence.box(2), 16)
    sets = [box(n, 2) for n in range(1, 17)]
    for n in range(1, 17):
        assert rep.ratios[n - 1] == naive_union_ratio(sets, n) == Fraction(2 * n - 1, n) ** 2
    assert rep.least_integer_C == 4


def test_tempelman_prefix_one():
    for d in (1, 2, 3):
        rep = tempelman_report(FolnerSequence.box(d), 1)
        assert rep.ratios == [1] and rep.least_integer_C == 1


def test_tempered_examples():
    rep = tempered_report(FolnerSequence.box(1), 64)
    assert rep.ratios[0] == 0
    for n in range(2, 65):
        assert rep.ratios[n - 1] == Fraction(2 * n - 2, n)
    assert rep.least_integer_C == 2
    one = tempered_report(FolnerSequence.box(1), 1)
    assert one.ratios == [0] and one.least_integer_C == 0


def test_report_rejects_empty_prefix():
    with pytest.raises(FamilyError):
        tempelman_report(FolnerSequence.box(1), 0)


@pytest.mark.parametrize("d,N", [(1, 20), (2, 8), (3, 4)])
def test_tempered_below_tempelman_below_2d(d, N):
    seq = FolnerSequence.box(d)
    t, s = tempelman_report(seq, N), tempered_report(seq, N)
    sets = [box(n, d) for n in range(1, N + 1)]
    for n in range(1, N + 1):
        assert s.ratios[n - 1] <= t.ratios[n - 1] <= 2 ** d
        assert s.ratios[n - 1] == naive_union_ratio(sets, n, strict=True)


def test_centered_family_report_matches_oracle():
    seq = FolnerSequence.centered(1)
    rep = tempelman_report(seq, 10)
    sets = [centered_box(n, 1) for n in range(1, 11)]
    assert rep.ratios == [naive_union_ratio(sets, n) for n in range(1, 11)]
    assert rep.analytic_constant == 2
    assert rep.least_integer_C == 2


def test_ratio_table_rows():
    _, _, rows = ratio_table(FolnerSequence.box(1), 3)
    assert rows == [(1, 1, 1, 1, 0, 1), (2, 2, 3, 2, 1, 1), (3, 3, 5, 3, 4, 3)]


def test_tempelman_ratio_cache_agrees():
    seq = FolnerSequence.box(2)
    rep = tempelman_report(seq, 6)
    assert [seq.tempelman_ratio(n) for n in range(1, 7)] == rep.ratios


def test_folner_ratio_nonincreasing_beyond_R():
    seq = FolnerSequence.box(2)
    R = FiniteGroupSet(itertools.product((-2, -1, 0, 1, 2), repeat=2))
    vals = [folner_ratio(seq, R, n) for n in range(3, 30, 3)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
