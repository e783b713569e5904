"""Interval sieve vs naive scans, plus the counting conventions."""

from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from timesb.cantor import (
    DigitSet,
    count_members_up_to,
    count_report,
    enumerate_members,
    member,
    reduced_members_up_to,
)
from timesb.errors import PreconditionError
from timesb.sieve import _simplest_batch, limit_depth, members_up_to


def naive_members(ds: DigitSet, T: int) -> list[Fraction]:
    return sorted(
        Fraction(a, d)
        for d in range(1, T + 1)
        for a in range(d + 1)
        if gcd(a, d) == 1 and member(ds, Fraction(a, d))
    )


def test_simplest_fraction_batch():
    # closed intervals [P/b^L, (P+1)/b^L] and their simplest fractions
    pref = np.array([30, 2, 0, 99], dtype=np.int64)
    num, den = _simplest_batch(pref[:1], 2, 10)  # [0.30, 0.31]
    assert (num[0], den[0]) == (3, 10)
    num, den = _simplest_batch(pref[1:2], 2, 3)  # [2/9, 3/9]
    assert (num[0], den[0]) == (1, 3)
    num, den = _simplest_batch(pref[2:3], 3, 2)  # [0, 1/8]
    assert (num[0], den[0]) == (0, 1)
    num, den = _simplest_batch(pref[3:4], 2, 10)  # [0.99, 1.00]
    assert (num[0], den[0]) == (1, 1)


def test_limit_depth():
    assert limit_depth(3, 1) == 1
    assert limit_depth(3, 9) == 5  # 3^4 = 81 = T^2, need strict
    assert limit_depth(2, 10) == 7
    assert limit_depth(10, 1000) == 7


@pytest.mark.parametrize(
    "base,digits,T",
    [
        (3, (0, 2), 200),
        (3, (0, 2), 81),
        (4, (0, 2, 3), 150),
        (2, (1,), 100),
        (5, (1, 3), 120),
        (10, (0, 3, 7, 9), 60),
        (6, (0, 5), 100),
        (4, (1, 2), 100),
    ],
)
def test_sieve_matches_naive_scan(base, digits, T):
    ds = DigitSet(base, digits)
    assert reduced_members_up_to(ds, T) == naive_members(ds, T)


def test_known_counts_middle_thirds():
    ds = DigitSet(3, (0, 2))
    assert len(reduced_members_up_to(ds, 100)) == 116
    assert len(reduced_members_up_to(ds, 600)) == 498


def test_sieve_matches_coset_enumeration():
    ds = DigitSet(3, (0, 2))
    got = set(reduced_members_up_to(ds, 400))
    via_cosets = {x for x, _ in enumerate_members(ds, range(1, 401))}
    assert got == via_cosets


def test_jobs_do_not_change_output():
    ds = DigitSet(3, (0, 2))
    assert reduced_members_up_to(ds, 500, jobs=1) == reduced_members_up_to(
        ds, 500, jobs=2
    )


def test_dual_expansion_members_found():
    # 3/4 = 0.30(0) = 0.2(3) in base 4: only the second expansion stays in
    # the digit set, and 3/4 sits on an interval boundary of the tree
    ds = DigitSet(4, (0, 2, 3))
    assert Fraction(3, 4) in reduced_members_up_to(ds, 10)
    ds2 = DigitSet(4, (0, 3))
    assert Fraction(1, 4) in reduced_members_up_to(ds2, 10)
    assert Fraction(1, 3) in reduced_members_up_to(DigitSet(3, (0, 2)), 5)


@settings(deadline=None, max_examples=25)
@given(st.data())
def test_sieve_matches_naive_randomized(data):
    base = data.draw(st.integers(min_value=2, max_value=7))
    digits = data.draw(
        st.sets(st.integers(0, base - 1), min_size=1, max_size=base - 1)
    )
    T = data.draw(st.integers(min_value=1, max_value=60))
    ds = DigitSet(base, tuple(digits))
    assert reduced_members_up_to(ds, T) == naive_members(ds, T)


def test_count_report_rows():
    ds = DigitSet(3, (0, 2))
    assert count_report(ds, 4).csv_rows() == [
        (4, 6, 12, "true"),
        (4, 4, 4, "false"),
    ]
    assert count_report(ds, 1).csv_rows() == [
        (1, 2, 2, "true"),
        (1, 0, 0, "false"),
    ]
    csv = count_report(ds, 4).to_csv()
    assert csv.splitlines()[0] == "T,count_reduced,count_all,includes_endpoints"
    assert csv.splitlines()[1] == "4,6,12,true"


def test_count_members_up_to_flags():
    ds = DigitSet(3, (0, 2))
    assert count_members_up_to(ds, 1) == 2
    # members at T = 4: 0, 1, 1/4, 3/4 and the dual-expansion pair 1/3, 2/3
    assert count_members_up_to(ds, 4) == 6
    assert count_members_up_to(ds, 4, include_endpoints=False) == 4
    assert count_members_up_to(ds, 4, reduced_only=False) == 12
    assert count_members_up_to(ds, 100) == 116
    # denominators coprime to 3 only: drops 1/3, 2/3 at T = 4
    assert count_members_up_to(ds, 4, coprime_to_b_only=True) == 4


def test_count_all_convention_by_hand():
    # every pair (a, d), 0 <= a <= d <= T, counted when a/d is a member
    ds = DigitSet(3, (0, 2))
    T = 12
    pairs = sum(
        1
        for d in range(1, T + 1)
        for a in range(d + 1)
        if member(ds, Fraction(a, d))
    )
    assert count_members_up_to(ds, T, reduced_only=False) == pairs
    coprime_pairs = sum(
        1
        for d in range(1, T + 1)
        if gcd(d, 3) == 1
        for a in range(d + 1)
        if member(ds, Fraction(a, d))
    )
    assert (
        count_members_up_to(ds, T, reduced_only=False, coprime_to_b_only=True)
        == coprime_pairs
    )


def test_full_digit_set_closed_form():
    full = DigitSet(3, (0, 1, 2))
    for T in (1, 7, 50):
        for cop in (False, True):
            rep = count_report(full, T, coprime_to_b_only=cop)
            dens = [d for d in range(1, T + 1) if not cop or gcd(d, 3) == 1]
            reduced = sum(
                1 for d in dens for a in range(d + 1) if gcd(a, d) == 1
            )
            assert rep.reduced_with == reduced
            assert rep.reduced_without == reduced - 2
            assert rep.all_with == sum(d + 1 for d in dens)
            assert rep.all_without == sum(d - 1 for d in dens)


def test_rejections():
    ds = DigitSet(3, (0, 2))
    with pytest.raises(PreconditionError):
        count_report(ds, 0)
    with pytest.raises(PreconditionError):
        members_up_to(3, (0, 1, 2), 10, lambda n, d: True)
    with pytest.raises(PreconditionError):
        members_up_to(3, (0, 3), 10, lambda n, d: True)
    with pytest.raises(PreconditionError):
        members_up_to(3, (0, 2), 10, lambda n, d: True, jobs=0)
