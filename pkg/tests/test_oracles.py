"""Sanity checks for the independent oracles used by the acceptance suite.

The oracles deliberately avoid importing the package internals, so they need
their own evidence of correctness.  Everything here compares them against
brute force on sizes small enough to enumerate.
"""

import itertools
from fractions import Fraction

from hypothesis import given, settings, strategies as st

import oracles
from timesb.cantor import DigitSet, member


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_member_mask_matches_package(data):
    base = data.draw(st.integers(min_value=2, max_value=6))
    digits = tuple(
        sorted(
            data.draw(
                st.sets(
                    st.integers(min_value=0, max_value=base - 1),
                    min_size=1,
                    max_size=base - 1,
                )
            )
        )
    )
    den = data.draw(st.integers(min_value=2, max_value=80))
    from math import gcd

    if gcd(den, base) != 1:
        return
    ds = DigitSet(base, digits)
    # the mask classifies fractional parts, so it speaks for 0 <= num < den;
    # the point 1 has its own expansion and is outside the oracle's contract
    mask = oracles.member_mask(base, digits, den)
    for num in range(den):
        expected = member(ds, Fraction(num, den))
        assert bool(mask[num]) == expected, (base, digits, num, den)


def _brute_allowed(digits, base, length):
    vals = []
    for combo in itertools.product(digits, repeat=length):
        v = 0
        for d in combo:
            v = v * base + d
        vals.append(v)
    return sorted(set(vals))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_allowed_neighbors_match_brute(data):
    base = data.draw(st.integers(min_value=2, max_value=5))
    digits = tuple(
        sorted(
            data.draw(
                st.sets(st.integers(min_value=0, max_value=base - 1), min_size=1)
            )
        )
    )
    length = data.draw(st.integers(min_value=1, max_value=4))
    W = data.draw(st.integers(min_value=-2, max_value=base**length + 2))
    vals = _brute_allowed(digits, base, length)
    below = [v for v in vals if v <= W]
    above = [v for v in vals if v >= W]
    assert oracles.largest_allowed_leq(digits, base, length, W) == (
        max(below) if below else None
    )
    assert oracles.smallest_allowed_geq(digits, base, length, W) == (
        min(above) if above else None
    )


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_approx_dist_matches_brute(data):
    base = data.draw(st.integers(min_value=2, max_value=4))
    digits = tuple(
        sorted(
            data.draw(
                st.sets(st.integers(min_value=0, max_value=base - 1), min_size=1)
            )
        )
    )
    depth = data.draw(st.integers(min_value=1, max_value=3))
    grid_den = 16
    i = data.draw(st.integers(min_value=0, max_value=grid_den))
    x = Fraction(i, grid_den)
    best = None
    for v in _brute_allowed(digits, base, depth):
        lo = Fraction(v, base**depth)
        hi = Fraction(v + 1, base**depth)
        d = Fraction(0) if lo <= x <= hi else min(abs(x - lo), abs(x - hi))
        if best is None or d < best:
            best = d
    scaled = oracles.approx_dist_scaled(base, digits, depth, grid_den, i)
    assert Fraction(scaled, base**depth * grid_den) == best
