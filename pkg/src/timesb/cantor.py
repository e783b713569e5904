"""Digit-restricted Cantor sets and the rationals inside them.

C(base, digits) is the set of reals in [0,1] admitting SOME base-b expansion
whose digits all lie in the given subset. Terminating rationals have two
expansions (0.1(0) = 0.0(2) in base 3) and either one may certify membership,
which is why 1/3 belongs to the middle-thirds set.

The headline computations: the exact sup-distance from [0,1] to the set (its
non-density radius), enumeration of all members over given denominators, and
a finiteness certificate for members whose denominators factor over a fixed
prime set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator

import numpy as np

from .errors import PreconditionError
from .orbit import density_bound
from .orders import OrderProfile
from .rational import frac_str
from .sieve import members_up_to


@dataclass(frozen=True)
class DigitSet:
    """A base together with the allowed digit subset."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise PreconditionError(f"base must be >= 2, got {self.base}")
        digs = tuple(sorted(set(int(d) for d in self.digits)))
        if not digs:
            raise PreconditionError("digit set must be non-empty")
        if digs[0] < 0 or digs[-1] >= self.base:
            raise PreconditionError(
                f"digits {digs} outside range 0..{self.base - 1}"
            )
        object.__setattr__(self, "digits", digs)

    @property
    def is_full(self) -> bool:
        return len(self.digits) == self.base

    @cached_property
    def _good(self) -> tuple[bool, ...]:
        table = [False] * self.base
        for d in self.digits:
            table[d] = True
        return tuple(table)

    @property
    def missing_run(self) -> int:
        """Length of the longest run of consecutive absent digits."""
        best = run = 0
        for d in range(self.base):
            run = run + 1 if not self._good[d] else 0
            best = max(best, run)
        return best

    @property
    def epsilon_claimed(self) -> Fraction:
        """The folklore non-density radius m/(2b); epsilon_exact can exceed it."""
        return Fraction(self.missing_run, 2 * self.base)

    @cached_property
    def epsilon_exact(self) -> Fraction:
        return sup_distance(self)

    @property
    def min_value(self) -> Fraction:
        return Fraction(self.digits[0], self.base - 1)

    @property
    def max_value(self) -> Fraction:
        return Fraction(self.digits[-1], self.base - 1)

    def to_json_dict(self) -> dict:
        return {"base": self.base, "digits": list(self.digits)}


def farthest_point(ds: DigitSet) -> tuple[Fraction, Fraction]:
    """A point of [0,1] at maximal distance from the set, with that distance.

    Candidates: 0 (below the minimum element), 1 (above the maximum), and the
    midpoint of each first-level gap between consecutive allowed digits; gaps
    at deeper levels are scaled-down copies and never win.
    """
    b = ds.base
    lo_digit, hi_digit = ds.digits[0], ds.digits[-1]
    best_point, best_dist = Fraction(0), ds.min_value
    right = 1 - ds.max_value
    if right > best_dist:
        best_point, best_dist = Fraction(1), right
    span = Fraction(hi_digit - lo_digit, (b - 1) * b)
    for c, c_next in zip(ds.digits, ds.digits[1:]):
        gap = Fraction(c_next - c, b) - span
        if gap <= 0:
            continue
        half = gap / 2
        if half > best_dist:
            left_edge = Fraction(c, b) + Fraction(hi_digit, (b - 1) * b)
            best_point, best_dist = left_edge + half, half
    return best_point, best_dist


def sup_distance(ds: DigitSet) -> Fraction:
    """Exact sup over x in [0,1] of dist(x, C(base, digits)); 0 iff full set."""
    return farthest_point(ds)[1]


def longest_missing_interval(ds: DigitSet) -> tuple[Fraction, Fraction]:
    """Midpoint and half-length of the longest open interval disjoint from
    the set.

    Candidates are the end segments [0, min) and (max, 1] at full length and
    the first-level gaps between adjacent digit cylinders; deeper gaps are
    1/base-scaled copies and never win.  The half-length is the sound
    exclusion radius for finiteness certificates: an orbit whose lattice
    spacing is finer than the full length must place a point strictly inside
    the interval, while a member's orbit never leaves the set.  Note the end
    segments enter at full length here but at full length as *distances* in
    farthest_point, so this radius can be smaller than sup_distance.
    """
    b = ds.base
    lo_digit, hi_digit = ds.digits[0], ds.digits[-1]
    best_len = ds.min_value
    best_mid = ds.min_value / 2
    top = 1 - ds.max_value
    if top > best_len:
        best_len, best_mid = top, (1 + ds.max_value) / 2
    span = Fraction(hi_digit - lo_digit, (b - 1) * b)
    for c, c_next in zip(ds.digits, ds.digits[1:]):
        gap = Fraction(c_next - c, b) - span
        if gap > best_len:
            left_edge = Fraction(c, b) + Fraction(hi_digit, (b - 1) * b)
            best_len, best_mid = gap, left_edge + gap / 2
    return best_mid, best_len / 2


@dataclass(frozen=True)
class ExpansionInfo:
    """Canonical eventually periodic expansion: minimal preperiod, then the
    shortest period. Terminating values carry period (0,)."""

    base: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise PreconditionError("period must be non-empty")
        for d in self.preperiod + self.period:
            if not 0 <= d < self.base:
                raise PreconditionError(f"digit {d} outside base {self.base}")

    def value(self) -> Fraction:
        b = self.base
        head = 0
        for d in self.preperiod:
            head = head * b + d
        tail = 0
        for d in self.period:
            tail = tail * b + d
        m = len(self.period)
        return (head + Fraction(tail, b**m - 1)) / b ** len(self.preperiod)

    def all_digits(self) -> frozenset:
        return frozenset(self.preperiod) | frozenset(self.period)

    def to_json_dict(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}


def expand(base: int, x: Fraction) -> ExpansionInfo:
    """Greedy (long division) base-b expansion of x in [0,1)."""
    if base < 2:
        raise PreconditionError(f"base must be >= 2, got {base}")
    if x < 0 or x >= 1:
        raise PreconditionError(f"{frac_str(x)} outside [0,1)")
    num, den = x.numerator, x.denominator
    seen: dict[int, int] = {}
    digits: list[int] = []
    r = num
    while r not in seen:
        seen[r] = len(digits)
        t = r * base
        digits.append(t // den)
        r = t % den
    cut = seen[r]
    return ExpansionInfo(
        base=base, preperiod=tuple(digits[:cut]), period=tuple(digits[cut:])
    )


def dual_expansion(info: ExpansionInfo) -> ExpansionInfo | None:
    """The other expansion of a terminating value, or None.

    0.d1..dk(0) equals 0.d1..(dk-1)(b-1); only terminating values (canonical
    period (0,)) with a non-empty preperiod have one.
    """
    if info.period != (0,) or not info.preperiod:
        return None
    head = info.preperiod
    return ExpansionInfo(
        base=info.base,
        preperiod=head[:-1] + (head[-1] - 1,),
        period=(info.base - 1,),
    )


def member_witness(ds: DigitSet, x: Fraction) -> ExpansionInfo | None:
    """An expansion of x using only allowed digits, or None if no such exists."""
    if x < 0 or x > 1:
        raise PreconditionError(f"{frac_str(x)} outside [0,1]")
    b = ds.base
    if x == 1:
        if ds._good[b - 1]:
            return ExpansionInfo(base=b, preperiod=(), period=(b - 1,))
        return None
    info = expand(b, x)
    if all(ds._good[d] for d in info.all_digits()):
        return info
    dual = dual_expansion(info)
    if dual is not None and all(ds._good[d] for d in dual.all_digits()):
        return dual
    return None


def member(ds: DigitSet, x: Fraction) -> bool:
    """Whether SOME base-b expansion of x uses only allowed digits."""
    return member_witness(ds, x) is not None


def _coset_members(ds: DigitSet, d: int) -> list[tuple[int, tuple[int, ...]]]:
    # gcd(d, base) = 1 and d > 1: every reduced a/d is purely periodic and the
    # multiplication-by-base orbit of a numerator cycles through the digit
    # rotations, so one walk settles membership for the whole coset.
    b = ds.base
    good = ds._good
    visited = bytearray(d)
    out: list[tuple[int, tuple[int, ...]]] = []
    for a0 in range(1, d):
        if visited[a0] or gcd(a0, d) != 1:
            continue
        coset: list[int] = []
        digs: list[int] = []
        ok = True
        a = a0
        while not visited[a]:
            visited[a] = 1
            coset.append(a)
            t = b * a
            dig = t // d
            if not good[dig]:
                ok = False
            digs.append(dig)
            a = t % d
        if ok:
            for i, a_i in enumerate(coset):
                out.append((a_i, tuple(digs[i:] + digs[:i])))
    out.sort()
    return out


def _endpoint_members(ds: DigitSet) -> list[tuple[Fraction, ExpansionInfo]]:
    found = []
    if ds._good[0]:
        found.append((Fraction(0), ExpansionInfo(base=ds.base, preperiod=(), period=(0,))))
    if ds._good[ds.base - 1]:
        found.append(
            (Fraction(1), ExpansionInfo(base=ds.base, preperiod=(), period=(ds.base - 1,)))
        )
    return found


def enumerate_members(
    ds: DigitSet, denominators: Iterable[int]
) -> Iterator[tuple[Fraction, ExpansionInfo]]:
    """All reduced members a/d over the given distinct denominators.

    Yields (fraction, certifying expansion) pairs, denominators in the given
    order, numerators ascending. Denominator 1 contributes the endpoints.
    """
    seen: set[int] = set()
    for d in denominators:
        if d < 1:
            raise PreconditionError(f"denominator must be >= 1, got {d}")
        if d in seen:
            raise PreconditionError(f"duplicate denominator {d}")
        seen.add(d)
        if d == 1:
            yield from _endpoint_members(ds)
        elif gcd(d, ds.base) == 1:
            for a, period in _coset_members(ds, d):
                yield Fraction(a, d), ExpansionInfo(
                    base=ds.base, preperiod=(), period=period
                )
        else:
            for a in range(1, d):
                if gcd(a, d) != 1:
                    continue
                w = member_witness(ds, Fraction(a, d))
                if w is not None:
                    yield Fraction(a, d), w


def smooth_denominators(primes: Iterable[int], limit: int) -> list[int]:
    """All products of powers of the given primes that are <= limit, sorted."""
    if limit < 1:
        return []
    vals = [1]
    for p in sorted(set(primes)):
        if p < 2:
            raise PreconditionError(f"invalid prime {p}")
        grown = []
        for v in vals:
            x = v * p
            while x <= limit:
                grown.append(x)
                x *= p
        vals.extend(grown)
    return sorted(vals)


@dataclass(frozen=True)
class SIntegerCertificate:
    """Exhaustive list of members with S-smooth denominator, plus the reason
    no larger denominator can occur."""

    digit_set: DigitSet
    profile: OrderProfile
    epsilon: Fraction
    bound: Fraction
    max_denominator: int
    denominator_count: int
    members: tuple[tuple[Fraction, ExpansionInfo], ...]
    witness: Fraction
    witness_distance: Fraction

    @property
    def count_with_endpoints(self) -> int:
        return len(self.members)

    @property
    def count_without_endpoints(self) -> int:
        return sum(1 for x, _ in self.members if 0 < x < 1)

    def to_json_dict(self) -> dict:
        ds = self.digit_set
        return {
            "base": ds.base,
            "digits": list(ds.digits),
            "primes": list(self.profile.primes),
            "epsilon": frac_str(self.epsilon),
            "epsilon_exact": frac_str(ds.epsilon_exact),
            "epsilon_claimed": frac_str(ds.epsilon_claimed),
            "epsilon_discrepancy": ds.epsilon_exact != ds.epsilon_claimed,
            "D": frac_str(self.bound),
            "max_denominator": self.max_denominator,
            "denominators_checked": self.denominator_count,
            "witness": frac_str(self.witness),
            "witness_distance": frac_str(self.witness_distance),
            "count_with_endpoints": self.count_with_endpoints,
            "count_without_endpoints": self.count_without_endpoints,
            "members": [
                {
                    "num": x.numerator,
                    "den": x.denominator,
                    "preperiod": list(w.preperiod),
                    "period": list(w.period),
                }
                for x, w in self.members
            ],
            "exclusion": (
                "a member's whole orbit stays inside the set, but any "
                "denominator over the listed primes exceeding D forces the "
                "orbit onto a lattice finer than the digit-free interval "
                "around the witness, placing an orbit point strictly inside "
                "it; so every member already appears in the list"
            ),
        }


def enumerate_s_integers(
    ds: DigitSet, profile: OrderProfile, epsilon: Fraction | None = None
) -> SIntegerCertificate:
    """Enumerate every member whose denominator factors over profile.primes.

    epsilon defaults to the exclusion radius (half the longest digit-free
    interval, end segments at full length); anything above the exact
    sup-distance is rejected outright.  A claimed epsilon between the two is
    accepted, but the enumeration bound is always computed from the sound
    radius so the member list stays complete: end segments only exclude
    denominators at their full length, not twice it.
    """
    if profile.base != ds.base:
        raise PreconditionError(
            f"profile base {profile.base} differs from digit set base {ds.base}"
        )
    witness, radius = longest_missing_interval(ds)
    if radius <= 0:
        raise PreconditionError(
            "full digit set: the target set is dense, no finiteness certificate"
        )
    eps = radius if epsilon is None else epsilon
    if eps <= 0:
        raise PreconditionError(f"epsilon must be positive, got {frac_str(eps)}")
    if eps > ds.epsilon_exact:
        raise PreconditionError(
            f"epsilon {frac_str(eps)} exceeds the exact non-density radius "
            f"{frac_str(ds.epsilon_exact)}; the certificate would be unsound"
        )
    bound = density_bound(profile, min(eps, radius))
    max_den = int(bound)
    dens = smooth_denominators(profile.primes, max_den)
    members = sorted(enumerate_members(ds, dens), key=lambda pair: pair[0])
    return SIntegerCertificate(
        digit_set=ds,
        profile=profile,
        epsilon=eps,
        bound=bound,
        max_denominator=max_den,
        denominator_count=len(dens),
        members=tuple(members),
        witness=witness,
        witness_distance=radius,
    )


def _count_coprime_upto(limit: int, base: int) -> int:
    """|{k : 1 <= k <= limit, gcd(k, base) = 1}| by inclusion-exclusion."""
    if limit <= 0:
        return 0
    primes = []
    b = base
    p = 2
    while p * p <= b:
        if b % p == 0:
            primes.append(p)
            while b % p == 0:
                b //= p
        p += 1
    if b > 1:
        primes.append(b)
    total = 0
    for bits in range(1 << len(primes)):
        d = 1
        sign = 1
        for i, q in enumerate(primes):
            if bits >> i & 1:
                d *= q
                sign = -sign
        total += sign * (limit // d)
    return total


def reduced_members_up_to(ds: DigitSet, T: int, jobs: int = 1) -> list[Fraction]:
    """All members with reduced denominator <= T, ascending.

    Uses the interval sieve, so it stays output-sensitive at large T; the
    full digit set is rejected there (everything is a member, enumerating
    ~0.3*T^2 fractions is pointless).
    """
    pairs = members_up_to(
        ds.base, ds.digits, T, lambda num, den: member(ds, Fraction(num, den)), jobs=jobs
    )
    return sorted(Fraction(int(n), int(d)) for n, d in pairs)


@dataclass(frozen=True)
class CountReport:
    """Member counts below a denominator bound, both endpoint conventions.

    count_reduced counts reduced fractions a/d with d <= T; count_all counts
    every pair (a, d) with 0 <= a <= d <= T whose value is a member, so each
    member x contributes floor(T / den(x)) pairs. Rows with
    includes_endpoints = false drop the values 0 and 1.
    """

    digit_set: DigitSet
    max_denominator: int
    coprime_to_b_only: bool
    reduced_with: int
    reduced_without: int
    all_with: int
    all_without: int

    def csv_rows(self) -> list[tuple]:
        T = self.max_denominator
        return [
            (T, self.reduced_with, self.all_with, "true"),
            (T, self.reduced_without, self.all_without, "false"),
        ]

    def to_csv(self) -> str:
        lines = ["T,count_reduced,count_all,includes_endpoints"]
        for row in self.csv_rows():
            lines.append(",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "base": self.digit_set.base,
            "digits": list(self.digit_set.digits),
            "T": self.max_denominator,
            "coprime_to_b_only": self.coprime_to_b_only,
            "count_reduced_with_endpoints": self.reduced_with,
            "count_reduced_without_endpoints": self.reduced_without,
            "count_all_with_endpoints": self.all_with,
            "count_all_without_endpoints": self.all_without,
        }


def _full_set_count(ds: DigitSet, T: int, coprime_to_b_only: bool) -> CountReport:
    # every fraction in [0,1] is a member; count with a totient sieve
    phi = np.arange(T + 1, dtype=np.int64)
    for p in range(2, T + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    dens = np.arange(T + 1, dtype=np.int64)
    if coprime_to_b_only:
        keep = np.gcd(dens, ds.base) == 1
    else:
        keep = np.ones(T + 1, dtype=bool)
    keep[0] = False
    n_dens = int(keep.sum())
    reduced_with = int(phi[keep][1:].sum()) + 2 if T >= 1 else 0
    all_with = int((dens[keep] + 1).sum())
    return CountReport(
        digit_set=ds,
        max_denominator=T,
        coprime_to_b_only=coprime_to_b_only,
        reduced_with=reduced_with,
        reduced_without=reduced_with - 2,
        all_with=all_with,
        all_without=all_with - 2 * n_dens,
    )


def count_report(
    ds: DigitSet, T: int, coprime_to_b_only: bool = False, jobs: int = 1
) -> CountReport:
    """Count members with denominator <= T under every reporting convention.

    Deterministic for any jobs value: the sieve canonicalizes its output
    before anything is counted.
    """
    if T < 1:
        raise PreconditionError(f"max denominator must be >= 1, got {T}")
    if ds.is_full:
        return _full_set_count(ds, T, coprime_to_b_only)
    members = reduced_members_up_to(ds, T, jobs=jobs)
    if coprime_to_b_only:
        members = [x for x in members if gcd(x.denominator, ds.base) == 1]
    reduced_with = len(members)
    endpoints = sum(1 for x in members if x.denominator == 1)
    all_with = 0
    all_endpoint_reps = 0
    for x in members:
        q = x.denominator
        if coprime_to_b_only:
            reps = _count_coprime_upto(T // q, ds.base)
        else:
            reps = T // q
        all_with += reps
        if q == 1:
            all_endpoint_reps += reps
    return CountReport(
        digit_set=ds,
        max_denominator=T,
        coprime_to_b_only=coprime_to_b_only,
        reduced_with=reduced_with,
        reduced_without=reduced_with - endpoints,
        all_with=all_with,
        all_without=all_with - all_endpoint_reps,
    )


def count_members_up_to(
    ds: DigitSet,
    T: int,
    reduced_only: bool = True,
    coprime_to_b_only: bool = False,
    include_endpoints: bool = True,
    jobs: int = 1,
) -> int:
    """Single count drawn out of a CountReport; see CountReport for meaning."""
    rep = count_report(ds, T, coprime_to_b_only=coprime_to_b_only, jobs=jobs)
    if reduced_only:
        return rep.reduced_with if include_endpoints else rep.reduced_without
    return rep.all_with if include_endpoints else rep.all_without
