"""Multiplicative order of a base modulo S-smooth integers, in closed form.

For a base b and a prime p not dividing b there is a stabilization exponent n
past which ord(b, p^k) just picks up a factor p per extra power of p. Knowing
ord(b, p^n) for each prime of a set S therefore pins down ord(b, d) for every
d composed of primes of S: split d into the part d0 above per-prime caps N_p
and the bounded remainder d1, and ord(b, d) = d0 * ord(b, d1).

Note on p = 2: the stabilization exponent used here is
max(3, v2(b-1), v2(b+1) + 1). The variant without the +1 undercounts for
b = 7 mod 8 (e.g. ord(7, 16) = 2, not 4), which would break the growth rule
one step too early.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import PreconditionError
from .numtheory import (
    Factorization,
    factorize,
    group_exponent_factored,
    is_prime,
    mult_order_bruteforce,
    mult_order_fast,
    vp,
)


def stabilization_exponent(base: int, p: int) -> int:
    """Smallest safe n with ord(base, p^k) = p^(k-n) * ord(base, p^n) for k >= n."""
    if base < 2:
        raise PreconditionError(f"base must be >= 2, got {base}")
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if base % p == 0:
        raise PreconditionError(f"prime {p} divides base {base}")
    if p == 2:
        return max(3, vp(base - 1, 2), vp(base + 1, 2) + 1)
    # v_p(base^(p-1) - 1), at least 1 by Fermat
    n = 1
    while pow(base, p - 1, p ** (n + 1)) == 1:
        n += 1
    return n


def cap_exponent(p: int, stable: Mapping[int, tuple[int, int]]) -> int:
    """Cap N_p given per-prime (stabilization exponent, order there) for all of S.

    stable maps each q in S to (n_q, ord(base, q^n_q)). The cap is the max over
    q of n_p - v_p(ord at p's own stabilization) + v_p(ord at q's); the q = p
    term contributes n_p, so the result is always >= n_p.
    """
    if p not in stable:
        raise PreconditionError(f"prime {p} missing from stabilization data")
    n_p, ord_p = stable[p]
    base_term = n_p - vp(ord_p, p) if ord_p % p == 0 else n_p
    best = 0
    for _, (_, ord_q) in sorted(stable.items()):
        best = max(best, base_term + (vp(ord_q, p) if ord_q % p == 0 else 0))
    return best


@dataclass(frozen=True)
class PrimeOrderStats:
    """Per-prime order data: stabilization exponent, cap, and ord at stabilization."""

    stable_exp: int
    cap_exp: int
    order_at_stable: int

    def __post_init__(self):
        if not 1 <= self.stable_exp <= self.cap_exp:
            raise PreconditionError(
                f"need 1 <= n <= N, got n={self.stable_exp} N={self.cap_exp}"
            )
        if self.order_at_stable < 1:
            raise PreconditionError("order must be positive")


@dataclass(frozen=True)
class OrderProfile:
    """Immutable per-prime order structure of a base over a prime set."""

    base: int
    records: tuple[tuple[int, PrimeOrderStats], ...]

    def __post_init__(self):
        if self.base < 2:
            raise PreconditionError(f"base must be >= 2, got {self.base}")
        if not self.records:
            raise PreconditionError("prime set must be non-empty")
        last = 1
        for p, st in self.records:
            if p <= last:
                raise PreconditionError("primes must strictly increase")
            if not is_prime(p):
                raise PreconditionError(f"{p} is not prime")
            if self.base % p == 0:
                raise PreconditionError(f"prime {p} divides base {self.base}")
            if p == 2 and st.stable_exp < 3:
                raise PreconditionError("stabilization exponent at 2 must be >= 3")
            if pow(self.base, st.order_at_stable, p**st.stable_exp) != 1:
                raise PreconditionError(
                    f"recorded order {st.order_at_stable} is not an "
                    f"annihilator mod {p}^{st.stable_exp}"
                )
            last = p

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.records)

    def stats(self, p: int) -> PrimeOrderStats:
        for q, st in self.records:
            if q == p:
                return st
        raise PreconditionError(f"prime {p} not in profile {self.primes}")

    def cap_modulus(self) -> int:
        """Product of p^N_p over the profile's primes."""
        m = 1
        for p, st in self.records:
            m *= p**st.cap_exp
        return m

    def to_json_dict(self) -> dict:
        return {
            "base": self.base,
            "primes": list(self.primes),
            "per_prime": {
                str(p): {
                    "n": st.stable_exp,
                    "N": st.cap_exp,
                    "ord": st.order_at_stable,
                }
                for p, st in self.records
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


def build_profile(base: int, primes: Iterable[int]) -> OrderProfile:
    """Compute the full order profile of base over the given primes.

    Orders at the stabilization exponents are found by brute force; they are
    the ground truth the closed-form path rests on, so no shortcut is taken.
    """
    plist = sorted(set(primes))
    if not plist:
        raise PreconditionError("prime set must be non-empty")
    for p in plist:
        if not is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        if base % p == 0:
            raise PreconditionError(f"prime {p} divides base {base}")
    stable: dict[int, tuple[int, int]] = {}
    for p in plist:
        n_p = stabilization_exponent(base, p)
        stable[p] = (n_p, mult_order_bruteforce(base, p**n_p))
    records = []
    for p in plist:
        n_p, ord_p = stable[p]
        records.append(
            (p, PrimeOrderStats(n_p, cap_exponent(p, stable), ord_p))
        )
    return OrderProfile(base=base, records=tuple(records))


@dataclass(frozen=True)
class DenominatorSplit:
    """d = d0 * d1 with d0 the excess above the caps and d1 the capped part."""

    d: int
    d0: int
    d1: int

    def __post_init__(self):
        if self.d0 < 1 or self.d1 < 1 or self.d0 * self.d1 != self.d:
            raise PreconditionError(
                f"invalid split {self.d} != {self.d0} * {self.d1}"
            )


def _exponents_of(profile: OrderProfile, d) -> dict[int, int]:
    fact = d if isinstance(d, Factorization) else factorize(d)
    primes = set(profile.primes)
    exps: dict[int, int] = {}
    for p, e in fact:
        if p not in primes:
            raise PreconditionError(
                f"denominator prime {p} lies outside the profile primes "
                f"{sorted(primes)}"
            )
        exps[p] = e
    return exps


def split_denominator(profile: OrderProfile, d) -> DenominatorSplit:
    """Split d (an int or Factorization over the profile primes) as d0 * d1."""
    exps = _exponents_of(profile, d)
    d0 = d1 = 1
    for p, st in profile.records:
        e = exps.get(p, 0)
        if e > st.cap_exp:
            d0 *= p ** (e - st.cap_exp)
        d1 *= p ** min(e, st.cap_exp)
    return DenominatorSplit(d=d0 * d1, d0=d0, d1=d1)


def order_from_profile(profile: OrderProfile, exponents: Mapping[int, int]) -> int:
    """ord(base, prod p^e_p) in closed form; exponents may be 0 (prime absent)."""
    primes = set(profile.primes)
    d = 1
    for p, e in exponents.items():
        if p not in primes:
            raise PreconditionError(f"prime {p} not in profile primes")
        if e < 0:
            raise PreconditionError(f"exponent of {p} must be >= 0, got {e}")
        d *= p**e
    split = split_denominator(profile, factorize(d))
    if split.d1 == 1:
        return split.d0
    d1_factors = tuple(
        (p, min(exponents.get(p, 0), profile.stats(p).cap_exp))
        for p in profile.primes
        if min(exponents.get(p, 0), profile.stats(p).cap_exp) > 0
    )
    lam = group_exponent_factored(Factorization(value=split.d1, factors=d1_factors))
    return split.d0 * mult_order_fast(profile.base, split.d1, lam)
