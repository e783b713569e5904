"""Exact arithmetic of the times-b map on the circle.

Multiplicative order profiles of a base modulo prime powers, orbit structure
and density of rationals under x -> b*x mod 1, and membership of rationals in
digit-restricted Cantor sets, all in exact integer arithmetic.
"""

from .bounds import BoundReport, aggregate_constants, bound_report
from .bounds import stabilization_growth_check
from .cantor import (
    DigitSet,
    count_members_up_to,
    count_report,
    dual_expansion,
    enumerate_members,
    enumerate_s_integers,
    expand,
    longest_missing_interval,
    member,
    member_witness,
    reduced_members_up_to,
    smooth_denominators,
    sup_distance,
)
from .errors import InvariantError, PreconditionError
from .numtheory import factorize, mult_order_bruteforce, mult_order_fast
from .orbit import cover_radius, decompose, density_bound, density_report, orbit
from .orders import build_profile, order_from_profile, split_denominator

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DigitSet",
    "InvariantError",
    "PreconditionError",
    "__version__",
    "aggregate_constants",
    "bound_report",
    "build_profile",
    "count_members_up_to",
    "count_report",
    "cover_radius",
    "decompose",
    "density_bound",
    "density_report",
    "dual_expansion",
    "enumerate_members",
    "enumerate_s_integers",
    "expand",
    "factorize",
    "longest_missing_interval",
    "member",
    "member_witness",
    "mult_order_bruteforce",
    "mult_order_fast",
    "orbit",
    "order_from_profile",
    "reduced_members_up_to",
    "smooth_denominators",
    "split_denominator",
    "stabilization_growth_check",
    "sup_distance",
]
