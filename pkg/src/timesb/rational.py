"""Strict parsing and printing of exact fractions.

All exact quantities cross the I/O boundary as "a/d" strings (or bare
integers). Decimal and scientific notation are rejected on input so that no
float ever contaminates a certificate.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import PreconditionError

_FRACTION_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_fraction(text: str) -> Fraction:
    """Parse "a/d" or a bare integer; reject anything float-shaped."""
    m = _FRACTION_RE.match(text.strip())
    if not m:
        raise PreconditionError(
            f"expected a fraction like 'a/d' or an integer, got {text!r}"
        )
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise PreconditionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def frac_str(x: Fraction) -> str:
    """Canonical string form: bare integer when exact, else "a/d"."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
