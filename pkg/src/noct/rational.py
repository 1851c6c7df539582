"""Exact rational parsing and formatting.

Accepted encodings are integers and strings "p/q" or "p".  Floats are rejected
everywhere so that results are bit-identical across platforms.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InputError

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def parse_rational(value) -> Fraction:
    """Parse an int or a "p/q" string into a Fraction; reject floats."""
    if isinstance(value, bool):
        raise InputError(f"expected a rational number, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InputError(
            f"floating point value {value!r} rejected; encode rationals as 'p/q' strings"
        )
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise InputError(f"cannot parse {value!r} as an exact rational 'p/q'")
        return Fraction(text)
    raise InputError(f"cannot parse {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Format a Fraction as "p" or "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
