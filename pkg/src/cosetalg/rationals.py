"""Formatting and parsing of exact rationals for JSON output.

Everything user-facing prints as "p/q" in lowest terms with positive q,
or plain "p" for integers.
"""

from __future__ import annotations

from fractions import Fraction


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)
