"""Exact rational parsing and canonical formatting.

Wire format is the string "p/q" in lowest terms with q > 0. Parsing is
lenient (plain integers and surrounding whitespace accepted); emission is
always canonical, so "2" round-trips to "2/1".
"""

from __future__ import annotations

from fractions import Fraction

from .errors import RationalFormatError


def parse_rational(text: object) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise RationalFormatError(f"expected rational string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise RationalFormatError("empty rational literal")
    num, slash, den = s.partition("/")
    try:
        p = int(num)
    except ValueError:
        raise RationalFormatError(f"malformed rational {text!r}")
    if not slash:
        return Fraction(p)
    try:
        q = int(den)
    except ValueError:
        raise RationalFormatError(f"malformed rational {text!r}")
    if q == 0:
        raise RationalFormatError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction | int) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"
