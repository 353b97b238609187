"""Exact currency/utility amounts.

Every quantity in the engine is a `fractions.Fraction`; nothing is ever
rounded. Amounts enter the system as decimal text quantized to a fixed-point
grid (default 10^-6) and leave it either as a minimal decimal string or, when
a value does not terminate at the configured scale (midpoints and LP vertices
can have other denominators), as an explicit ``p/q`` rational.
"""
from __future__ import annotations

import re
from fractions import Fraction

Money = Fraction

DEFAULT_SCALE = 6

_DECIMAL_RE = re.compile(r"^([+-]?)(\d+)(?:\.(\d+))?$")


class MoneyFormatError(ValueError):
    """Raised for text that is not a decimal on the configured grid."""


def parse_money(text: str, scale: int = DEFAULT_SCALE) -> Fraction:
    """Parse decimal text into an exact Fraction.

    Accepts at most `scale` fractional digits, so every parseable value lies
    on the 10^-scale grid and survives a print/parse round trip bit-exactly.
    """
    if not isinstance(text, str):
        raise MoneyFormatError(f"expected decimal text, got {type(text).__name__}")
    match = _DECIMAL_RE.match(text.strip())
    if match is None:
        raise MoneyFormatError(f"not a decimal literal: {text!r}")
    sign, whole, frac = match.groups()
    frac = frac or ""
    if len(frac) > scale:
        raise MoneyFormatError(
            f"{text!r} has {len(frac)} fractional digits; scale allows {scale}"
        )
    value = Fraction(int(whole + frac) if frac else int(whole), 10 ** len(frac))
    return -value if sign == "-" else value


def format_money(value: Fraction, scale: int = DEFAULT_SCALE) -> str:
    """Render exactly: minimal decimal when the value terminates within
    `scale` digits, otherwise the reduced ``p/q`` form (never rounded)."""
    value = Fraction(value)
    digits = _terminating_digits(value.denominator)
    if digits is None or digits > scale:
        return f"{value.numerator}/{value.denominator}"
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    units = abs(scaled.numerator)
    if digits == 0:
        return f"{sign}{units}"
    whole, frac = divmod(units, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _terminating_digits(denominator: int) -> int | None:
    """Number of decimal digits needed for p/denominator, or None if the
    expansion does not terminate (denominator has a factor other than 2, 5)."""
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    return max(twos, fives) if denominator == 1 else None
