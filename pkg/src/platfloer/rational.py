"""Exact rational arithmetic backend.

Every coordinate, grading, and matrix entry in this package is an exact
rational number.  gmpy2.mpq is used when available (it is much faster than
fractions.Fraction on the long polyline computations); the stdlib Fraction
is a drop-in fallback.
"""
from __future__ import annotations

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ  # type: ignore[assignment]

Q0 = QQ(0)
Q1 = QQ(1)


def qq(value, denom=None) -> "QQ":
    """Coerce to an exact rational.  Floats are rejected by design."""
    if isinstance(value, float):
        raise TypeError("refusing to coerce a float to an exact rational")
    if denom is not None:
        return QQ(value, denom)
    return QQ(value)


def qstr(value) -> str:
    """Render a rational as 'p' or 'p/q' (canonical, byte-stable)."""
    value = QQ(value)
    num, den = value.numerator, value.denominator
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def parse_q(text: str) -> "QQ":
    """Parse 'p' or 'p/q'."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return QQ(int(num), int(den))
    return QQ(int(text))


def as_int(value) -> int:
    """Exact conversion to int; raises if the rational is not integral."""
    value = QQ(value)
    if value.denominator != 1:
        raise ValueError(f"expected an integer, got {qstr(value)}")
    return int(value.numerator)
