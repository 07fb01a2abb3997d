"""Exact rational values with a tagged infinity.

Every quantity in this package (edge weight, distance, radius bound) is an
exact ``fractions.Fraction`` or the sentinel :data:`INF`. Floats other than
``math.inf`` are rejected at the boundary so no tolerance ever creeps in.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def as_rational(x, what: str = "value") -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact Fraction."""
    if isinstance(x, bool):
        raise ValueError(f"{what} must be rational, got bool")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {what} {x!r}") from exc
    raise ValueError(f"{what} must be an int, Fraction or 'p/q' string, got {type(x).__name__}")


def as_value(x, what: str = "value"):
    """Like :func:`as_rational` but also admits the infinity sentinel."""
    if is_inf(x):
        return INF
    if isinstance(x, str) and x.strip().lower() == "inf":
        return INF
    return as_rational(x, what)


def fmt(x) -> str:
    """Canonical text form: 'inf', 'p' or 'p/q'."""
    if is_inf(x):
        return "inf"
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"
