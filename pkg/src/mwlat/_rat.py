"""Exact rational scalars.

gmpy2.mpq is used when available (much faster for the big eliminations);
fractions.Fraction is the drop-in fallback.  Everything downstream only
relies on +, -, *, /, **, comparison, hash and truthiness.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q  # type: ignore
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    Q = Fraction
    HAVE_GMPY2 = False

QX = type(Q(1))

ZERO = Q(0)
ONE = Q(1)


def rat(x) -> "QX":
    """Coerce ints, Fractions, mpq and 'p/q' strings to the rational type."""
    if isinstance(x, QX):
        return x
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/")
            return Q(int(num), int(den))
        return Q(int(s))
    if isinstance(x, (int, Fraction)):
        return Q(x)
    raise TypeError(f"cannot convert {x!r} to a rational")


def rat_str(x) -> str:
    """Canonical 'p' or 'p/q' string."""
    x = rat(x)
    num, den = x.numerator, x.denominator
    return str(num) if den == 1 else f"{num}/{den}"
