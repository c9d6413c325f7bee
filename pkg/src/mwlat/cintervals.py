"""Complex interval arithmetic (midpoint + radius) on top of mpmath.

These intervals are advisory: they pin root branches and sanity-check
identities numerically.  Exact zero decisions are never made here.
"""

from __future__ import annotations

import mpmath as mp


class CInterval:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mp.mpc(mid)
        self.rad = mp.mpf(rad)

    def __repr__(self):
        return f"CInterval({self.mid}, rad={mp.nstr(self.rad, 3)})"

    # widening slack per op covers mpmath rounding of the midpoint
    def _slack(self):
        return abs(self.mid) * mp.mpf(2) ** (-mp.mp.prec + 4)

    def __add__(self, other):
        other = as_interval(other)
        r = CInterval(self.mid + other.mid, self.rad + other.rad)
        r.rad += r._slack()
        return r

    def __neg__(self):
        return CInterval(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-as_interval(other))

    def __mul__(self, other):
        other = as_interval(other)
        a, ra, b, rb = abs(self.mid), self.rad, abs(other.mid), other.rad
        r = CInterval(self.mid * other.mid, a * rb + b * ra + ra * rb)
        r.rad += r._slack()
        return r

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return as_interval(other) - self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CInterval(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        a = abs(self.mid)
        if self.rad >= a:
            raise ZeroDivisionError("interval contains zero")
        new_rad = self.rad / (a * (a - self.rad))
        r = CInterval(1 / self.mid, new_rad)
        r.rad += r._slack()
        return r

    def abs_upper(self):
        return abs(self.mid) + self.rad

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def width_ok(self, precision_bits: int) -> bool:
        scale = max(abs(self.mid), mp.mpf(1))
        return self.rad <= scale * mp.mpf(2) ** (-precision_bits)


def as_interval(x) -> CInterval:
    if isinstance(x, CInterval):
        return x
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return CInterval(mp.mpf(int(x.numerator)) / mp.mpf(int(x.denominator)))
    return CInterval(mp.mpc(x))
