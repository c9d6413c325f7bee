"""Univariate polynomials and rational functions with coefficients in a
FieldTower.  Ascending coefficient lists; zero polynomial has degree -1."""

from __future__ import annotations

from ._rat import Q, rat
from .qfield import FieldElement, FieldTower, TowerMismatch, ZeroDivision


class UniPoly:
    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.tower is not tower:
                    raise TowerMismatch("coefficient from a foreign tower")
                cs.append(c)
            else:
                cs.append(tower.from_rational(c))
        while cs and not cs[-1]:
            cs.pop()
        self.tower = tower
        self.coeffs = cs

    @classmethod
    def const(cls, tower, c):
        return cls(tower, [c])

    @classmethod
    def var(cls, tower):
        return cls(tower, [0, 1])

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def lead(self) -> FieldElement:
        if not self.coeffs:
            return self.tower.zero()
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.tower is other.tower and self.coeffs == other.coeffs
        return NotImplemented

    def __getitem__(self, e: int) -> FieldElement:
        if 0 <= e < len(self.coeffs):
            return self.coeffs[e]
        return self.tower.zero()

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            if other.tower is not self.tower:
                raise TowerMismatch("polynomials over different towers")
            return other
        if isinstance(other, FieldElement) or isinstance(other, int) \
                or hasattr(other, "denominator"):
            return UniPoly(self.tower, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(self.tower, [self[e] + o[e] for e in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.tower, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            if other.tower is not self.tower:
                raise TowerMismatch("polynomials over different towers")
            if not self.coeffs or not other.coeffs:
                return UniPoly(self.tower, [])
            out = [self.tower.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return UniPoly(self.tower, out)
        if isinstance(other, FieldElement) or isinstance(other, int) \
                or hasattr(other, "denominator"):
            return UniPoly(self.tower, [c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly(self.tower, [1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "UniPoly"):
        if not other:
            raise ZeroDivision("polynomial division by zero")
        inv_lead = other.lead().inv()
        q = [self.tower.zero()] * max(self.deg - other.deg + 1, 0)
        r = list(self.coeffs)
        while len(r) - 1 >= other.deg and r:
            k = len(r) - 1 - other.deg
            f = r[-1] * inv_lead
            q[k] = f
            for j in range(other.deg + 1):
                r[k + j] = r[k + j] - f * other.coeffs[j]
            while r and not r[-1]:
                r.pop()
        return UniPoly(self.tower, q), UniPoly(self.tower, r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        il = self.lead().inv()
        return UniPoly(self.tower, [c * il for c in self.coeffs])

    def derivative(self) -> "UniPoly":
        return UniPoly(self.tower,
                       [self.coeffs[e] * e for e in range(1, len(self.coeffs))])

    def evaluate(self, x):
        """Horner evaluation; x is a FieldElement, rational, or UniPoly
        (composition), or RationalFunction."""
        if isinstance(x, RationalFunction):
            return rf_evaluate_poly(self, x)
        acc = self.tower.zero() if not isinstance(x, UniPoly) \
            else UniPoly(self.tower, [])
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_scale(self, a) -> "UniPoly":
        """p(a*t) for a scalar a."""
        pw = self.tower.one()
        out = []
        for c in self.coeffs:
            out.append(c * pw)
            pw = pw * a
        return UniPoly(self.tower, out)

    def reverse(self, n: int = None) -> "UniPoly":
        """t^n * p(1/t); n defaults to deg."""
        if n is None:
            n = self.deg
        out = [self.tower.zero()] * (n + 1)
        for e, c in enumerate(self.coeffs):
            out[n - e] = c
        return UniPoly(self.tower, out)

    def __repr__(self):
        if not self.coeffs:
            return "UniPoly(0)"
        return "UniPoly(deg=%d, %s)" % (
            self.deg, "; ".join(f"[{e}] {c!r}" for e, c in enumerate(self.coeffs) if c))


def p_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd via the Euclidean algorithm (needs invertible leads)."""
    while g:
        f, g = g, f % g
    if f:
        f = f.monic()
    return f


def prem(f: UniPoly, g: UniPoly) -> UniPoly:
    """Pseudo-remainder: remainder of lc(g)^(deg f - deg g + 1) * f by g,
    computed without any inversion."""
    if not g:
        raise ZeroDivision("pseudo-division by zero")
    d = f.deg - g.deg
    if d < 0:
        return f
    lead = g.lead()
    r = list(f.coeffs)
    for k in range(d, -1, -1):
        if len(r) - 1 != g.deg + k:
            # already dropped below; keep scaling to preserve the contract
            r = [c * lead for c in r]
            continue
        top = r[-1]
        r = [c * lead for c in r[:-1]]
        for j in range(g.deg):
            r[k + j] = r[k + j] - top * g.coeffs[j]
        while r and not r[-1]:
            r.pop()
    return UniPoly(f.tower, r)


def deg_gcd(f: UniPoly, g: UniPoly) -> int:
    """Degree of gcd(f, g), computed with pseudo-remainders only (no
    coefficient inversion).  Returns -1 when both are zero."""
    while g:
        r = prem(f, g)
        f, g = g, r
    return f.deg


def p_resultant(f: UniPoly, g: UniPoly) -> FieldElement:
    """Resultant res(f, g) = lc(f)^deg(g) * prod g(alpha_i) over the roots
    alpha_i of f, via fraction-free (Bareiss) elimination of the Sylvester
    matrix."""
    t = f.tower
    m, n = f.deg, g.deg
    if m < 0 or n < 0:
        return t.zero()
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    rows = []
    fc = [f[m - j] for j in range(m + 1)]   # descending
    gc = [g[n - j] for j in range(n + 1)]
    for i in range(n):
        rows.append([t.zero()] * i + fc + [t.zero()] * (n - 1 - i))
    for i in range(m):
        rows.append([t.zero()] * i + gc + [t.zero()] * (m - 1 - i))
    sign = 1
    prev = t.one()
    for k in range(size - 1):
        if not rows[k][k]:
            for r in range(k + 1, size):
                if rows[r][k]:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return t.zero()
        piv = rows[k][k]
        ip = prev.inv()
        for i in range(k + 1, size):
            ri, rk = rows[i], rows[k]
            cik = ri[k]
            for j in range(k + 1, size):
                ri[j] = (piv * ri[j] - cik * rk[j]) * ip
            ri[k] = t.zero()
        prev = piv
    r = rows[size - 1][size - 1]
    return r if sign == 1 else -r


class RationalFunction:
    """num/den with UniPoly parts over one tower; den monic, nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly = None, reduce: bool = True):
        if den is None:
            den = UniPoly(num.tower, [1])
        if not den:
            raise ZeroDivision("rational function with zero denominator")
        if num.tower is not den.tower:
            raise TowerMismatch("numerator and denominator towers differ")
        if reduce and num and den.deg > 0:
            g = p_gcd(num, den)
            if g.deg > 0:
                num = num // g
                den = den // g
        if den.deg == 0:
            il = den.coeffs[0].inv()
            num = num * il
            den = UniPoly(num.tower, [1])
        elif den.lead() != den.tower.one():
            il = den.lead().inv()
            num = num * il
            den = den * il
        self.num = num
        self.den = den

    @classmethod
    def const(cls, tower, c):
        return cls(UniPoly(tower, [c]))

    @classmethod
    def var(cls, tower):
        return cls(UniPoly(tower, [0, 1]))

    @property
    def tower(self):
        return self.num.tower

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return not (self.num * o.den - o.num * self.den)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.tower is not self.tower:
                raise TowerMismatch("rational functions over different towers")
            return other
        if isinstance(other, UniPoly):
            return RationalFunction(other)
        if isinstance(other, FieldElement) or isinstance(other, int) \
                or hasattr(other, "denominator"):
            return RationalFunction(UniPoly(self.tower, [other]))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den,
                                self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivision("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, reduce=False)

    def evaluate(self, x):
        dv = self.den.evaluate(x)
        if isinstance(dv, FieldElement):
            if not dv:
                raise ZeroDivision("pole at evaluation point")
            return self.num.evaluate(x) * dv.inv()
        raise TypeError("evaluate expects a point in the coefficient tower")

    def value_at_zero(self):
        """lim t->0, when finite (ord_0(den) <= ord_0(num))."""
        vn = _low_order(self.num)
        vd = _low_order(self.den)
        if vn < vd:
            raise ZeroDivision("pole at t = 0")
        if vn > vd:
            return self.tower.zero()
        return self.num.coeffs[vn] * self.den.coeffs[vd].inv()

    def value_at_infinity(self):
        """lim t->oo, when finite (deg num <= deg den)."""
        if self.num.deg > self.den.deg:
            raise ZeroDivision("pole at t = infinity")
        if self.num.deg < self.den.deg:
            return self.tower.zero()
        return self.num.lead() * self.den.lead().inv()

    def substitute(self, other: "RationalFunction") -> "RationalFunction":
        """self(other(t))."""
        n = rf_evaluate_poly(self.num, other)
        d = rf_evaluate_poly(self.den, other)
        return n / d

    def __repr__(self):
        if self.den.deg == 0:
            return f"RF({self.num!r})"
        return f"RF({self.num!r} / {self.den!r})"


def _low_order(p: UniPoly) -> int:
    for e, c in enumerate(p.coeffs):
        if c:
            return e
    return -1


def rf_evaluate_poly(p: UniPoly, x: RationalFunction) -> RationalFunction:
    """p(x) for a rational-function argument, as num/den with den = x.den^deg."""
    t = p.tower
    if not p.coeffs:
        return RationalFunction(UniPoly(t, []))
    d = p.deg
    acc = UniPoly(t, [])
    dp = UniPoly(t, [1])
    # sum c_e * num^e * den^(d-e)
    num_pows = [UniPoly(t, [1])]
    for _ in range(d):
        num_pows.append(num_pows[-1] * x.num)
    for e in range(d, -1, -1):
        acc = acc + p[e] * num_pows[e] * dp
        dp = dp * x.den
    return RationalFunction(acc, x.den ** d)
