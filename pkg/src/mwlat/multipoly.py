"""Sparse multivariate polynomials over Q or over a FieldTower.

Used for the elimination pipelines: viewing a polynomial as univariate in
one variable with polynomial coefficients, pseudo-division, and resultants
via the subresultant PRS (fraction-free; all divisions exact).
"""

from __future__ import annotations

from ._rat import Q, rat
from .qfield import FieldElement


def _is_scalar(c):
    return isinstance(c, (int, FieldElement)) or hasattr(c, "denominator")


def _cdiv(a, b):
    """Exact coefficient division."""
    if isinstance(b, FieldElement):
        return a * b.inv()
    return a / b


class MultiPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict = None):
        self.nvars = nvars
        self.terms = terms or {}

    @classmethod
    def const(cls, nvars: int, c):
        if not _is_scalar(c):
            raise TypeError("constant coefficient expected")
        if isinstance(c, int) or hasattr(c, "denominator"):
            c = rat(c)
        if not c:
            return cls(nvars, {})
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, one=1):
        m = [0] * nvars
        m[i] = 1
        if isinstance(one, int):
            one = rat(one)
        return cls(nvars, {tuple(m): one})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        if _is_scalar(other):
            if isinstance(other, FieldElement):
                if not other:
                    return MultiPoly(self.nvars, {})
                return MultiPoly(self.nvars, {(0,) * self.nvars: other})
            return MultiPoly.const(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if isinstance(other, int) or hasattr(other, "denominator"):
                other = rat(other)
            if not other:
                return MultiPoly(self.nvars, {})
            return MultiPoly(self.nvars,
                             {m: c * other for m, c in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                s = out.get(m)
                if s is None:
                    if c:
                        out[m] = c
                else:
                    s = s + c
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            base = base * base
            n >>= 1
        if out is None:
            one = Q(1)
            return MultiPoly(self.nvars, {(0,) * self.nvars: one})
        return out

    # -- univariate view in variable v ----------------------------------

    def degree(self, v: int) -> int:
        if not self.terms:
            return -1
        return max(m[v] for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def coeff_in(self, v: int, e: int) -> "MultiPoly":
        """Coefficient of v^e, as a MultiPoly with exponent 0 in slot v."""
        out = {}
        for m, c in self.terms.items():
            if m[v] == e:
                out[m[:v] + (0,) + m[v + 1:]] = c
        return MultiPoly(self.nvars, out)

    def lead_coeff_in(self, v: int) -> "MultiPoly":
        return self.coeff_in(v, self.degree(v))

    def shift_var(self, v: int, e: int) -> "MultiPoly":
        """Multiply by v^e (e >= 0)."""
        out = {}
        for m, c in self.terms.items():
            out[m[:v] + (m[v] + e,) + m[v + 1:]] = c
        return MultiPoly(self.nvars, out)

    def substitute(self, v: int, value: "MultiPoly") -> "MultiPoly":
        """Replace variable v by the given polynomial."""
        d = self.degree(v)
        if d <= 0:
            return self
        pows = [MultiPoly.const(self.nvars, 1)]
        for _ in range(d):
            pows.append(pows[-1] * value)
        acc = MultiPoly(self.nvars, {})
        for e in range(d + 1):
            ce = self.coeff_in(v, e)
            if ce:
                acc = acc + ce * pows[e]
        return acc

    def evaluate(self, point: list):
        """Full evaluation; point entries are coefficients (Q/FieldElement)."""
        acc = None
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t = t * point[i] ** e
            acc = t if acc is None else acc + t
        if acc is None:
            return Q(0)
        return acc

    def map_coeffs(self, fn) -> "MultiPoly":
        out = {}
        for m, c in self.terms.items():
            v = fn(c)
            if v:
                out[m] = v
        return MultiPoly(self.nvars, out)

    def sorted_terms(self):
        """Graded-lex canonical order (total degree, then lex), descending."""
        return sorted(self.terms.items(),
                      key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "MP(0)"
        bits = []
        for m, c in self.sorted_terms()[:12]:
            mon = "*".join(f"x{i}^{e}" for i, e in enumerate(m) if e)
            bits.append(f"{c}{'*' + mon if mon else ''}")
        more = "" if len(self.terms) <= 12 else f" ... ({len(self.terms)} terms)"
        return "MP(" + " + ".join(bits) + more + ")"


def mp_exact_div(f: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Exact division f / d (raises ValueError when not exact)."""
    if not d:
        raise ZeroDivisionError("exact division by zero")
    if not f:
        return f
    dlead_m, dlead_c = d.sorted_terms()[0]
    out = {}
    r = MultiPoly(f.nvars, dict(f.terms))
    while r:
        rm, rc = r.sorted_terms()[0]
        qm = tuple(a - b for a, b in zip(rm, dlead_m))
        if any(e < 0 for e in qm):
            raise ValueError("division not exact")
        qc = _cdiv(rc, dlead_c)
        out[qm] = qc
        r = r - MultiPoly(f.nvars, {qm: qc}) * d
    return MultiPoly(f.nvars, out)


def mp_prem(f: MultiPoly, g: MultiPoly, v: int) -> MultiPoly:
    """Pseudo-remainder of f by g in variable v:
    lc_v(g)^(deg_v f - deg_v g + 1) * f  mod  g."""
    df, dg = f.degree(v), g.degree(v)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    if df < dg:
        return f
    lg = g.lead_coeff_in(v)
    r = f
    e = df - dg + 1
    while True:
        dr = r.degree(v)
        if dr < dg:
            break
        lr = r.lead_coeff_in(v)
        r = r * lg - (lr * g).shift_var(v, dr - dg)
        e -= 1
    if e > 0:
        r = r * lg ** e
    return r


def mp_resultant(f: MultiPoly, g: MultiPoly, v: int) -> MultiPoly:
    """Resultant of f and g with respect to variable v, via the
    subresultant PRS.  Result has exponent 0 in slot v."""
    df, dg = f.degree(v), g.degree(v)
    if df < 0 or dg < 0:
        return MultiPoly(f.nvars, {})
    s = 1
    if df < dg:
        f, g = g, f
        df, dg = dg, df
        if (df * dg) % 2:
            s = -1
    if dg == 0:
        return (g ** df) * s if df else MultiPoly.const(f.nvars, s)
    gprev = MultiPoly.const(f.nvars, 1)
    h = MultiPoly.const(f.nvars, 1)
    while True:
        df, dg = f.degree(v), g.degree(v)
        delta = df - dg
        if (df % 2) and (dg % 2):
            s = -s
        r = mp_prem(f, g, v)
        f = g
        g = mp_exact_div(r, gprev * h ** delta)
        gprev = f.lead_coeff_in(v)
        if delta == 0:
            pass  # h unchanged
        elif delta == 1:
            h = gprev
        else:
            h = mp_exact_div(gprev ** delta, h ** (delta - 1))
        if not g:
            return MultiPoly(f.nvars, {})
        if g.degree(v) == 0:
            break
    dfin = f.degree(v)
    if dfin == 0:
        res = g  # should not occur (loop exits on deg g == 0)
    elif dfin == 1:
        res = g
    else:
        res = mp_exact_div(g ** dfin, h ** (dfin - 1))
    return res * s if s == -1 else res


def mp_content_q(f: MultiPoly):
    """Positive rational content of an f with rational coefficients."""
    from math import gcd
    num = 0
    den = 1
    for c in f.terms.values():
        num = gcd(num, int(c.numerator))
        den = den * int(c.denominator) // gcd(den, int(c.denominator))
    if num == 0:
        return Q(1)
    return Q(num, den)


def mp_primitive_q(f: MultiPoly) -> MultiPoly:
    """f divided by its rational content, sign-normalized so the leading
    graded-lex coefficient is positive."""
    if not f:
        return f
    c = mp_content_q(f)
    out = f.map_coeffs(lambda x: x / c)
    if out.sorted_terms()[0][1] < 0:
        out = -out
    return out
