"""Exact arithmetic in towers Q(g1, ..., gk).

Each generator g_i is given by a monic defining polynomial over the
subtower below it plus a complex approximation that pins the intended
root.  Arithmetic happens in the quotient ring
Q[g1,...]/(p1,...); defining polynomials are *not* assumed irreducible,
so identities verified here hold in every quotient field.  Zero testing
is normal-form equality, never numeric; the complex embedding only
selects branches and sanity-checks.
"""

from __future__ import annotations

import itertools
import json

import mpmath as mp

from . import kernel
from ._rat import Q, rat, rat_str
from .cintervals import CInterval, as_interval


class TowerError(Exception):
    pass


class NonMonic(TowerError):
    pass


class ApproxAmbiguous(TowerError):
    pass


class TowerMismatch(TowerError):
    pass


class ZeroDivision(TowerError):
    pass


class SingularTower(TowerError):
    """a != 0 but its multiplication map is singular: a is a zero divisor
    (one of the defining polynomials is reducible).  Never approximated."""


class NotARoot(TowerError):
    pass


class PrecisionBudgetExceeded(TowerError):
    pass


NEWTON_BUDGET = 200


class FieldTower:
    """Immutable tower of monogenic extensions of Q.

    generators: list of (name, poly_coeffs, approx) where poly_coeffs are
    FieldElements of the partial tower (ascending degree, monic) and
    approx is a CInterval isolating the intended root.
    """

    def __init__(self):
        # built via tower_new / extend; direct construction gives Q itself
        self.names: list[str] = []
        self.degs: tuple[int, ...] = ()
        self.polys: list[list["FieldElement"]] = []
        self.approx: list[CInterval] = []
        self._pow_tables: list[dict] = []
        self._embed_cache: dict[int, list[CInterval]] = {}

    # -- construction ------------------------------------------------

    def _append_generator(self, name: str, coeffs: list["FieldElement"],
                          approx: CInterval):
        """coeffs: defining polynomial over the current tower, ascending,
        including the (monic) leading 1."""
        deg = len(coeffs) - 1
        if deg < 2:
            raise NonMonic(f"{name}: defining polynomial must have degree >= 2")
        lead = coeffs[-1]
        if not (len(lead.coords) == 1 and lead.coords.get(self.zero_mono()) == 1):
            raise NonMonic(f"{name}: defining polynomial must be monic")
        k = len(self.names)
        self.names.append(name)
        self.degs = self.degs + (deg,)
        # re-embed existing data in the wider monomial space
        self.polys = [
            [FieldElement(self, {m + (0,): v for m, v in c.coords.items()})
             for c in p]
            for p in self.polys
        ]
        self._pow_tables = [
            {e: {m + (0,): c for m, c in t.items()} for e, t in tbl.items()}
            for tbl in self._pow_tables
        ]
        widened = [FieldElement(self, {m + (0,): c for m, c in co.coords.items()})
                   for co in coeffs]
        self.polys.append(widened)
        # g^deg = -(c0 + c1 g + ... + c_{deg-1} g^{deg-1})
        tail: dict = {}
        for e in range(deg):
            for m, c in widened[e].coords.items():
                mm = m[:k] + (e,)
                nc = tail.get(mm, Q(0)) - c
                if nc:
                    tail[mm] = nc
                else:
                    tail.pop(mm, None)
        self._pow_tables.append({deg: tail})
        self._embed_cache.clear()
        self._refine_root(k, approx)

    def zero_mono(self) -> tuple:
        return (0,) * len(self.names)

    @property
    def dimension(self) -> int:
        d = 1
        for x in self.degs:
            d *= x
        return d

    # -- reduction tables ---------------------------------------------

    def _get_pow(self, i: int, e: int) -> dict:
        tbl = self._pow_tables[i]
        got = tbl.get(e)
        if got is not None:
            return got
        prev = self._get_pow(i, e - 1) if e - 1 >= self.degs[i] else None
        if prev is None:
            # e-1 < deg: g^e = g^(e-1)*g stays a plain monomial; should not
            # be requested, but handle it for robustness
            m = [0] * len(self.names)
            m[i] = e - 1
            prev = {tuple(m): Q(1)}
        gi = [0] * len(self.names)
        gi[i] = 1
        res = kernel.terms_mul(prev, {tuple(gi): Q(1)}, self.degs, self._get_pow)
        tbl[e] = res
        return res

    # -- element constructors ------------------------------------------

    def zero(self) -> "FieldElement":
        return FieldElement(self, {})

    def one(self) -> "FieldElement":
        return self.from_rational(1)

    def from_rational(self, x) -> "FieldElement":
        x = rat(x)
        if not x:
            return self.zero()
        return FieldElement(self, {self.zero_mono(): x})

    def gen(self, name: str) -> "FieldElement":
        i = self.names.index(name)
        m = [0] * len(self.names)
        m[i] = 1
        return FieldElement(self, {tuple(m): Q(1)})

    def monomials(self):
        """All reduced monomials in canonical (lexicographic) order."""
        return itertools.product(*[range(d) for d in self.degs])

    # -- embedding ------------------------------------------------------

    def _refine_root(self, i: int, approx: CInterval):
        """Newton-refine the i-th generator value and check the interval
        isolates a single root of the (numerically embedded) polynomial."""
        prec = max(mp.mp.prec, 80)
        with mp.workprec(prec + 40):
            coeffs = [self._embed_element(c, prec + 40).mid
                      for c in self.polys[i]]
            z = approx.mid
            r0 = approx.rad if approx.rad > 0 else max(abs(z), mp.mpf(1)) * mp.mpf("1e-4")
            for _ in range(NEWTON_BUDGET):
                p = _horner(coeffs, z)
                dp = _horner(_derive(coeffs), z)
                if abs(dp) == 0:
                    raise ApproxAmbiguous(
                        f"{self.names[i]}: derivative vanished during refinement")
                step = p / dp
                z = z - step
                if abs(step) < max(abs(z), mp.mpf(1)) * mp.mpf(2) ** (-prec):
                    break
            else:
                raise ApproxAmbiguous(
                    f"{self.names[i]}: Newton refinement did not converge")
            if abs(z - approx.mid) > r0 * 4 + mp.mpf("1e-3"):
                raise ApproxAmbiguous(
                    f"{self.names[i]}: refined root escaped its interval")
            dp = _horner(_derive(coeffs), z)
            rad = 2 * abs(_horner(coeffs, z) / dp) + abs(z) * mp.mpf(2) ** (-prec + 6)
        self.approx[i:i + 1] = []
        self.approx.insert(i, CInterval(z, rad))

    def _gen_values(self, prec: int) -> list[CInterval]:
        vals = self._embed_cache.get(prec)
        if vals is not None:
            return vals
        vals = []
        with mp.workprec(prec):
            for i in range(len(self.names)):
                coeffs = []
                for c in self.polys[i]:
                    coeffs.append(_eval_terms(c.coords, vals))
                z = self.approx[i].mid
                for _ in range(NEWTON_BUDGET):
                    p = _horner_iv(coeffs, z)
                    dp = _horner_iv(_derive(coeffs), z)
                    step = p.mid / dp.mid
                    z = z - step
                    if abs(step) < max(abs(z), mp.mpf(1)) * mp.mpf(2) ** (-prec + 6):
                        break
                p = _horner_iv(coeffs, z)
                dp = _horner_iv(_derive(coeffs), z)
                rad = 2 * p.abs_upper() / max(abs(dp.mid) - dp.rad, mp.mpf(2) ** (-prec)) \
                    + max(abs(z), mp.mpf(1)) * mp.mpf(2) ** (-prec + 6)
                vals.append(CInterval(z, rad))
        self._embed_cache[prec] = vals
        return vals

    def _embed_element(self, a: "FieldElement", prec: int) -> CInterval:
        vals = self._gen_values(prec)
        with mp.workprec(prec):
            return _eval_terms(a.coords, vals)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        gens = []
        for i, name in enumerate(self.names):
            gens.append({
                "name": name,
                "poly": [c.to_json() for c in self.polys[i]],
                "approx": {
                    "re": mp.nstr(self.approx[i].mid.real, 20),
                    "im": mp.nstr(self.approx[i].mid.imag, 20),
                    "rad": mp.nstr(self.approx[i].rad, 5),
                },
            })
        return {"generators": gens}

    def __repr__(self):
        return f"FieldTower({', '.join(self.names) or 'Q'}; dim={self.dimension})"


def _horner(coeffs, z):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _horner_iv(coeffs, z) -> CInterval:
    acc = CInterval(0)
    zi = as_interval(z)
    for c in reversed(coeffs):
        acc = acc * zi + c
    return acc


def _derive(coeffs):
    return [coeffs[e] * e for e in range(1, len(coeffs))]


def _eval_terms(terms: dict, gen_vals: list[CInterval]) -> CInterval:
    acc = CInterval(0)
    for m, c in terms.items():
        t = as_interval(c)
        for i, e in enumerate(m):
            if e:
                t = t * (gen_vals[i] ** e)
        acc = acc + t
    return acc


class FieldElement:
    """Immutable element of a FieldTower, in sparse normal form."""

    __slots__ = ("tower", "coords")

    def __init__(self, tower: FieldTower, coords: dict):
        self.tower = tower
        self.coords = coords

    def _check(self, other: "FieldElement"):
        if self.tower is not other.tower:
            raise TowerMismatch("elements belong to different towers")

    def __bool__(self):
        return bool(self.coords)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.tower is other.tower and self.coords == other.coords
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self == self.tower.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.tower), frozenset(self.coords.items())))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            self._check(other)
            return other
        if isinstance(other, int) or hasattr(other, "denominator"):
            return self.tower.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.tower, kernel.terms_add(self.coords, o.coords))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, kernel.terms_neg(self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            self._check(other)
            t = kernel.terms_mul(self.coords, other.coords,
                                 self.tower.degs, self.tower._get_pow)
            return FieldElement(self.tower, t)
        if isinstance(other, int) or hasattr(other, "denominator"):
            return FieldElement(self.tower, kernel.terms_scale(self.coords, rat(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int) or hasattr(other, "denominator"):
            c = rat(other)
            if not c:
                raise ZeroDivision("division by zero rational")
            return FieldElement(self.tower, kernel.terms_scale(self.coords, 1 / c))
        if isinstance(other, FieldElement):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- inversion via the Krylov subspace of powers ---------------------

    def inv(self) -> "FieldElement":
        if not self.coords:
            raise ZeroDivision("inverse of zero")
        minpoly = self._minpoly_coeffs()
        c0 = minpoly[0]
        if not c0:
            raise SingularTower(
                "element is a zero divisor (reducible defining polynomial)")
        # m(a) = 0, m = c0 + c1 x + ... + x^k  =>
        # a^{-1} = -(c1 + c2 a + ... + a^{k-1}) / c0
        acc = self.tower.zero()
        p = self.tower.one()
        for c in minpoly[1:]:
            acc = acc + p * c
            p = p * self
        acc = acc + p  # monic leading term
        return acc * (Q(-1) / c0)

    def _minpoly_coeffs(self) -> list:
        """Monic minimal polynomial of this element over Q (ascending
        coefficients, trailing 1 omitted), found by incremental Gaussian
        elimination on the Krylov sequence 1, a, a^2, ..."""
        rows: list[tuple[dict, dict]] = []  # (reduced vector, combo of powers)
        power = self.tower.one()
        k = 0
        while True:
            vec = dict(power.coords)
            combo = {k: Q(1)}
            for rvec, rcombo in rows:
                piv = next(iter(rvec))
                c = vec.get(piv)
                if c is None:
                    continue
                pc = rvec[piv]
                f = c / pc
                for m, v in rvec.items():
                    nv = vec.get(m, Q(0)) - f * v
                    if nv:
                        vec[m] = nv
                    else:
                        vec.pop(m, None)
                for e, v in rcombo.items():
                    nv = combo.get(e, Q(0)) - f * v
                    if nv:
                        combo[e] = nv
                    else:
                        combo.pop(e, None)
            if not vec:
                lead = combo[k]
                return [combo.get(e, Q(0)) / lead for e in range(k)]
            rows.append((vec, combo))
            power = power * self
            k += 1
            if k > self.tower.dimension:
                raise SingularTower("Krylov sequence failed to close")

    # -- coordinates / embedding ----------------------------------------

    def rational_coords(self) -> list:
        """Coordinates in the reduced monomial basis, canonical order."""
        return [self.coords.get(m, Q(0)) for m in self.tower.monomials()]

    def embed(self, precision: int = 64) -> CInterval:
        if not self.coords:
            return CInterval(0)
        prec = precision + 32
        for _ in range(6):
            iv = self.tower._embed_element(self, prec)
            if iv.width_ok(precision):
                return iv
            prec *= 2
            if prec > 1 << 16:
                break
        raise PrecisionBudgetExceeded(
            f"could not certify {precision} bits for element")

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"".join(f"{e}," for e in m): rat_str(c)
                for m, c in sorted(self.coords.items())}

    def __repr__(self):
        if not self.coords:
            return "0"
        parts = []
        for m, c in sorted(self.coords.items()):
            mon = "*".join(
                f"{self.tower.names[i]}^{e}" if e > 1 else self.tower.names[i]
                for i, e in enumerate(m) if e)
            parts.append(rat_str(c) + ("*" + mon if mon else ""))
        return " + ".join(parts)


# -- module level operations (the functional surface) ----------------------


def extend(t: FieldTower, name: str, poly, approx=None) -> FieldElement:
    """Adjoin a root of the given monic polynomial (ascending coefficient
    list; entries are rationals or elements of `t`).  `approx` is
    {"re": str, "im": str, "rad": str} isolating the intended root.
    Returns the new generator.

    Elements created before the extension become stale; re-fetch
    generators via t.gen(...) afterwards.
    """
    coeffs = []
    for c in poly:
        if isinstance(c, FieldElement):
            if c.tower is not t:
                raise TowerMismatch("poly coefficient from a foreign tower")
            coeffs.append(c)
        else:
            coeffs.append(t.from_rational(c))
    if approx is None:
        iv = CInterval(mp.mpc(1), mp.mpf("0.5"))
    else:
        iv = CInterval(mp.mpc(mp.mpf(approx["re"]), mp.mpf(approx.get("im", "0"))),
                       mp.mpf(approx.get("rad", "1e-3")))
    t.approx.append(iv)
    t._append_generator(name, coeffs, iv)
    return t.gen(name)


def tower_new(spec: list[dict]) -> FieldTower:
    """Build a tower from generator records.

    Each record: {"name": str, "poly": [coeff, ...] ascending where each
    coeff is an int/str rational or a FieldElement of the partial tower,
    "approx": {"re": str, "im": str, "rad": str}}.
    """
    t = FieldTower()
    for rec in spec:
        extend(t, rec["name"], rec["poly"], rec.get("approx"))
    return t


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def neg(a):
    return -a


def mul(a, b):
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def embed(a: FieldElement, precision: int = 64) -> CInterval:
    return a.embed(precision)


def rational_coords(a: FieldElement) -> list:
    return a.rational_coords()


def q_rank(elems: list[FieldElement]) -> int:
    """Rank over Q of the coordinate vectors (exact Gaussian elimination)."""
    if not elems:
        return 0
    tower = elems[0].tower
    for e in elems:
        if e.tower is not tower:
            raise TowerMismatch("q_rank needs elements of one tower")
    rows: list[dict] = []
    rank = 0
    for e in elems:
        vec = dict(e.coords)
        for rvec in rows:
            piv = next(iter(rvec))
            c = vec.get(piv)
            if c is None:
                continue
            f = c / rvec[piv]
            for m, v in rvec.items():
                nv = vec.get(m, Q(0)) - f * v
                if nv:
                    vec[m] = nv
                else:
                    vec.pop(m, None)
        if vec:
            rows.append(vec)
            rank += 1
    return rank


def apply_conjugation(a: FieldElement, images: dict) -> FieldElement:
    """Apply the ring homomorphism sending each generator to the given
    element (which must be a root of that generator's defining polynomial)."""
    tower = a.tower
    img: list[FieldElement] = []
    for i, name in enumerate(tower.names):
        target = images.get(name)
        if target is None:
            img.append(tower.gen(name))
            continue
        if target.tower is not tower:
            raise TowerMismatch("conjugation image from a foreign tower")
        val = tower.zero()
        p = tower.one()
        for c in tower.polys[i]:
            val = val + p * c
            p = p * target
        if val:
            raise NotARoot(f"image of {name} fails its defining polynomial")
        img.append(target)
    out = tower.zero()
    for m, c in a.coords.items():
        t = tower.from_rational(c)
        for i, e in enumerate(m):
            if e:
                t = t * img[i] ** e
        out = out + t
    return out


def tower_from_json(doc) -> FieldTower:
    """Build a tower from the JSON wire format (rational-string coefficients)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    spec = []
    for g in doc["generators"]:
        spec.append({"name": g["name"], "poly": g["poly"], "approx": g.get("approx")})
    return tower_new(spec)
