"""Elimination pipelines that recover the fundamental polynomials of the
minimal-section ansatz systems for n = 3, 4, 5, 6.

Each system comes from substituting the generic minimal-section shape into
y^2 = x^3 + f_n(s) (the shifted model g_6 for n = 6) and collecting
coefficients of powers of s.  The pipelines then follow the printed
derivations: solve the linear relations, pseudo-reduce, and take
resultants."""

from __future__ import annotations

from ._rat import Q, rat
from .multipoly import (MultiPoly, mp_exact_div, mp_prem, mp_primitive_q,
                        mp_resultant)
from .qfield import FieldElement, TowerMismatch
from .upoly import UniPoly


class EliminateError(Exception):
    pass


class NonTriangular(EliminateError):
    pass


class DegenerateResultant(EliminateError):
    pass


# variable orders for the ansatz systems
SYSTEM_VARS = {
    3: ("s", "a", "b", "c", "d"),
    4: ("s", "a", "b", "c", "d"),
    5: ("s", "a", "b", "c", "d", "e", "U"),
    6: ("s", "a", "b", "c", "d", "e", "u"),
}

F_COEFFS = {
    2: [-2, 0, 1],
    3: [0, -3, 0, 1],
    4: [2, 0, -4, 0, 1],
    5: [0, 5, 0, -5, 0, 1],
    6: [-2, 0, 9, 0, -6, 0, 1],
}


def _vars(n):
    names = SYSTEM_VARS[n]
    k = len(names)
    return names, {nm: MultiPoly.var(k, i) for i, nm in enumerate(names)}


def _collect_s(p: MultiPoly):
    """Relations = coefficients of powers of s, highest first, each
    sign-normalized (leading graded-lex coefficient positive) and dropped
    when identically zero."""
    out = []
    for e in range(p.degree(0), -1, -1):
        c = p.coeff_in(0, e)
        if c:
            out.append(_signfix(c))
    return out


def _signfix(p: MultiPoly) -> MultiPoly:
    if p and p.sorted_terms()[0][1] < 0:
        return -p
    return p


def derive_system(n: int, sqrt2: FieldElement = None):
    """The ansatz relations for n = 3,4,5,6 as MultiPolys (rational
    coefficients; for n = 6 coefficients live in a tower containing sqrt2,
    which must be supplied)."""
    names, v = _vars(n)
    s = v["s"]
    if n == 3:
        x = v["a"] * s + v["b"]
        y = v["c"] * s + v["d"]
        f = _f_as_mp(3, len(names))
        return _collect_s(y * y - x ** 3 - f)
    if n == 4:
        x = v["a"] * s + v["b"]
        y = s * s + v["c"] * s + v["d"]
        f = _f_as_mp(4, len(names))
        return _collect_s(y * y - x ** 3 - f)
    if n == 5:
        # section (x, y) = ((s^2+as+b)/u^2, (s^3+cs^2+ds+e)/u^3); clearing
        # u^6 and writing U = u^6 gives relations polynomial in U.
        U = v["U"]
        x = s * s + v["a"] * s + v["b"]
        y = s ** 3 + v["c"] * s * s + v["d"] * s + v["e"]
        f = _f_as_mp(5, len(names))
        return _collect_s(y * y - x ** 3 - U * f)
    if n == 6:
        if sqrt2 is None:
            raise EliminateError("derive_system(6) needs a sqrt2 element")
        tower = sqrt2.tower
        one = tower.one()
        k = len(names)

        def c_(q):  # constant in the tower
            return MultiPoly(k, {(0,) * k: one * rat(q)}) if q else MultiPoly(k, {})

        def vt(nm):
            return MultiPoly.var(k, names.index(nm), one)

        s6, a, b, c, d, e, u = (vt(nm) for nm in names)
        g = u * u
        h = u * u * u
        x = a * s6 * s6 + b * s6 + g
        y = c * s6 ** 3 + d * s6 * s6 + e * s6 + h
        # g6(st) = st(st - 2 sqrt2)(st^2 - sqrt2 st - 1)(st^2 - 3 sqrt2 st + 3)
        r2 = MultiPoly(k, {(0,) * k: sqrt2})
        g6 = (s6 * (s6 - c_(2) * r2) * (s6 * s6 - r2 * s6 - c_(1))
              * (s6 * s6 - c_(3) * r2 * s6 + c_(3)))
        rel = y * y - x ** 3 - g6
        out = []
        for exp in range(rel.degree(0), -1, -1):
            ce = rel.coeff_in(0, exp)
            if ce:
                out.append(ce)
        return out
    raise ValueError(f"no ansatz system for n={n}")


def _f_as_mp(n, k):
    out = {}
    for e, c in enumerate(F_COEFFS[n]):
        if c:
            m = [0] * k
            m[0] = e
            out[tuple(m)] = Q(c)
    return MultiPoly(k, out)


def back_substitute(system, solved):
    """Substitute var -> MultiPoly for each entry of `solved` (triangular:
    later RHS may not mention earlier solved vars), then clear the rational
    denominators of each relation."""
    done = []
    for var, repl in solved.items():
        for dv in done:
            if repl.degree(dv) > 0:
                raise NonTriangular(f"substitution for a later variable uses "
                                    f"already-solved slot {dv}")
        done.append(var)
    out = []
    for p in system:
        for var, repl in solved.items():
            p = p.substitute(var, repl)
        out.append(_clear_denoms(p))
    return out


def _clear_denoms(p: MultiPoly) -> MultiPoly:
    den = 1
    for c in p.terms.values():
        d = int(c.denominator)
        den = den * d // _gcd(den, d)
    if den != 1:
        p = p * den
    return _signfix(p)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def eliminate_variable(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    if p.degree(var) <= 0 or q.degree(var) <= 0:
        raise EliminateError("both inputs must depend on the variable")
    r = mp_resultant(p, q, var)
    if not r:
        raise DegenerateResultant("resultant vanished; inputs share a factor")
    return mp_primitive_q(r)


def reduce_power(p: MultiPoly, var: int, deg: int, repl: MultiPoly) -> MultiPoly:
    """Rewrite var^deg -> repl until the degree in var drops below deg."""
    while p.degree(var) >= deg:
        out = MultiPoly(p.nvars, {})
        changed = MultiPoly(p.nvars, {})
        for m, c in p.terms.items():
            if m[var] >= deg:
                mm = m[:var] + (m[var] - deg,) + m[var + 1:]
                changed = changed + MultiPoly(p.nvars, {mm: c})
            else:
                out = out + MultiPoly(p.nvars, {m: c})
        p = out + changed * repl
    return p


def strip_var_power(p: MultiPoly, var: int) -> tuple:
    """Divide out the largest power of the variable; returns (p', k)."""
    if not p:
        return p, 0
    k = min(m[var] for m in p.terms)
    if k == 0:
        return p, 0
    out = {m[:var] + (m[var] - k,) + m[var + 1:]: c for m, c in p.terms.items()}
    return MultiPoly(p.nvars, out), k


def verify_root(p: UniPoly, x) -> bool:
    """Exact membership: p(x) == 0 in x's tower (p may have rational or
    tower coefficients)."""
    if isinstance(x, FieldElement) and p.tower is not x.tower:
        raise TowerMismatch("root candidate from a different tower")
    v = p.evaluate(x)
    return not v


def verify_factorization(p: UniPoly, factors) -> bool:
    acc = UniPoly(p.tower, [1])
    for f in factors:
        acc = acc * f
    return acc == p


def verify_root_identity(lhs: FieldElement, rhs: FieldElement) -> bool:
    if lhs.tower is not rhs.tower:
        raise TowerMismatch("identity across different towers")
    return lhs == rhs


# -- scripted pipelines -------------------------------------------------


def eliminate3():
    """b := -a c^2/3 (using a^3 = -1), then the d-resultant of the two
    remaining relations; returns the primitive c-polynomial and the
    intermediate relations."""
    names, v = _vars(3)
    a, b, c, d = v["a"], v["b"], v["c"], v["d"]
    ia = names.index("a")
    rels = derive_system(3)
    # rels: [a^3+1, c^2-3a^2 b (up to sign), 3ab^2-2cd-3 (sign), d^2-b^3]
    sub = {names.index("b"): mp_exact_div(-(a * c * c), MultiPoly.const(len(names), 3))}
    reduced = []
    for p in back_substitute(rels[1:], sub):
        p = reduce_power(p, ia, 3, MultiPoly.const(len(names), -1))
        p = _clear_denoms(p)
        if p:
            reduced.append(p)
    r3p = next(p for p in reduced if p.degree(names.index("d")) == 1)
    r4p = next(p for p in reduced if p.degree(names.index("d")) == 2)
    res = eliminate_variable(r3p, r4p, names.index("d"))
    res = reduce_power(res, ia, 3, MultiPoly.const(len(names), -1))
    res, _ = strip_var_power(res, names.index("c"))
    # the a-dependence drops out after reduction mod a^3 = -1
    res = mp_primitive_q(res)
    return {"relations": rels, "reduced": reduced,
            "poly": _as_univar(res, names.index("c"))}


def eliminate4():
    """c := a^3/2, d := -(a^6 - 12 a^2 b + 16)/8, then the b-resultant of
    the two remaining relations."""
    names, v = _vars(4)
    a, b = v["a"], v["b"]
    k = len(names)
    rels = derive_system(4)
    half = {names.index("c"): mp_exact_div(a ** 3, MultiPoly.const(k, 2)),
            names.index("d"): mp_exact_div(
                -(a ** 6 - 12 * a * a * b + MultiPoly.const(k, 16)),
                MultiPoly.const(k, 8))}
    subbed = [p for p in back_substitute(rels, half) if p]
    ib = names.index("b")
    p1 = next(p for p in subbed if p.degree(ib) == 2)
    p2 = next(p for p in subbed if p.degree(ib) == 3)
    phi = eliminate_variable(p1, p2, ib)
    return {"relations": rels, "p1": p1, "p2": p2,
            "poly": _as_univar(phi, names.index("a"))}


def q_poly_gcd(fc, gc):
    """Monic gcd of two univariate polynomials over Q, given as ascending
    coefficient lists."""

    def norm(L):
        L = [Q(c) for c in L]
        while L and L[-1] == 0:
            L.pop()
        return L

    A, B = norm(fc), norm(gc)
    while B:
        while len(A) >= len(B):
            f = A[-1] / B[-1]
            sh = len(A) - len(B)
            for i, c in enumerate(B):
                A[i + sh] -= f * c
            while A and A[-1] == 0:
                A.pop()
            if not A:
                break
        A, B = B, A
    if not A:
        raise EliminateError("gcd of two zero polynomials")
    lead = A[-1]
    return [c / lead for c in A]


def eliminate5():
    """c, d, e from the three linear relations, leaving two b-quadratics
    and one b-cubic in (a, b, U).  Each pairwise b-resultant eliminates b
    along a different route, so their a-resultants share only the true
    eliminant: the gcd over Q[U] of two routes is the fundamental
    polynomial, free of the extraneous factors any single route carries."""
    names, v = _vars(5)
    a, b, c, d, e, U = (v[nm] for nm in ("a", "b", "c", "d", "e", "U"))
    k = len(names)
    ib, ia, iU = names.index("b"), names.index("a"), names.index("U")
    rels = derive_system(5)
    csol = mp_exact_div(3 * a + U, MultiPoly.const(k, 2))
    dsol = mp_exact_div(3 * a * a - csol * csol + 3 * b, MultiPoly.const(k, 2))
    esol = mp_exact_div(a ** 3 + 6 * a * b - 2 * csol * dsol - 5 * U,
                        MultiPoly.const(k, 2))
    sub = {names.index("c"): csol, names.index("d"): dsol, names.index("e"): esol}
    subbed = [p for p in back_substitute(rels, sub) if p]
    quads = [p for p in subbed if p.degree(ib) == 2]
    cubic = next(p for p in subbed if p.degree(ib) == 3)
    if len(quads) != 2:
        raise EliminateError("expected exactly two b-quadratics")

    def prim(p):
        p, _ = strip_var_power(p, iU)
        return mp_primitive_q(p)

    r12 = prim(eliminate_variable(quads[0], quads[1], ib))
    r13 = prim(eliminate_variable(quads[0], cubic, ib))
    r23 = prim(eliminate_variable(quads[1], cubic, ib))
    route1 = prim(eliminate_variable(r12, r13, ia))
    route2 = prim(eliminate_variable(r12, r23, ia))
    poly = q_poly_gcd(_as_univar(route1, iU), _as_univar(route2, iU))
    if len(poly) - 1 < 1:
        raise DegenerateResultant("elimination routes share no common root")
    return {"relations": rels, "psi1": r12, "psi2": r13,
            "routes": (_as_univar(route1, iU), _as_univar(route2, iU)),
            "poly": poly}


def eliminate6(sqrt2, budget_seconds: float = 0.0):
    """The full n=6 elimination (degree 240) is far beyond the default
    budget; it runs only when given a positive budget and raises
    EliminateError when the budget is exhausted."""
    import time
    if budget_seconds <= 0:
        raise EliminateError("n=6 full elimination skipped (zero budget)")
    t0 = time.monotonic()

    def check():
        if time.monotonic() - t0 > budget_seconds:
            raise EliminateError("n=6 elimination budget exhausted")

    names, _ = _vars(6)
    rels = derive_system(6, sqrt2)
    # triangular solve of the three relations linear in d, e, h-analogue is
    # not available here (the system is quadratic in every unknown); the
    # intended route is iterated resultants, which explode in degree.
    check()
    raise EliminateError("n=6 full elimination not attempted within budget")


def _as_univar(p: MultiPoly, var: int):
    """Coefficient list (ascending) of a MultiPoly that depends only on one
    variable."""
    out = [Q(0)] * (p.degree(var) + 1)
    for m, cc in p.terms.items():
        if any(e and i != var for i, e in enumerate(m)):
            raise EliminateError("polynomial still involves other variables")
        out[m[var]] = cc
    return out
