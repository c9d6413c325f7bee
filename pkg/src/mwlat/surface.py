"""Weierstrass surfaces y^2 = x^3 + f(parameter), their sections, and the
geometric maps between models: base change of the parameter, the order-4
twists phi_n, scaling to polynomial models, parameter shifts, and the
specialization maps at 0 and infinity."""

from __future__ import annotations

from .qfield import FieldElement, TowerMismatch
from .upoly import RationalFunction, UniPoly, rf_evaluate_poly


class SurfaceError(Exception):
    pass


class NotOnCurve(SurfaceError):
    pass


class ModelMismatch(SurfaceError):
    pass


class MissingRootOfUnity(SurfaceError):
    pass


class PoleAtPlace(SurfaceError):
    pass


class ShapeMismatch(SurfaceError):
    pass


class Surface:
    """y^2 = x^3 + f over tower(parameter)."""

    def __init__(self, tower, f: RationalFunction, name: str = ""):
        if not f:
            raise SurfaceError("f = 0 gives a singular surface")
        self.tower = tower
        self.f = f
        self.name = name

    def __repr__(self):
        return f"Surface({self.name or self.f!r})"


class Section:
    def __init__(self, surface: Surface, x: RationalFunction,
                 y: RationalFunction, label: str = ""):
        if x.tower is not surface.tower or y.tower is not surface.tower:
            raise TowerMismatch("section coordinates off the surface tower")
        self.surface = surface
        self.x = x
        self.y = y
        self.label = label
        if y * y - x * x * x - surface.f:
            raise NotOnCurve(label or "section fails the Weierstrass equation")

    def is_polynomial(self) -> bool:
        return self.x.den.deg == 0 and self.y.den.deg == 0

    def __repr__(self):
        return f"Section({self.label or (self.x, self.y)})"


def on_curve(x: RationalFunction, y: RationalFunction, S: Surface) -> bool:
    if x.tower is not S.tower or y.tower is not S.tower:
        raise TowerMismatch("coordinates off the surface tower")
    return not (y * y - x * x * x - S.f)


def base_change(sec: Section, rho: RationalFunction, target: Surface) -> Section:
    """Pull a section back along parameter substitution old = rho(new).
    Checks that f_old(rho) equals the target f exactly."""
    if sec.surface.f.substitute(rho) != target.f:
        raise ModelMismatch("substituted model differs from the target surface")
    return Section(target, sec.x.substitute(rho), sec.y.substitute(rho),
                   label=sec.label and sec.label + "|bc")


def _find_unit(tower, names):
    for nm in names:
        if nm in tower.names:
            return tower.gen(nm)
    return None


def apply_phi(sec: Section, n: int, zeta2n: FieldElement = None,
              i_unit: FieldElement = None) -> Section:
    """(x(t), y(t)) -> (-x(z t), i y(z t)) with z a primitive 2n-th root of
    unity; an automorphism of y^2 = x^3 + t^n + 1/t^n for n = 4, 6."""
    t = sec.surface.tower
    if zeta2n is None:
        zeta2n = _find_unit(t, ["z8"] if n == 4 else ["z12"])
    if i_unit is None:
        i_unit = _find_unit(t, ["i"])
        if i_unit is None and "z12" in t.names:
            i_unit = t.gen("z12") ** 3
        if i_unit is None and "z8" in t.names:
            i_unit = t.gen("z8") ** 2
    if zeta2n is None or i_unit is None:
        raise MissingRootOfUnity(f"need zeta_{2*n} and i in the tower")
    scaled = RationalFunction(UniPoly(t, [0, zeta2n]))
    x2 = -sec.x.substitute(scaled)
    y2 = i_unit * sec.y.substitute(scaled)
    return Section(sec.surface, x2, y2, label=sec.label and "phi(" + sec.label + ")")


def twist_model(sec: Section, m: int) -> Section:
    """(x, y) -> (t^{2m} x, t^{3m} y) on the surface with f -> t^{6m} f."""
    t = sec.surface.tower
    def p(k):
        if k >= 0:
            return RationalFunction(UniPoly(t, [0] * k + [1]))
        return RationalFunction(UniPoly(t, [1]), UniPoly(t, [0] * (-k) + [1]))
    S2 = Surface(t, sec.surface.f * p(6 * m),
                 name=sec.surface.name and sec.surface.name + f"~{m}")
    return Section(S2, sec.x * p(2 * m), sec.y * p(3 * m), label=sec.label)


def shift_surface(S: Surface, offset: FieldElement) -> Surface:
    """Substitute parameter = new_parameter + offset."""
    t = S.tower
    shift = RationalFunction(UniPoly(t, [offset, 1]))
    return Surface(t, S.f.substitute(shift), name=S.name and S.name + "+shift")


def shift_section(sec: Section, offset: FieldElement, target: Surface) -> Section:
    t = sec.surface.tower
    shift = RationalFunction(UniPoly(t, [offset, 1]))
    if sec.surface.f.substitute(shift) != target.f:
        raise ModelMismatch("shifted model differs from the target surface")
    return Section(target, sec.x.substitute(shift), sec.y.substitute(shift),
                   label=sec.label)


def specialize(sec: Section, place: str) -> FieldElement:
    """place='zero': (x/y)(0).  place='infinity': value at infinity of
    s*x/y (the leading-coefficient ratio for the monic section shapes)."""
    if place == "zero":
        ratio = sec.x / sec.y
        try:
            return ratio.value_at_zero()
        except Exception as e:
            raise PoleAtPlace(str(e)) from None
    if place == "infinity":
        t = sec.surface.tower
        s = RationalFunction.var(t)
        ratio = s * sec.x / sec.y
        if ratio.num.deg > ratio.den.deg:
            raise ShapeMismatch("s*x/y has a pole at infinity")
        return ratio.value_at_infinity()
    raise ValueError(f"unknown place {place!r}")
