"""Height pairings of polynomial sections via the intersection-number
formula

    (P.Q) = deg gcd(dx, dy) + min{cap_x - deg dx, cap_y - deg dy}

with caps (2,3) on rational elliptic surfaces and (4,6) on the twisted K3
polynomial models, plus Gram-matrix assembly and exact determinants."""

from __future__ import annotations

from ._rat import Q, rat, rat_str
from .upoly import UniPoly, deg_gcd
from .surface import Section


class HeightError(Exception):
    pass


class SamePoint(HeightError):
    pass


class NonPolynomialCoordinates(HeightError):
    pass


class CapExceeded(HeightError):
    pass


class DimensionMismatch(HeightError):
    pass


_CAPS = {"rational": (2, 3), "k3": (4, 6)}
_SELF = {"rational": Q(2), "k3": Q(4)}
_SHIFT = {"rational": Q(1), "k3": Q(2)}


def _poly(rf, what):
    if rf.den.deg != 0:
        raise NonPolynomialCoordinates(f"{what} is not polynomial")
    return rf.num


def intersection_number(P: Section, Q_: Section, model: str) -> int:
    capx, capy = _CAPS[model]
    px, py = _poly(P.x, "x(P)"), _poly(P.y, "y(P)")
    qx, qy = _poly(Q_.x, "x(Q)"), _poly(Q_.y, "y(Q)")
    for p, cap, what in ((px, capx, "x(P)"), (qx, capx, "x(Q)"),
                         (py, capy, "y(P)"), (qy, capy, "y(Q)")):
        if p.deg > cap:
            raise CapExceeded(f"{what} exceeds degree cap {cap}")
    dx = px - qx
    dy = py - qy
    if not dx and not dy:
        raise SamePoint("intersection number needs distinct sections")
    # deg(0) counts as the cap: equal coordinates agree at infinity too,
    # so the min-term contributes nothing there.
    ddx = dx.deg if dx else capx
    ddy = dy.deg if dy else capy
    if not dx:
        g = ddy if dy else 0
    elif not dy:
        g = ddx
    else:
        g = deg_gcd(dx, dy)
    val = g + min(capx - ddx, capy - ddy)
    if val < 0:
        raise HeightError("negative intersection number (bad input shapes)")
    return val


def pairing(P: Section, Q_: Section, model: str) -> Q:
    if P is Q_ or (P.x == Q_.x and P.y == Q_.y):
        return _SELF[model]
    return _SHIFT[model] - intersection_number(P, Q_, model)


class GramMatrix:
    def __init__(self, entries, labels=None):
        n = len(entries)
        self.entries = [[rat(v) for v in row] for row in entries]
        for row in self.entries:
            if len(row) != n:
                raise DimensionMismatch("matrix is not square")
        self.labels = list(labels) if labels else [str(i + 1) for i in range(n)]

    @property
    def dim(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_symmetric(self) -> bool:
        e = self.entries
        n = self.dim
        return all(e[i][j] == e[j][i] for i in range(n) for j in range(i))

    def symmetrized(self, prefer="upper"):
        """Copy with entries mirrored from one triangle (for printed data
        with transcription asymmetries)."""
        n = self.dim
        e = self.entries
        out = [[e[i][j] if (j >= i) == (prefer == "upper") else e[j][i]
                for j in range(n)] for i in range(n)]
        return GramMatrix(out, self.labels)

    def scaled(self, c):
        c = rat(c)
        return GramMatrix([[v * c for v in row] for row in self.entries],
                          self.labels)

    def leading_minors(self):
        return [det_exact(GramMatrix([r[:k] for r in self.entries[:k]]))
                for k in range(1, self.dim + 1)]

    def to_json(self):
        return {"labels": self.labels,
                "entries": [[rat_str(v) for v in row] for row in self.entries],
                "det": rat_str(det_exact(self))}

    def __repr__(self):
        rows = "; ".join(" ".join(rat_str(v) for v in row)
                         for row in self.entries)
        return f"GramMatrix({rows})"


def gram(sections, model: str, labels=None) -> GramMatrix:
    n = len(sections)
    e = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        e[i][i] = _SELF[model]
        for j in range(i):
            try:
                v = pairing(sections[i], sections[j], model)
            except HeightError as exc:
                raise type(exc)(f"pair ({i + 1},{j + 1}): {exc}") from None
            e[i][j] = e[j][i] = v
    return GramMatrix(e, labels or [getattr(s, "label", str(k + 1))
                                    for k, s in enumerate(sections)])


def det_exact(M: GramMatrix) -> Q:
    """Fraction-free Bareiss determinant after clearing denominators."""
    n = M.dim
    if n == 0:
        return Q(1)
    scale = Q(1)
    a = []
    for row in M.entries:
        den = 1
        for v in row:
            den = den * int(v.denominator) // _gcd(den, int(v.denominator))
        scale = scale / Q(den)
        a.append([int(v * den) for v in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Q(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Q(sign * a[n - 1][n - 1]) * scale


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def det_cofactor(M: GramMatrix) -> Q:
    """Naive cofactor expansion; an oracle for small matrices."""
    e = M.entries
    n = M.dim

    def rec(rows, cols):
        if len(cols) == 1:
            return e[rows[0]][cols[0]]
        total = Q(0)
        sub = rows[1:]
        for k, c in enumerate(cols):
            v = e[rows[0]][c]
            if v:
                rest = cols[:k] + cols[k + 1:]
                term = v * rec(sub, rest)
                total = total + (term if k % 2 == 0 else -term)
        return total

    return rec(list(range(n)), list(range(n)))


def assemble_base_change_gram(Rp: GramMatrix) -> GramMatrix:
    """[[2R', -R'], [-R', 2R']]: Gram of the two parameter branches of a
    quadratic base change with cross terms -1/2 of the original pairing,
    all scaled by the extension degree 2."""
    n = Rp.dim
    e = Rp.entries
    out = [[Q(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = 2 * e[i][j]
            out[n + i][n + j] = 2 * e[i][j]
            out[i][n + j] = -e[i][j]
            out[n + i][j] = -e[i][j]
    return GramMatrix(out, Rp.labels + [l + "'" for l in Rp.labels])


def compare_matrices(A: GramMatrix, B: GramMatrix):
    """List of (i, j, A_ij, B_ij) mismatches, 0-based; empty means equal."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"{A.dim} vs {B.dim}")
    diffs = []
    for i in range(A.dim):
        for j in range(A.dim):
            if A.entries[i][j] != B.entries[i][j]:
                diffs.append((i, j, A.entries[i][j], B.entries[i][j]))
    return diffs
