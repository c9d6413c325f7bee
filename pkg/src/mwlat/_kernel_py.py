"""Pure-Python kernel for sparse monomial arithmetic in extension towers.

Elements are dicts mapping exponent tuples (one slot per tower generator)
to nonzero rationals.  `get_pow(i, e)` must return the already-reduced
term dict of the i-th generator raised to the power e (for e >= deg_i);
the tower owns that table and grows it lazily.

A compiled twin of this module may be present as `mwlat._termmul`;
`mwlat.kernel` picks one at import time.
"""

from __future__ import annotations

IMPL = "python"


def terms_add(A: dict, B: dict) -> dict:
    out = dict(A)
    for m, c in B.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def terms_neg(A: dict) -> dict:
    return {m: -c for m, c in A.items()}


def terms_scale(A: dict, c) -> dict:
    if not c:
        return {}
    return {m: c * v for m, v in A.items()}


def reduce_terms(T: dict, degs: tuple, get_pow) -> dict:
    """Normalize a raw term dict: every exponent below its generator degree."""
    out: dict = {}
    stack = list(T.items())
    n = len(degs)
    while stack:
        m, c = stack.pop()
        hit = -1
        for i in range(n - 1, -1, -1):
            if m[i] >= degs[i]:
                hit = i
                break
        if hit < 0:
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            continue
        tbl = get_pow(hit, m[hit])
        rest = m[:hit] + (0,) + m[hit + 1:]
        for tm, tc in tbl.items():
            nm = tuple(a + b for a, b in zip(rest, tm))
            stack.append((nm, c * tc))
    return out


def terms_mul(A: dict, B: dict, degs: tuple, get_pow) -> dict:
    if not A or not B:
        return {}
    if len(A) > len(B):
        A, B = B, A
    raw: dict = {}
    for ma, ca in A.items():
        for mb, cb in B.items():
            nm = tuple(a + b for a, b in zip(ma, mb))
            s = raw.get(nm)
            if s is None:
                raw[nm] = ca * cb
            else:
                s = s + ca * cb
                if s:
                    raw[nm] = s
                else:
                    del raw[nm]
    return reduce_terms(raw, degs, get_pow)
