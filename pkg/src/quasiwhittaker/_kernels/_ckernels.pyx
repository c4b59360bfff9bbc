# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; same contract as ``_pure``."""
from math import gcd


cdef dict _normalize(dict row):
    cdef object g = gcd(*row.values())
    cdef object lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


cdef dict _eliminate(dict row, dict prow, object col):
    cdef object a = prow[col]
    cdef object b = row[col]
    cdef object g = gcd(a, b)
    cdef dict out
    cdef object k, v, nv
    a //= g
    b //= g
    if a != 1:
        out = {}
        for k, v in row.items():
            out[k] = a * v
    else:
        out = dict(row)
    for k, v in prow.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    if out:
        _normalize(out)
    return out


def row_reduce(rows, bint reduced=True):
    cdef dict pivot_rows = {}
    cdef dict r, prow, row2
    cdef list pivots
    cdef Py_ssize_t i, j
    cdef object c, c2
    for row in rows:
        r = {}
        for c, v in row.items():
            if v:
                r[c] = v
        while r:
            c = min(r)
            prow = pivot_rows.get(c)
            if prow is None:
                pivot_rows[c] = _normalize(r)
                break
            r = _eliminate(r, prow, c)
    pivots = sorted(pivot_rows)
    if reduced:
        for i in range(len(pivots) - 1, 0, -1):
            c = pivots[i]
            prow = pivot_rows[c]
            for j in range(i):
                c2 = pivots[j]
                row2 = pivot_rows[c2]
                if c in row2:
                    pivot_rows[c2] = _eliminate(row2, prow, c)
    return [pivot_rows[c] for c in pivots], pivots


cdef inline void _accum(dict res, object m2, object val):
    cdef object v = res.get(m2, 0) + val
    if v:
        res[m2] = v
    else:
        del res[m2]


def act_monomial(b, tuple mono, engine, dict memo):
    cdef tuple key = (b, mono)
    cdef object hit = memo.get(key)
    if hit is not None:
        return hit
    cdef dict res = {}
    cdef object u, s, m, c, m2, c2, g
    cdef tuple rest
    if not mono:
        if engine.free(b):
            res[(b,)] = 1
        else:
            s = engine.scalar(b)
            if s:
                res[()] = s
    else:
        u = mono[0]
        if engine.free(b) and engine.skey(b) <= engine.skey(u):
            res[(b,) + mono] = 1
        else:
            rest = mono[1:]
            for m, c in (<dict>act_monomial(b, rest, engine, memo)).items():
                for m2, c2 in (<dict>act_monomial(u, m, engine, memo)).items():
                    _accum(res, m2, c * c2)
            for g, c in engine.bracket(b, u).items():
                for m2, c2 in (<dict>act_monomial(g, rest, engine, memo)).items():
                    _accum(res, m2, c * c2)
    memo[key] = res
    return res
