"""Pure-Python kernels: integer row reduction and PBW straightening.

The compiled module ``_ckernels`` implements the same two functions with the
same signatures; ``quasiwhittaker._kernels`` picks one at import time.
"""
from math import gcd


def _normalize(row):
    g = gcd(*row.values())
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] //= g
    return row


def _eliminate(row, prow, col):
    # row <- a*row - b*prow, cancelling ``col``; content removed afterwards
    a = prow[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {k: a * v for k, v in row.items()} if a != 1 else dict(row)
    for k, v in prow.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    if out:
        _normalize(out)
    return out


def row_reduce(rows, reduced=True):
    """Fraction-free echelon form of sparse integer rows.

    ``rows`` is an iterable of ``{column: int}`` dicts (columns are ints).
    Returns ``(echelon_rows, pivot_columns)``; each returned row is primitive
    with a positive pivot, and rows are sorted by pivot column.  With
    ``reduced`` every pivot column is cleared from all other rows.
    """
    pivot_rows = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
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
            for c2 in pivots[:i]:
                row2 = pivot_rows[c2]
                if c in row2:
                    pivot_rows[c2] = _eliminate(row2, prow, c)
    return [pivot_rows[c] for c in pivots], pivots


def act_monomial(b, mono, engine, memo):
    """Normal form of ``b . (mono . w)``.

    ``mono`` is a tuple of generators sorted by ``engine.skey``.  The engine
    supplies ``free(g)`` (generator stays in monomials), ``skey(g)``,
    ``bracket(a, b)`` (dict in the tiered basis) and ``scalar(g)`` (the value
    a non-free generator takes on the cyclic vector).  Results are cached in
    ``memo`` keyed on ``(b, mono)``.
    """
    key = (b, mono)
    hit = memo.get(key)
    if hit is not None:
        return hit
    res = {}
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
            # b u rest = u (b rest) + [b, u] rest
            for m, c in act_monomial(b, rest, engine, memo).items():
                for m2, c2 in act_monomial(u, m, engine, memo).items():
                    v = res.get(m2, 0) + c * c2
                    if v:
                        res[m2] = v
                    else:
                        del res[m2]
            for g, c in engine.bracket(b, u).items():
                for m2, c2 in act_monomial(g, rest, engine, memo).items():
                    v = res.get(m2, 0) + c * c2
                    if v:
                        res[m2] = v
                    else:
                        del res[m2]
    memo[key] = res
    return res
