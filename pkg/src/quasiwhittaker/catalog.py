"""Built-in presentations, each with its designated ideal.

==================  ============================================  =====================
name                algebra                                       ideal p
==================  ============================================  =====================
heisenberg          3-dim Heisenberg h_1                          C z
g_ell               centreless conformal Galilei g^(ell)          span p_k
schrodinger         n-th Schrodinger sch_n                        span x_i, y_i, z
mirror_hv           mirror Heisenberg-Virasoro D                  C c + span h_r, l
hv                  Heisenberg-Virasoro L                         span I_n, z1, z2, z3
planar_galilean     planar Galilean conformal G                   span H_n, I_n, J_n
wab                 W(a, b) = Vir |x A_{a,b}                      span H_i
witt_borel          W_1^{++} with p_k = span d_{>=k}              span d_i (i >= k)
witt_n_plus         a = g_{>=0} of W_n^+                          g_{>=1}
==================  ============================================  =====================
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .exactlinalg import as_rational
from .liealgebra import Basis, IntFamily, LiePresentation, PhiMap, PresentationError, WittFamily

HALF = Fraction(1, 2)


class PhiError(ValueError):
    pass


def _delta(a, b) -> int:
    return 1 if a == b else 0


def _fixed(table: Mapping[tuple[str, str], list[tuple[Basis, object]]]):
    """Rules for a finite table keyed by family-name pairs of single elements."""
    return {pair: (lambda terms: (lambda i, j: terms))(terms) for pair, terms in table.items()}


# ---------------------------------------------------------------------------
# builders


def heisenberg() -> LiePresentation:
    B = Basis
    fams = [IntFamily("x", 0, 0, graded=False, single=True),
            IntFamily("y", 0, 0, graded=False, single=True),
            IntFamily("z", 0, 0, ideal=True, graded=False, single=True)]
    rules = _fixed({("x", "y"): [(B("z", 0), 1)]})
    return LiePresentation("heisenberg", fams, rules, description="3-dimensional Heisenberg algebra h_1",
                           rule_text={("x", "y"): "z"})


def g_ell(ell) -> LiePresentation:
    ell = as_rational(ell)
    if ell <= 0 or (2 * ell).denominator != 1:
        raise PresentationError("ell must be a positive half-integer")
    top = int(2 * ell)
    B = Basis
    fams = [IntFamily("e", 0, 0, graded=False, single=True),
            IntFamily("h", 0, 0, graded=False, single=True),
            IntFamily("f", 0, 0, graded=False, single=True),
            IntFamily("p", 0, top, ideal=True, graded=False)]
    rules = _fixed({("h", "e"): [(B("e", 0), 2)], ("h", "f"): [(B("f", 0), -2)], ("e", "f"): [(B("h", 0), 1)]})
    rules[("h", "p")] = lambda i, k: [(B("p", k), 2 * (ell - k))]
    rules[("e", "p")] = lambda i, k: [(B("p", k - 1), k)] if k > 0 else []
    rules[("f", "p")] = lambda i, k: [(B("p", k + 1), top - k)] if k < top else []
    text = {("h", "e"): "2 e", ("h", "f"): "-2 f", ("e", "f"): "h",
            ("h", "p"): "2(ell - k) p_k", ("e", "p"): "k p_{k-1}", ("f", "p"): "(2 ell - k) p_{k+1}"}
    return LiePresentation("g_ell", fams, rules, {"ell": ell},
                           f"conformal Galilei algebra g^({ell}) = sl_2 |x C^{top + 1}", text)


def schrodinger(n: int = 1) -> LiePresentation:
    if n < 1:
        raise PresentationError("n must be >= 1")
    B = Basis
    fams = [IntFamily("h", 0, 0, graded=False, single=True),
            IntFamily("e", 0, 0, graded=False, single=True),
            IntFamily("f", 0, 0, graded=False, single=True),
            IntFamily("x", 1, n, ideal=True, graded=False),
            IntFamily("y", 1, n, ideal=True, graded=False),
            IntFamily("z", 0, 0, ideal=True, graded=False, single=True)]
    rules = _fixed({("h", "e"): [(B("e", 0), 2)], ("h", "f"): [(B("f", 0), -2)], ("e", "f"): [(B("h", 0), 1)]})
    rules[("h", "x")] = lambda _, i: [(B("x", i), 1)]
    rules[("h", "y")] = lambda _, i: [(B("y", i), -1)]
    rules[("f", "x")] = lambda _, i: [(B("y", i), 1)]
    rules[("e", "y")] = lambda _, i: [(B("x", i), 1)]
    rules[("x", "y")] = lambda i, j: [(B("z", 0), 1)] if i == j else []
    text = {("h", "e"): "2 e", ("h", "f"): "-2 f", ("e", "f"): "h", ("h", "x"): "x_i", ("h", "y"): "-y_i",
            ("f", "x"): "y_i", ("e", "y"): "x_i", ("x", "y"): "delta_ij z"}
    return LiePresentation("schrodinger", fams, rules, {"n": n}, f"Schrodinger algebra sch_{n} = sl_2 |x h_{n}", text)


def mirror_hv() -> LiePresentation:
    B = Basis
    fams = [IntFamily("d"),
            IntFamily("h", shift=HALF, ideal=True),
            IntFamily("c", 0, 0, ideal=True, single=True),
            IntFamily("l", 0, 0, ideal=True, single=True)]

    def dd(m, n):
        out = [(B("d", m + n), m - n)]
        if m + n == 0:
            out.append((B("c", 0), Fraction(m ** 3 - m, 12)))
        return out

    def dh(m, n):
        r = n + HALF
        return [(B("h", m + n), -r)]

    def hh(n1, n2):
        r, s = n1 + HALF, n2 + HALF
        return [(B("l", 0), r)] if r + s == 0 else []

    text = {("d", "d"): "(m - n) d_{m+n} + (m^3 - m)/12 delta_{m+n,0} c", ("d", "h"): "-r h_{m+r}",
            ("h", "h"): "r delta_{r+s,0} l"}
    return LiePresentation("mirror_hv", fams, {("d", "d"): dd, ("d", "h"): dh, ("h", "h"): hh},
                           description="mirror Heisenberg-Virasoro algebra D (h_r stored at r - 1/2)", rule_text=text)


def hv() -> LiePresentation:
    B = Basis
    fams = [IntFamily("L"), IntFamily("I", ideal=True),
            IntFamily("z1", 0, 0, ideal=True, single=True),
            IntFamily("z2", 0, 0, ideal=True, single=True),
            IntFamily("z3", 0, 0, ideal=True, single=True)]

    def LL(m, n):
        out = [(B("L", m + n), n - m)]
        if m + n == 0:
            out.append((B("z1", 0), Fraction(m ** 3 - m, 12)))
        return out

    def LI(m, n):
        out = [(B("I", m + n), n)]
        if m + n == 0:
            out.append((B("z2", 0), m * m + m))
        return out

    def II(m, n):
        return [(B("z3", 0), m)] if m + n == 0 else []

    text = {("L", "L"): "(n - m) L_{m+n} + (m^3 - m)/12 delta_{m+n,0} z1",
            ("L", "I"): "n I_{m+n} + delta_{m+n,0} (m^2 + m) z2", ("I", "I"): "m delta_{m+n,0} z3"}
    return LiePresentation("hv", fams, {("L", "L"): LL, ("L", "I"): LI, ("I", "I"): II},
                           description="Heisenberg-Virasoro algebra L", rule_text=text)


def planar_galilean() -> LiePresentation:
    B = Basis
    fams = [IntFamily("L"), IntFamily("H", ideal=True), IntFamily("I", ideal=True), IntFamily("J", ideal=True)]
    rules = {
        ("L", "L"): lambda n, m: [(B("L", m + n), m - n)],
        ("L", "H"): lambda n, m: [(B("H", m + n), m)],
        ("L", "I"): lambda n, m: [(B("I", m + n), m - n)],
        ("L", "J"): lambda n, m: [(B("J", m + n), m - n)],
        ("H", "I"): lambda n, m: [(B("I", m + n), 1)],
        ("H", "J"): lambda n, m: [(B("J", m + n), -1)],
    }
    text = {("L", "L"): "(m - n) L_{m+n}", ("L", "H"): "m H_{m+n}", ("L", "I"): "(m - n) I_{m+n}",
            ("L", "J"): "(m - n) J_{m+n}", ("H", "I"): "I_{m+n}", ("H", "J"): "-J_{m+n}"}
    return LiePresentation("planar_galilean", fams, rules, description="planar Galilean conformal algebra G",
                           rule_text=text)


def wab(a=0, b=0) -> LiePresentation:
    a, b = as_rational(a), as_rational(b)
    B = Basis
    fams = [IntFamily("L"), IntFamily("H", ideal=True)]
    rules = {
        ("L", "L"): lambda i, j: [(B("L", i + j), j - i)],
        ("L", "H"): lambda i, j: [(B("H", i + j), a + j + b * i)],
    }
    text = {("L", "L"): "(j - i) L_{i+j}", ("L", "H"): "(a + j + b i) H_{i+j}"}
    desc = f"W({a},{b})" + (" (Takiff algebra of centerless Virasoro)" if (a, b) == (0, -1) else "")
    return LiePresentation("wab", fams, rules, {"a": a, "b": b}, desc, text)


def witt_borel(k: int = 1) -> LiePresentation:
    if k < 1:
        raise PresentationError("k must be >= 1")
    B = Basis
    fams = [IntFamily("d", 0, None, ideal=Fraction(k))]
    rules = {("d", "d"): lambda m, n: [(B("d", m + n), m - n)]}
    return LiePresentation("witt_borel", fams, rules, {"k": k},
                           f"Borel subalgebra W_1^++ of the Witt algebra, ideal p_{k} = span d_(>={k})",
                           {("d", "d"): "(m - n) d_{m+n}"})


def _witt_bracket(n: int):
    def rule(x, y):
        (al, i), (be, j) = x, y
        out = []
        # [t^al d_i, t^be d_j] = be_i t^(al+be-e_i) d_j - al_j t^(al+be-e_j) d_i
        if be[i - 1]:
            g = tuple(a + b - (1 if k == i - 1 else 0) for k, (a, b) in enumerate(zip(al, be)))
            out.append((Basis("td", (g, j)), be[i - 1]))
        if al[j - 1]:
            g = tuple(a + b - (1 if k == j - 1 else 0) for k, (a, b) in enumerate(zip(al, be)))
            out.append((Basis("td", (g, i)), -al[j - 1]))
        merged: dict = {}
        for t, c in out:
            merged[t] = merged.get(t, 0) + c
        return list(merged.items())
    return rule


def witt_n_plus(n: int = 2) -> LiePresentation:
    if n < 2:
        raise PresentationError("n must be >= 2")
    fams = [WittFamily("td", n, min_size=1, ideal=Fraction(1))]
    return LiePresentation("witt_n_plus", fams, {("td", "td"): _witt_bracket(n)}, {"n": n},
                           f"a = (W_{n}^+)_(>=0) with p = (W_{n}^+)_(>=1); td[alpha;i] = t^alpha d_i",
                           {("td", "td"): "t^a d_i(t^b) d_j - t^b d_j(t^a) d_i"})


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[..., LiePresentation]
    params: tuple[tuple[str, object], ...]
    phi_note: str


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry("heisenberg", heisenberg, (), "phi(z) may be nonzero"),
    CatalogEntry("g_ell", g_ell, (("ell", HALF),), "any values on p_k (p abelian)"),
    CatalogEntry("schrodinger", schrodinger, (("n", 1),), "values on x_i, y_i; phi(z) = 0 forced"),
    CatalogEntry("mirror_hv", mirror_hv, (), "values or a rule on h_r; phi(l) = 0 forced"),
    CatalogEntry("hv", hv, (), "values on I_n, z1, z2; phi(z3) = 0 forced"),
    CatalogEntry("planar_galilean", planar_galilean, (), "values on H_n; phi(I_n) = phi(J_n) = 0 forced"),
    CatalogEntry("wab", wab, (("a", 0), ("b", 0)), "any values on H_i (p abelian)"),
    CatalogEntry("witt_borel", witt_borel, (("k", 1),), "values on d_k..d_2k; phi(d_(>=2k+1)) = 0 forced"),
    CatalogEntry("witt_n_plus", witt_n_plus, (("n", 2),), "values on degree 1; phi(g_(>=2)) = 0 forced"),
]}

ALIASES = {"h1": "heisenberg", "sch": "schrodinger", "W(a,b)": "wab", "D": "mirror_hv",
           "W1++": "witt_borel", "Wn+": "witt_n_plus", "galilean": "planar_galilean"}

_INT_PARAMS = {"n", "k"}


def build(name: str, params: Mapping | None = None) -> LiePresentation:
    """Construct a catalog presentation by name."""
    entry = CATALOG.get(ALIASES.get(name, name))
    if entry is None:
        raise PresentationError(f"unknown algebra {name!r}; known: {', '.join(CATALOG)}")
    given = dict(params or {})
    kwargs = {}
    for key, default in entry.params:
        v = given.pop(key, default)
        if key in _INT_PARAMS:
            v = as_rational(v)
            if v.denominator != 1:
                raise PresentationError(f"parameter {key} must be an integer")
            v = int(v)
        kwargs[key] = v
    if given:
        raise PresentationError(f"unexpected parameters for {entry.name}: {sorted(given)}")
    return entry.builder(**kwargs)


# ---------------------------------------------------------------------------
# homomorphisms


def _pairs_meeting(pres: LiePresentation, targets: list, window: int):
    """Ideal basis pairs whose bracket can meet ``targets`` (by degree when graded)."""
    if pres.finite:
        ideal = [b for b in pres.basis() if pres.in_ideal(b)]
        yield from itertools.combinations(ideal, 2)
        return
    ideal_win = pres.ideal_window(window)
    degs = {pres.degree(t) for t in targets}
    for p in ideal_win:
        for d in degs:
            for q in pres.slice(d - pres.degree(p), ideal=True):
                yield p, q


def phi_from_assignments(pres: LiePresentation, assignments: Mapping, rule: Mapping | None = None,
                         window: int = 10) -> PhiMap:
    """Validated homomorphism ``phi: p -> Q``.

    ``assignments`` maps basis elements (or their names) to rationals.  ``rule``
    maps a family name to ``(callable(index), text)``.  The condition
    ``phi([p, p']) = 0`` is checked on every ideal pair whose bracket can meet
    the support; for rule-based maps the check runs on the ideal window and
    the window is recorded.
    """
    values = {}
    for key, val in assignments.items():
        b = pres.parse_elem(key) if isinstance(key, str) else key
        pres.check(b)
        if not pres.in_ideal(b):
            raise PhiError(f"{pres.name_of(b)} is not in the ideal")
        values[b] = as_rational(val)
    rules = dict(rule or {})
    for fam in rules:
        f = pres.family.get(fam)
        if f is None:
            raise PhiError(f"rule for unknown family {fam!r}")
        if f.ideal is not True:
            raise PhiError(f"rules need a family lying entirely in the ideal; {fam} does not")
    phi = PhiMap(pres, values, rules, validated_window=window if rules else None)
    if phi.finite:
        support = phi.support()
        targets = support
        pairs = _pairs_meeting(pres, targets, window) if support else ()
    else:
        ideal = pres.basis() if pres.finite else pres.ideal_window(window)
        pairs = itertools.combinations([b for b in ideal if pres.in_ideal(b)], 2)
    for p, q in pairs:
        val = phi.on(pres.bracket_basis(p, q))
        if val:
            raise PhiError(f"not a homomorphism: phi([{pres.name_of(p)}, {pres.name_of(q)}]) = {val} != 0")
    return phi
