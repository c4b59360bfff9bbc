import itertools
from fractions import Fraction

import pytest
import sympy

from quasiwhittaker.catalog import ALIASES, CATALOG, PhiError, build, phi_from_assignments
from quasiwhittaker.liealgebra import Basis, PresentationError, check_ideal, check_jacobi
from quasiwhittaker.specfile import load_algebra_file

ALL = [("heisenberg", {}), ("g_ell", {"ell": "1/2"}), ("g_ell", {"ell": 1}), ("g_ell", {"ell": "3/2"}),
       ("g_ell", {"ell": 2}), ("schrodinger", {"n": 1}), ("schrodinger", {"n": 3}), ("mirror_hv", {}),
       ("hv", {}), ("planar_galilean", {}), ("wab", {"a": 0, "b": -1}), ("wab", {"a": 0, "b": 1}),
       ("wab", {"a": "1/2", "b": 2}), ("witt_borel", {"k": 1}), ("witt_borel", {"k": 5}),
       ("witt_n_plus", {"n": 2}), ("witt_n_plus", {"n": 3})]


@pytest.mark.parametrize("name,params", ALL)
def test_structure(name, params):
    pres = build(name, params)
    assert check_jacobi(pres, window=10, samples=500).ok
    assert check_ideal(pres, window=10).ok


def test_aliases_resolve():
    for alias, target in ALIASES.items():
        assert alias in ALIASES and target in CATALOG
    assert build("W(a,b)", {"a": 0, "b": -1}).name == "wab"


def test_g_ell_shape_and_weights():
    for ell in (Fraction(1, 2), 1, Fraction(3, 2), 2):
        g = build("g_ell", {"ell": ell})
        ideal = [b for b in g.basis() if g.in_ideal(b)]
        assert len(ideal) == 2 * ell + 1 and len(g.basis()) == 3 + len(ideal)
        h = Basis("h", 0)
        for p in ideal:
            w = 2 * (ell - p.index)
            assert g.bracket_basis(h, p) == ({p: w} if w else {})


def test_schrodinger_basis():
    s = build("schrodinger", {"n": 1})
    assert sorted(s.name_of(b) for b in s.basis()) == sorted(["h", "e", "f", "x1", "y1", "z"])


def test_build_errors():
    with pytest.raises(PresentationError, match="unknown algebra"):
        build("gl_n")
    with pytest.raises(PresentationError):
        build("schrodinger", {"n": "1/2"})
    with pytest.raises(PresentationError):
        build("witt_n_plus", {"n": 1})
    with pytest.raises(PresentationError, match="unexpected"):
        build("hv", {"a": 1})


def test_phi_examples():
    hv = build("hv")
    assert phi_from_assignments(hv, {"I3": 1})(Basis("I", 3)) == 1
    h1 = build("heisenberg")
    assert phi_from_assignments(h1, {"z": 1}).support() == [Basis("z", 0)]
    with pytest.raises(PhiError):
        phi_from_assignments(build("planar_galilean"), {"I0": 1})
    with pytest.raises(PhiError):
        phi_from_assignments(hv, {"z3": 1})
    with pytest.raises(PhiError, match="not in the ideal"):
        phi_from_assignments(hv, {"L0": 1})
    with pytest.raises(PhiError):
        phi_from_assignments(build("witt_borel", {"k": 2}), {"d5": 1})


def test_rule_needs_whole_family_in_ideal():
    with pytest.raises(PhiError):
        phi_from_assignments(build("witt_borel", {"k": 2}), {}, {"d": (lambda n: Fraction(1), "1")})


@pytest.mark.parametrize("name,params", [("hv", {}), ("schrodinger", {"n": 2}), ("witt_borel", {"k": 2})])
def test_valid_phi_kills_pp(name, params):
    pres = build(name, params)
    pp = check_ideal(pres).notes["pp_members"]
    free = [b for b in pres.window_basis(3) if pres.in_ideal(b) and pres.name_of(b) not in pp]
    phi = phi_from_assignments(pres, {b: i + 1 for i, b in enumerate(free[:3])})
    assert all(phi(pres.parse_elem(n)) == 0 for n in pp)


# -- independent oracles for the structure constants ---------------------------


def _vector_field(n, alpha, i, t):
    mono = sympy.Mul(*[t[k] ** alpha[k] for k in range(n)])
    return [mono if k == i - 1 else 0 for k in range(n)]


def _commutator(X, Y, t):
    apply = lambda V, f: sum(V[k] * sympy.diff(f, t[k]) for k in range(len(t)))  # noqa: E731
    return [sympy.expand(apply(X, Y[k]) - apply(Y, X[k])) for k in range(len(t))]


@pytest.mark.parametrize("n", [2, 3])
def test_witt_n_plus_matches_vector_fields(n):
    pres = build("witt_n_plus", {"n": n})
    t = sympy.symbols(f"t1:{n + 1}")
    elems = [b for b in pres.window_basis(2)]
    for a, b in itertools.combinations(elems, 2):
        (al, i), (be, j) = a.index, b.index
        want = _commutator(_vector_field(n, al, i, t), _vector_field(n, be, j, t), t)
        got = [0] * n
        for c, coeff in pres.bracket_basis(a, b).items():
            ga, gi = c.index
            got[gi - 1] += coeff * sympy.Mul(*[t[k] ** ga[k] for k in range(n)])
        assert [sympy.expand(g - w) for g, w in zip(got, want)] == [0] * n


def _witt_field(m, t):
    # d_m = -t^(m+1) d/dt satisfies [d_m, d_n] = (m - n) d_(m+n)
    return -t ** (m + 1)


def test_witt_borel_matches_vector_fields():
    t = sympy.symbols("t")
    pres = build("witt_borel", {"k": 1})
    for m, n in itertools.product(range(0, 6), repeat=2):
        X, Y = _witt_field(m, t), _witt_field(n, t)
        want = sympy.expand(X * sympy.diff(Y, t) - Y * sympy.diff(X, t))
        got = sum(c * _witt_field(b.index, t) for b, c in pres.bracket_basis(Basis("d", m), Basis("d", n)).items())
        assert sympy.expand(got - want) == 0


@pytest.mark.parametrize("name,path", [("hv", "docs/examples/hv.yaml"), ("mirror_hv", "docs/examples/mirror_hv.yaml")])
def test_spec_file_reentry_matches_catalog(name, path):
    cat = build(name)
    fil = load_algebra_file(path)
    elems = cat.window_basis(5)
    for a, b in itertools.product(elems, repeat=2):
        assert cat.bracket_basis(a, b) == fil.bracket_basis(a, b), (a, b)


@pytest.mark.parametrize("a,b", [(0, -1), (0, 1), ("1/2", 2), (-5, 1)])
def test_wab_file_matches_catalog(a, b):
    cat = build("wab", {"a": a, "b": b})
    fil = load_algebra_file("docs/examples/wab.yaml", {"a": a, "b": b})
    elems = cat.window_basis(5)
    for x, y in itertools.product(elems, repeat=2):
        assert cat.bracket_basis(x, y) == fil.bracket_basis(x, y)
