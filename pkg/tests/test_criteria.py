import random
from fractions import Fraction

import pytest
from randphi import VALUES, random_phis

from quasiwhittaker import annihilator as ann
from quasiwhittaker import criteria as cr
from quasiwhittaker.catalog import PhiError, build, phi_from_assignments


def decided(kind):
    return kind in (ann.IRREDUCIBLE, ann.REDUCIBLE)


def agrees(pres, phi, verdict, window=None):
    """The criterion matches the generic engine, and any witness passes the membership oracle."""
    rep = ann.compute_annihilator(pres, phi, window)
    if verdict.witness is not None:
        bound = None if phi.finite else (window.constraint_bound if window else None)
        assert ann.membership(pres, phi, verdict.witness, bound)
    if verdict.kind == ann.REDUCIBLE:
        return bool(rep.y_basis)
    if verdict.kind == ann.IRREDUCIBLE:
        return not rep.y_basis and rep.verdict == ann.IRREDUCIBLE
    return not rep.y_basis


# -- recurrences -------------------------------------------------------------


@pytest.mark.parametrize("seq,order,coeffs", [
    (lambda n: Fraction(1), 1, ["-1"]),
    (lambda n: Fraction(2) ** n, 1, ["-2"]),
    (lambda n: Fraction(n), 2, ["1", "-2"]),
    (lambda n: Fraction(-1) ** n, 1, ["1"]),
    (lambda n: Fraction(n * n), 3, ["-1", "3", "-3"]),
])
def test_recurrence_examples(seq, order, coeffs):
    rec = cr.detect_recurrence(seq)
    assert rec.order == order and [str(c) for c in rec.coeffs] == coeffs


@pytest.mark.parametrize("point", [-3, 0, 5])
def test_point_support_has_no_recurrence(point):
    assert cr.detect_recurrence(lambda n: Fraction(int(n == point)), r_max=6, window=12) is None


def test_non_exp_polynomial_has_no_recurrence():
    assert cr.detect_recurrence(lambda n: Fraction(1, n * n + 1)) is None


def exp_poly(rng):
    """A random exp-polynomial sequence and its minimal recurrence order."""
    ratios = rng.sample([Fraction(r) for r in (1, 2, -1, 3, Fraction(1, 2), -2)], rng.randint(1, 2))
    terms = [(r, rng.randint(0, 1), rng.choice(VALUES)) for r in ratios]

    def seq(n):
        return sum((c * n ** d * r ** n for r, d, c in terms), Fraction(0))
    return seq, sum(d + 1 for _, d, _ in terms)


def test_recurrence_minimality():
    rng = random.Random(11)
    for _ in range(25):
        seq, order = exp_poly(rng)
        rec = cr.detect_recurrence(seq)
        assert rec.order == order and rec.coeffs[0] != 0
        for n in range(-12, 12 - order + 1):
            assert sum(c * seq(n + i) for i, c in enumerate(rec.coeffs)) + seq(n + order) == 0


# -- mirror Heisenberg-Virasoro ------------------------------------------------


def mirror_rules():
    return [("1", lambda n: Fraction(1)), ("2**n", lambda n: Fraction(2) ** n), ("n", lambda n: Fraction(n)),
            ("(-1)**n", lambda n: Fraction(-1) ** n), ("n*2**n", lambda n: n * Fraction(2) ** n),
            ("3 - n*n", lambda n: Fraction(3 - n * n)), ("1/(n*n+1)", lambda n: Fraction(1, n * n + 1))]


def test_mirror_examples():
    m = build("mirror_hv")
    const = phi_from_assignments(m, {}, {"h": (lambda n: Fraction(1), "1")}, 12)
    v = cr.mirror_hv_irreducible(m, const)
    assert v.kind == ann.REDUCIBLE and m.format(v.witness) == "-d-1 + d0"
    fin = phi_from_assignments(m, {"h[1/2]": 1, "h[-3/2]": 2})
    assert cr.mirror_hv_irreducible(m, fin).kind == ann.IRREDUCIBLE
    assert cr.mirror_hv_irreducible(m, phi_from_assignments(m, {})).kind == cr.PRECONDITION_FAILED


def test_mirror_cross_validation():
    m = build("mirror_hv")
    phis = [phi_from_assignments(m, {}, {"h": (f, text)}, 12) for text, f in mirror_rules()]
    _, finite = random_phis("mirror_hv", 20, seed=12)
    for phi in phis + finite:
        v = cr.criterion_for(m, phi)
        assert agrees(m, phi, v, ann.Window(10, 12))
    assert sum(cr.criterion_for(m, phi).kind == ann.REDUCIBLE for phi in phis) == 6


# -- HV and planar Galilean ------------------------------------------------------


@pytest.mark.parametrize("label,check", [("hv", cr.hv_finite_criterion),
                                         ("planar_galilean", cr.planar_galilean_criterion)])
def test_support_criteria_cross_validation(label, check):
    pres, phis = random_phis(label, 25, seed=13)
    kinds = set()
    for phi in phis:
        v = check(pres, phi)
        kinds.add(v.kind)
        assert agrees(pres, phi, v)
    assert kinds >= {ann.IRREDUCIBLE, ann.REDUCIBLE}


def test_support_criteria_errors(make_phi):
    pres, phi = make_phi("hv", {"z2": 1, "I0": 1})
    with pytest.raises(PhiError):
        cr.hv_finite_criterion(pres, phi)
    pres = build("planar_galilean")
    with pytest.raises(PhiError):
        cr.planar_galilean_criterion(pres, phi_from_assignments(pres, {"I1": 1}))


# -- W(a, b) -----------------------------------------------------------------------


@pytest.mark.parametrize("label", ["wab_0_1", "wab_0_-1", "wab_1/2_2"])
def test_wab_cross_validation(label):
    pres, phis = random_phis(label, 25, seed=14)
    for phi in phis:
        v = cr.wab_criterion(pres, phi)
        assert decided(v.kind) and agrees(pres, phi, v)


@pytest.mark.parametrize("a,b,values,kind", [
    (0, -1, {"H3": 1}, ann.IRREDUCIBLE),
    (0, -1, {"H4": 1}, ann.REDUCIBLE),
    (-5, 1, {"H5": 1}, ann.REDUCIBLE),
    (0, 1, {"H5": 1}, ann.IRREDUCIBLE),
    (-5, 1, {"H5": 1, "H6": 1}, ann.IRREDUCIBLE),
    (1, 3, {"H3": 1}, ann.REDUCIBLE),
    (Fraction(1, 2), 2, {"H1": 1}, ann.IRREDUCIBLE),
])
def test_wab_examples(a, b, values, kind):
    pres = build("wab", {"a": a, "b": b})
    phi = phi_from_assignments(pres, values)
    v = cr.wab_criterion(pres, phi)
    assert v.kind == kind and agrees(pres, phi, v)


def test_wab_rejects_rules_and_zero():
    pres = build("wab", {"a": 0, "b": -1})
    rule = phi_from_assignments(pres, {}, {"H": (lambda n: Fraction(1), "1")}, 10)
    with pytest.raises(PhiError):
        cr.wab_criterion(pres, rule)
    assert cr.wab_criterion(pres, phi_from_assignments(pres, {})).kind == cr.PRECONDITION_FAILED


@pytest.mark.parametrize("a,b", [(0, -1), (0, 2), (1, 3), (-2, 1), (2, -1), (Fraction(1, 2), Fraction(1, 2))])
def test_head_tail_identity(a, b):
    """Every nonzero x in g^phi cap g_0 has a + max S = (1 - b) h(x) and a + min S = (1 - b) t(x)."""
    pres = build("wab", {"a": a, "b": b})
    rng = random.Random(15)
    found = 0
    for _ in range(40):
        h = rng.randint(-3, 3)
        spread = rng.choice([0, 0, 1, 2])
        lo = (1 - b) * h - a
        hi = lo if b == 1 else lo + spread * (1 - b)
        support = {int(j) for j in (lo, hi) if Fraction(j).denominator == 1}
        if not support:
            continue
        phi = phi_from_assignments(pres, {f"H{j}": rng.choice(VALUES) for j in support})
        j_hi, j_lo = max(support), min(support)
        for x in ann.compute_annihilator(pres, phi, ann.Window(16)).y_basis:
            head, tail = cr.head_tail(x)
            assert a + j_hi == (1 - b) * head
            assert a + j_lo == (1 - b) * tail
            found += 1
    assert found > 0


# -- W1++ and Wn+ ------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_witt_borel_cross_validation(k):
    pres = build("witt_borel", {"k": k})
    rng = random.Random(16 + k)
    kinds = set()
    for _ in range(20):
        idx = rng.sample(range(k, 2 * k + 1), rng.randint(1, min(3, k + 1)))
        phi = phi_from_assignments(pres, {f"d{i}": rng.choice(VALUES) for i in idx})
        v = cr.witt_borel_criterion(pres, phi)
        kinds.add(v.kind)
        assert agrees(pres, phi, v)
        if v.kind == ann.REDUCIBLE:
            assert pres.format(v.witness) == f"d{k - 1}"
    assert ann.IRREDUCIBLE in kinds


def test_witt_borel_errors():
    pres = build("witt_borel", {"k": 2})
    with pytest.raises(PhiError):
        cr.witt_borel_criterion(pres, phi_from_assignments(pres, {"d5": 1}))
    assert cr.witt_borel_criterion(pres, phi_from_assignments(pres, {})).kind == cr.PRECONDITION_FAILED


@pytest.mark.parametrize("n", [2, 3])
def test_wn_plus_cross_validation(n):
    pres, phis = random_phis(f"witt_n_plus_{n}", 20, seed=17)
    for phi in phis:
        v = cr.wn_plus_height2(n, phi)
        assert agrees(pres, phi, v)


def test_wn_plus_special_phi():
    v = cr.wn_plus_height2(3, {"td[2,0,0;1]": 1, "td[0,2,0;2]": 2, "td[0,0,2;3]": 3})
    assert v.kind == ann.IRREDUCIBLE and v.data["d_one_per_row_and_column"] and v.data["rank"] == 9
    with pytest.raises(PhiError):
        cr.wn_plus_height2(2, {"td[3,0;1]": 1})
    with pytest.raises(PhiError):
        cr.wn_plus_height2(1, {})


def test_verdict_json_and_dispatch(make_phi):
    pres, phi = make_phi("hv", {"I3": 1})
    out = cr.criterion_for(pres, phi).to_json(pres)
    assert out["verdict"] == ann.REDUCIBLE and out["witness"] == "L3" and out["data"]["witness_verified"]
    pres, phi = make_phi("heisenberg", {"z": 1})
    assert cr.criterion_for(pres, phi).route == "generic"
