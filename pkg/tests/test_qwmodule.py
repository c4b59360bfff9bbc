import random
from fractions import Fraction

import pytest
from randphi import CONTEXTS, random_phis

from quasiwhittaker import annihilator as ann
from quasiwhittaker import qwmodule as qw
from quasiwhittaker.exactlinalg import SpanTester
from quasiwhittaker.liealgebra import LieElement
from quasiwhittaker.multiindex import compare, height_and_hat


def sch1(make_phi):
    pres, phi = make_phi("schrodinger", {"x1": 1}, {"n": 1})
    return pres, phi, qw.context_for(pres, phi)


def test_action_examples(make_phi):
    pres, phi, ctx = sch1(make_phi)
    el = pres.parse_elem
    assert ctx.format(qw.act(ctx, el("f"), ctx.w)) == "f w"
    assert qw.act(ctx, el("x1"), ctx.w) == ctx.w
    assert qw.act(ctx, el("y1"), ctx.w) == {}
    # [x1, f] = -y1 acts by 0 on w
    assert qw.act(ctx, el("x1"), ctx.vector({("f",): 1})) == ctx.vector({("f",): 1})
    # [y1, f] = 0 and y1 w = 0
    assert qw.act(ctx, el("y1"), ctx.vector({("f", "f"): 1})) == {}
    # [x1, f^2] w = -2 y1 f w = -2 f y1 w = 0, so x1 f^2 w = f^2 w
    assert qw.act(ctx, el("x1"), ctx.vector({("f", "f"): 1})) == ctx.vector({("f", "f"): 1})
    triv = qw.ModuleContext.trivial(pres, phi)
    ef = triv.vector({("e", "f"): 1})
    fe = qw.act(triv, el("f"), triv.vector({("e",): 1}))
    assert triv.format(fe) == triv.format(ef - triv.vector({("h",): 1}))


def test_letters_and_formatting(make_phi):
    pres, phi, ctx = sch1(make_phi)
    assert ctx.y_names() == ["f"]
    v = ctx.vector({("h", "f"): 2, (): Fraction(-1, 3)})
    assert ctx.format(v) == "-1/3*w + 2*h f w"
    assert ctx.vector_json(v) == [["w", "-1/3"], ["h f w", "2"]]
    with pytest.raises(qw.ModuleError):
        ctx.monomial(["x1"])


def leading_cases(ctx, max_size, index_bound=2):
    xs = ctx.x_letters(index_bound)
    ys = [ctx.y_letter(j) for j in range(len(ctx.ys))]
    tails = [()] + [(y,) for y in ys]
    for s in range(1, max_size + 1):
        for xm in ctx.monomials(xs, s):
            if len(xm) != s:
                continue
            for tail in tails:
                yield xm, tail


@pytest.mark.parametrize("name,params,values,max_size", [
    ("schrodinger", {"n": 1}, {"x1": 1}, 4),
    ("g_ell", {"ell": 1}, {"p1": 1}, 4),
    ("heisenberg", {}, {"z": 1}, 4),
    ("hv", {}, {"I1": 1, "I2": -1}, 3),
])
@pytest.mark.parametrize("partition", ["trivial", "annihilator"])
def test_leading_term_identity(make_phi, name, params, values, max_size, partition):
    """(p - phi(p)) x^a y^b w = a_k phi([p, x_k]) x^hat(a) y^b w + lower x-parts, with y^b unchanged."""
    pres, phi = make_phi(name, values, params)
    ctx = qw.ModuleContext.trivial(pres, phi) if partition == "trivial" else qw.context_for(pres, phi)
    checked = 0
    for xm, tail in leading_cases(ctx, max_size):
        mono = tuple(sorted(xm + tail))
        alpha, beta = qw.split(mono)
        k, hat = height_and_hat(alpha)
        xk = LieElement({k[2]: 1})
        for p in ctx.relevant_p(mono):
            out = qw.shifted(ctx, p, {mono: 1})
            want = alpha[k] * phi.on(pres.bracket({p: 1}, xk))
            got = 0
            for m, c in out.items():
                a, b = qw.split(m)
                assert b == beta
                if a == hat:
                    got = c
                else:
                    assert compare(a, hat) < 0
            assert got == want
            checked += 1
    assert checked > 0 or not ctx.x_letters(2)


@pytest.mark.parametrize("name,params,values,n", [
    ("schrodinger", {"n": 1}, {"x1": 1}, 3),
    ("g_ell", {"ell": "1/2"}, {"p0": 1}, 3),
    ("hv", {}, {"I0": 1, "I1": 1}, 3),
    ("hv", {}, {"I2": 1}, 2),
])
def test_whittaker_vectors_are_y_monomials(make_phi, name, params, values, n):
    pres, phi = make_phi(name, values, params)
    ctx = qw.context_for(pres, phi)
    res = qw.whittaker_vectors(ctx, n)
    t = len(ctx.ys)
    want = {m for m in ctx.monomials([ctx.y_letter(j) for j in range(t)], n)}
    span = SpanTester([v for v, _ in res.vectors])
    assert res.dimension == len(want)
    assert all(span.contains({m: 1}) for m in want)
    for v, psi in res.vectors:
        assert psi is phi and qw.is_whittaker(ctx, v)
        # the whittaker space is stable under g^phi
        for y in ctx.ys:
            assert qw.is_whittaker(ctx, qw.act(ctx, y, v))


def test_type_free_search(make_phi):
    pres, phi, ctx = sch1(make_phi)
    res = qw.whittaker_vectors(ctx, 3, type_free=True)
    assert res.dimension == 4 and all(psi.to_json() == phi.to_json() for _, psi in res.vectors)
    assert res.types_checked >= 1


def test_rational_eigenvalues():
    # [[1, 1], [0, 2]] on indices 0, 1
    block = {(0, 0): Fraction(1), (0, 1): Fraction(1), (1, 1): Fraction(2)}
    assert qw._rational_eigenvalues(block, [0, 1]) == {Fraction(1), Fraction(2)}
    assert qw._rational_eigenvalues({(0, 1): Fraction(1), (1, 0): Fraction(2)}, [0, 1]) == set()


def test_reduce(make_phi):
    pres, phi = make_phi("hv", {"I0": 1, "I1": 1})
    ctx = qw.context_for(pres, phi)
    end, trace = qw.reduce(ctx, ctx.vector({("L-1", "L-2"): 1}))
    assert qw.proportional_to_w(end) and 1 <= len(trace) <= 2
    with pytest.raises(qw.ModuleError):
        qw.reduce(ctx, {})
    pres, phi, ctx = sch1(make_phi)
    v = ctx.vector({("f", "f"): 3, (): 1})
    assert qw.reduce(ctx, v) == (v, [])


@pytest.mark.parametrize("label", ["sch1", "hv", "planar_galilean", "wab_0_-1", "witt_borel_2", "witt_n_plus_2"])
def test_reduce_endpoints_are_whittaker(label):
    pres, phis = random_phis(label, 4, seed=5)
    rng = random.Random(5)
    for phi in phis:
        ctx = qw.context_for(pres, phi)
        for _ in range(5):
            v = qw.random_vector(ctx, rng, 3, 2)
            end, trace = qw.reduce(ctx, v)
            assert end and qw.is_whittaker(ctx, end) and len(trace) <= v.max_size


def test_probe_examples(make_phi):
    for name, values, found in [("hv", {"I0": 1, "I1": 1}, False), ("hv", {"I3": 1}, True),
                                ("heisenberg", {"z": 1}, True), ("planar_galilean", {"H0": 1, "H2": 1}, False)]:
        pres, phi = make_phi(name, values)
        res = qw.irreducibility_probe(pres, phi, 4, 20, seed=0)
        assert res.found_witness == found
        if found:
            ctx = qw.ModuleContext.trivial(pres, phi)
            assert qw.is_whittaker(ctx, res.witness) and not qw.proportional_to_w(res.witness)


def test_j_xi_and_bland_quotient(make_phi):
    pres, phi = make_phi("schrodinger", {"x1": 1}, {"n": 1})
    rep = ann.compute_annihilator(pres, phi)
    ctx = qw.ModuleContext.universal(pres, phi, rep)
    f = LieElement({pres.parse_elem("f"): 1})
    for xi in (Fraction(0), Fraction(1), Fraction(-2, 3)):
        j = qw.j_xi_submodule(ctx, xi, 5)
        assert ctx.w not in j
        assert ctx.vector({("f", "f"): 1, ("f",): -xi}) in j
        assert ctx.vector({("h", "f"): 1, ("h",): -xi}) in j
        bland = qw.ModuleContext.bland(pres, phi, rep, [xi])
        assert qw.act(bland, f, bland.w) == bland.w * xi
        with pytest.raises(qw.ModuleError):
            j.contains({tuple(ctx.monomial(["f"] * 6)): 1})


def test_bland_rejects_bad_extensions(make_phi):
    pres, phi = make_phi("heisenberg", {"z": 1})
    rep = ann.compute_annihilator(pres, phi)
    with pytest.raises(qw.ModuleError):
        qw.ModuleContext.bland(pres, phi, rep, [0, 0])
    with pytest.raises(qw.ModuleError):
        qw.ModuleContext.bland(pres, phi, rep, [0])
    with pytest.raises(qw.ModuleError):
        qw.ModuleContext(pres, phi, rep, mode="other")


def test_bland_reduce_lands_on_w(make_phi):
    pres, phi = make_phi("schrodinger", {"x1": 1}, {"n": 1})
    rep = ann.compute_annihilator(pres, phi)
    bland = qw.ModuleContext.bland(pres, phi, rep, [Fraction(-2, 3)])
    rng = random.Random(8)
    for _ in range(10):
        end, _ = qw.reduce(bland, qw.random_vector(bland, rng, 4))
        assert qw.proportional_to_w(end)


def test_locally_finite(make_phi):
    pres, phi, ctx = sch1(make_phi)
    assert qw.locally_finite_check(ctx, ctx.w) == (True, 1)
    assert qw.locally_finite_check(ctx, ctx.vector({("f", "f", "f"): 1})) == (True, 1)
    ok, dim = qw.locally_finite_check(ctx, ctx.vector({("h", "h"): 1}))
    assert ok and dim == 3


def test_degree_and_leading(make_phi):
    pres, phi, ctx = sch1(make_phi)
    v = ctx.vector({("h", "e"): 1, ("e", "e"): 2, ("f",): 1})
    assert qw.degree(v).size == 2
    assert qw.leading(v).x_part == qw.degree(v)
    with pytest.raises(qw.ModuleError):
        qw.degree({})


def random_letter(ctx, rng, index_bound=2):
    free = ctx.free_letters(index_bound)
    ideal = [ctx.letter(p) for p in (ctx.pres.basis() if ctx.pres.finite else ctx.pres.ideal_window(index_bound))
             if ctx.pres.in_ideal(p)]
    return rng.choice(free + ideal)


def axiom_defect(ctx, g, h, v):
    lhs = qw.act(ctx, ctx.from_letter(g), qw.act(ctx, ctx.from_letter(h), v))
    rhs = qw.act(ctx, ctx.from_letter(h), qw.act(ctx, ctx.from_letter(g), v))
    br = ctx.pres.bracket(ctx.from_letter(g), ctx.from_letter(h))
    return lhs - rhs - qw.act(ctx, br, v)


@pytest.mark.parametrize("label", sorted(CONTEXTS))
def test_module_axiom(backend, label):
    pres, phis = random_phis(label, 1, seed=6)
    ctx = qw.context_for(pres, phis[0])
    rng = random.Random(6)
    for _ in range(15):
        g, h = random_letter(ctx, rng), random_letter(ctx, rng)
        v = qw.random_vector(ctx, rng, 2, 2)
        assert not axiom_defect(ctx, g, h, v)
