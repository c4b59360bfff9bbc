"""The regression table run by ``quasiwhittaker verify-paper``.

Each case is a small function returning ``(passed, detail)``; ``detail`` is
JSON-ready and free of timings so that reports are byte-stable for a seed.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from . import annihilator as ann
from . import criteria as cr
from . import qwmodule as qw
from .catalog import CATALOG, PhiError, build, phi_from_assignments
from .exactlinalg import SparseMatrix, nullspace, rank
from .liealgebra import LieElement, check_ideal, check_jacobi


@dataclass(frozen=True)
class Case:
    id: str
    group: str
    title: str
    run: Callable[[int], tuple[bool, dict]]


CASES: list[Case] = []


def case(group: str, title: str):
    def deco(fn):
        CASES.append(Case(fn.__name__.replace("_", "-"), group, title, fn))
        return fn
    return deco


def _phi(name, values, params=None):
    pres = build(name, params)
    return pres, phi_from_assignments(pres, values)


def _elem(pres, text) -> LieElement:
    return LieElement.of(pres.parse_elem(text))


# -- structure ---------------------------------------------------------------

_STRUCTURE = [("heisenberg", {}), ("g_ell", {"ell": "1/2"}), ("g_ell", {"ell": 1}), ("schrodinger", {"n": 1}),
              ("schrodinger", {"n": 2}), ("mirror_hv", {}), ("hv", {}), ("planar_galilean", {}),
              ("wab", {"a": 0, "b": -1}), ("wab", {"a": "1/2", "b": 2}), ("witt_borel", {"k": 2}),
              ("witt_n_plus", {"n": 2})]


@case("structure", "catalog algebras satisfy Jacobi and the ideal property")
def structure_checks(seed):
    rows = {}
    for name, params in _STRUCTURE:
        pres = build(name, params)
        rows[pres.name + "".join(f",{k}={v}" for k, v in sorted(params.items()))] = (
            check_jacobi(pres).ok and check_ideal(pres).ok)
    return all(rows.values()), {"checked": rows}


@case("structure", "mirror HV bracket [d2, h1/2] = -1/2 h5/2")
def mirror_bracket(seed):
    pres = build("mirror_hv")
    got = pres.format(pres.bracket_basis(pres.parse_elem("d2"), pres.parse_elem("h[1/2]")))
    return got == "-1/2*h[5/2]", {"bracket": got}


@case("structure", "W(0,-1) bracket [L1, H2] = H3")
def wab_bracket(seed):
    pres = build("wab", {"a": 0, "b": -1})
    got = pres.format(pres.bracket_basis(pres.parse_elem("L1"), pres.parse_elem("H2")))
    return got == "H3", {"bracket": got}


@case("structure", "g^(1/2) is sl2 plus a 2-dimensional ideal; sch_1 has basis h,e,f,x1,y1,z")
def catalog_shapes(seed):
    g = build("g_ell", {"ell": "1/2"})
    s = build("schrodinger", {"n": 1})
    names = [s.name_of(b) for b in s.basis()]
    ok = len(g.basis()) == 5 and len([b for b in g.basis() if g.in_ideal(b)]) == 2 and sorted(names) == sorted(["h", "e", "f", "x1", "y1", "z"])
    return ok, {"g_ell_dim": len(g.basis()), "sch1_basis": names}


@case("structure", "ideal checks expose [p,p] for sch_1, HV and W1++")
def ideal_witnesses(seed):
    out = {}
    for name, params in [("schrodinger", {"n": 1}), ("hv", {}), ("witt_borel", {"k": 2})]:
        rep = check_ideal(build(name, params))
        out[name] = {"ok": rep.ok, "nonperfect_witness": rep.notes.get("nonperfect_witness")}
    return all(v["ok"] and v["nonperfect_witness"] for v in out.values()), out


# -- phi ---------------------------------------------------------------------


@case("phi", "planar Galilean rejects phi(I0) = 1")
def galilean_rejects_i0(seed):
    try:
        _phi("planar_galilean", {"I0": 1})
    except PhiError as e:
        return True, {"error": str(e)}
    return False, {"error": None}


@case("phi", "HV rejects phi(z3) = 1")
def hv_rejects_z3(seed):
    try:
        _phi("hv", {"z3": 1})
    except PhiError as e:
        return True, {"error": str(e)}
    return False, {"error": None}


# -- linear algebra ----------------------------------------------------------


@case("linalg", "rank and nullspace examples")
def linalg_examples(seed):
    zero = SparseMatrix([{}, {}, {}], range(3))
    ident = SparseMatrix([{i: 1} for i in range(4)], range(4))
    one_row = nullspace(SparseMatrix([{0: 1, 1: -1}], range(2)))
    ok = rank(zero) == 0 and rank(ident) == 4 and [dict(v) for v in one_row] == [{0: 1, 1: 1}]
    return ok, {"zero": rank(zero), "identity": rank(ident), "kernel": [dict(v) for v in one_row]}


# -- annihilator -------------------------------------------------------------


@case("annihilator", "Heisenberg phi(z)=1: y = {x, y}, not extendable")
def heisenberg_annihilator(seed):
    pres, phi = _phi("heisenberg", {"z": 1})
    rep = ann.compute_annihilator(pres, phi)
    ext = ann.is_extendable(pres, phi, rep)
    ys = [pres.format(y) for y in rep.y_basis]
    ok = ys == ["x", "y"] and rep.verdict == ann.REDUCIBLE and not ext.extendable
    return ok, {"y_basis": ys, "verdict": rep.verdict, "extendable": ext.to_json(pres)}


@case("annihilator", "sch_1 phi(x1)=1: y = {f}, rank 2 of 3, extendable")
def sch1_annihilator(seed):
    pres, phi = _phi("schrodinger", {"x1": 1}, {"n": 1})
    rep = ann.compute_annihilator(pres, phi)
    _, r, irred = ann.rank_criterion(pres, phi)
    ext = ann.is_extendable(pres, phi, rep)
    ys = [pres.format(y) for y in rep.y_basis]
    ok = ys == ["f"] and r == 2 and not irred and ext.extendable
    return ok, {"y_basis": ys, "rank": r, "extendable": ext.extendable}


@case("annihilator", "HV phi(I_k)=1 for k in {-2,0,3}: y = {L_k}")
def hv_single_support(seed):
    got = {}
    for k in (-2, 0, 3):
        pres, phi = _phi("hv", {f"I{k}": 1})
        got[str(k)] = [pres.format(y) for y in ann.compute_annihilator(pres, phi).y_basis]
    return all(got[str(k)] == [f"L{k}"] for k in (-2, 0, 3)), {"y_basis": got}


@case("annihilator", "membership: d1 for W1++ (k=2), d0 - d-1 for constant mirror phi, not L0 for HV")
def membership_examples(seed):
    pres, phi = _phi("witt_borel", {"d2": 1}, {"k": 2})
    a = ann.membership(pres, phi, _elem(pres, "d1"))
    m = build("mirror_hv")
    mphi = phi_from_assignments(m, {}, {"h": (lambda n: Fraction(1), "1")}, 12)
    b = ann.membership(m, mphi, _elem(m, "d0") - _elem(m, "d-1"))
    h, hphi = _phi("hv", {"I0": 1, "I1": 1})
    c = ann.membership(h, hphi, _elem(h, "L0"))
    return a and b and not c, {"witt_borel_d1": a, "mirror_d0_minus_d-1": b, "hv_L0": c}


@case("annihilator", "W2+ special phi: A_phi has rank 4")
def wn_plus_rank(seed):
    pres = build("witt_n_plus", {"n": 2})
    phi = phi_from_assignments(pres, {"td[2,0;1]": 1, "td[0,2;2]": 1})
    _, r, irred = ann.rank_criterion(pres, phi)
    return r == 4 and irred, {"rank": r, "irreducible": irred}


# -- module ------------------------------------------------------------------


@case("module", "sch_1 whittaker vectors up to size 3 are w, fw, f^2w, f^3w")
def sch1_whittaker(seed):
    pres, phi = _phi("schrodinger", {"x1": 1}, {"n": 1})
    ctx = qw.context_for(pres, phi)
    res = qw.whittaker_vectors(ctx, 3)
    got = sorted(ctx.format(v) for v, _ in res.vectors)
    want = sorted(["w", "f w", "f^2 w", "f^3 w"])
    return got == want, {"vectors": got}


@case("module", "HV phi(I0)=phi(I1)=1: only w is whittaker up to size 3")
def hv_whittaker(seed):
    pres, phi = _phi("hv", {"I0": 1, "I1": 1})
    ctx = qw.context_for(pres, phi)
    res = qw.whittaker_vectors(ctx, 3)
    got = [ctx.format(v) for v, _ in res.vectors]
    return got == ["w"], {"vectors": got, "monomials": res.monomial_count}


@case("module", "type-free search on sch_1 finds only type phi")
def sch1_type_free(seed):
    pres, phi = _phi("schrodinger", {"x1": 1}, {"n": 1})
    ctx = qw.context_for(pres, phi)
    res = qw.whittaker_vectors(ctx, 3, type_free=True)
    ok = res.dimension == 4 and all(t.to_json() == phi.to_json() for _, t in res.vectors)
    return ok, {"dimension": res.dimension, "method": res.eigen_method}


@case("module", "HV reduce(L-1 L-2 w) ends at a multiple of w in at most 2 steps")
def hv_reduce(seed):
    pres, phi = _phi("hv", {"I0": 1, "I1": 1})
    ctx = qw.context_for(pres, phi)
    end, trace = qw.reduce(ctx, ctx.vector({("L-1", "L-2"): 1}))
    ok = qw.proportional_to_w(end) and len(trace) <= 2
    return ok, {"endpoint": ctx.format(end), "trace": [pres.name_of(p) for p in trace]}


@case("module", "irreducibility probe: none for HV {I0,I1}; witnesses for HV {I3} and Heisenberg")
def probes(seed):
    out = {}
    for label, name, values in [("hv_I0_I1", "hv", {"I0": 1, "I1": 1}), ("hv_I3", "hv", {"I3": 1}),
                                ("heisenberg", "heisenberg", {"z": 1})]:
        pres, phi = _phi(name, values)
        out[label] = qw.irreducibility_probe(pres, phi, 4, 50, seed).found_witness
    ok = out == {"hv_I0_I1": False, "hv_I3": True, "heisenberg": True}
    return ok, {"seed": seed, "witness_found": out}


@case("module", "J_xi for sch_1: w not in J_xi, f(f - xi)w in J_xi, y acts by xi on V(phi')")
def jxi_sch1(seed):
    pres, phi = _phi("schrodinger", {"x1": 1}, {"n": 1})
    rep = ann.compute_annihilator(pres, phi)
    ctx = qw.ModuleContext.universal(pres, phi, rep)
    out = {}
    for xi in (Fraction(0), Fraction(1), Fraction(-2, 3)):
        j = qw.j_xi_submodule(ctx, xi, 5)
        member = ctx.vector({("f", "f"): 1, ("f",): -xi}) in j
        bland = qw.ModuleContext.bland(pres, phi, rep, [xi])
        acts = qw.act(bland, _elem(pres, "f"), bland.w) == bland.w * xi
        out[str(xi)] = {"w_in_J": ctx.w in j, "member": member, "acts_by_xi": acts}
    ok = all(not v["w_in_J"] and v["member"] and v["acts_by_xi"] for v in out.values())
    return ok, out


@case("module", "locally finite: dim U(p)w = 1 and dim U(p) f^3 w = 1")
def locally_finite(seed):
    pres, phi = _phi("schrodinger", {"x1": 1}, {"n": 1})
    ctx = qw.context_for(pres, phi)
    a = qw.locally_finite_check(ctx, ctx.w)
    b = qw.locally_finite_check(ctx, ctx.vector({("f", "f", "f"): 1}))
    return a == (True, 1) and b == (True, 1), {"w": list(a), "f3w": list(b)}


# -- criteria ----------------------------------------------------------------


def _rule_phi(seq, text):
    m = build("mirror_hv")
    return m, phi_from_assignments(m, {}, {"h": (seq, text)}, 12)


@case("criteria", "recurrences: constant r=1 (-1), 2^n r=1 (-2), n r=2 (1,-2), point none")
def recurrences(seed):
    got = {}
    for label, seq in [("constant", lambda n: Fraction(1)), ("geometric", lambda n: Fraction(2) ** n),
                       ("linear", lambda n: Fraction(n)), ("point", lambda n: Fraction(int(n == 0)))]:
        rec = cr.detect_recurrence(seq)
        got[label] = None if rec is None else [rec.order, [str(c) for c in rec.coeffs]]
    want = {"constant": [1, ["-1"]], "geometric": [1, ["-2"]], "linear": [2, ["1", "-2"]], "point": None}
    return got == want, {"recurrences": got}


@case("criteria", "mirror HV: constant phi reducible with witness -d-1 + d0; finite support irreducible")
def mirror_criterion(seed):
    m, const = _rule_phi(lambda n: Fraction(1), "1")
    v1 = cr.mirror_hv_irreducible(m, const)
    m2, lin = _rule_phi(lambda n: Fraction(n), "n")
    v2 = cr.mirror_hv_irreducible(m2, lin)
    fin = phi_from_assignments(m, {"h[1/2]": 1})
    v3 = cr.mirror_hv_irreducible(m, fin)
    ok = (v1.kind == ann.REDUCIBLE and m.format(v1.witness) == "-d-1 + d0"
          and v2.kind == ann.REDUCIBLE and m.format(v2.witness) == "d-2 - 2*d-1 + d0"
          and v3.kind == ann.IRREDUCIBLE)
    return ok, {"constant": v1.to_json(m), "linear": v2.to_json(m), "finite": v3.to_json(m)}


@case("criteria", "HV: S={0,1} irreducible, S={3} reducible by L3, S empty routed to the generic engine")
def hv_criterion(seed):
    out = {}
    for label, values in [("S01", {"I0": 1, "I1": 1}), ("S3", {"I3": 1}), ("z1", {"z1": 1})]:
        pres, phi = _phi("hv", values)
        out[label] = cr.hv_finite_criterion(pres, phi).to_json(pres)
    ok = (out["S01"]["verdict"] == ann.IRREDUCIBLE and out["S3"]["witness"] == "L3"
          and out["z1"]["route"] == "generic" and out["z1"]["data"].get("precondition") == "failed")
    return ok, out


@case("criteria", "planar Galilean: S={0,2} irreducible, S={1} reducible")
def galilean_criterion(seed):
    out = {}
    for label, values in [("S02", {"H0": 1, "H2": 1}), ("S1", {"H1": 1})]:
        pres, phi = _phi("planar_galilean", values)
        out[label] = cr.planar_galilean_criterion(pres, phi).kind
    return out == {"S02": ann.IRREDUCIBLE, "S1": ann.REDUCIBLE}, out


@case("criteria", "W(a,b): Takiff with odd j0 irreducible; b=1, S={5}: a=-5 reducible, a=0 irreducible")
def wab_criterion(seed):
    out = {}
    for label, params, values in [("takiff_j0_3", {"a": 0, "b": -1}, {"H3": 1}),
                                  ("b1_a-5", {"a": -5, "b": 1}, {"H5": 1}),
                                  ("b1_a0", {"a": 0, "b": 1}, {"H5": 1})]:
        pres, phi = _phi("wab", values, params)
        out[label] = cr.wab_criterion(pres, phi).kind
    want = {"takiff_j0_3": ann.IRREDUCIBLE, "b1_a-5": ann.REDUCIBLE, "b1_a0": ann.IRREDUCIBLE}
    return out == want, out


@case("criteria", "W1++: k=2 phi(d2)=1 reducible by d1; phi(d3)=1 irreducible; k=1 irreducible")
def witt_borel_criterion(seed):
    out = {}
    for label, k, values in [("k2_d2", 2, {"d2": 1}), ("k2_d3", 2, {"d3": 1}), ("k1_d1", 1, {"d1": 1})]:
        pres, phi = _phi("witt_borel", values, {"k": k})
        out[label] = cr.witt_borel_criterion(pres, phi).to_json(pres)
    ok = (out["k2_d2"]["witness"] == "d1" and out["k2_d3"]["verdict"] == ann.IRREDUCIBLE
          and out["k1_d1"]["verdict"] == ann.IRREDUCIBLE)
    return ok, out


@case("criteria", "Wn+ height 2: n=2 and n=3 special phi irreducible, zero phi rejected")
def wn_plus_criterion(seed):
    v2 = cr.wn_plus_height2(2, {"td[2,0;1]": 1, "td[0,2;2]": 1})
    v3 = cr.wn_plus_height2(3, {"td[2,0,0;1]": 1, "td[0,2,0;2]": 2, "td[0,0,2;3]": 3})
    v0 = cr.wn_plus_height2(2, {})
    ok = v2.kind == ann.IRREDUCIBLE and v3.kind == ann.IRREDUCIBLE and v0.kind == cr.PRECONDITION_FAILED
    return ok, {"n2": v2.kind, "n3": v3.kind, "zero": v0.kind,
                "rank_n3": v3.data.get("rank"), "d_structure_n3": v3.data.get("d_one_per_row_and_column")}


def run_cases(seed: int = 0, only: list[str] | None = None) -> list[dict]:
    rows = []
    for c in CASES:
        if only and c.id not in only and c.group not in only:
            continue
        try:
            passed, detail = c.run(seed)
        except Exception as e:  # a crash is a failed case, not a crashed run
            passed, detail = False, {"error": f"{type(e).__name__}: {e}"}
        rows.append({"id": c.id, "group": c.group, "title": c.title, "passed": bool(passed), "detail": detail})
    return rows


def known_algebras() -> list[str]:
    return list(CATALOG)
