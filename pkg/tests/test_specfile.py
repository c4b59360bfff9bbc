from fractions import Fraction
from pathlib import Path

import pytest

from quasiwhittaker.catalog import build
from quasiwhittaker.liealgebra import Basis, check_jacobi
from quasiwhittaker.specfile import (
    SpecError,
    load_algebra,
    load_algebra_file,
    load_phi,
    parse_inline_phi,
    phi_file_algebra,
    resolve_algebra,
)

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"

TINY = """\
name: tiny
params: {t: 2}
families:
  - {name: A}
  - {name: B, ideal: true}
  - {name: c, single: true, ideal: true}
brackets:
  "[A,B]": "{body}"
"""


def tiny(body):
    return load_algebra(TINY.replace("{body}", body), "tiny.yaml")


def bracket(pres, a, b):
    return pres.format(pres.bracket_basis(pres.parse_elem(a), pres.parse_elem(b)))


@pytest.mark.parametrize("body,want", [
    ("(n - m)*B[m+n]", "B3"),
    ("t*B[m+n] + delta(m, 1)*c", "2*B3 + c"),
    ("B[m+n]/3 - c/2", "1/3*B3 - 1/2*c"),
    ("2**m*B[n]", "2*B2"),
    ("-(m*n)**2*c", "-4*c"),
    ("0", "0"),
    ("0*c + delta(m, 5)*B[0]", "0"),
])
def test_expression_grammar(body, want):
    assert bracket(tiny(body), "A1", "B2") == want


def test_example_files_load():
    hv = load_algebra_file(EXAMPLES / "hv.yaml")
    ref = build("hv")
    for a, b in [("L1", "L-1"), ("L2", "I-2"), ("I3", "I-3"), ("L0", "I0")]:
        assert bracket(hv, a, b) == bracket(ref, a, b)
    wab = load_algebra_file(EXAMPLES / "wab.yaml", {"a": 1, "b": 2})
    assert wab.params == {"a": 1, "b": 2}
    assert bracket(wab, "L1", "H2") == "5*H3"
    assert check_jacobi(load_algebra_file(EXAMPLES / "mirror_hv.yaml"), window=4, samples=100).ok


def test_phi_file():
    text = (EXAMPLES / "mirror_phi.yaml").read_text()
    name, params = phi_file_algebra(text)
    assert (name, params) == ("mirror_hv", {})
    pres = build(name)
    phi = load_phi(pres, text)
    assert not phi.finite and phi.validated_window == 12
    assert phi(Basis("h", 3)) == 8 and phi(Basis("h", -2)) == Fraction(1, 4)


def test_phi_values_and_displayed_index():
    pres = build("mirror_hv")
    phi = load_phi(pres, "values: {'h[1/2]': 2}\n")
    assert phi.finite and phi(pres.parse_elem("h[1/2]")) == 2
    phi = load_phi(pres, "rules: {h: 'r*2'}\nvalidated_window: 4\n")
    assert phi(pres.parse_elem("h[3/2]")) == 3


def test_inline_phi():
    pres = build("witt_n_plus", {"n": 2})
    got = parse_inline_phi(pres, "td[2,0;1]=1, td[0,2;2]=-2/3")
    assert got == {pres.parse_elem("td[2,0;1]"): 1, pres.parse_elem("td[0,2;2]"): Fraction(-2, 3)}


@pytest.mark.parametrize("text,column", [
    ("I0=1, I1=x", 10),
    ("I0=1,Q3=2", 6),
    ("I0 1", 1),
    ("I0=1,I0=2", 6),
])
def test_inline_phi_errors(text, column):
    with pytest.raises(SpecError) as e:
        parse_inline_phi(build("hv"), text)
    assert e.value.column == column


def positioned(text, loader=load_algebra):
    with pytest.raises(SpecError) as e:
        loader(text, "f.yaml")
    return e.value.line, e.value.column, str(e.value)


@pytest.mark.parametrize("body,column,fragment", [
    ("(n + q)*B[m+n]", 18, "unknown name 'q'"),
    ("(n - m)*B[m+n", 22, "never closed"),
    ("1.5*B[m]", 13, "integer literals"),
    ("abs(m)*c", 13, "delta"),
    ("m.real*c", 13, "unsupported syntax"),
    ("m < n", 13, "unsupported syntax"),
])
def test_expression_errors_have_positions(body, column, fragment):
    line, col, msg = positioned(TINY.replace("{body}", body))
    assert (line, col) == (8, column) and fragment in msg and msg.startswith("f.yaml: line 8")


@pytest.mark.parametrize("text,line,column,fragment", [
    ("name: x\nfamilies:\n  - {name: L, colour: red}\n", 3, 15, "unknown family keys"),
    ("families: [{name: L}]\nbrackets:\n  \"[L,Q]\": \"0\"\n", 3, 3, "unknown family"),
    ("families: [{name: L}]\nbrackets:\n  \"L,L\": \"0\"\n", 3, 3, "must look like"),
    ("families:\n  - name: L\n    ideal: maybe\n", 3, 12, "ideal of L"),
    ("families:\n  - name: L\n    range: [0, x]\n", 3, 16, "range bound"),
    ("a: [1,\n", 2, 1, "expected"),
    ("families: []\n", 1, 11, "at least one family"),
    ("families: [{name: n}]\n", 1, 11, "both as families and variables"),
    ("colour: 1\nfamilies: [{name: L}]\n", 1, 1, "unknown top-level key"),
    ("params: {a: x}\nfamilies: [{name: L}]\n", 1, 13, "parameter a"),
    ("families: [{name: L}]\nbrackets:\n  \"[L,L]\": \"0\"\n  \"[L, L]\": \"0\"\n", 4, 3, "given twice"),
])
def test_algebra_errors_have_positions(text, line, column, fragment):
    got_line, got_col, msg = positioned(text)
    assert (got_line, got_col) == (line, column) and fragment in msg


@pytest.mark.parametrize("text,line,column,fragment", [
    ("values:\n  I0: 1\n  Q: 2\n", 3, 3, "cannot parse"),
    ("values:\n  I0: x\n", 2, 7, "rational"),
    ("rules:\n  I: \"2**n + foo\"\n", 2, 14, "unknown name 'foo'"),
    ("rules:\n  Q: \"1\"\n", 2, 3, "unknown or non-integer family"),
    ("values: {z3: 1}\n", 1, 9, "not a homomorphism"),
    ("validated_window: 0\n", 1, 19, "positive integer"),
    ("[1, 2]\n", 1, 1, "must be a mapping"),
])
def test_phi_errors_have_positions(text, line, column, fragment):
    got_line, got_col, msg = positioned(text, lambda t, s: load_phi(build("hv"), t, s))
    assert (got_line, got_col) == (line, column) and fragment in msg


def test_evaluation_errors():
    pres = tiny("B[m]/(n - 2)")
    with pytest.raises(SpecError, match="division by zero"):
        pres.bracket_basis(pres.parse_elem("A1"), pres.parse_elem("B2"))
    pres = tiny("2**(m*n*100)*c")
    with pytest.raises(SpecError, match="exponent"):
        pres.bracket_basis(pres.parse_elem("A1"), pres.parse_elem("B2"))
    pres = tiny("A[m]*B[n]")
    with pytest.raises(SpecError, match="cannot multiply"):
        pres.bracket_basis(pres.parse_elem("A1"), pres.parse_elem("B2"))
    pres = tiny("B[m/2]")
    with pytest.raises(SpecError, match="does not fit"):
        pres.bracket_basis(pres.parse_elem("A1"), pres.parse_elem("B2"))


def test_overrides_and_resolution():
    text = (EXAMPLES / "wab.yaml").read_text()
    with pytest.raises(SpecError, match="unknown parameter"):
        load_algebra(text, overrides={"c": 1})
    assert resolve_algebra("hv").name == "hv"
    assert resolve_algebra(None, {"a": 0, "b": 1}, str(EXAMPLES / "wab.yaml")).params["b"] == 1
    with pytest.raises(SpecError):
        resolve_algebra(None)
