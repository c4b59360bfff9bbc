import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from quasiwhittaker import __version__
from quasiwhittaker import qwmodule as qw
from quasiwhittaker.cli import CliError, main, parse_vector

EXAMPLES = Path(__file__).resolve().parents[1] / "docs" / "examples"


def schema(kind):
    return json.loads(resources.files("quasiwhittaker").joinpath("schemas", f"{kind}.schema.json").read_text())


def run(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    report = json.loads(out)
    jsonschema.validate(report, schema(report["kind"]))
    return code, report, out


def test_schemas_are_valid():
    for path in resources.files("quasiwhittaker").joinpath("schemas").iterdir():
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_algebra_list_and_show(capsys):
    code, rep, _ = run(capsys, "algebra", "list")
    assert code == 0 and [a["name"] for a in rep["algebras"]][:2] == ["heisenberg", "g_ell"]
    code, rep, _ = run(capsys, "algebra", "show", "wab", "--params", "a=0,b=-1")
    assert rep["params"] == {"a": "0", "b": "-1"}
    code, rep, _ = run(capsys, "algebra", "show", "--algebra-file", str(EXAMPLES / "hv.yaml"))
    assert code == 0 and rep["kind"] == "algebra"


def test_annihilator_heisenberg(capsys):
    code, rep, _ = run(capsys, "annihilator", "heisenberg", "--phi", "z=1")
    assert code == 0 and rep["y_basis"] == ["x", "y"] and rep["verdict"] == "reducible"
    ext = rep["extendability"]
    assert not ext["extendable"] and ext["bracket"] == "[x, y]" and ext["phi_of_witness"] == "1"


@pytest.mark.parametrize("expect,code", [(None, 0), ("irreducible", 0), ("reducible", 1)])
def test_criterion_exit_codes(capsys, expect, code):
    argv = ["criterion", "hv", "--phi", "I0=1,I1=1"] + (["--expect", expect] if expect else [])
    got, rep, _ = run(capsys, *argv)
    assert got == code and rep["verdict"] == "irreducible"


def test_rule_based_criterion(capsys):
    code, rep, _ = run(capsys, "criterion", "mirror_hv", "--phi-file", str(EXAMPLES / "mirror_phi.yaml"),
                       "--expect", "irreducible")
    assert rep["verdict"] == "reducible" and rep["witness"] == "-2*d-1 + d0" and code == 1


@pytest.mark.parametrize("expect", ["irreducible", "reducible"])
def test_inconclusive_never_mismatches(capsys, tmp_path, expect):
    phi = tmp_path / "phi.yaml"
    phi.write_text("algebra: mirror_hv\nrules: {h: '1/(n*n + 1)'}\n")
    code, rep, _ = run(capsys, "criterion", "--phi-file", str(phi), "--expect", expect)
    assert rep["verdict"] == "window-inconclusive" and code == 0


def test_phi_file_names_the_algebra(capsys):
    code, rep, _ = run(capsys, "annihilator", "--phi-file", str(EXAMPLES / "mirror_phi.yaml"))
    assert rep["algebra"] == "mirror_hv" and rep["regime"] == "window-verified"


def test_whittaker_vectors(capsys):
    code, rep, _ = run(capsys, "whittaker-vectors", "schrodinger", "--params", "n=1", "--phi", "x1=1",
                       "--degree", "3")
    assert rep["dimension"] == 4 and rep["y_basis"] == ["f"]
    assert [v["vector"] for v in rep["vectors"]] == [[["w", "1"]], [["f w", "1"]], [["f^2 w", "1"]],
                                                     [["f^3 w", "1"]]]


def test_reduce(capsys):
    code, rep, _ = run(capsys, "reduce", "hv", "--phi", "I0=1,I1=1", "--vector", "L-1 L-2 w - 1/3*w")
    assert code == 0 and rep["proportional_to_w"] and len(rep["trace"]) <= 2


def test_probe(capsys):
    code, rep, _ = run(capsys, "probe", "hv", "--phi", "I3=1", "--expect", "irreducible")
    assert code == 1 and rep["verdict"] == "reducible"
    code, rep, _ = run(capsys, "probe", "hv", "--phi", "I0=1,I1=1", "--trials", "5", "--expect", "irreducible")
    assert code == 0 and rep["verdict"] == "no-witness" and rep["witness"] is None


def test_jxi(capsys):
    code, rep, _ = run(capsys, "jxi", "schrodinger", "--phi", "x1=1", "--xi=-2/3", "--vector", "f^2 w + 2/3*f w")
    assert not rep["w_in_J"] and rep["member"]["in_J"]
    assert rep["quotient"] == {"defined": True, "y_action": [["w", "-2/3"]]}


def test_verify_paper_subset(capsys):
    code, rep, _ = run(capsys, "verify-paper", "--only", "linalg", "structure")
    assert code == 0 and rep["failed"] == 0 and {c["group"] for c in rep["cases"]} == {"linalg", "structure"}


@pytest.mark.parametrize("argv,fragment", [
    (["annihilator", "nosuch", "--phi", "z=1"], "unknown algebra"),
    (["annihilator", "hv", "--phi", "I0=1,I1=x"], "column 9"),
    (["annihilator", "hv", "--phi", "z3=1"], "not a homomorphism"),
    (["annihilator", "hv"], "phi"),
    (["annihilator", "hv", "--phi", "I12=1", "--window", "4"], "candidate bound"),
    (["algebra", "show", "--algebra-file", "/nonexistent.yaml"], "nonexistent"),
    (["verify-paper", "--only", "nosuch"], "no regression case"),
])
def test_errors_exit_2(capsys, argv, fragment):
    code, rep, _ = run(capsys, *argv)
    assert code == 2 and rep["kind"] == "error" and fragment in rep["message"]


def test_human_output(capsys):
    assert main(["annihilator", "heisenberg", "--phi", "z=1"]) == 0
    out = capsys.readouterr().out
    assert "y_basis: x, y" in out and "extendable: no ([x, y] = z, phi = 1)" in out


def test_window_env(capsys, monkeypatch):
    monkeypatch.setenv("QUASIWHITTAKER_WINDOW", "3")
    code, rep, _ = run(capsys, "annihilator", "hv", "--phi", "I2=1")
    assert rep["window"]["candidate_bound"] == 3
    code, rep, _ = run(capsys, "annihilator", "hv", "--phi", "I5=1")
    assert code == 2


def test_determinism(capsys):
    argvs = [["annihilator", "hv", "--phi", "I0=1,I1=-2/3"], ["probe", "hv", "--phi", "I0=1,I1=1", "--seed", "4"],
             ["whittaker-vectors", "hv", "--phi", "I2=1", "--degree", "2"]]
    for argv in argvs:
        first = run(capsys, *argv)[2]
        assert run(capsys, *argv)[2] == first


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "quasiwhittaker", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout


def test_vector_round_trip(make_phi):
    pres, phi = make_phi("schrodinger", {"x1": 1}, {"n": 1})
    ctx = qw.context_for(pres, phi)
    v = ctx.vector({("h", "f", "f"): 2, (): Fraction(-1, 3), ("e",): -1})
    assert parse_vector(ctx, ctx.format(v)) == v
    assert parse_vector(ctx, "f w f - - 2*w") == ctx.vector({("f", "f"): 1, (): 2})
    with pytest.raises(CliError):
        parse_vector(ctx, "f^0 w")
