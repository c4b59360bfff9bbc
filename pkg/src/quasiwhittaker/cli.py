"""Command-line front end.

Exit status: 0 on success, 1 when ``--expect`` contradicts the verdict (or a
regression case fails), 2 on errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import annihilator as ann
from . import criteria as cr
from . import qwmodule as qw
from . import regression
from ._kernels import BACKEND
from .catalog import CATALOG, PhiError, phi_from_assignments
from .exactlinalg import as_rational
from .liealgebra import LiePresentation, PhiMap, PresentationError
from .specfile import (
    SpecError,
    load_phi,
    parse_inline_phi,
    phi_file_algebra,
    resolve_algebra,
)

OK, MISMATCH, ERROR = 0, 1, 2
FORMATS = ("human", "json")


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    action: str | None = None
    algebra: str | None = None
    params: dict = field(default_factory=dict)
    algebra_file: str | None = None
    phi: str | None = None
    phi_file: str | None = None
    window: int | None = None
    constraint_window: int | None = None
    degree: int | None = None
    index_bound: int | None = None
    seed: int = 0
    trials: int = 50
    fmt: str = "human"
    expect: str | None = None
    vector: str | None = None
    xi: str | None = None
    type_free: bool = False
    only: list = field(default_factory=list)

    def __post_init__(self):
        for name in ("window", "constraint_window", "degree", "trials"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise CliError(f"--{name.replace('_', '-')} must be positive")
        if self.index_bound is not None and self.index_bound < 0:
            raise CliError("--index-bound must be non-negative")


@dataclass
class Outcome:
    status: int
    report: dict
    text: str


# ---------------------------------------------------------------------------
# inputs


def parse_params(text: str | None) -> dict:
    out = {}
    for part in filter(None, (s.strip() for s in (text or "").split(","))):
        key, eq, val = part.partition("=")
        if not eq or not key.strip():
            raise CliError(f"expected KEY=VALUE in --params, got {part!r}")
        out[key.strip()] = val.strip()
    return out


def _load(cfg: RunConfig) -> tuple[LiePresentation, PhiMap | None]:
    name, params = cfg.algebra, dict(cfg.params)
    phi_text = None
    if cfg.phi_file:
        phi_text = Path(cfg.phi_file).read_text()
        file_alg, file_params = phi_file_algebra(phi_text, cfg.phi_file)
        if name is None and not cfg.algebra_file:
            name = file_alg
        for k, v in file_params.items():
            params.setdefault(str(k), v)
    pres = resolve_algebra(name, params, cfg.algebra_file)
    if cfg.phi and cfg.phi_file:
        raise CliError("give --phi or --phi-file, not both")
    if cfg.phi:
        phi = phi_from_assignments(pres, parse_inline_phi(pres, cfg.phi))
    elif phi_text is not None:
        phi = load_phi(pres, phi_text, cfg.phi_file, cfg.constraint_window)
    else:
        phi = None
    if phi is not None and phi.is_zero():
        raise CliError("phi must be nonzero")
    return pres, phi


def _need_phi(phi):
    if phi is None:
        raise CliError("this command needs --phi or --phi-file")
    return phi


def _window(cfg: RunConfig) -> ann.Window:
    return ann.Window(cfg.window or ann.default_window(), cfg.constraint_window)


def parse_vector(ctx: qw.ModuleContext, text: str) -> qw.PBWVector:
    """``'2*L-1 L-2 w - 1/3*w'``: signed terms of PBW basis monomials (factor order is ignored).

    Factors may carry a power, as in ``'f^2 w'``.
    """
    terms: dict = {}
    sign = 1
    current: list[str] = []

    def flush():
        if not current:
            raise CliError(f"empty term in vector {text!r}")
        coeff = Fraction(sign)
        first = current[0]
        head, star, rest = first.partition("*")
        names = list(current)
        if star:
            coeff *= _rational(head)
            names[0] = rest
        elif len(current) == 1 and _is_number(first):
            coeff *= _rational(first)
            names = []
        letters = []
        for n in names:
            if not n or n == "w":
                continue
            base, caret, power = n.partition("^")
            if caret and not (power.isdigit() and int(power) >= 1):
                raise CliError(f"bad power in {n!r}")
            letters.extend([base] * (int(power) if caret else 1))
        mono = ctx.monomial(letters)
        terms[mono] = terms.get(mono, 0) + coeff

    for tok in text.split():
        if tok in "+-" and len(tok) == 1:
            if current:
                flush()
                current.clear()
            elif tok == "-":
                sign = -sign
                continue
            sign = 1 if tok == "+" else -1
        else:
            current.append(tok)
    flush()
    return qw.PBWVector({m: c for m, c in terms.items() if c})


def _is_number(s: str) -> bool:
    try:
        as_rational(s)
    except (TypeError, ValueError, ZeroDivisionError):
        return False
    return True


def _rational(s: str) -> Fraction:
    try:
        return as_rational(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise CliError(f"not a rational number: {s!r}") from None


def _expect_status(cfg: RunConfig, verdict: str) -> int:
    opposite = {ann.IRREDUCIBLE: ann.REDUCIBLE, ann.REDUCIBLE: ann.IRREDUCIBLE}
    if cfg.expect and opposite.get(cfg.expect) == verdict:
        return MISMATCH
    return OK


def _header(pres: LiePresentation, phi: PhiMap | None, kind: str) -> dict:
    out = {"kind": kind, "algebra": pres.name,
           "params": {k: str(v) for k, v in sorted(pres.params.items())}}
    if phi is not None:
        out["phi"] = phi.to_json()
    return out


# ---------------------------------------------------------------------------
# subcommands


def _algebra(cfg: RunConfig) -> Outcome:
    if cfg.action == "list":
        rows = [{"name": e.name, "params": {k: str(v) for k, v in e.params}, "phi": e.phi_note}
                for e in CATALOG.values()]
        text = "\n".join(f"{r['name']:<16} {','.join(f'{k}={v}' for k, v in r['params'].items()) or '-':<12} {r['phi']}"
                         for r in rows)
        return Outcome(OK, {"kind": "algebra-list", "algebras": rows}, text)
    pres, _ = _load(cfg)
    desc = pres.describe()
    lines = [f"{desc['name']}: {desc['description']}".rstrip(": ")]
    if desc["params"]:
        lines.append("params: " + ", ".join(f"{k}={v}" for k, v in desc["params"].items()))
    for f in desc["families"]:
        lines.append("  family " + ", ".join(f"{k}={v}" for k, v in f.items()))
    for k, v in desc["brackets"].items():
        lines.append(f"  {k} = {v}")
    return Outcome(OK, {"kind": "algebra", **desc}, "\n".join(lines))


def _annihilator(cfg: RunConfig) -> Outcome:
    pres, phi = _load(cfg)
    phi = _need_phi(phi)
    rep = ann.compute_annihilator(pres, phi, _window(cfg))
    ext = ann.is_extendable(pres, phi, rep)
    body = {**_header(pres, phi, "annihilator"), **rep.to_json(), "extendability": ext.to_json(pres)}
    lines = [f"regime: {rep.regime}", f"candidates: {len(rep.candidates)} ({'complete' if rep.complete else 'window'})",
             "y_basis: " + (", ".join(pres.format(y) for y in rep.y_basis) or "(empty)")]
    if rep.a_phi_rank is not None:
        r, (rows, cols) = rep.a_phi_rank
        lines.append(f"rank A_phi: {r} ({rows}x{cols})")
    lines.append(f"verdict: {rep.verdict}" + (f" (witness {pres.format(rep.witness)})" if rep.witness else ""))
    lines.append("extendable: " + ("yes" if ext.extendable else
                                   f"no ({ext.expression} = {pres.format(ext.witness)}, phi = {ext.value})"))
    return Outcome(_expect_status(cfg, rep.verdict), body, "\n".join(lines))


def _criterion(cfg: RunConfig) -> Outcome:
    pres, phi = _load(cfg)
    phi = _need_phi(phi)
    v = cr.criterion_for(pres, phi, _window(cfg) if (cfg.window or cfg.constraint_window) else None)
    body = {**_header(pres, phi, "criterion"), **v.to_json(pres)}
    text = f"verdict: {v.kind}" + (f"\nwitness: {pres.format(v.witness)}" if v.witness else "")
    text += f"\nroute: {v.route}" + (f"\nreason: {v.reason}" if v.reason else "")
    return Outcome(_expect_status(cfg, v.kind), body, text)


def _whittaker(cfg: RunConfig) -> Outcome:
    pres, phi = _load(cfg)
    ctx = qw.context_for(pres, _need_phi(phi), _window(cfg))
    res = qw.whittaker_vectors(ctx, cfg.degree or 3, cfg.type_free, cfg.index_bound if cfg.index_bound is not None else 3)
    vecs = [{"vector": ctx.vector_json(v), "type": t.to_json()} for v, t in res.vectors]
    body = {**_header(pres, phi, "whittaker-vectors"), "degree_bound": cfg.degree or 3,
            "type_free": cfg.type_free, "y_basis": [pres.format(y) for y in ctx.ys],
            "monomials": res.monomial_count, "dimension": res.dimension, "vectors": vecs}
    lines = [f"dimension {res.dimension} over {res.monomial_count} monomials"]
    lines += [f"  {ctx.format(v)}" for v, _ in res.vectors]
    return Outcome(OK, body, "\n".join(lines))


def _reduce(cfg: RunConfig) -> Outcome:
    pres, phi = _load(cfg)
    ctx = qw.context_for(pres, _need_phi(phi), _window(cfg))
    if not cfg.vector:
        raise CliError("reduce needs --vector")
    v = parse_vector(ctx, cfg.vector)
    end, trace = qw.reduce(ctx, v)
    body = {**_header(pres, phi, "reduce"), "input": ctx.vector_json(v), "result": ctx.vector_json(end),
            "trace": [pres.name_of(p) for p in trace], "proportional_to_w": qw.proportional_to_w(end)}
    text = f"{ctx.format(v)}\n  -> {ctx.format(end)}\ntrace: {' '.join(body['trace']) or '(none)'}"
    return Outcome(OK, body, text)


def _probe(cfg: RunConfig) -> Outcome:
    pres, phi = _load(cfg)
    phi = _need_phi(phi)
    res = qw.irreducibility_probe(pres, phi, cfg.degree or 4, cfg.trials, cfg.seed,
                                  cfg.index_bound if cfg.index_bound is not None else 4,
                                  constraint_bound=cfg.constraint_window)
    ctx = qw.ModuleContext.trivial(pres, phi)
    verdict = ann.REDUCIBLE if res.found_witness else "no-witness"
    body = {**_header(pres, phi, "probe"), "seed": res.seed, "degree_bound": res.degree_bound,
            "trials": res.trials, "verdict": verdict, "source": res.source,
            "witness": None if res.witness is None else ctx.vector_json(res.witness)}
    text = (f"witness ({res.source}): {ctx.format(res.witness)}" if res.found_witness
            else f"no witness in {res.trials} trials (seed {res.seed}, degree <= {res.degree_bound})")
    status = MISMATCH if cfg.expect == ann.IRREDUCIBLE and res.found_witness else OK
    return Outcome(status, body, text)


def _jxi(cfg: RunConfig) -> Outcome:
    pres, phi = _load(cfg)
    phi = _need_phi(phi)
    rep = ann.compute_annihilator(pres, phi, _window(cfg))
    ctx = qw.ModuleContext.universal(pres, phi, rep)
    xi = _rational(cfg.xi or "0")
    bound = cfg.degree or 5
    j = qw.JXi(ctx, xi, bound, cfg.index_bound if cfg.index_bound is not None else 3)
    body = {**_header(pres, phi, "jxi"), "xi": str(xi), "degree_bound": bound,
            "y": pres.format(ctx.ys[0]), "spanning_vectors": len(j.vectors), "w_in_J": ctx.w in j}
    lines = [f"J_xi with xi = {xi}: {len(j.vectors)} spanning vectors up to size {bound}",
             f"w in J_xi: {body['w_in_J']}"]
    try:
        bland = qw.ModuleContext.bland(pres, phi, rep, [xi])
    except qw.ModuleError as e:
        body["quotient"] = {"defined": False, "reason": str(e)}
        lines.append(f"quotient: {e}")
    else:
        image = qw.act(bland, ctx.ys[0], bland.w)
        body["quotient"] = {"defined": True, "y_action": bland.vector_json(image)}
        lines.append(f"y v = {bland.format(image)} in the quotient")
    if cfg.vector:
        v = parse_vector(ctx, cfg.vector)
        body["member"] = {"vector": ctx.vector_json(v), "in_J": v in j}
        lines.append(f"{ctx.format(v)} in J_xi: {v in j}")
    return Outcome(OK, body, "\n".join(lines))


def _verify(cfg: RunConfig) -> Outcome:
    rows = regression.run_cases(cfg.seed, cfg.only or None)
    if cfg.only and not rows:
        raise CliError(f"no regression case matches {cfg.only}")
    failed = [r["id"] for r in rows if not r["passed"]]
    body = {"kind": "verify", "seed": cfg.seed, "backend": BACKEND, "cases": rows,
            "passed": len(rows) - len(failed), "failed": len(failed)}
    width = max(len(r["id"]) for r in rows)
    lines = [f"{'PASS' if r['passed'] else 'FAIL'}  {r['group']:<12} {r['id']:<{width}}  {r['title']}" for r in rows]
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} passed (seed {cfg.seed})")
    return Outcome(MISMATCH if failed else OK, body, "\n".join(lines))


COMMANDS = {"algebra": _algebra, "annihilator": _annihilator, "criterion": _criterion,
            "whittaker-vectors": _whittaker, "reduce": _reduce, "probe": _probe, "jxi": _jxi,
            "verify-paper": _verify}


def run(cfg: RunConfig) -> Outcome:
    return COMMANDS[cfg.subcommand](cfg)


# ---------------------------------------------------------------------------
# argument parsing


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="human")
    common.add_argument("--seed", type=int, default=0)

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("algebra", nargs="?", help="catalog name or alias (omit with --algebra-file)")
    alg.add_argument("--params", default="", help="comma-separated KEY=VALUE, e.g. 'a=0,b=-1'")
    alg.add_argument("--algebra-file", help="YAML algebra spec file")

    phi = argparse.ArgumentParser(add_help=False)
    phi.add_argument("--phi", help="inline values, e.g. 'I0=1,I1=-2/3'")
    phi.add_argument("--phi-file", help="YAML phi file (values and rules)")
    phi.add_argument("--window", type=_positive,
                     help=f"candidate index bound (default ${ann.WINDOW_ENV} or {ann.DEFAULT_WINDOW})")
    phi.add_argument("--constraint-window", type=_positive, help="constraint bound for rule-based phi")
    phi.add_argument("--expect", choices=(ann.IRREDUCIBLE, ann.REDUCIBLE))

    p = argparse.ArgumentParser(prog="quasiwhittaker",
                                description="Whittaker annihilators and irreducibility of quasi-Whittaker modules.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = p.add_subparsers(dest="subcommand", required=True)

    a = sub.add_parser("algebra", help="list or show catalog algebras")
    asub = a.add_subparsers(dest="action", required=True)
    asub.add_parser("list", parents=[common])
    asub.add_parser("show", parents=[common, alg])

    sub.add_parser("annihilator", parents=[common, alg, phi], help="compute g^phi and extendability")
    sub.add_parser("criterion", parents=[common, alg, phi], help="decide irreducibility")
    w = sub.add_parser("whittaker-vectors", parents=[common, alg, phi], help="quasi-Whittaker vectors up to a size")
    w.add_argument("--degree", type=_positive, default=3)
    w.add_argument("--index-bound", type=int)
    w.add_argument("--type-free", action="store_true")
    r = sub.add_parser("reduce", parents=[common, alg, phi], help="reduce a vector to a quasi-Whittaker vector")
    r.add_argument("--vector", required=True, help="e.g. 'L-1 L-2 w - 2*w'")
    pr = sub.add_parser("probe", parents=[common, alg, phi], help="randomised reducibility search")
    pr.add_argument("--degree", type=_positive, default=4)
    pr.add_argument("--trials", type=_positive, default=50)
    pr.add_argument("--index-bound", type=int)
    j = sub.add_parser("jxi", parents=[common, alg, phi], help="the submodules J_xi")
    j.add_argument("--xi", default="0")
    j.add_argument("--degree", type=_positive, default=5)
    j.add_argument("--index-bound", type=int)
    j.add_argument("--vector")
    v = sub.add_parser("verify-paper", parents=[common], help="run the regression table")
    v.add_argument("--only", nargs="*", default=[], help="case ids or groups")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    g = vars(ns)
    return RunConfig(
        subcommand=ns.subcommand, action=g.get("action"), algebra=g.get("algebra"),
        params=parse_params(g.get("params")), algebra_file=g.get("algebra_file"), phi=g.get("phi"),
        phi_file=g.get("phi_file"), window=g.get("window"), constraint_window=g.get("constraint_window"),
        degree=g.get("degree"), index_bound=g.get("index_bound"), seed=ns.seed, trials=g.get("trials") or 50,
        fmt=ns.fmt, expect=g.get("expect"), vector=g.get("vector"), xi=g.get("xi"),
        type_free=bool(g.get("type_free")), only=list(g.get("only") or []))


def _encode(o):
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=True, default=_encode)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        out = run(config_from_args(ns))
    except (CliError, SpecError, PresentationError, PhiError, ann.WindowError, qw.ModuleError,
            OSError, ValueError) as e:
        if ns.fmt == "json":
            print(dumps({"kind": "error", "error": type(e).__name__, "message": str(e)}))
        print(f"error: {e}", file=sys.stderr)
        return ERROR
    print(dumps(out.report) if ns.fmt == "json" else out.text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())
