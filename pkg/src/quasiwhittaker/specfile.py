"""YAML algebra and phi files; see ``docs/spec-format.md`` for the grammar.

Bracket and rule expressions are Python-syntax arithmetic evaluated by a
small ``ast`` walker: numbers, parameters, the index variables, ``+ - * /``,
integer powers, ``delta(a, b)``, and basis terms ``F[expr]`` or bare ``F``
for single-element families.  Nothing else is accepted.
"""
from __future__ import annotations

import ast
import operator
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path

import yaml

from .catalog import PhiError, build, phi_from_assignments
from .exactlinalg import as_rational
from .liealgebra import Basis, IntFamily, LiePresentation, PhiMap, PresentationError

MAX_EXPONENT = 64


class SpecError(ValueError):
    """A malformed spec file; carries the position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = ""):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
        elif column is not None:
            where = f"column {column}"
        prefix = f"{source}: " if source else ""
        super().__init__(f"{prefix}{where + ': ' if where else ''}{message}")
        self.message = message
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# expressions


class _Expr:
    """A compiled expression; ``evaluate(env)`` returns a Fraction or a ``{Basis: Fraction}`` dict."""

    _binops = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}

    def __init__(self, text: str, families: Mapping[str, IntFamily], names: set[str], where: str = ""):
        self.text = text
        self.families = families
        self.where = where
        self._lead = len(str(text)) - len(str(text).lstrip())
        try:
            tree = ast.parse(str(text).strip(), mode="eval")
        except SyntaxError as e:
            col = None if e.offset is None else e.offset + self._lead
            raise SpecError(f"bad expression {text!r}: {e.msg}", None, col, where) from None
        self._check(tree.body, names)
        self.tree = tree.body

    def _fail(self, node, msg):
        raise SpecError(f"{msg} in {self.text!r}", None, getattr(node, "col_offset", 0) + 1 + self._lead, self.where)

    def _check(self, node, names):
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int) or isinstance(node.value, bool):
                self._fail(node, "only integer literals are allowed")
        elif isinstance(node, ast.Name):
            if node.id not in names and node.id not in self.families:
                self._fail(node, f"unknown name {node.id!r}")
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in self._binops and not isinstance(node.op, ast.Pow):
                self._fail(node, "unsupported operator")
            self._check(node.left, names)
            self._check(node.right, names)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.USub, ast.UAdd)):
                self._fail(node, "unsupported unary operator")
            self._check(node.operand, names)
        elif isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "delta" and len(node.args) == 2
                    and not node.keywords):
                self._fail(node, "only delta(a, b) calls are allowed")
            for a in node.args:
                self._check(a, names)
        elif isinstance(node, ast.Subscript):
            if not (isinstance(node.value, ast.Name) and node.value.id in self.families):
                self._fail(node, "subscripts must name a basis family")
            self._check(node.slice, names)
        else:
            self._fail(node, f"unsupported syntax {type(node).__name__}")

    def evaluate(self, env: Mapping[str, Fraction]):
        return self._eval(self.tree, env)

    def scalar(self, env: Mapping[str, Fraction]) -> Fraction:
        v = self.evaluate(env)
        if isinstance(v, dict):
            raise SpecError(f"expected a number, got basis terms in {self.text!r}", source=self.where)
        return v

    def _term(self, fam: IntFamily, idx, node) -> dict:
        if isinstance(idx, dict):
            self._fail(node, "basis index must be a number")
        n = idx - fam.shift
        if n.denominator != 1:
            self._fail(node, f"index {idx} does not fit family {fam.name}")
        return {Basis(fam.name, int(n)): Fraction(1)}

    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id in env:
                return Fraction(env[node.id])
            fam = self.families[node.id]
            if not fam.single:
                self._fail(node, f"family {node.id} needs an index")
            return {Basis(fam.name, 0): Fraction(1)}
        if isinstance(node, ast.Subscript):
            fam = self.families[node.value.id]
            return self._term(fam, self._eval(node.slice, env), node)
        if isinstance(node, ast.Call):
            a, b = (self._eval(x, env) for x in node.args)
            return Fraction(1 if a == b else 0)
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, env)
            if isinstance(node.op, ast.UAdd):
                return v
            return {k: -c for k, c in v.items()} if isinstance(v, dict) else -v
        left, right = self._eval(node.left, env), self._eval(node.right, env)
        if isinstance(node.op, ast.Pow):
            if isinstance(left, dict) or isinstance(right, dict) or right.denominator != 1:
                self._fail(node, "powers need a number base and an integer exponent")
            if abs(right) > MAX_EXPONENT:
                self._fail(node, f"exponent larger than {MAX_EXPONENT}")
            if not left and right < 0:
                self._fail(node, "zero to a negative power")
            return left ** int(right)
        if isinstance(node.op, (ast.Add, ast.Sub)):
            if isinstance(left, dict) != isinstance(right, dict):
                if (not isinstance(left, dict) and left == 0) or (not isinstance(right, dict) and right == 0):
                    left = {} if not isinstance(left, dict) else left
                    right = {} if not isinstance(right, dict) else right
                else:
                    self._fail(node, "cannot add a number to basis terms")
            if isinstance(left, dict):
                sign = 1 if isinstance(node.op, ast.Add) else -1
                out = dict(left)
                for k, c in right.items():
                    out[k] = out.get(k, 0) + sign * c
                return out
            return self._binops[type(node.op)](left, right)
        if isinstance(node.op, ast.Mult):
            if isinstance(left, dict) and isinstance(right, dict):
                self._fail(node, "cannot multiply basis terms")
            if isinstance(left, dict):
                left, right = right, left
            if isinstance(right, dict):
                return {k: left * c for k, c in right.items()}
            return left * right
        # division
        if isinstance(right, dict):
            self._fail(node, "cannot divide by basis terms")
        if right == 0:
            self._fail(node, "division by zero")
        if isinstance(left, dict):
            return {k: c / right for k, c in left.items()}
        return left / right


# ---------------------------------------------------------------------------
# algebra files


class _Doc:
    """A parsed YAML mapping plus the 1-based position of every key and value."""

    def __init__(self, text: str, source: str):
        self.source = source
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
            self.data = yaml.safe_load(text)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark
            raise SpecError(e.problem or "YAML error", mark.line + 1 if mark else None,
                            mark.column + 1 if mark else None, source) from None
        except yaml.YAMLError as e:
            raise SpecError(str(e), source=source) from None
        self.pos: dict = {}
        if node is not None:
            self._walk(node, ())

    def _walk(self, node, path):
        self.pos[path] = (node.start_mark.line + 1, node.start_mark.column + 1,
                          isinstance(node, yaml.ScalarNode) and node.style in ("'", '"'))
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                key = k.value
                self.pos[path + (key, None)] = (k.start_mark.line + 1, k.start_mark.column + 1, False)
                self._walk(v, path + (key,))
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                self._walk(v, path + (i,))

    def error(self, message: str, *path, offset: int | None = None) -> SpecError:
        """``SpecError`` at ``path`` (a trailing ``None`` means the key); ``offset`` is 1-based within a scalar."""
        while path and path not in self.pos:
            path = path[:-1]
        line, col, quoted = self.pos.get(path, (None, None, False))
        if col is not None and offset is not None:
            col += offset - 1 + int(quoted)
        return SpecError(message, line, col, self.source)

    def expr(self, text, families, names, *path) -> _Expr:
        try:
            return _Expr(text, families, names)
        except SpecError as e:
            raise self.error(e.message, *path, offset=e.column) from None


def _rational(v, what: str) -> Fraction:
    try:
        return as_rational(v if not isinstance(v, str) else v.strip())
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError(f"{what} must be a rational number, got {v!r}") from None


def _family(doc: _Doc, i: int, params) -> IntFamily:
    entry = doc.data["families"][i]
    at = ("families", i)
    if not isinstance(entry, Mapping) or "name" not in entry:
        raise doc.error("each family needs a name", *at)
    unknown = set(entry) - {"name", "range", "shift", "ideal", "graded", "single"}
    if unknown:
        raise doc.error(f"unknown family keys {sorted(unknown)}", *at, sorted(unknown)[0], None)
    name = str(entry["name"])
    if not name.isidentifier() or name == "delta":
        raise doc.error(f"family name {name!r} must be an identifier", *at, "name")
    single = bool(entry.get("single", False))
    lo, hi = (0, 0) if single else (None, None)
    if "range" in entry:
        rng = entry["range"]
        if not isinstance(rng, list) or len(rng) != 2:
            raise doc.error(f"range of {name} must be [lo, hi]", *at, "range")
        for k, v in enumerate(rng):
            if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
                raise doc.error("range bound must be an integer or null", *at, "range", k)
        lo, hi = rng
    try:
        shift = _rational(entry.get("shift", 0), "shift")
    except SpecError as e:
        raise doc.error(e.message, *at, "shift") from None
    ideal = entry.get("ideal", False)
    bad_ideal = doc.error(f"ideal of {name} must be true, false or 'degree >= t'", *at, "ideal")
    if isinstance(ideal, str):
        text = ideal.replace(" ", "")
        if not text.startswith("degree>="):
            raise bad_ideal
        try:
            ideal = _rational(text[len("degree>="):], "ideal threshold")
        except SpecError:
            raise bad_ideal from None
    elif not isinstance(ideal, bool):
        raise bad_ideal
    return IntFamily(name, lo, hi, ideal, shift, bool(entry.get("graded", True)), single)


def _rule(expr: _Expr, fa: IntFamily, fb: IntFamily, params: Mapping):
    env0 = dict(params)

    def rule(i, j):
        env = dict(env0)
        env["m"] = i + fa.shift
        env["n"] = j + fb.shift
        v = expr.evaluate(env)
        if not isinstance(v, dict):
            if v:
                raise PresentationError(f"bracket rule {expr.text!r} produced a bare number")
            return []
        return [(b, c) for b, c in v.items() if c]

    return rule


def _mapping(doc: _Doc, what: str, allowed: set) -> None:
    if not isinstance(doc.data, Mapping):
        raise doc.error(f"{what} must be a mapping")
    for key in doc.data:
        if key not in allowed:
            raise doc.error(f"unknown top-level key {key!r}", key, None)
    for key in ("params", "values", "rules"):
        if doc.data.get(key) is not None and not isinstance(doc.data[key], Mapping):
            raise doc.error(f"{key} must be a mapping", key)


def load_algebra(text: str, source: str = "<algebra>", overrides: Mapping | None = None) -> LiePresentation:
    """Parse a YAML algebra file into a presentation."""
    doc = _Doc(text, source)
    _mapping(doc, "an algebra file", {"name", "description", "params", "families", "brackets"})
    data = doc.data
    params = {}
    for k, v in (data.get("params") or {}).items():
        try:
            params[str(k)] = _rational(v, f"parameter {k}")
        except SpecError as e:
            raise doc.error(e.message, "params", k) from None
    for k, v in (overrides or {}).items():
        if k not in params:
            raise SpecError(f"unknown parameter {k!r}", source=source)
        params[k] = _rational(v, f"parameter {k}")
    if not isinstance(data.get("families") or [], list):
        raise doc.error("families must be a list", "families")
    fams = [_family(doc, i, params) for i in range(len(data.get("families") or []))]
    if not fams:
        raise doc.error("at least one family is required", "families")
    fmap = {f.name: f for f in fams}
    clash = set(fmap) & (set(params) | {"m", "n"})
    if clash:
        raise doc.error(f"names used both as families and variables: {sorted(clash)}", "families")
    brackets = data.get("brackets") or {}
    if not isinstance(brackets, Mapping):
        raise doc.error("brackets must be a mapping", "brackets")
    rules, texts = {}, {}
    for key, body in brackets.items():
        k = str(key).replace(" ", "")
        if not (k.startswith("[") and k.endswith("]") and k.count(",") == 1):
            raise doc.error(f"bracket key {key!r} must look like '[A,B]'", "brackets", key, None)
        fa, fb = k[1:-1].split(",")
        if fa not in fmap or fb not in fmap:
            raise doc.error(f"bracket {key!r} names an unknown family", "brackets", key, None)
        if (fa, fb) in rules or (fb, fa) in rules:
            raise doc.error(f"bracket {key!r} given twice", "brackets", key, None)
        expr = doc.expr(str(body), fmap, set(params) | {"m", "n"}, "brackets", key)
        expr.where = f"{source} [{fa},{fb}]"
        rules[(fa, fb)] = _rule(expr, fmap[fa], fmap[fb], params)
        texts[(fa, fb)] = str(body)
    return LiePresentation(str(data.get("name", "custom")), fams, rules, params,
                           str(data.get("description", "")), texts)


def load_algebra_file(path: str | Path, overrides: Mapping | None = None) -> LiePresentation:
    p = Path(path)
    return load_algebra(p.read_text(), str(p), overrides)


# ---------------------------------------------------------------------------
# phi


def _split_top(text: str) -> list[str]:
    """Split on commas outside brackets, so ``td[2,0;1]=1`` stays whole."""
    parts, depth, cur = [], 0, []
    for ch in text:
        depth += {"[": 1, "(": 1, "]": -1, ")": -1}.get(ch, 0)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_inline_phi(pres: LiePresentation, text: str) -> dict:
    """``'I0=1,I1=-2/3'`` -> ``{Basis: Fraction}``; errors give the column of the offending entry."""
    out = {}
    col = 1
    for raw in _split_top(text):
        part = raw.strip()
        here = col + len(raw) - len(raw.lstrip())
        col += len(raw) + 1
        if not part:
            continue
        name, eq, val = part.partition("=")
        if not eq:
            raise SpecError(f"expected NAME=VALUE, got {part!r}", column=here)
        try:
            b = pres.parse_elem(name.strip())
        except PresentationError as e:
            raise SpecError(str(e), column=here) from None
        if b in out:
            raise SpecError(f"{name.strip()} assigned twice", column=here)
        try:
            out[b] = _rational(val.strip(), f"value of {name.strip()}")
        except SpecError as e:
            raise SpecError(e.message, column=here + len(name) + 1) from None
    return out


def load_phi(pres: LiePresentation, text: str, source: str = "<phi>", window: int | None = None) -> PhiMap:
    """Parse a YAML phi file for ``pres``.

    Keys: ``values`` (name -> rational), ``rules`` (family -> expression in
    ``n``, the stored index, and ``r``, the displayed index) and
    ``validated_window``.
    """
    doc = _Doc(text, source)
    _mapping(doc, "a phi file", {"algebra", "params", "values", "rules", "validated_window"})
    data = doc.data
    values = {}
    for name, v in (data.get("values") or {}).items():
        try:
            b = pres.parse_elem(str(name))
        except PresentationError as e:
            raise doc.error(str(e), "values", name, None) from None
        try:
            values[b] = _rational(v, f"value of {name}")
        except SpecError as e:
            raise doc.error(e.message, "values", name) from None
    rules = {}
    fams = {f.name: f for f in pres.families if isinstance(f, IntFamily)}
    for fam, body in (data.get("rules") or {}).items():
        f = fams.get(str(fam))
        if f is None:
            raise doc.error(f"rule for unknown or non-integer family {fam!r}", "rules", fam, None)
        expr = doc.expr(str(body), {}, set(pres.params) | {"n", "r"}, "rules", fam)
        expr.where = f"{source} rule {fam}"
        env0 = dict(pres.params)

        def fn(i, expr=expr, shift=f.shift, env0=env0):
            env = dict(env0)
            env["n"] = Fraction(i)
            env["r"] = i + shift
            return expr.scalar(env)

        rules[str(fam)] = (fn, str(body))
    w = data.get("validated_window", window if window is not None else 10)
    if isinstance(w, bool) or not isinstance(w, int) or w < 1:
        raise doc.error("validated_window must be a positive integer", "validated_window")
    try:
        return phi_from_assignments(pres, values, rules, w)
    except PhiError as e:
        raise doc.error(str(e), "rules" if rules else "values") from None


def phi_file_algebra(text: str, source: str = "<phi>") -> tuple[str | None, dict]:
    doc = _Doc(text, source)
    if not isinstance(doc.data, Mapping):
        raise doc.error("a phi file must be a mapping")
    params = doc.data.get("params") or {}
    if not isinstance(params, Mapping):
        raise doc.error("params must be a mapping", "params")
    return doc.data.get("algebra"), dict(params)


def resolve_algebra(name: str | None, params: Mapping | None = None, algebra_file: str | None = None) -> LiePresentation:
    if algebra_file:
        return load_algebra_file(algebra_file, params)
    if not name:
        raise SpecError("no algebra given")
    return build(name, params)
