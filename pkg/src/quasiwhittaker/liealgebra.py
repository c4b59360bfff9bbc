"""Lie algebras presented by indexed basis families and a bracket oracle.

A basis element is a :class:`Basis` pair ``(family, index)``.  Integer
families may be bounded or unbounded, and may carry a half-integer shift
(the stored index ``n`` stands for ``n + 1/2``).  The Witt family stores
``(alpha, i)`` for ``t^alpha d_i``.  Brackets are closed-form rules per
ordered family pair; the reverse pair is filled in by antisymmetry.
"""
from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .exactlinalg import ONE, ZERO, SpanTester, SparseVector, as_rational


class PresentationError(ValueError):
    pass


class Basis(NamedTuple):
    family: str
    index: object


class LieElement(SparseVector):
    """Finite rational combination of :class:`Basis` elements."""

    __slots__ = ()

    @classmethod
    def of(cls, b: Basis, c=1) -> LieElement:
        return cls({b: c})

    def __add__(self, other):
        return LieElement(SparseVector.__add__(self, other))

    def __neg__(self):
        return LieElement(SparseVector.__neg__(self))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return LieElement(SparseVector.__mul__(self, c))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"LieElement({dict(self)!r})"


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class IntFamily:
    """Basis elements ``name_n`` for integers ``lo <= n <= hi``.

    ``ideal`` is a bool, or a degree threshold ``t`` meaning the element lies
    in the ideal iff its degree is ``>= t``.  ``shift`` is added to the
    stored index for display and degree (1/2 for half-integer families).
    ``graded=False`` marks families of a finite-dimensional algebra handled
    without a grading.
    """

    name: str
    lo: int | None = None
    hi: int | None = None
    ideal: bool | Fraction = False
    shift: Fraction = ZERO
    graded: bool = True
    single: bool = False

    def contains(self, index) -> bool:
        if not isinstance(index, int) or isinstance(index, bool):
            return False
        if self.lo is not None and index < self.lo:
            return False
        return self.hi is None or index <= self.hi

    @property
    def finite(self) -> bool:
        return self.lo is not None and self.hi is not None

    def degree(self, index) -> Fraction | None:
        return index + self.shift if self.graded else None

    def is_ideal(self, index) -> bool:
        if isinstance(self.ideal, bool):
            return self.ideal
        return index + self.shift >= self.ideal

    def of_degree(self, d) -> list:
        n = d - self.shift
        if n.denominator != 1:
            return []
        n = int(n)
        return [n] if self.contains(n) else []

    def indices(self, bound: int | None = None) -> list:
        if bound is None and not self.finite:
            raise PresentationError(f"family {self.name} is infinite; give a bound")
        lo = -bound if self.lo is None else (self.lo if bound is None else max(self.lo, -bound))
        hi = bound if self.hi is None else (self.hi if bound is None else min(self.hi, bound))
        return list(range(lo, hi + 1))

    def complement(self) -> list | None:
        """Indices outside the ideal, or None when there are infinitely many."""
        if self.ideal is True:
            return []
        if self.ideal is False:
            return self.indices() if self.finite else None
        if self.lo is None:
            return None
        top = math.ceil(Fraction(self.ideal) - self.shift) - 1
        return list(range(self.lo, top + 1))

    def display(self, index) -> str:
        if self.single:
            return self.name
        if self.shift:
            return f"{self.name}[{index + self.shift}]"
        return f"{self.name}{index}"

    def parse_index(self, text: str):
        text = text.strip()
        if self.single:
            if text in ("", "0"):
                return 0
            raise PresentationError(f"{self.name} takes no index")
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        val = Fraction(text) - self.shift
        if val.denominator != 1:
            raise PresentationError(f"bad index {text!r} for family {self.name}")
        return int(val)

    def describe(self) -> dict:
        out = {"name": self.name, "kind": "single" if self.single else "int",
               "lo": self.lo, "hi": self.hi}
        if self.shift:
            out["shift"] = str(self.shift)
        out["ideal"] = self.ideal if isinstance(self.ideal, bool) else f"degree >= {self.ideal}"
        out["graded"] = self.graded
        return out


@dataclass(frozen=True)
class WittFamily:
    """``t^alpha d_i`` with ``alpha`` in Z_+^n, ``|alpha| >= min_size``; degree ``|alpha| - 1``."""

    name: str
    n: int
    min_size: int = 0
    ideal: bool | Fraction = False
    shift: Fraction = ZERO
    graded: bool = True
    single: bool = False

    def contains(self, index) -> bool:
        try:
            alpha, i = index
        except (TypeError, ValueError):
            return False
        return (isinstance(alpha, tuple) and len(alpha) == self.n and all(isinstance(a, int) and a >= 0 for a in alpha)
                and sum(alpha) >= self.min_size and isinstance(i, int) and 1 <= i <= self.n)

    finite = False

    def degree(self, index) -> Fraction:
        return Fraction(sum(index[0]) - 1)

    def is_ideal(self, index) -> bool:
        if isinstance(self.ideal, bool):
            return self.ideal
        return self.degree(index) >= self.ideal

    def of_degree(self, d) -> list:
        if Fraction(d).denominator != 1:
            return []
        s = int(d) + 1
        if s < self.min_size:
            return []
        return [(alpha, i) for alpha in _compositions(s, self.n) for i in range(1, self.n + 1)]

    def indices(self, bound: int | None = None) -> list:
        bound = 3 if bound is None else bound
        out = []
        for d in range(self.min_size - 1, bound + 1):
            out.extend(self.of_degree(d))
        return out

    def complement(self) -> list | None:
        if self.ideal is True:
            return []
        if self.ideal is False:
            return None
        out = []
        for d in range(self.min_size - 1, int(Fraction(self.ideal))):
            out.extend(self.of_degree(d))
        return out

    def display(self, index) -> str:
        alpha, i = index
        return f"{self.name}[{','.join(map(str, alpha))};{i}]"

    def parse_index(self, text: str):
        text = text.strip()
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        a, _, i = text.partition(";")
        if not _:
            raise PresentationError(f"expected '{self.name}[a1,...,an;i]', got {text!r}")
        alpha = tuple(int(x) for x in a.split(","))
        return (alpha, int(i))

    def describe(self) -> dict:
        return {"name": self.name, "kind": "witt", "n": self.n, "min_size": self.min_size,
                "ideal": self.ideal if isinstance(self.ideal, bool) else f"degree >= {self.ideal}",
                "graded": True}


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total`` (reverse lex)."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


Rule = Callable[[object, object], Iterable[tuple[Basis, object]]]


# ---------------------------------------------------------------------------
# presentations


class LiePresentation:
    """Immutable presentation: families, bracket rules, ideal designation."""

    def __init__(self, name: str, families: Iterable, rules: Mapping[tuple[str, str], Rule],
                 params: Mapping | None = None, description: str = "",
                 rule_text: Mapping[tuple[str, str], str] | None = None):
        self.name = name
        self.families = tuple(families)
        self.family = {f.name: f for f in self.families}
        if len(self.family) != len(self.families):
            raise PresentationError("duplicate family names")
        self._rank = {f.name: r for r, f in enumerate(self.families)}
        self.rules = dict(rules)
        for fa, fb in self.rules:
            if fa not in self.family or fb not in self.family:
                raise PresentationError(f"rule for unknown family pair ({fa}, {fb})")
        self.params = {k: as_rational(v) for k, v in (params or {}).items()}
        self.description = description
        self.rule_text = dict(rule_text or {})
        self.graded = all(f.graded for f in self.families)
        self.finite = all(f.finite for f in self.families)
        self._cache: dict = {}
        self._valid: set = set()
        self._ideal: dict = {}

    # -- elements ----------------------------------------------------------
    def elem(self, family: str, index=0) -> Basis:
        fam = self.family.get(family)
        if fam is None:
            raise PresentationError(f"unknown family {family!r} in {self.name}")
        if not fam.contains(index):
            raise PresentationError(f"index {index!r} outside the range of family {family}")
        return Basis(family, index)

    def check(self, b: Basis) -> None:
        if b in self._valid:
            return
        fam = self.family.get(b.family)
        if fam is None or not fam.contains(b.index):
            raise PresentationError(f"{b!r} is not a basis element of {self.name}")
        self._valid.add(b)

    def order_key(self, b: Basis) -> tuple:
        return (self._rank[b.family], b.index)

    def in_ideal(self, b: Basis) -> bool:
        hit = self._ideal.get(b)
        if hit is None:
            hit = self._ideal[b] = self.family[b.family].is_ideal(b.index)
        return hit

    def degree(self, b: Basis) -> Fraction | None:
        return self.family[b.family].degree(b.index)

    def name_of(self, b: Basis) -> str:
        return self.family[b.family].display(b.index)

    def format(self, x: Mapping) -> str:
        """Human form of a combination of basis elements."""
        if not x:
            return "0"
        parts = []
        for b in sorted(x, key=self.order_key):
            c = x[b]
            name = self.name_of(b)
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            elif c < 0:
                parts.append(f"- {-c}*{name}")
            else:
                parts.append(f"+ {c}*{name}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def parse_elem(self, text: str) -> Basis:
        """Parse ``L3``, ``I-2``, ``z1``, ``h[1/2]`` or ``td[2,0;1]``."""
        text = text.strip()
        if text in self.family and self.family[text].single:
            return self.elem(text, 0)
        best = None
        for name in sorted(self.family, key=len, reverse=True):
            if text.startswith(name):
                rest = text[len(name):]
                fam = self.family[name]
                try:
                    idx = fam.parse_index(rest)
                except (PresentationError, ValueError):
                    continue
                if fam.contains(idx):
                    best = Basis(name, idx)
                    break
        if best is None:
            raise PresentationError(f"cannot parse basis element {text!r} for {self.name}")
        return best

    # -- enumeration --------------------------------------------------------
    def basis(self) -> list[Basis]:
        if not self.finite:
            raise PresentationError(f"{self.name} is infinite-dimensional; use window_basis")
        return [Basis(f.name, i) for f in self.families for i in f.indices()]

    def window_basis(self, bound: int) -> list[Basis]:
        """Basis elements with ``|index| <= bound`` (Witt family: degree <= bound)."""
        return [Basis(f.name, i) for f in self.families for i in f.indices(bound)]

    def slice(self, d, ideal: bool | None = None) -> list[Basis]:
        if not self.graded:
            raise PresentationError(f"{self.name} carries no grading")
        d = Fraction(d)
        out = []
        for f in self.families:
            for i in f.of_degree(d):
                b = Basis(f.name, i)
                if ideal is None or self.in_ideal(b) == ideal:
                    out.append(b)
        return out

    def complement(self) -> list[Basis] | None:
        """Non-ideal basis elements when finitely many, else None."""
        out = []
        for f in self.families:
            c = f.complement()
            if c is None:
                return None
            out.extend(Basis(f.name, i) for i in c)
        return out

    def ideal_window(self, bound: int) -> list[Basis]:
        return [b for b in self.window_basis(bound) if self.in_ideal(b)]

    # -- bracket ------------------------------------------------------------
    def bracket_basis(self, a: Basis, b: Basis) -> dict:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.check(a)
        self.check(b)
        if a == b:
            out = {}
        else:
            rule = self.rules.get((a.family, b.family))
            sign = 1
            if rule is None:
                rule = self.rules.get((b.family, a.family))
                sign = -1
                if rule is not None:
                    a, b = b, a
            out = {}
            if rule is not None:
                for t, c in rule(a.index, b.index):
                    c = as_rational(c)
                    if not c:
                        continue
                    self.check(t)
                    v = out.get(t, ZERO) + sign * c
                    if v:
                        out[t] = v
                    else:
                        out.pop(t)
        self._cache[key] = out
        return out

    def bracket(self, u: Mapping, v: Mapping) -> LieElement:
        acc: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for t, c in self.bracket_basis(a, b).items():
                    nv = acc.get(t, ZERO) + ca * cb * c
                    if nv:
                        acc[t] = nv
                    else:
                        acc.pop(t)
        return LieElement(acc)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "params": {k: str(v) for k, v in self.params.items()},
            "families": [f.describe() for f in self.families],
            "brackets": {f"[{a},{b}]": t for (a, b), t in self.rule_text.items()},
            "finite_dimensional": self.finite,
            "graded": self.graded,
        }

    def __repr__(self) -> str:
        return f"LiePresentation({self.name!r})"


# ---------------------------------------------------------------------------
# structure checks


@dataclass
class CheckReport:
    ok: bool
    checked: int
    violation: dict | None = None
    notes: dict = field(default_factory=dict)


def _sample_triples(elems: list, samples: int, seed: int, exhaustive: bool):
    if exhaustive:
        yield from itertools.combinations_with_replacement(elems, 3)
        return
    rng = random.Random(seed)
    for _ in range(samples):
        yield rng.choice(elems), rng.choice(elems), rng.choice(elems)


def check_jacobi(pres: LiePresentation, window: int = 10, samples: int = 500, seed: int = 0) -> CheckReport:
    """Antisymmetry and Jacobi on basis triples.

    Exhaustive for finite-dimensional presentations, otherwise ``samples``
    random triples drawn from the window.
    """
    exhaustive = pres.finite
    elems = pres.basis() if exhaustive else pres.window_basis(window)
    n = 0
    for u, v, w in _sample_triples(elems, samples, seed, exhaustive):
        n += 1
        U, V, W = LieElement.of(u), LieElement.of(v), LieElement.of(w)
        uv = pres.bracket(U, V)
        if uv + pres.bracket(V, U):
            return CheckReport(False, n, {"kind": "antisymmetry", "pair": [pres.name_of(u), pres.name_of(v)]})
        jac = pres.bracket(uv, W) + pres.bracket(pres.bracket(V, W), U) + pres.bracket(pres.bracket(W, U), V)
        if jac:
            return CheckReport(False, n, {"kind": "jacobi", "triple": [pres.name_of(x) for x in (u, v, w)],
                                          "value": pres.format(jac)})
    return CheckReport(True, n, notes={"exhaustive": exhaustive, "window": None if exhaustive else window})


def _sample_pairs(left: list, right: list, samples: int, seed: int, exhaustive: bool):
    if exhaustive:
        yield from itertools.product(left, right)
        return
    rng = random.Random(seed)
    for _ in range(samples):
        yield rng.choice(left), rng.choice(right)


def check_ideal(pres: LiePresentation, window: int = 10, samples: int = 2000, seed: int = 0) -> CheckReport:
    """``[g, p] in p`` plus a nonperfectness witness.

    Closure is checked on all pairs for finite-dimensional presentations and
    on ``samples`` random window pairs otherwise.  The witness is the first
    ideal basis element outside ``span [p, p]``, both computed on the window.
    """
    exhaustive = pres.finite
    elems = pres.basis() if exhaustive else pres.window_basis(window)
    ideal = [b for b in elems if pres.in_ideal(b)]
    if not ideal:
        return CheckReport(False, 0, {"kind": "empty-ideal"})
    n = 0
    for g, p in _sample_pairs(elems, ideal, samples, seed, exhaustive):
        n += 1
        for t in pres.bracket_basis(g, p):
            if not pres.in_ideal(t):
                return CheckReport(False, n, {"kind": "not-ideal", "pair": [pres.name_of(g), pres.name_of(p)],
                                              "term": pres.name_of(t)})
    # brackets are homogeneous, so [p, p] is spanned degree by degree
    spans: dict = {}
    seen = set()
    targets = {pres.degree(b) for b in ideal} if pres.graded else {None}
    for p, q in itertools.combinations(ideal, 2):
        if pres.graded and pres.degree(p) + pres.degree(q) not in targets:
            continue
        br = pres.bracket_basis(p, q)
        if not br:
            continue
        first = min(br, key=pres.order_key)
        d = pres.degree(first) if pres.graded else None
        if d not in targets:
            continue
        key = frozenset((b, c / br[first]) for b, c in br.items())
        if key not in seen:
            seen.add(key)
            spans.setdefault(d, SpanTester()).add(br)
    in_pp = [b for b in ideal
             if (sp := spans.get(pres.degree(b) if pres.graded else None)) is not None and sp.contains({b: ONE})]
    outside = [b for b in ideal if b not in set(in_pp)]
    if not outside:
        return CheckReport(False, n, {"kind": "perfect-on-window"})
    return CheckReport(True, n, notes={
        "exhaustive": exhaustive,
        "window": None if exhaustive else window,
        "nonperfect_witness": pres.name_of(outside[0]),
        "pp_dim": sum(sp.dim for sp in spans.values()),
        "pp_members": [pres.name_of(b) for b in in_pp],
    })


def check_grading(pres: LiePresentation, window: int = 6, samples: int = 300, seed: int = 0) -> CheckReport:
    """``deg [u, v] = deg u + deg v`` on sampled basis pairs."""
    if not pres.graded:
        return CheckReport(True, 0, notes={"graded": False})
    elems = pres.window_basis(window)
    rng = random.Random(seed)
    for n in range(1, samples + 1):
        u, v = rng.choice(elems), rng.choice(elems)
        target = pres.degree(u) + pres.degree(v)
        for t in pres.bracket_basis(u, v):
            if pres.degree(t) != target:
                return CheckReport(False, n, {"pair": [pres.name_of(u), pres.name_of(v)], "term": pres.name_of(t)})
    return CheckReport(True, samples)


# ---------------------------------------------------------------------------
# homomorphisms on the ideal


class PhiMap:
    """A linear functional on the ideal.

    ``values`` assigns rationals to finitely many ideal basis elements.
    ``rules`` maps a family name to ``(callable(index) -> rational, text)``
    for rule-based support; explicit values take precedence.
    """

    def __init__(self, pres: LiePresentation, values: Mapping[Basis, object] | None = None,
                 rules: Mapping[str, tuple[Callable, str]] | None = None,
                 validated_window: int | None = None):
        self.pres = pres
        self.values = {b: as_rational(c) for b, c in (values or {}).items() if as_rational(c)}
        self.rules = dict(rules or {})
        self.validated_window = validated_window

    @property
    def finite(self) -> bool:
        return not self.rules

    def __call__(self, b: Basis) -> Fraction:
        v = self.values.get(b)
        if v is not None:
            return v
        if b.family in self.rules and self.pres.in_ideal(b):
            return as_rational(self.rules[b.family][0](b.index))
        return ZERO

    def on(self, x: Mapping) -> Fraction:
        return sum((c * self(b) for b, c in x.items()), ZERO)

    def support(self) -> list[Basis]:
        if not self.finite:
            raise ValueError("rule-based functional has no finite support list")
        return sorted(self.values, key=self.pres.order_key)

    def support_degrees(self) -> set:
        return {self.pres.degree(b) for b in self.support()}

    def is_zero(self) -> bool:
        return self.finite and not self.values

    def to_json(self) -> dict:
        out = {"values": {self.pres.name_of(b): str(self.values[b]) for b in sorted(self.values, key=self.pres.order_key)}}
        if self.rules:
            out["rules"] = {fam: text for fam, (_, text) in self.rules.items()}
            out["validated_window"] = self.validated_window
        return out

    def __repr__(self) -> str:
        return f"PhiMap({self.to_json()!r})"
