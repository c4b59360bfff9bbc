"""Universal quasi-Whittaker modules ``W(phi)`` and their bland quotients.

Vectors are combinations of normal-ordered monomials ``x^alpha y^beta w``
over a tiered basis of ``g``:

* p-tier: the ideal basis, acting on the cyclic vector by ``phi``;
* y-tier: the basis ``Y_1, ..., Y_t`` of ``g^phi`` modulo ``p`` from an
  annihilator report (each ``Y_j`` replaces its free column);
* x-tier: every other basis element.

The tiers are ordered x < y < p.  In the bland quotient ``V(phi')`` the y-tier
also acts on the cyclic vector, by the extension values ``phi'(Y_j)``.

A monomial is a sorted tuple of *letters* ``(tier, key, payload)``.  The
action is computed by memoized straightening in :mod:`._kernels`.
"""
from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import _kernels
from .annihilator import (
    DEFAULT_CONSTRAINT_WINDOW,
    AnnihilatorReport,
    WindowError,
    compute_annihilator,
    extension_condition,
)
from .exactlinalg import ZERO, SparseMatrix, SparseVector, SpanTester, as_rational, nullspace
from .liealgebra import Basis, LieElement, LiePresentation, PhiMap
from .multiindex import MultiIndex, compare, pair_compare

X, Y, P = 0, 1, 2
UNIVERSAL = "universal"
BLAND = "bland"

COEFFS = (-3, -2, -1, 1, 2, 3)


class ModuleError(ValueError):
    pass


class ReductionError(ModuleError):
    pass


class PBWMonomial(NamedTuple):
    """The exponent view ``(alpha, beta)`` of a monomial ``x^alpha y^beta``."""

    x_part: MultiIndex
    y_part: MultiIndex

    @property
    def size(self) -> int:
        return self.x_part.size + self.y_part.size


class PBWVector(SparseVector):
    """Exact combination of monomials (sorted letter tuples) applied to the cyclic vector."""

    __slots__ = ()

    def __add__(self, other):
        return PBWVector(SparseVector.__add__(self, other))

    def __neg__(self):
        return PBWVector(SparseVector.__neg__(self))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return PBWVector(SparseVector.__mul__(self, c))

    __rmul__ = __mul__

    @property
    def max_size(self) -> int:
        return max((len(m) for m in self), default=-1)

    def __repr__(self) -> str:
        return f"PBWVector({dict(self)!r})"


def split(mono: tuple) -> PBWMonomial:
    return PBWMonomial(MultiIndex.from_word(g for g in mono if g[0] == X),
                       MultiIndex.from_word(g for g in mono if g[0] == Y))


# ---------------------------------------------------------------------------
# context


class _Engine:
    """Callbacks for the straightening kernel."""

    __slots__ = ("ctx", "_br")

    def __init__(self, ctx: ModuleContext):
        self.ctx = ctx
        self._br: dict = {}

    def free(self, g) -> bool:
        return g[0] == X or (g[0] == Y and self.ctx.mode == UNIVERSAL)

    @staticmethod
    def skey(g):
        return g

    def scalar(self, g):
        if g[0] == P:
            return self.ctx.phi(g[2])
        if g[0] == Y:
            return self.ctx.extension[g[2]]
        raise ModuleError(f"x-tier letter {g!r} has no scalar action")

    def bracket(self, a, b) -> dict:
        key = (a, b)
        hit = self._br.get(key)
        if hit is None:
            ctx = self.ctx
            hit = ctx.to_letters(ctx.pres.bracket(ctx.from_letter(a), ctx.from_letter(b)))
            self._br[key] = hit
        return hit


class ModuleContext:
    """``W(phi)`` (universal) or ``V(phi')`` (bland quotient) over a tiered basis.

    ``report`` supplies the y-tier; without one the y-tier is empty and every
    non-ideal basis element is an x letter (the trivial partition, which also
    gives a valid PBW basis of ``W(phi)``).
    """

    def __init__(self, pres: LiePresentation, phi: PhiMap, report: AnnihilatorReport | None = None,
                 mode: str = UNIVERSAL, extension: Sequence | None = None,
                 constraint_bound: int | None = None):
        if mode not in (UNIVERSAL, BLAND):
            raise ModuleError(f"unknown mode {mode!r}")
        self.pres = pres
        self.phi = phi
        self.report = report
        self.mode = mode
        self.ys: list[LieElement] = list(report.y_basis) if report is not None else []
        self.leads: list[Basis] = report.y_leads() if report is not None else []
        self._lead_index = {b: j for j, b in enumerate(self.leads)}
        self.constraint_bound = constraint_bound if constraint_bound is not None else (
            report.window.constraint_bound if report is not None and report.window.constraint_bound else None)
        if mode == BLAND:
            if report is None:
                raise ModuleError("the bland quotient needs an annihilator report")
            if extension is None or len(extension) != len(self.ys):
                raise ModuleError(f"the bland quotient needs {len(self.ys)} extension values")
            self.extension = tuple(as_rational(v) for v in extension)
            if not extension_condition(pres, phi, report, self.extension):
                raise ModuleError("extension values do not define a homomorphism on g^phi")
        else:
            self.extension = ()
        self._y_degrees = [self._degrees_of(y) for y in self.ys]
        self.engine = _Engine(self)
        self.memo: dict = {}

    @classmethod
    def universal(cls, pres, phi, report=None, **kw) -> ModuleContext:
        return cls(pres, phi, report, UNIVERSAL, **kw)

    @classmethod
    def bland(cls, pres, phi, report, extension, **kw) -> ModuleContext:
        return cls(pres, phi, report, BLAND, extension, **kw)

    @classmethod
    def trivial(cls, pres, phi, **kw) -> ModuleContext:
        return cls(pres, phi, None, UNIVERSAL, **kw)

    # -- letters -----------------------------------------------------------
    def letter(self, b: Basis) -> tuple:
        if self.pres.in_ideal(b):
            return (P, self.pres.order_key(b), b)
        j = self._lead_index.get(b)
        if j is not None:
            return (Y, j, j)
        return (X, self.pres.order_key(b), b)

    def y_letter(self, j: int) -> tuple:
        return (Y, j, j)

    def to_letters(self, x: Mapping) -> dict:
        out: dict = {}

        def add(g, c):
            v = out.get(g, ZERO) + c
            if v:
                out[g] = v
            else:
                out.pop(g, None)

        for b, c in x.items():
            j = self._lead_index.get(b)
            if j is None:
                add(self.letter(b), c)
                continue
            # b = Y_j - (other terms of Y_j), all of which are x letters
            add((Y, j, j), c)
            for b2, c2 in self.ys[j].items():
                if b2 != b:
                    add(self.letter(b2), -c * c2)
        return out

    def from_letter(self, g) -> LieElement:
        if g[0] == Y:
            return self.ys[g[2]]
        return LieElement({g[2]: 1})

    def letter_name(self, g) -> str:
        if g[0] == Y:
            y = self.ys[g[2]]
            if len(y) == 1:
                return self.pres.name_of(next(iter(y)))
            return f"y{g[2] + 1}"
        return self.pres.name_of(g[2])

    def y_names(self) -> list[str]:
        return [self.letter_name(self.y_letter(j)) for j in range(len(self.ys))]

    # -- vectors -------------------------------------------------------------
    @property
    def w(self) -> PBWVector:
        """The cyclic vector."""
        return PBWVector._trusted({(): Fraction(1)})

    def monomial(self, elems: Iterable) -> tuple:
        """Normal-ordered monomial from basis elements or letters (each must be x- or y-tier)."""
        letters = []
        for e in elems:
            g = e if isinstance(e, tuple) and len(e) == 3 and e[0] in (X, Y, P) else None
            if g is None:
                if isinstance(e, str):
                    e = self.pres.parse_elem(e)
                g = self.letter(e)
            if g[0] == P or (g[0] == Y and self.mode == BLAND):
                raise ModuleError(f"{self.letter_name(g)} is not a free generator here")
            letters.append(g)
        return tuple(sorted(letters))

    def vector(self, terms: Mapping | Iterable) -> PBWVector:
        items = terms.items() if isinstance(terms, Mapping) else terms
        return PBWVector((self.monomial(m), c) for m, c in items)

    def format_monomial(self, mono: tuple) -> str:
        if not mono:
            return "w"
        parts = []
        for g, grp in itertools.groupby(mono):
            e = len(list(grp))
            name = self.letter_name(g)
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts) + " w"

    def format(self, v: Mapping) -> str:
        if not v:
            return "0"
        out = []
        for m in sorted(v, key=_mono_key):
            c = v[m]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = self.format_monomial(m)
            out.append(f"{sign} {body}" if mag == 1 else f"{sign} {mag}*{body}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def vector_json(self, v: Mapping) -> list:
        return [[self.format_monomial(m), str(v[m])] for m in sorted(v, key=_mono_key)]

    # -- degrees and windows ---------------------------------------------------
    def _degrees_of(self, x: Mapping) -> frozenset:
        if not self.pres.graded:
            return frozenset()
        return frozenset(self.pres.degree(b) for b in x)

    def letter_degrees(self, g) -> frozenset:
        if g[0] == Y:
            return self._y_degrees[g[2]]
        return frozenset([self.pres.degree(g[2])])

    def relevant_p(self, mono: tuple) -> list[Basis]:
        """Ideal elements ``p`` with ``(p - phi(p)) mono w`` possibly nonzero.

        ``phi([...[p, u_1], ..., u_r])`` can only be nonzero when
        ``deg p`` lies in ``D - S``, with ``D`` the support degrees of ``phi``
        and ``S`` the degree sums of sub-multisets of the monomial.
        """
        pres, phi = self.pres, self.phi
        if pres.finite:
            return [b for b in pres.basis() if pres.in_ideal(b)]
        if not phi.finite:
            bound = self.constraint_bound or DEFAULT_CONSTRAINT_WINDOW
            return pres.ideal_window(bound)
        if not pres.graded:
            raise WindowError("relevant ideal elements need a grading")
        sums = {Fraction(0)}
        for g in mono:
            sums |= {s + d for s in sums for d in self.letter_degrees(g)}
        seen: dict = {}
        for d in sorted(phi.support_degrees()):
            for s in sorted(sums):
                for p in pres.slice(d - s, ideal=True):
                    seen.setdefault(p, None)
        return sorted(seen, key=pres.order_key)

    def relevant_p_for(self, v: Iterable[tuple]) -> list[Basis]:
        seen: dict = {}
        for m in v:
            for p in self.relevant_p(m):
                seen.setdefault(p, None)
        return sorted(seen, key=self.pres.order_key)

    # -- candidate letters -------------------------------------------------------
    def x_letters(self, index_bound: int) -> list[tuple]:
        pres = self.pres
        comp = pres.complement()
        elems = comp if comp is not None else [b for b in pres.window_basis(index_bound) if not pres.in_ideal(b)]
        return sorted(self.letter(b) for b in elems if b not in self._lead_index)

    def free_letters(self, index_bound: int) -> list[tuple]:
        ys = [self.y_letter(j) for j in range(len(self.ys))] if self.mode == UNIVERSAL else []
        return self.x_letters(index_bound) + ys

    def monomials(self, letters: Sequence[tuple], max_size: int) -> list[tuple]:
        out = []
        for s in range(max_size + 1):
            out.extend(itertools.combinations_with_replacement(sorted(letters), s))
        return out


def _mono_key(m: tuple):
    return (len(m), m)


# ---------------------------------------------------------------------------
# the action


def _accumulate(acc: dict, terms: Mapping, c) -> None:
    for m, v in terms.items():
        nv = acc.get(m, ZERO) + c * v
        if nv:
            acc[m] = nv
        else:
            acc.pop(m, None)


def act_letter(ctx: ModuleContext, g: tuple, v: Mapping) -> PBWVector:
    acc: dict = {}
    for m, c in v.items():
        _accumulate(acc, _kernels.act_monomial(g, m, ctx.engine, ctx.memo), c)
    return PBWVector._trusted({m: Fraction(c) for m, c in acc.items()})


def act(ctx: ModuleContext, g, v: Mapping) -> PBWVector:
    """``g . v`` for a basis element, letter or :class:`LieElement` ``g``."""
    if isinstance(g, Basis):
        g = {g: 1}
    if isinstance(g, tuple) and len(g) == 3 and g[0] in (X, Y, P):
        return act_letter(ctx, g, v)
    acc: dict = {}
    for letter, c in ctx.to_letters(g).items():
        _accumulate(acc, act_letter(ctx, letter, v), c)
    return PBWVector._trusted(acc)


def shifted(ctx: ModuleContext, p: Basis, v: Mapping) -> PBWVector:
    """``(p - phi(p)) v`` for an ideal element ``p``."""
    out = act_letter(ctx, ctx.letter(p), v)
    c = ctx.phi(p)
    return out - PBWVector._trusted(dict(v)) * c if c else out


def is_whittaker(ctx: ModuleContext, v: Mapping, p_window: Sequence[Basis] | None = None) -> bool:
    ps = ctx.relevant_p_for(v) if p_window is None else p_window
    return all(not shifted(ctx, p, v) for p in ps)


# ---------------------------------------------------------------------------
# degrees under the multi-index order


def leading(v: Mapping) -> PBWMonomial:
    """Largest ``(alpha, beta)`` in the support under the pair order."""
    if not v:
        raise ModuleError("the zero vector has no degree")
    best = None
    for m in v:
        s = split(m)
        if best is None or pair_compare(tuple(s), tuple(best)) > 0:
            best = s
    return best


def degree(v: Mapping) -> MultiIndex:
    """``max Supp(v)``: the largest x-part among monomials with nonzero coefficient."""
    if not v:
        raise ModuleError("the zero vector has no degree")
    best = None
    for m in v:
        a = split(m).x_part
        if best is None or compare(a, best) > 0:
            best = a
    return best


# ---------------------------------------------------------------------------
# quasi-Whittaker vectors


@dataclass
class WhittakerResult:
    vectors: list[tuple[PBWVector, PhiMap]]
    monomial_count: int
    constraint_count: int
    types_checked: int = 0
    eigen_method: str = "none"

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def _operator_columns(ctx: ModuleContext, p: Basis, monos: Sequence[tuple]) -> dict:
    g = ctx.letter(p)
    return {m: _kernels.act_monomial(g, m, ctx.engine, ctx.memo) for m in monos}


def whittaker_vectors(ctx: ModuleContext, degree_bound: int, type_free: bool = False,
                      index_bound: int = 3) -> WhittakerResult:
    """Basis of the quasi-Whittaker vectors of type ``phi`` among monomials of size <= ``degree_bound``.

    x letters are taken from the index window ``|index| <= index_bound``
    (the whole complement when it is finite); y letters are all used.  With
    ``type_free`` the search also admits any type ``psi``, reading candidate
    eigenvalues off the diagonal blocks of each ``p`` (ordered by size).
    """
    monos = ctx.monomials(ctx.free_letters(index_bound), degree_bound)
    pos = {m: i for i, m in enumerate(monos)}
    per_mono = {m: set(ctx.relevant_p(m)) for m in monos}
    ps: dict = {}
    for m in monos:
        for p in per_mono[m]:
            ps.setdefault(p, None)
    ps = sorted(ps, key=ctx.pres.order_key)
    if not type_free:
        rows: dict = {}
        for p in ps:
            phival = ctx.phi(p)
            g = ctx.letter(p)
            for m in monos:
                if p not in per_mono[m]:
                    continue
                out = dict(_kernels.act_monomial(g, m, ctx.engine, ctx.memo))
                if phival:
                    out[m] = out.get(m, 0) - phival
                for m2, c in out.items():
                    if c:
                        rows.setdefault((p, m2), {})[pos[m]] = c
        ker = nullspace(SparseMatrix(rows.values(), range(len(monos))))
        vecs = [(PBWVector._trusted({monos[i]: c for i, c in k.items()}), ctx.phi) for k in ker]
        return WhittakerResult(vecs, len(monos), len(ps))
    return _type_free(ctx, monos, pos, ps)


def _type_free(ctx: ModuleContext, monos, pos, ps) -> WhittakerResult:
    n = len(monos)
    ops = {p: _operator_columns(ctx, p, monos) for p in ps}
    eig: dict = {}
    method = "scalar-blocks"
    for p, cols in ops.items():
        blocks: dict = {}
        for m, out in cols.items():
            for m2, c in out.items():
                if m2 not in pos:
                    raise ModuleError("monomial space is not closed under the ideal action")
                if len(m2) > len(m):
                    raise ModuleError("the ideal action raised the monomial size")
                if len(m2) == len(m) and c:
                    blocks.setdefault(len(m), {})[(pos[m2], pos[m])] = Fraction(c)
        values = set()
        for s in range(max((len(m) for m in monos), default=0) + 1):
            idx = [pos[m] for m in monos if len(m) == s]
            block = blocks.get(s, {})
            diag = {block.get((i, i), ZERO) for i in idx}
            off = any(i != j for (i, j) in block)
            if not off and len(diag) <= 1:
                values |= diag or {ZERO}
            else:
                method = "sympy"
                values |= _rational_eigenvalues(block, idx)
        eig[p] = sorted(values)
    vecs = []
    checked = 0
    for combo in itertools.product(*(eig[p] for p in ps)):
        checked += 1
        rows = []
        for p, lam in zip(ps, combo):
            cols = ops[p]
            prow: dict = {}
            for m in monos:
                out = dict(cols[m])
                if lam:
                    out[m] = out.get(m, 0) - lam
                for m2, c in out.items():
                    if c:
                        prow.setdefault(m2, {})[pos[m]] = c
            rows.extend(prow.values())
        ker = nullspace(SparseMatrix(rows, range(n)))
        if not ker:
            continue
        values = dict(ctx.phi.values)
        values.update({p: lam for p, lam in zip(ps, combo)})
        psi = ctx.phi if all(ctx.phi(p) == lam for p, lam in zip(ps, combo)) else PhiMap(ctx.pres, values)
        vecs.extend((PBWVector._trusted({monos[i]: c for i, c in k.items()}), psi) for k in ker)
    return WhittakerResult(vecs, n, len(ps), checked, method)


def _rational_eigenvalues(block: Mapping, idx: Sequence[int]) -> set:
    import sympy

    where = {i: r for r, i in enumerate(idx)}
    mat = sympy.zeros(len(idx), len(idx))
    for (i, j), c in block.items():
        mat[where[i], where[j]] = sympy.Rational(c.numerator, c.denominator)
    out = set()
    for lam in mat.eigenvals():
        if lam.is_rational:
            out.add(Fraction(int(lam.p), int(lam.q)))
    return out


# ---------------------------------------------------------------------------
# reduction and probes


def reduce(ctx: ModuleContext, v: Mapping, p_window: Sequence[Basis] | None = None,
           max_steps: int | None = None) -> tuple[PBWVector, list[Basis]]:
    """Descend from ``v`` to a nonzero quasi-Whittaker vector in ``U(p) v``.

    Each step applies the first ``p`` (in basis order) with
    ``(p - phi(p)) v != 0``; the maximal monomial size drops every step.
    """
    v = PBWVector(v)
    if not v:
        raise ModuleError("cannot reduce the zero vector")
    trace: list[Basis] = []
    limit = v.max_size + 1 if max_steps is None else max_steps
    while True:
        ps = ctx.relevant_p_for(v) if p_window is None else p_window
        for p in ps:
            nxt = shifted(ctx, p, v)
            if nxt:
                break
        else:
            return v, trace
        if nxt.max_size >= v.max_size:
            raise ReductionError(f"applying {ctx.pres.name_of(p)} did not lower the degree")
        if len(trace) >= limit:
            raise ReductionError("window exhausted")
        trace.append(p)
        v = nxt


def random_vector(ctx: ModuleContext, rng: random.Random, degree_bound: int, index_bound: int = 4,
                  max_terms: int = 4) -> PBWVector:
    letters = ctx.free_letters(index_bound)
    if not letters:
        return ctx.w * rng.choice(COEFFS)
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            s = rng.randint(0, degree_bound)
            m = tuple(sorted(rng.choice(letters) for _ in range(s)))
            terms[m] = terms.get(m, 0) + rng.choice(COEFFS)
        v = PBWVector(terms)
        if v:
            return v


def proportional_to_w(v: Mapping) -> bool:
    return bool(v) and set(v) == {()}


@dataclass
class ProbeResult:
    witness: PBWVector | None
    source: str | None
    trials: int
    seed: int
    degree_bound: int
    endpoints: int

    @property
    def found_witness(self) -> bool:
        return self.witness is not None


def irreducibility_probe(pres: LiePresentation, phi: PhiMap, degree_bound: int = 4, trials: int = 50,
                         seed: int = 0, index_bound: int = 4, scan_bound: int = 10,
                         constraint_bound: int | None = None) -> ProbeResult:
    """Search ``W(phi)`` for a quasi-Whittaker vector outside ``C w``.

    Works over the trivial partition, independently of any annihilator
    computation: first a scan of size-1 vectors over ``scan_bound``, then
    ``trials`` random vectors reduced to quasi-Whittaker endpoints.
    """
    ctx = ModuleContext.trivial(pres, phi, constraint_bound=constraint_bound)
    scan = whittaker_vectors(ctx, 1, index_bound=scan_bound)
    for vec, _ in scan.vectors:
        if not proportional_to_w(vec):
            return ProbeResult(vec, "scan", 0, seed, degree_bound, 0)
    rng = random.Random(seed)
    for t in range(trials):
        v = random_vector(ctx, rng, degree_bound, index_bound)
        end, _ = reduce(ctx, v)
        if not proportional_to_w(end):
            return ProbeResult(end, "reduce", t + 1, seed, degree_bound, t + 1)
    return ProbeResult(None, None, trials, seed, degree_bound, trials)


def locally_finite_check(ctx: ModuleContext, v: Mapping, p_window: Sequence[Basis] | None = None) -> tuple[bool, int]:
    """``dim U(p) v`` by closure under the relevant ideal elements.

    Every vector met stays inside the span of monomials whose x-part is
    componentwise below one in ``v``; a violation raises.
    """
    v = PBWVector(v)
    if not v:
        return True, 0
    ps = ctx.relevant_p_for(v) if p_window is None else list(p_window)
    tops = [split(m) for m in v]
    span = SpanTester()
    span.add(v)
    queue = [v]
    while queue:
        u = queue.pop()
        for p in ps:
            nxt = shifted(ctx, p, u)
            if not nxt:
                continue
            for m in nxt:
                s = split(m)
                if not any(s.x_part.le_componentwise(t.x_part) for t in tops):
                    raise ModuleError("closure left the componentwise-bounded span")
            if span.add(nxt):
                queue.append(nxt)
    return True, span.dim


# ---------------------------------------------------------------------------
# J_xi


class JXi:
    """``J_xi = span{x^alpha y^n (y - xi) w}`` truncated at a size bound."""

    def __init__(self, ctx: ModuleContext, xi, degree_bound: int, index_bound: int = 3):
        if ctx.mode != UNIVERSAL or len(ctx.ys) != 1:
            raise ModuleError("J_xi needs the universal module with dim g^phi/p = 1")
        self.ctx = ctx
        self.xi = as_rational(xi)
        self.degree_bound = degree_bound
        y = ctx.y_letter(0)
        xs = ctx.x_letters(index_bound)
        vecs = []
        for s in range(degree_bound):
            for a in range(s + 1):
                n = s - a
                for xm in itertools.combinations_with_replacement(xs, a):
                    base = xm + (y,) * n
                    terms = {base + (y,): Fraction(1)}
                    if self.xi:
                        terms[base] = -self.xi
                    vecs.append(PBWVector._trusted(terms))
        self.vectors = vecs
        self._span = SpanTester(vecs)

    def __contains__(self, v: Mapping) -> bool:
        if any(len(m) > self.degree_bound for m in v):
            raise ModuleError("vector exceeds the truncation bound")
        return self._span.contains(v)

    def contains(self, v: Mapping) -> bool:
        return v in self


def j_xi_submodule(ctx: ModuleContext, xi, degree_bound: int, index_bound: int = 3) -> JXi:
    j = JXi(ctx, xi, degree_bound, index_bound)
    if ctx.w in j:
        raise ModuleError("w lies in J_xi within the bound")
    return j


def context_for(pres: LiePresentation, phi: PhiMap, window=None) -> ModuleContext:
    """Universal context using the annihilator's y-tier."""
    return ModuleContext.universal(pres, phi, compute_annihilator(pres, phi, window))
