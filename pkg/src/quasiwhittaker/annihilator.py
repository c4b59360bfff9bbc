"""The Whittaker annihilator ``g^phi = {g : phi([g, p]) = 0 for all p}``.

The linear system has one row per constraint element ``p_k`` of the ideal and
one column per candidate ``c_j`` outside it, with entry ``phi([c_j, p_k])``.
Its reduced-echelon nullspace gives a canonical basis of ``g^phi / p`` within
the candidate window.

Two regimes:

``exact``
    ``phi`` has finite support and the algebra is finite-dimensional or
    graded with degree-additive brackets.  Every constraint that can be
    nonzero on a candidate is included, so the answer is exact for every
    candidate in the window (and globally when the complement is finite).
``window-verified``
    ``phi`` is rule-based.  Constraints come from a declared window of the
    ideal, and an empty nullspace proves nothing beyond that window.
"""
from __future__ import annotations

import itertools
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlinalg import SparseMatrix, SparseVector, nullspace, nullspace_pairs, rank, solve_affine
from .liealgebra import Basis, LieElement, LiePresentation, PhiMap

DEFAULT_WINDOW = 10
DEFAULT_CONSTRAINT_WINDOW = 12
WINDOW_ENV = "QUASIWHITTAKER_WINDOW"

IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
INCONCLUSIVE = "window-inconclusive"


class WindowError(ValueError):
    pass


def default_window() -> int:
    raw = os.environ.get(WINDOW_ENV)
    if not raw:
        return DEFAULT_WINDOW
    try:
        value = int(raw)
    except ValueError:
        raise WindowError(f"{WINDOW_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise WindowError(f"{WINDOW_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class Window:
    """Candidate bound (g side) and constraint bound (p side).

    ``constraint_bound`` is only consulted for rule-based ``phi``; with finite
    support the constraint set is derived from the grading.
    """

    candidate_bound: int = DEFAULT_WINDOW
    constraint_bound: int | None = None

    def __post_init__(self):
        if self.candidate_bound < 1 or (self.constraint_bound is not None and self.constraint_bound < 1):
            raise WindowError("window bounds must be positive")

    def to_json(self) -> dict:
        return {"candidate_bound": self.candidate_bound, "constraint_bound": self.constraint_bound}


@dataclass
class AnnihilatorReport:
    pres: LiePresentation
    phi: PhiMap
    window: Window
    regime: str
    candidates: list[Basis]
    constraints: list[Basis]
    y_basis: list[LieElement]
    leads: list[Basis]
    complete: bool
    a_phi_rank: tuple[int, tuple[int, int]] | None = None
    verdict: str = INCONCLUSIVE
    witness: LieElement | None = None
    notes: dict = field(default_factory=dict)

    @property
    def dim_quotient(self) -> int:
        return len(self.y_basis)

    def y_leads(self) -> list[Basis]:
        """The free column of each y element: it has coefficient 1 there and no other y does."""
        return list(self.leads)

    def to_json(self) -> dict:
        fmt = self.pres.format
        out = {
            "algebra": self.pres.name,
            "params": {k: str(v) for k, v in sorted(self.pres.params.items())},
            "phi": self.phi.to_json(),
            "window": self.window.to_json(),
            "regime": self.regime,
            "candidates_complete": self.complete,
            "candidate_count": len(self.candidates),
            "constraint_count": len(self.constraints),
            "y_basis": [fmt(y) for y in self.y_basis],
            "a_phi_rank": None if self.a_phi_rank is None else {
                "rank": self.a_phi_rank[0], "rows": self.a_phi_rank[1][0], "columns": self.a_phi_rank[1][1]},
            "verdict": self.verdict,
            "witness": None if self.witness is None else fmt(self.witness),
        }
        return out


# ---------------------------------------------------------------------------
# windows


def constraints_for(pres: LiePresentation, phi: PhiMap, candidates: Iterable[Basis],
                    constraint_bound: int | None = None) -> list[Basis]:
    """Ideal elements ``p`` with ``phi([c, p])`` possibly nonzero for some candidate ``c``.

    Finite support: exact, from the grading (or all of ``p`` when finite).
    Rule-based: the ideal window of the given bound.
    """
    if pres.finite:
        return [b for b in pres.basis() if pres.in_ideal(b)]
    if not phi.finite:
        bound = DEFAULT_CONSTRAINT_WINDOW if constraint_bound is None else constraint_bound
        return pres.ideal_window(bound)
    if not pres.graded:
        raise WindowError("finite-support constraints need a grading on infinite algebras")
    degs = sorted(phi.support_degrees())
    seen: dict = {}
    for c in candidates:
        e = pres.degree(c)
        for d in degs:
            for p in pres.slice(d - e, ideal=True):
                seen.setdefault(p, None)
    return sorted(seen, key=pres.order_key)


def required_candidate_bound(pres: LiePresentation, phi: PhiMap) -> int:
    """Smallest candidate bound accepted for this ``phi``: the largest |degree| in its support."""
    if pres.finite or not phi.finite or not phi.values:
        return 1
    return max(1, max(math.ceil(abs(d)) for d in phi.support_degrees()))


def candidate_window(pres: LiePresentation, bound: int) -> tuple[list[Basis], bool]:
    """Non-ideal candidates and whether they exhaust the complement."""
    comp = pres.complement()
    if comp is not None:
        return sorted(comp, key=pres.order_key), True
    return [b for b in pres.window_basis(bound) if not pres.in_ideal(b)], False


# ---------------------------------------------------------------------------
# the engine


def constraint_matrix(pres: LiePresentation, phi: PhiMap, candidates: Sequence[Basis],
                      constraints: Sequence[Basis]) -> SparseMatrix:
    rows = []
    for p in constraints:
        row = {}
        for c in candidates:
            v = phi.on(pres.bracket_basis(c, p))
            if v:
                row[c] = v
        rows.append(row)
    return SparseMatrix(rows, candidates)


def compute_annihilator(pres: LiePresentation, phi: PhiMap, window: Window | None = None,
                        candidates: Sequence[Basis] | None = None) -> AnnihilatorReport:
    """Basis of ``g^phi / p`` over the candidate window, plus a verdict.

    ``candidates`` restricts the search to the given non-ideal elements; the
    report is then marked incomplete.
    """
    window = window or Window(default_window())
    need = required_candidate_bound(pres, phi)
    if window.candidate_bound < need:
        raise WindowError(f"candidate bound {window.candidate_bound} does not reach the support of phi; "
                          f"use a bound of at least {need}")
    if candidates is None:
        cands, complete = candidate_window(pres, window.candidate_bound)
    else:
        cands = sorted(set(candidates), key=pres.order_key)
        for c in cands:
            pres.check(c)
            if pres.in_ideal(c):
                raise WindowError(f"candidate {pres.name_of(c)} lies in the ideal")
        complete = False
    cons = constraints_for(pres, phi, cands, window.constraint_bound)
    regime = "exact" if phi.finite else "window-verified"
    m = constraint_matrix(pres, phi, cands, cons)
    pairs = nullspace_pairs(m)
    ys = [LieElement(v) for _, v in pairs]
    leads = [f for f, _ in pairs]
    a_rank = None
    if complete:
        r = rank(m)
        a_rank = (r, m.shape)
    if ys:
        verdict, witness = REDUCIBLE, ys[0]
    elif regime == "exact":
        verdict, witness = IRREDUCIBLE, None
    else:
        verdict, witness = INCONCLUSIVE, None
    return AnnihilatorReport(pres, phi, window, regime, list(cands), cons, ys, leads, complete, a_rank, verdict, witness)


def rank_criterion(pres: LiePresentation, phi: PhiMap) -> tuple[SparseMatrix, int, bool]:
    """``A_phi`` over the full complement, its rank, and ``rank == dim complement``."""
    comp = pres.complement()
    if comp is None:
        raise WindowError(f"{pres.name} has an infinite complement to the ideal; use compute_annihilator")
    cands = sorted(comp, key=pres.order_key)
    cons = constraints_for(pres, phi, cands)
    m = constraint_matrix(pres, phi, cands, cons)
    r = rank(m)
    return m, r, r == len(cands)


def membership(pres: LiePresentation, phi: PhiMap, candidate: Mapping, constraint_bound: int | None = None) -> bool:
    """True iff ``phi([candidate, p]) = 0`` on every relevant ideal element."""
    cons = constraints_for(pres, phi, list(candidate), constraint_bound)
    x = LieElement(candidate)
    return all(not phi.on(pres.bracket(x, {p: 1})) for p in cons)


# ---------------------------------------------------------------------------
# extendability


@dataclass
class Extendability:
    extendable: bool
    witness: LieElement | None = None
    pairs: list[tuple[int, int, Fraction]] = field(default_factory=list)
    value: Fraction | None = None
    expression: str | None = None

    def to_json(self, pres: LiePresentation) -> dict:
        return {"extendable": self.extendable,
                "witness": None if self.witness is None else pres.format(self.witness),
                "bracket": self.expression,
                "phi_of_witness": None if self.value is None else str(self.value),
                "pairs": [[i, j, str(c)] for i, j, c in self.pairs]}


def _non_ideal_part(pres: LiePresentation, x: Mapping) -> SparseVector:
    return SparseVector({b: c for b, c in x.items() if not pres.in_ideal(b)})


def _bracket_text(pres: LiePresentation, ys, used) -> str:
    parts = []
    for i, j, c in used:
        body = f"[{pres.format(ys[i])}, {pres.format(ys[j])}]"
        coeff = "" if abs(c) == 1 else f"{abs(c)}*"
        parts.append(("- " if c < 0 else "+ ") + coeff + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def is_extendable(pres: LiePresentation, phi: PhiMap, report: AnnihilatorReport) -> Extendability:
    """Whether ``[g^phi, g^phi] cap p`` lies in ``ker phi``.

    ``phi`` already kills ``[y, p]`` and ``[p, p]``, so only combinations of
    the brackets ``[y_i, y_j]`` that land in ``p`` matter; the witness is the
    first such combination with nonzero ``phi``.
    """
    ys = report.y_basis
    pairs = list(itertools.combinations(range(len(ys)), 2))
    brackets = [pres.bracket(ys[i], ys[j]) for i, j in pairs]
    if not brackets:
        return Extendability(True)
    # relations among the non-ideal parts give the combinations lying in p
    cols = list(range(len(pairs)))
    keys: dict = {}
    for br in brackets:
        for b in _non_ideal_part(pres, br):
            keys.setdefault(b, None)
    rows = [{k: _non_ideal_part(pres, br)[b] for k, br in enumerate(brackets) if _non_ideal_part(pres, br)[b]}
            for b in keys]
    relations = nullspace(SparseMatrix(rows, cols))
    for rel in relations:
        elem = LieElement({})
        for k, c in rel.items():
            elem = elem + brackets[k] * c
        val = phi.on(elem)
        if val:
            used = [(pairs[k][0], pairs[k][1], c) for k, c in sorted(rel.items())]
            return Extendability(False, elem, used, val, _bracket_text(pres, ys, used))
    return Extendability(True)


def extension_condition(pres: LiePresentation, phi: PhiMap, report: AnnihilatorReport,
                        values: Sequence) -> bool:
    """Whether ``phi'(y_j) = values[j]`` extends ``phi`` to a homomorphism on ``g^phi``.

    Each ``[y_i, y_j]`` is written as ``sum c_k y_k + q`` with ``q`` in ``p``;
    the condition is ``sum c_k phi'(y_k) + phi(q) = 0``.  Checks ``[y_i, p]``
    on the constraint set as well.
    """
    ys = report.y_basis
    if len(values) != len(ys):
        raise ValueError(f"expected {len(ys)} extension values, got {len(values)}")
    vals = [Fraction(v) for v in values]
    lead = report.y_leads()
    for i, j in itertools.combinations(range(len(ys)), 2):
        br = pres.bracket(ys[i], ys[j])
        coeffs = [br[b] for b in lead]
        rest = br - sum((ys[k] * coeffs[k] for k in range(len(ys))), LieElement({}))
        if _non_ideal_part(pres, rest):
            raise WindowError("y window is not closed under the bracket")
        if sum((c * v for c, v in zip(coeffs, vals)), Fraction(0)) + phi.on(rest):
            return False
    return True


def y_closure_defect(pres: LiePresentation, report: AnnihilatorReport) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` whose bracket leaves ``span(y) + p`` (empty when closed)."""
    ys = report.y_basis
    lead = report.y_leads()
    bad = []
    for i, j in itertools.combinations(range(len(ys)), 2):
        br = pres.bracket(ys[i], ys[j])
        rest = br - sum((ys[k] * br[b] for k, b in enumerate(lead)), LieElement({}))
        if _non_ideal_part(pres, rest):
            bad.append((i, j))
    return bad


def solve_extension(pres: LiePresentation, phi: PhiMap, report: AnnihilatorReport) -> SparseVector | None:
    """One admissible extension vector ``(phi'(y_j))_j`` (free values zero), or None."""
    ys = report.y_basis
    lead = report.y_leads()
    rows, rhs = [], []
    for i, j in itertools.combinations(range(len(ys)), 2):
        br = pres.bracket(ys[i], ys[j])
        coeffs = {k: br[b] for k, b in enumerate(lead) if br[b]}
        rest = br - sum((ys[k] * c for k, c in coeffs.items()), LieElement({}))
        rows.append(coeffs)
        rhs.append(-phi.on(rest))
    if not rows:
        return SparseVector({})
    return solve_affine(SparseMatrix(rows, list(range(len(ys)))), rhs)
