"""Closed-form irreducibility criteria for the catalog algebras.

Each criterion returns a :class:`Verdict` and can be cross-checked against
:func:`quasiwhittaker.annihilator.compute_annihilator`.  Reducibility
witnesses are always re-validated with the membership oracle.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from .annihilator import (
    DEFAULT_CONSTRAINT_WINDOW,
    INCONCLUSIVE,
    IRREDUCIBLE,
    REDUCIBLE,
    Window,
    compute_annihilator,
    default_window,
    membership,
    rank_criterion,
)
from .catalog import PhiError, phi_from_assignments, witt_n_plus
from .exactlinalg import SparseMatrix, SparseVector, nullspace, rank, solve_affine
from .liealgebra import Basis, LieElement, LiePresentation, PhiMap

PRECONDITION_FAILED = "precondition-failed"
DEFAULT_R_MAX = 6
DEFAULT_RECURRENCE_WINDOW = 12


@dataclass
class Verdict:
    """``irreducible``, ``reducible`` (with witness), ``window-inconclusive`` or ``precondition-failed``."""

    kind: str
    witness: LieElement | None = None
    reason: str = ""
    route: str = "criterion"
    data: dict = field(default_factory=dict)

    @property
    def irreducible(self) -> bool:
        return self.kind == IRREDUCIBLE

    def to_json(self, pres: LiePresentation) -> dict:
        return {
            "verdict": self.kind,
            "witness": None if self.witness is None else pres.format(self.witness),
            "reason": self.reason,
            "route": self.route,
            "data": self.data,
        }


@dataclass(frozen=True)
class PhiProfile:
    algebra: str
    family: str
    support: tuple[int, ...]
    finite: bool

    @property
    def upper_finite(self) -> bool:
        return self.finite

    @property
    def lower_finite(self) -> bool:
        return self.finite

    @property
    def j_max(self) -> int | None:
        return max(self.support) if self.support else None

    @property
    def j_min(self) -> int | None:
        return min(self.support) if self.support else None


def profile(pres: LiePresentation, phi: PhiMap, family: str) -> PhiProfile:
    """``S^phi`` on one integer family, for finite-support ``phi``."""
    if not phi.finite:
        raise PhiError("support profiles need a finite-support phi")
    support = tuple(sorted(b.index for b in phi.values if b.family == family))
    return PhiProfile(pres.name, family, support, True)


def _witness(pres: LiePresentation, phi: PhiMap, x: LieElement, kind: str = REDUCIBLE, **kw) -> Verdict:
    if not membership(pres, phi, x):
        raise AssertionError(f"witness {pres.format(x)} fails the membership oracle")
    data = kw.pop("data", {})
    data["witness_verified"] = True
    return Verdict(kind, x, data=data, **kw)


def generic_verdict(pres: LiePresentation, phi: PhiMap, window: Window | None = None,
                    candidates=None, reason: str = "", route: str = "generic") -> Verdict:
    report = compute_annihilator(pres, phi, window, candidates)
    data = {"regime": report.regime, "y_basis": [pres.format(y) for y in report.y_basis],
            "candidates_complete": report.complete}
    if report.witness is not None:
        return _witness(pres, phi, report.witness, reason=reason or "nonzero element of g^phi outside p",
                        route=route, data=data)
    return Verdict(report.verdict, None, reason or "g^phi = p on the candidate window", route, data)


# ---------------------------------------------------------------------------
# recurrences


@dataclass(frozen=True)
class Recurrence:
    """``c_0 a_n + ... + c_{r-1} a_{n+r-1} + a_{n+r} = 0`` on every window point."""

    order: int
    coeffs: tuple[Fraction, ...]
    points: int

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs], "points": self.points}


def detect_recurrence(seq: Callable[[int], Fraction], r_max: int = DEFAULT_R_MAX,
                      window: int = DEFAULT_RECURRENCE_WINDOW) -> Recurrence | None:
    """Minimal-order constant-coefficient recurrence with ``c_0 != 0`` on ``|n| <= window``.

    An order is rejected when fewer than ``2 * r_max`` window points
    constrain it.
    """
    vals = {n: Fraction(seq(n)) for n in range(-window, window + 1)}
    for r in range(1, r_max + 1):
        starts = range(-window, window - r + 1)
        if len(starts) < 2 * r_max:
            return None
        cols = list(range(r))
        rows = [{i: vals[n + i] for i in cols if vals[n + i]} for n in starts]
        rhs = [-vals[n + r] for n in starts]
        m = SparseMatrix(rows, cols)
        sol = solve_affine(m, rhs)
        if sol is None:
            continue
        if not sol[0]:
            # the solution set is an affine space; look for a direction moving c_0
            shift = next((k for k in nullspace(m) if k[0]), None)
            if shift is None:
                continue
            sol = sol + shift
        return Recurrence(r, tuple(sol[i] for i in cols), len(starts))
    return None


def exp_polynomial_detect(phi: PhiMap, r_max: int = DEFAULT_R_MAX,
                          window: int = DEFAULT_RECURRENCE_WINDOW) -> Recurrence | None:
    """Recurrence for ``n -> phi(h_{1/2+n})`` on the mirror Heisenberg-Virasoro ideal."""
    if phi(Basis("c", 0)):
        raise PhiError("recurrence detection assumes phi(c) = 0")
    return detect_recurrence(lambda n: phi(Basis("h", n)), r_max, window)


def recurrence_witness(rec: Recurrence) -> LieElement:
    """``c_0 d_{-r} + ... + c_{r-1} d_{-1} + d_0``."""
    r = rec.order
    terms = {Basis("d", i - r): c for i, c in enumerate(rec.coeffs)}
    terms[Basis("d", 0)] = terms.get(Basis("d", 0), 0) + 1
    return LieElement(terms)


def mirror_hv_irreducible(pres: LiePresentation, phi: PhiMap, r_max: int = DEFAULT_R_MAX,
                          window: int = DEFAULT_RECURRENCE_WINDOW) -> Verdict:
    """Irreducible iff ``phi`` is not exp-polynomial on the ``h_r``."""
    if phi(Basis("c", 0)):
        return Verdict(PRECONDITION_FAILED, reason="phi(c) != 0")
    nonzero = any(phi(Basis("h", n)) for n in range(-window, window + 1)) if not phi.finite else any(
        b.family == "h" for b in phi.values)
    if not nonzero:
        return Verdict(PRECONDITION_FAILED, reason="phi vanishes on the twisted Heisenberg part")
    rec = exp_polynomial_detect(phi, r_max, window)
    if rec is not None:
        x = recurrence_witness(rec)
        bound = None if phi.finite else max(window, DEFAULT_CONSTRAINT_WINDOW)
        if not membership(pres, phi, x, bound):
            raise AssertionError("recurrence witness fails the membership oracle")
        kind = REDUCIBLE
        return Verdict(kind, x, "exp-polynomial: recurrence found", data={
            "recurrence": rec.to_json(), "witness_verified": True,
            "regime": "exact" if phi.finite else "window-verified"})
    if phi.finite:
        # a nonzero finitely supported sequence satisfies no recurrence with c_0 != 0
        return Verdict(IRREDUCIBLE, None, "finite support: not exp-polynomial", data={"recurrence": None})
    return Verdict(INCONCLUSIVE, None, f"no recurrence up to order {r_max} on |n| <= {window}",
                   data={"recurrence": None})


# ---------------------------------------------------------------------------
# Heisenberg-Virasoro and planar Galilean


def _support_criterion(pres: LiePresentation, phi: PhiMap, family: str, window: Window | None) -> Verdict:
    prof = profile(pres, phi, family)
    if not prof.support:
        v = generic_verdict(pres, phi, window, reason=f"phi vanishes on every {family}_n; generic engine")
        v.data["precondition"] = "failed"
        return v
    if len(prof.support) >= 2:
        return Verdict(IRREDUCIBLE, None, f"|S^phi| = {len(prof.support)} >= 2",
                       data={"support": list(prof.support)})
    n = prof.support[0]
    return _witness(pres, phi, LieElement({Basis("L", n): 1}), reason=f"S^phi = {{{n}}}",
                    data={"support": list(prof.support)})


def hv_finite_criterion(pres: LiePresentation, phi: PhiMap, window: Window | None = None) -> Verdict:
    """Irreducible iff ``|S^phi| >= 2`` for finite ``phi``; witness ``L_n`` when ``S^phi = {n}``."""
    if not phi.finite:
        raise PhiError("the finite criterion needs finite support")
    if phi(Basis("z2", 0)):
        raise PhiError("phi is not finite: phi(z2) != 0")
    return _support_criterion(pres, phi, "I", window)


def planar_galilean_criterion(pres: LiePresentation, phi: PhiMap, window: Window | None = None) -> Verdict:
    if not phi.finite:
        raise PhiError("the finite criterion needs finite support")
    bad = [pres.name_of(b) for b in phi.values if b.family in ("I", "J")]
    if bad:
        raise PhiError(f"phi must vanish on I_n and J_n; got values on {', '.join(bad)}")
    return _support_criterion(pres, phi, "H", window)


# ---------------------------------------------------------------------------
# W(a, b)


def _as_int(q: Fraction) -> int | None:
    return int(q) if q.denominator == 1 else None


def wab_criterion(pres: LiePresentation, phi: PhiMap, window: Window | None = None) -> Verdict:
    """Decide ``W(a, b)`` for finite-support ``phi`` from head/tail constraints.

    ``b = 1``: reducible iff ``S^phi = {j0}`` and ``a = -j0``.  Otherwise a
    nonzero ``x`` in ``g^phi`` has head ``(max S + a)/(1 - b)`` and tail
    ``(min S + a)/(1 - b)``; if either is not an integer the module is
    irreducible, else the engine runs on exactly the ``L_i`` between them.
    """
    if not phi.finite:
        raise PhiError("phi must be upper or lower finite; rule-based phi is not supported here")
    a, b = pres.params["a"], pres.params["b"]
    prof = profile(pres, phi, "H")
    if not prof.support:
        return Verdict(PRECONDITION_FAILED, reason="phi = 0")
    j_hi, j_lo = prof.j_max, prof.j_min
    data = {"a": str(a), "b": str(b), "support": list(prof.support), "j0": j_hi}
    if b == 1:
        if len(prof.support) == 1 and a == -j_hi:
            return _witness(pres, phi, LieElement({Basis("L", 0): 1}), reason="S^phi = {j0} and a = -j0",
                            data=data)
        return Verdict(IRREDUCIBLE, None, "b = 1 and not (S^phi = {j0}, a = -j0)", data=data)
    head = Fraction(j_hi + a, 1 - b)
    tail = Fraction(j_lo + a, 1 - b)
    data.update({"head": str(head), "tail": str(tail)})
    if _as_int(head) is None or _as_int(tail) is None:
        return Verdict(IRREDUCIBLE, None, "(j0 + a)/(1 - b) is not an integer", data=data)
    h, t = int(head), int(tail)
    if h > t:
        return Verdict(IRREDUCIBLE, None, "required head exceeds required tail", data=data)
    cands = [Basis("L", i) for i in range(h, t + 1)]
    bound = max(abs(h), abs(t), 1)
    win = window or Window(max(default_window(), bound))
    if win.candidate_bound < bound:
        win = Window(bound, win.constraint_bound)
    v = generic_verdict(pres, phi, win, cands, route="criterion+engine",
                        reason=f"engine on candidates L_{h}..L_{t}")
    v.data.update(data)
    if v.kind == INCONCLUSIVE or v.kind == IRREDUCIBLE:
        # the candidate set is complete, so the restricted engine answer is exact
        v.kind = IRREDUCIBLE
    return v


# ---------------------------------------------------------------------------
# W_1^{++}


def witt_borel_criterion(pres: LiePresentation, phi: PhiMap) -> Verdict:
    """Irreducible iff ``phi(d_{2k-1}) != 0`` or ``phi(d_{2k}) != 0``; else witness ``d_{k-1}``."""
    k = int(pres.params["k"])
    if not phi.finite:
        raise PhiError("phi on p_k must be given by finitely many values")
    high = [b for b in phi.values if b.index >= 2 * k + 1]
    if high:
        raise PhiError(f"phi must vanish on p_{2 * k + 1}; got {pres.name_of(high[0])}")
    if not phi.values:
        return Verdict(PRECONDITION_FAILED, reason="phi = 0")
    v1, v2 = phi(Basis("d", 2 * k - 1)), phi(Basis("d", 2 * k))
    data = {"k": k, "phi(d_2k-1)": str(v1), "phi(d_2k)": str(v2)}
    if v1 or v2:
        return Verdict(IRREDUCIBLE, None, "phi(d_{2k-1}) or phi(d_{2k}) is nonzero", data=data)
    return _witness(pres, phi, LieElement({Basis("d", k - 1): 1}), reason="d_{k-1} lies in g^phi", data=data)


# ---------------------------------------------------------------------------
# W_n^+ at the a-level


def _td(alpha, i) -> Basis:
    return Basis("td", (tuple(alpha), i))


def _unit(n, i, times=1):
    return tuple(times if k == i - 1 else 0 for k in range(n))


def wn_plus_d_matrix(pres: LiePresentation, phi: PhiMap) -> SparseMatrix:
    """``D = (phi([t_i d_j, t_p^2 d_q]))`` with rows ``(i, j)`` and columns ``(p, q)`` in lexicographic order."""
    n = int(pres.params["n"])
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    rows = []
    for i, j in pairs:
        row = {}
        for p, q in pairs:
            v = phi.on(pres.bracket_basis(_td(_unit(n, i), j), _td(_unit(n, p, 2), q)))
            if v:
                row[(p, q)] = v
        rows.append(row)
    return SparseMatrix(rows, pairs)


def is_special_wn_phi(pres: LiePresentation, phi: PhiMap) -> bool:
    """``phi(t_i^2 d_i) != 0`` for all ``i`` and ``phi(t^alpha d_i) = 0`` for ``|alpha| = 2``, ``alpha_i != 2``."""
    for alpha, i in pres.family["td"].of_degree(1):
        val = phi(_td(alpha, i))
        if (alpha[i - 1] == 2) != bool(val):
            return False
    return True


def wn_plus_height2(n: int, phi_values: dict | PhiMap) -> Verdict:
    """a-level irreducibility of ``W(phi)`` for ``a = g_{>=0}``, ``p = g_{>=1}`` of ``W_n^+``."""
    if n < 2:
        raise PhiError("n must be >= 2")
    if isinstance(phi_values, PhiMap):
        phi = phi_values
        pres = phi.pres
    else:
        pres = witt_n_plus(n)
        phi = phi_from_assignments(pres, phi_values)
    bad = [b for b in phi.values if pres.degree(b) != 1]
    if bad:
        raise PhiError(f"phi must vanish on g_(>=2); got {pres.name_of(bad[0])}")
    if not phi.values:
        return Verdict(PRECONDITION_FAILED, reason="phi = 0 on the degree-1 slice")
    m, r, irreducible = rank_criterion(pres, phi)
    data = {"n": n, "rank": r, "t": n * n, "rows": m.shape[0], "columns": m.shape[1]}
    if is_special_wn_phi(pres, phi):
        d = wn_plus_d_matrix(pres, phi)
        per_row = [len(row) for row in d.rows]
        per_col: dict = {}
        for row in d.rows:
            for key in row:
                per_col[key] = per_col.get(key, 0) + 1
        structure = all(c == 1 for c in per_row) and len(per_col) == n * n and all(c == 1 for c in per_col.values())
        if not structure:
            raise AssertionError("D lacks the one-nonzero-per-row-and-column structure")
        data.update({"special_phi": True, "d_rank": rank(d), "d_one_per_row_and_column": structure})
    if irreducible:
        return Verdict(IRREDUCIBLE, None, f"rank A_phi = {r} = n^2", data=data)
    v = generic_verdict(pres, phi, reason=f"rank A_phi = {r} < n^2")
    v.data.update(data)
    return v


# ---------------------------------------------------------------------------
# dispatch


def criterion_for(pres: LiePresentation, phi: PhiMap, window: Window | None = None) -> Verdict:
    """The specialised criterion for a catalog algebra, or the generic engine."""
    name = pres.name
    if name == "mirror_hv":
        w = window.constraint_bound if window and window.constraint_bound else DEFAULT_RECURRENCE_WINDOW
        return mirror_hv_irreducible(pres, phi, window=w)
    if name == "hv":
        return hv_finite_criterion(pres, phi, window)
    if name == "planar_galilean":
        return planar_galilean_criterion(pres, phi, window)
    if name == "wab":
        return wab_criterion(pres, phi, window)
    if name == "witt_borel":
        return witt_borel_criterion(pres, phi)
    if name == "witt_n_plus":
        return wn_plus_height2(int(pres.params["n"]), phi)
    return generic_verdict(pres, phi, window)


def head_tail(x: SparseVector) -> tuple[int, int]:
    """Least and greatest ``L`` index in ``x``."""
    idx = [b.index for b in x if b.family == "L"]
    if not idx:
        raise ValueError("no L terms")
    return min(idx), max(idx)
