"""Exact rational scalars and sparse linear algebra over Q.

Scalars are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  Rows are reduced fraction-free on integers by the kernel in
:mod:`quasiwhittaker._kernels`, then converted back to rationals.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from math import lcm

from . import _kernels
from ._kernels._pure import _eliminate

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


class SparseVector(Mapping):
    """Immutable map from coordinate keys to nonzero rationals."""

    __slots__ = ("_d", "_hash")

    def __init__(self, entries: Mapping | Iterable = ()):
        if isinstance(entries, SparseVector):
            self._d = entries._d
        else:
            items = entries.items() if isinstance(entries, Mapping) else entries
            d = {}
            for k, v in items:
                v = as_rational(v)
                if v:
                    d[k] = d.get(k, ZERO) + v
                    if not d[k]:
                        del d[k]
            self._d = d
        self._hash = None

    @classmethod
    def _trusted(cls, d: dict) -> SparseVector:
        v = cls.__new__(cls)
        v._d = d
        v._hash = None
        return v

    @classmethod
    def unit(cls, key) -> SparseVector:
        return cls._trusted({key: ONE})

    def __getitem__(self, key) -> Fraction:
        return self._d.get(key, ZERO)

    def __contains__(self, key) -> bool:
        return key in self._d

    def __iter__(self) -> Iterator:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __bool__(self) -> bool:
        return bool(self._d)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseVector):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __add__(self, other: SparseVector) -> SparseVector:
        d = dict(self._d)
        for k, v in other.items():
            nv = d.get(k, ZERO) + v
            if nv:
                d[k] = nv
            else:
                d.pop(k, None)
        return SparseVector._trusted(d)

    def __neg__(self) -> SparseVector:
        return SparseVector._trusted({k: -v for k, v in self._d.items()})

    def __sub__(self, other: SparseVector) -> SparseVector:
        return self + (-other)

    def __mul__(self, c) -> SparseVector:
        c = as_rational(c)
        if not c:
            return SparseVector._trusted({})
        return SparseVector._trusted({k: c * v for k, v in self._d.items()})

    __rmul__ = __mul__

    def dot(self, other: Mapping) -> Fraction:
        if len(other) < len(self._d):
            self, other = other, self
        return sum((v * other[k] for k, v in self.items() if k in other), ZERO)

    def __repr__(self) -> str:
        return f"SparseVector({self._d!r})"


class SparseMatrix:
    """Rows of :class:`SparseVector` over a shared, ordered column universe."""

    def __init__(self, rows: Iterable[Mapping], columns: Sequence[Hashable] | None = None):
        self.rows = tuple(r if isinstance(r, SparseVector) else SparseVector(r) for r in rows)
        if columns is None:
            seen = {}
            for r in self.rows:
                for k in r:
                    seen.setdefault(k, None)
            try:
                columns = sorted(seen)
            except TypeError:
                columns = list(seen)
        self.columns = tuple(columns)
        universe = set(self.columns)
        for r in self.rows:
            extra = [k for k in r if k not in universe]
            if extra:
                raise ValueError(f"row has keys outside the column universe: {extra[:3]}")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], columns: Sequence | None = None) -> SparseMatrix:
        ncols = len(rows[0]) if rows else 0
        cols = list(columns) if columns is not None else list(range(ncols))
        return cls(({cols[j]: x for j, x in enumerate(r) if x} for r in rows), cols)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def matvec(self, v: Mapping) -> list[Fraction]:
        return [r.dot(v) for r in self.rows]

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape})"


def _integer_rows(rows: Iterable[Mapping], index: Mapping) -> list[dict]:
    out = []
    for r in rows:
        if not r:
            continue
        den = lcm(*(as_rational(v).denominator for v in r.values()))
        out.append({index[k]: int(as_rational(v) * den) for k, v in r.items() if v})
    return out


def rref(m: SparseMatrix) -> tuple[list[SparseVector], list]:
    """Reduced row echelon form: rows with pivot coefficient 1, pivot keys."""
    cols = m.columns
    index = {k: j for j, k in enumerate(cols)}
    irows, pivots = _kernels.row_reduce(_integer_rows(m.rows, index), True)
    out = []
    for row, p in zip(irows, pivots):
        lead = row[p]
        out.append(SparseVector._trusted({cols[j]: Fraction(v, lead) for j, v in sorted(row.items())}))
    return out, [cols[p] for p in pivots]


def rank(m: SparseMatrix) -> int:
    """Exact rank over Q."""
    index = {k: j for j, k in enumerate(m.columns)}
    irows, pivots = _kernels.row_reduce(_integer_rows(m.rows, index), False)
    return len(pivots)


def nullspace_pairs(m: SparseMatrix) -> list[tuple[Hashable, SparseVector]]:
    """Pairs ``(free column, basis vector)`` read off the reduced echelon form.

    Each vector has a 1 at its free column and zero at every other free
    column; pairs come in column order.
    """
    rows, pivots = rref(m)
    pivset = set(pivots)
    out = []
    for f in m.columns:
        if f in pivset:
            continue
        d = {f: ONE}
        for r, p in zip(rows, pivots):
            c = r[f]
            if c:
                d[p] = -c
        out.append((f, SparseVector._trusted(d)))
    return out


def nullspace(m: SparseMatrix) -> list[SparseVector]:
    """Canonical basis of ``{v : m v = 0}``: one vector per non-pivot column."""
    return [v for _, v in nullspace_pairs(m)]


def in_span(v: Mapping, basis: Sequence[Mapping]) -> bool:
    """True iff ``v`` is a rational combination of ``basis``."""
    if not any(x for x in v.values()):
        return True
    keys: dict = {}
    for b in basis:
        for k in b:
            keys.setdefault(k, len(keys))
    if any(k not in keys for k, x in v.items() if x):
        return False
    base_rows = _integer_rows(basis, keys)
    _, piv0 = _kernels.row_reduce(base_rows, False)
    _, piv1 = _kernels.row_reduce(base_rows + _integer_rows([v], keys), False)
    return len(piv0) == len(piv1)


class SpanTester:
    """Incremental membership tests against a growing span.

    Holds an echelon form; :meth:`contains` reduces a query against it and
    :meth:`add` extends the span when the residue is nonzero.
    """

    def __init__(self, basis: Iterable[Mapping] = ()):
        self._keys: dict = {}
        self._rows: dict = {}
        for b in basis:
            self.add(b)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _residue(self, v: Mapping) -> dict:
        for k, x in v.items():
            if x and k not in self._keys:
                self._keys[k] = len(self._keys)
        rows = _integer_rows([v], self._keys)
        r = rows[0] if rows else {}
        while r:
            c = min(r)
            prow = self._rows.get(c)
            if prow is None:
                break
            r = _eliminate(r, prow, c)
        return r

    def contains(self, v: Mapping) -> bool:
        return not self._residue(v)

    def add(self, v: Mapping) -> bool:
        """Extend the span by ``v``; True iff the dimension grew."""
        r = self._residue(v)
        if not r:
            return False
        self._rows[min(r)] = r
        return True


def solve_affine(m: SparseMatrix, rhs: Sequence) -> SparseVector | None:
    """One solution of ``m x = rhs`` (free variables zero), or None."""
    marker = object()
    cols = list(m.columns) + [marker]
    rows = []
    for r, b in zip(m.rows, rhs):
        d = dict(r)
        b = as_rational(b)
        if b:
            d[marker] = -b
        rows.append(d)
    echelon, pivots = rref(SparseMatrix(rows, cols))
    if marker in pivots:
        return None
    sol = {}
    for r, p in zip(echelon, pivots):
        c = r[marker]
        if c:
            sol[p] = -c
    return SparseVector._trusted(sol)
