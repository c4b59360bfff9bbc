"""Finitely supported exponent vectors with the graded total order.

An index set is any totally ordered collection of hashable values: integers,
small integer tuples (lexicographic), or the sort keys of a Lie algebra
basis.  ``MultiIndex`` stores only the nonzero exponents.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from functools import total_ordering


@total_ordering
class MultiIndex:
    """Immutable map ``index -> positive exponent``."""

    __slots__ = ("_items", "_size")

    def __init__(self, exponents: Mapping | Iterable = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        d: dict = {}
        for i, e in items:
            if e < 0:
                raise ValueError(f"negative exponent {e} at index {i!r}")
            if e:
                d[i] = d.get(i, 0) + e
        self._items = tuple(sorted(d.items()))
        self._size = sum(d.values())

    @classmethod
    def from_word(cls, word: Iterable) -> MultiIndex:
        """Exponent vector counting the letters of ``word``."""
        d: dict = {}
        for i in word:
            d[i] = d.get(i, 0) + 1
        return cls(d)

    @classmethod
    def unit(cls, i) -> MultiIndex:
        return cls({i: 1})

    def items(self) -> tuple:
        return self._items

    def support(self) -> tuple:
        return tuple(i for i, _ in self._items)

    def __getitem__(self, i) -> int:
        for k, e in self._items:
            if k == i:
                return e
        return 0

    def as_dict(self) -> dict:
        return dict(self._items)

    @property
    def size(self) -> int:
        return self._size

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __add__(self, other: MultiIndex) -> MultiIndex:
        d = dict(self._items)
        for i, e in other._items:
            d[i] = d.get(i, 0) + e
        return MultiIndex(d)

    def __sub__(self, other: MultiIndex) -> MultiIndex:
        d = dict(self._items)
        for i, e in other._items:
            d[i] = d.get(i, 0) - e
        return MultiIndex(d)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiIndex) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __lt__(self, other: MultiIndex) -> bool:
        return compare(self, other) < 0

    def le_componentwise(self, other: MultiIndex) -> bool:
        return all(e <= other[i] for i, e in self._items)

    def word(self) -> tuple:
        """Letters in increasing index order, repeated by exponent."""
        return tuple(i for i, e in self._items for _ in range(e))

    def __repr__(self) -> str:
        return f"MultiIndex({dict(self._items)!r})"

    def __str__(self) -> str:
        return "{" + ", ".join(f"{i}:{e}" for i, e in self._items) + "}"


def size(a: MultiIndex) -> int:
    return a.size


def compare(a: MultiIndex, b: MultiIndex) -> int:
    """-1, 0 or 1.

    Larger size wins; on equal size, the larger exponent at the smallest
    index where the two differ wins.
    """
    if a.size != b.size:
        return 1 if a.size > b.size else -1
    ia, ib = a.items(), b.items()
    for (ka, ea), (kb, eb) in zip(ia, ib):
        if ka == kb:
            if ea != eb:
                return 1 if ea > eb else -1
            continue
        # the smaller index is present in one vector only
        return 1 if ka < kb else -1
    if len(ia) != len(ib):
        # equal size with a common prefix cannot leave a tail in only one
        raise AssertionError("inconsistent sizes")
    return 0


def height(a: MultiIndex):
    if not a:
        raise ValueError("undefined height: zero multi-index")
    return a.items()[-1][0]


def height_and_hat(a: MultiIndex) -> tuple:
    """``(ht(a), a - e_ht(a))`` for a nonzero multi-index."""
    k = height(a)
    return k, a - MultiIndex.unit(k)


def pair_compare(a: tuple[MultiIndex, MultiIndex], b: tuple[MultiIndex, MultiIndex]) -> int:
    """Order on pairs (x-part, y-part): total size, then x-part, then y-part."""
    sa = a[0].size + a[1].size
    sb = b[0].size + b[1].size
    if sa != sb:
        return 1 if sa > sb else -1
    c = compare(a[0], b[0])
    if c:
        return c
    return compare(a[1], b[1])


def parse(text: str, index_type=int) -> MultiIndex:
    """Parse ``{i:e, j:f}``."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected '{{i:e, ...}}', got {text!r}")
    body = body[1:-1].strip()
    if not body:
        return MultiIndex()
    d = {}
    for part in body.split(","):
        k, _, e = part.partition(":")
        d[index_type(k.strip())] = int(e)
    return MultiIndex(d)
