import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasiwhittaker.multiindex import MultiIndex, compare, height, height_and_hat, pair_compare, parse, size

M = MultiIndex


def test_size():
    assert size(M()) == 0
    assert size(M({1: 2, 3: 1})) == 3
    assert size(M.unit(7)) == 1


def test_compare_examples():
    assert compare(M({1: 2}), M({1: 1, 2: 1})) == 1
    assert compare(M({2: 3}), M({1: 1, 2: 1})) == 1
    a = M({1: 1, 4: 2})
    assert compare(a, a) == 0


def test_height_and_hat():
    assert height_and_hat(M({1: 1, 3: 2})) == (3, M({1: 1, 3: 1}))
    assert height_and_hat(M({5: 1})) == (5, M())
    with pytest.raises(ValueError, match="undefined height"):
        height(M())


def test_tuple_indices_are_lexicographic():
    assert height(M({(1, 2): 1, (2, 1): 1})) == (2, 1)


def test_parse_and_str_round_trip():
    a = parse("{1:2, 3:1}")
    assert a == M({1: 2, 3: 1}) and parse(str(a)) == a
    assert parse("{}") == M()


def test_pair_compare_uses_total_size_first():
    assert pair_compare((M({1: 1}), M({2: 2})), (M({1: 2}), M())) == 1


indices = st.dictionaries(st.integers(0, 4), st.integers(0, 3), max_size=4).map(M)


@given(indices, indices)
def test_total_and_antisymmetric(a, b):
    assert compare(a, b) == -compare(b, a)
    assert (compare(a, b) == 0) == (a == b)


@given(indices, indices, indices)
def test_transitive(a, b, c):
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0


def _all(n_index, max_size):
    out = []
    for s in range(1, max_size + 1):
        for word in itertools.combinations_with_replacement(range(1, n_index + 1), s):
            out.append(M.from_word(word))
    return out


def test_hat_monotone_exhaustive():
    """alpha > beta implies hat(alpha) >= hat(beta), with equality exactly when
    beta = hat(alpha) + e_j for some j > ht(alpha)."""
    elems = _all(4, 5)
    for a in elems:
        ka, ha = height_and_hat(a)
        for b in elems:
            if compare(a, b) <= 0:
                continue
            _, hb = height_and_hat(b)
            assert compare(ha, hb) >= 0
            equal = compare(ha, hb) == 0
            assert equal == any(b == ha + M.unit(j) for j in range(ka + 1, 5))


@given(indices.filter(bool))
def test_hat_size(a):
    assert size(height_and_hat(a)[1]) == size(a) - 1
