from itertools import permutations
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bubblestar.permcore import (
    Permutation,
    PermutationError,
    Transposition,
    compose,
    format_entries,
    parity,
    parity_bit,
    rank,
    unrank,
)

from oracles import inversions


@st.composite
def perm_and_transposition(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    entries = draw(st.permutations(list(range(1, n + 1))))
    i = draw(st.integers(1, n - 1))
    j = draw(st.integers(i + 1, n))
    return Permutation(tuple(entries)), Transposition(i, j)


def test_compose_swaps_positions():
    assert compose(Permutation.parse("123"), Transposition(2, 3)) == Permutation.parse("132")
    assert compose(Permutation.parse("4321"), Transposition(3, 4)) == Permutation.parse("4312")
    # positions, not values: swapping positions 1,2 of 312 gives 132, not 321
    assert str(compose(Permutation.parse("312"), Transposition(1, 2))) == "132"


def test_compose_out_of_range():
    with pytest.raises(PermutationError):
        compose(Permutation.parse("123"), Transposition(2, 4))
    with pytest.raises(PermutationError):
        Transposition(2, 2)
    with pytest.raises(PermutationError):
        Transposition(0, 2)


@given(perm_and_transposition())
def test_compose_involution_and_bijection(pt):
    p, t = pt
    q = compose(p, t)
    assert compose(q, t) == p
    assert sorted(q.entries) == list(range(1, p.n + 1))
    changed = [k + 1 for k in range(p.n) if p.entries[k] != q.entries[k]]
    assert changed == [t.i, t.j]


def test_parity_examples():
    assert parity(Permutation.identity(6)) == "even"
    assert parity(Permutation.parse("213")) == "odd"
    assert inversions((4, 3, 2, 1)) == 6
    assert parity(Permutation.parse("4321")) == "even"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_parity_flips_under_every_transposition(n):
    ts = [Transposition(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for entries in permutations(range(1, n + 1)):
        p = Permutation(entries)
        assert parity_bit(entries) == inversions(entries) % 2
        for t in ts:
            assert parity(compose(p, t)) != parity(p)


def test_rank_extremes():
    assert rank(Permutation.identity(5)) == 0
    assert unrank(factorial(5) - 1, 5) == Permutation.parse("54321")
    assert [rank(unrank(r, 4)) for r in range(24)] == list(range(24))


@pytest.mark.parametrize("n", range(1, 8))
def test_rank_is_lexicographic_bijection(n):
    for r, entries in enumerate(permutations(range(1, n + 1))):
        assert rank(Permutation(entries)) == r
        assert unrank(r, n).entries == entries


def test_unrank_out_of_range():
    with pytest.raises(PermutationError):
        unrank(24, 4)
    with pytest.raises(PermutationError):
        unrank(-1, 4)


def test_text_format_round_trip():
    assert str(Permutation.parse("4321")) == "4321"
    big = Permutation(tuple(range(10, 0, -1)))
    assert str(big) == "10 9 8 7 6 5 4 3 2 1"
    assert Permutation.parse(str(big)) == big
    assert format_entries((1, 2)) == "12"
    with pytest.raises(PermutationError):
        Permutation.parse("1224")
    with pytest.raises(PermutationError):
        Permutation.parse("")


@given(st.integers(1, 12).flatmap(lambda n: st.permutations(list(range(1, n + 1)))))
def test_text_round_trip_property(entries):
    p = Permutation(tuple(entries))
    assert Permutation.parse(str(p)) == p
