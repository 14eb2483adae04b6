from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locale_lab.errors import CapExceeded, NotALattice, NotAPartialOrder, NotDistributive
from locale_lab.lattice import (
    big_join,
    big_meet,
    build_lattice,
    chain,
    complement,
    dual,
    heyting,
    is_boolean,
    powerset_lattice,
    upset,
)
from locale_lab.spaces import frame_from_space, random_space
from oracles import (
    B0,
    B1,
    BA,
    BB,
    BOT,
    M,
    TOP,
    brute_heyting,
    brute_join,
    brute_meet,
    m3_leq,
    n5_leq,
)


def test_three_chain_tables():
    L = chain(3)
    for a in range(3):
        for b in range(3):
            assert L.meet(a, b) == min(a, b)
            assert L.join(a, b) == max(a, b)
    assert heyting(L, M, BOT) == BOT
    assert heyting(L, BOT, M) == TOP


def test_three_chain_adjunction_all_27_triples():
    L = chain(3)
    count = 0
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert L.le(L.meet(c, a), b) == L.le(c, L.heyting(a, b))
                count += 1
    assert count == 27


def test_one_element_frame():
    L = build_lattice([[True]])
    assert L.n == 1 and L.bottom == L.top == 0
    assert L.heyting(0, 0) == 0


def test_m3_is_not_distributive_with_real_witness():
    with pytest.raises(NotDistributive) as info:
        build_lattice(m3_leq())
    a, b, c = info.value.triple
    L_meet = lambda x, y: brute_meet(m3_leq(), x, y)
    L_join = lambda x, y: brute_join(m3_leq(), x, y)
    assert L_meet(a, L_join(b, c)) != L_join(L_meet(a, b), L_meet(a, c))


def test_n5_is_not_distributive():
    with pytest.raises(NotDistributive):
        build_lattice(n5_leq())


def test_two_maximal_elements_is_not_a_lattice():
    leq = np.array([[1, 1, 1], [0, 1, 0], [0, 0, 1]], dtype=bool)
    with pytest.raises(NotALattice):
        build_lattice(leq)


def test_empty_order_is_not_a_lattice():
    with pytest.raises(NotALattice):
        build_lattice(np.zeros((0, 0), dtype=bool))


@pytest.mark.parametrize(
    "leq",
    [
        [[1, 1], [1, 1]],  # antisymmetry
        [[0, 1], [0, 1]],  # reflexivity
        [[1, 1, 0], [0, 1, 1], [0, 0, 1]],  # transitivity
        [[1, 0, 1]],  # not square
    ],
)
def test_not_a_partial_order(leq):
    with pytest.raises(NotAPartialOrder):
        build_lattice(np.array(leq, dtype=bool))


def test_size_cap():
    with pytest.raises(CapExceeded):
        build_lattice(chain(6).leq, max_elements=5)


def test_heyting_examples():
    L = powerset_lattice(2)
    assert heyting(L, BA, B0) == BB
    for a in L.elements:
        assert heyting(L, a, a) == L.top


def test_big_meet_and_join():
    L = powerset_lattice(2)
    assert big_meet(L, []) == L.top
    assert big_join(L, []) == L.bottom
    assert big_meet(L, [BA, BB]) == B0
    assert big_join(chain(3), [BOT, M]) == M


def test_upset_examples():
    L = powerset_lattice(2)
    assert upset(L, L.top) == {L.top}
    assert upset(L, L.bottom) == set(L.elements)
    assert upset(L, BA) == {BA, B1}


def test_complements_in_boolean_and_chain():
    assert is_boolean(powerset_lattice(3))
    assert not is_boolean(chain(3))
    assert complement(chain(3), M) is None


def test_dual_of_finite_frame_is_a_frame():
    L = frame_from_space(random_space(4, 3))
    D = dual(L)
    assert D.top == L.bottom and D.bottom == L.top
    assert (D.meet_table == L.join_table).all()


def test_tables_are_read_only():
    L = chain(3)
    with pytest.raises(ValueError):
        L.meet_table[0, 0] = 2


spaces = st.builds(
    lambda n, seed: frame_from_space(random_space(n, seed)),
    st.integers(1, 4),
    st.integers(0, 10_000),
)


@settings(max_examples=40, deadline=None)
@given(spaces)
def test_tables_match_brute_force(L):
    leq = L.leq.tolist()
    for a in L.elements:
        for b in L.elements:
            assert L.meet(a, b) == brute_meet(leq, a, b)
            assert L.join(a, b) == brute_join(leq, a, b)
            assert L.heyting(a, b) == brute_heyting(leq, a, b)


@settings(max_examples=40, deadline=None)
@given(spaces)
def test_distributive_and_adjunction(L):
    m, j, h = L.meet_table, L.join_table, L.heyting_table
    a = np.arange(L.n)[:, None, None]
    b = np.arange(L.n)[None, :, None]
    c = np.arange(L.n)[None, None, :]
    assert (m[a, j[b, c]] == j[m[a, b], m[a, c]]).all()
    # c ∧ a <= b  iff  c <= a -> b, indexed [a, b, c]
    assert (L.leq[m[c, a], b] == L.leq[c, h[a, b]]).all()


@settings(max_examples=30, deadline=None)
@given(spaces)
def test_antitone_galois_law(L):
    # (⋁Y) -> x equals ⋀{y -> x : y in Y} over every subset Y
    elems = list(L.elements)
    subsets = [Y for r in range(min(L.n, 4) + 1) for Y in combinations(elems, r)]
    for x in elems:
        for Y in subsets:
            assert L.heyting(big_join(L, Y), x) == big_meet(L, [L.heyting(y, x) for y in Y])


@settings(max_examples=40, deadline=None)
@given(spaces)
def test_double_and_triple_negation(L):
    for x in L.elements:
        for y in L.elements:
            yx = L.heyting(y, x)
            assert L.le(y, L.heyting(yx, x))
            assert yx == L.heyting(L.heyting(yx, x), x)
