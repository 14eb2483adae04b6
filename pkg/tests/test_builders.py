import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locale_lab.errors import CapExceeded, NotAPartialOrder, NotATopology
from locale_lab.lattice import is_boolean
from locale_lab.spaces import (
    FiniteSpace,
    alexandroff_space,
    closure,
    discrete,
    frame_from_poset_upsets,
    frame_from_space,
    indiscrete,
    is_T0,
    is_topology,
    make_poset,
    poset_from_matrix,
    random_space,
    sierpinski,
    subspace,
)
from locale_lab.spectrum import spectrum_space
from oracles import two_chain_poset


def is_chain(L):
    return bool((L.leq | L.leq.T).all())


def test_sierpinski_frame_is_three_chain():
    L = frame_from_space(sierpinski())
    assert L.n == 3 and is_chain(L)
    assert [set(lab) for lab in L.labels] == [set(), {"y"}, {"x", "y"}]


def test_one_point_and_discrete():
    L = frame_from_space(discrete(1))
    assert L.n == 2 and is_chain(L)
    B = frame_from_space(discrete(2))
    assert B.n == 4 and is_boolean(B)


def test_labels_biject_with_opens():
    X = random_space(4, 11)
    L = frame_from_space(X)
    assert {X.names(U) for U in X.opens} == set(L.labels)
    for i in L.elements:
        for j in L.elements:
            assert L.meet(i, j) == L.labels.index(L.labels[i] & L.labels[j])
            assert L.join(i, j) == L.labels.index(L.labels[i] | L.labels[j])


@pytest.mark.parametrize(
    "opens",
    [
        [["a", "b"]],  # no empty set
        [[], ["a"]],  # no whole space
        [[], ["a"], ["b"], ["a", "b", "c"]],  # a ∪ b missing
        [[], ["a", "b"], ["b", "c"], ["a", "b", "c"]],  # b missing
    ],
)
def test_not_a_topology(opens):
    X = FiniteSpace.from_sets(["a", "b", "c"], opens)
    assert not is_topology(X)
    with pytest.raises(NotATopology):
        frame_from_space(X)


def test_upsets_of_antichain_and_chain():
    anti = make_poset(["p", "q"])
    assert is_boolean(frame_from_poset_upsets(anti))
    L = frame_from_poset_upsets(two_chain_poset())
    assert is_chain(L)
    assert [set(lab) for lab in L.labels] == [set(), {"q"}, {"p", "q"}]


def test_empty_poset_gives_one_element_frame():
    L = frame_from_poset_upsets(make_poset([]))
    assert L.n == 1


def test_poset_cycle_rejected():
    with pytest.raises(NotAPartialOrder):
        make_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_poset_from_matrix_rejects_non_transitive():
    with pytest.raises(NotAPartialOrder):
        poset_from_matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])


def test_random_space_examples():
    X = random_space(1, 123, 0.9)
    assert X.size == 1 and X.opens == {0, 1}
    Y = random_space(4, 7, 0.5)
    assert is_topology(Y)
    assert random_space(4, 7, 0.5) == Y
    with pytest.raises(CapExceeded):
        random_space(13, 0)
    with pytest.raises(ValueError):
        random_space(3, 0, 1.5)
    with pytest.raises(ValueError):
        random_space(0, 0)


def test_indiscrete_and_subspace_and_closure():
    X = indiscrete(3)
    assert not is_T0(X)
    assert closure(X, 0b001) == 0b111
    S = subspace(sierpinski(), 0b10)
    assert S.points == ("y",) and S.opens == {0, 1}


posets = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: (n, bits)
    )
)


@settings(max_examples=50, deadline=None)
@given(posets)
def test_upsets_equal_alexandroff_opens(data):
    n, flat = data
    rel = np.array(flat, dtype=bool).reshape(n, n)
    # keep strictly upper-triangular pairs: always acyclic
    pairs = [(str(i), str(j)) for i in range(n) for j in range(n) if i < j and rel[i, j]]
    P = make_poset([str(i) for i in range(n)], pairs)
    A = frame_from_poset_upsets(P)
    B = frame_from_space(alexandroff_space(P))
    assert A.labels == B.labels
    assert (A.leq == B.leq).all()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_round_trip_spectrum_of_T0_space(n, seed):
    X = random_space(n, seed)
    if not is_T0(X):
        return
    L = frame_from_space(X)
    spec = spectrum_space(L)
    # the prime attached to x is the largest open missing x
    prime_of = {}
    for i in range(X.size):
        U = X.full & ~closure(X, 1 << i)
        prime_of[i] = L.labels.index(X.names(U))
    assert sorted(prime_of.values()) == list(spec.primes)
    # the bijection carries the opens of X onto the opens of pt(L)
    for a in L.elements:
        U = {i for i in range(X.size) if X.points[i] in L.labels[a]}
        assert spec.sigma(a) == {prime_of[i] for i in U}
