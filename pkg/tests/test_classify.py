from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from locale_lab.classify import (
    TheoremReport,
    absolutely_essential_primes,
    coframe_proposition,
    essential_primes,
    is_covered,
    is_weakly_covered,
    prime_dossier,
    run_all_suites,
    theorem_scattered,
    theorem_TD,
    theorem_totally_spatial,
)
from locale_lab.errors import NotPrime
from locale_lab.lattice import big_meet, chain, coatoms, is_boolean, powerset_lattice
from locale_lab.spaces import frame_from_poset_upsets, frame_from_space, random_space
from locale_lab.spectrum import isolated_points, primes, spectrum_space
from oracles import BA, BB, B0, BOT, M, TOP, two_chain_poset

frames = st.builds(
    lambda n, seed: frame_from_space(random_space(n, seed)),
    st.integers(1, 4),
    st.integers(0, 10_000),
)


def _brute_weakly_covered(L, p):
    ps = sorted(primes(L))
    others = [q for q in ps if q != p]
    return not any(
        big_meet(L, P) == p for r in range(len(others) + 1) for P in combinations(others, r)
    )


def _brute_covered(L, p):
    others = [x for x in L.elements if x != p]
    return not any(
        big_meet(L, A) == p for r in range(len(others) + 1) for A in combinations(others, r)
    )


def test_weakly_covered_examples():
    L = chain(3)
    assert is_weakly_covered(L, BOT)
    assert is_weakly_covered(L, M)  # nothing prime strictly above
    assert is_weakly_covered(powerset_lattice(2), BA)
    with pytest.raises(NotPrime):
        is_weakly_covered(L, TOP)


def test_covered_examples():
    L = chain(3)
    assert is_covered(L, BOT)
    for p in coatoms(L) & primes(L):
        assert is_covered(L, p)
    with pytest.raises(NotPrime):
        is_covered(powerset_lattice(2), B0)


@settings(max_examples=30, deadline=None)
@given(frames)
def test_coverage_matches_brute_force(L):
    for p in primes(L):
        wc = is_weakly_covered(L, p)
        assert wc == _brute_weakly_covered(L, p)
        if L.n <= 12:
            assert is_covered(L, p) == _brute_covered(L, p)
        # spatial frames: covered iff weakly covered
        assert is_covered(L, p) == wc


def test_essential_examples():
    L = chain(3)
    assert essential_primes(L, BOT) == {BOT}
    assert essential_primes(L, TOP) == frozenset()
    B = powerset_lattice(2)
    assert essential_primes(B, B0) == {BA, BB}


def test_absolutely_essential_examples():
    L = chain(3)
    assert absolutely_essential_primes(L, BOT) == {BOT}
    assert absolutely_essential_primes(L, TOP) == frozenset()
    assert absolutely_essential_primes(L, BOT, exhaustive=True) == {BOT}


@settings(max_examples=30, deadline=None)
@given(frames)
def test_essential_facts(L):
    ps = sorted(primes(L))
    for a in L.elements:
        ess = essential_primes(L, a)
        assert absolutely_essential_primes(L, a) == ess
        assert big_meet(L, ess) == a
        # members of Ess(a) are pairwise incomparable
        for p in ess:
            for q in ess:
                assert p == q or not L.le(p, q)
        # x -> a is the meet of the primes above a that are not above x
        above = [p for p in ps if L.le(a, p)]
        for x in L.elements:
            assert L.heyting(x, a) == big_meet(L, [p for p in above if not L.le(x, p)])


@settings(max_examples=30, deadline=None)
@given(frames)
def test_isolated_iff_essential_in_meet(L):
    spec = spectrum_space(L)
    ps = list(spec.primes)
    for r in range(1, len(ps) + 1):
        for P in combinations(ps, r):
            iso = spec.to_primes(isolated_points(spec.carrier, spec.to_mask(P)))
            for p in P:
                rest = big_meet(L, [q for q in P if q != p])
                assert (p in iso) == (not L.le(rest, p))


def test_boolean_primes_are_coatoms():
    for k in range(4):
        B = powerset_lattice(k)
        assert is_boolean(B)
        assert primes(B) == coatoms(B)


def test_prime_dossier_chain():
    d = prime_dossier(chain(3), BOT)
    assert d.weakly_covered and d.covered and d.completely_prime
    assert d.isolated_in_skula and d.isolated_in_upset_spectrum


@pytest.mark.parametrize(
    "L", [chain(1), chain(3), powerset_lattice(2)], ids=["one", "chain3", "bool2"]
)
def test_suites_on_examples(L):
    td, total, scattered, cof = run_all_suites(L)
    assert len(td.verdicts) == 6
    assert len(total.verdicts) == 8
    assert len(scattered.verdicts) == 8
    assert len(cof.verdicts) == 3
    for r in (td, total, scattered, cof):
        assert r.agreement and r.all_true, r.to_dict()


def test_coframe_proposition_on_upsets():
    r = coframe_proposition(frame_from_poset_upsets(two_chain_poset()))
    assert r.tag == "COFRAME_PROP" and r.all_true and r.agreement


@settings(max_examples=20, deadline=None)
@given(frames)
def test_suites_on_random_frames(L):
    for fn in (theorem_TD, theorem_totally_spatial, theorem_scattered):
        r = fn(L)
        assert r.agreement and r.all_true, r.to_dict()


def test_report_agreement_semantics():
    r = TheoremReport("X", {"a": True, "b": True})
    assert r.agreement and r.all_true
    r.verdicts["c"] = False
    assert not r.agreement and not r.all_true
    assert TheoremReport("X", {"a": False, "b": False}).agreement
    assert TheoremReport("X").to_dict()["agreement"]
