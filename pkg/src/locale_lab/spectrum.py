"""Prime elements, the prime spectrum, and point-set deciders.

Points of the spectrum are identified with prime elements of the lattice;
the open set attached to an element ``a`` is ``{p prime : a ≰ p}``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import CapExceeded, InconsistencyError, NotPrime
from .lattice import FiniteLattice, big_meet, upset
from .spaces import (
    DEFAULT_MAX_POINTS,
    FiniteSpace,
    bits,
    closure,
    generate_topology,
    is_T0,
    to_mask,
)


def is_prime(L: FiniteLattice, p: int) -> bool:
    if p == L.top:
        return False
    below = L.leq[:, p]
    meet_below = below[L.meet_table]
    return bool((~meet_below | below[:, None] | below[None, :]).all())


_PRIMES: "weakref.WeakKeyDictionary[FiniteLattice, frozenset]" = weakref.WeakKeyDictionary()


def primes(L: FiniteLattice) -> frozenset:
    """All ``p != top`` with ``x ∧ y <= p`` implying ``x <= p`` or ``y <= p``."""
    found = _PRIMES.get(L)
    if found is None:
        found = _PRIMES[L] = frozenset(p for p in L.elements if is_prime(L, p))
    return found


def is_completely_prime(L: FiniteLattice, p: int) -> bool:
    """Whether ``⋀A <= p`` forces some member of ``A`` below ``p``.

    The meet of every subset avoiding ``↓p`` is above the meet of all
    elements not below ``p``, so that single meet decides the question.
    """
    if not is_prime(L, p):
        raise NotPrime(f"element {p} is not prime")
    outside = [x for x in L.elements if not L.leq[x, p]]
    return not L.leq[big_meet(L, outside), p]


def is_completely_prime_exhaustive(L: FiniteLattice, p: int, max_elements: int = 16) -> bool:
    """Literal check of complete primality over every subset of ``L``."""
    if not is_prime(L, p):
        raise NotPrime(f"element {p} is not prime")
    if L.n > max_elements:
        raise CapExceeded("completely-prime subset check", L.n, max_elements)
    for r in range(L.n + 1):
        for A in combinations(L.elements, r):
            if L.leq[big_meet(L, A), p] and not any(L.leq[a, p] for a in A):
                return False
    return True


@dataclass(frozen=True, eq=False)
class SpectrumSpace:
    """The space ``pt(L)``.

    ``carrier`` has one point per prime, in ascending order of element
    index; ``sigma_masks[a]`` is the open of element ``a`` as a carrier mask.
    """

    source: FiniteLattice
    primes: tuple
    carrier: FiniteSpace
    sigma_masks: tuple

    def to_mask(self, prime_set: Iterable[int]) -> int:
        pos = {p: i for i, p in enumerate(self.primes)}
        return to_mask(pos[p] for p in prime_set)

    def to_primes(self, mask: int) -> frozenset:
        return frozenset(self.primes[i] for i in bits(mask))

    def sigma(self, a: int) -> frozenset:
        return self.to_primes(self.sigma_masks[a])


def spectrum_space(L: FiniteLattice) -> SpectrumSpace:
    ps = tuple(sorted(primes(L)))
    sig = tuple(
        to_mask(i for i, p in enumerate(ps) if not L.leq[a, p]) for a in L.elements
    )
    carrier = FiniteSpace(tuple(str(p) for p in ps), frozenset(sig))
    return SpectrumSpace(L, ps, carrier, sig)


def is_spatial(L: FiniteLattice) -> bool:
    """Every element is the meet of the primes above it."""
    ps = primes(L)
    return all(big_meet(L, ps & upset(L, a)) == a for a in L.elements)


def _point_closures(X: FiniteSpace) -> list[int]:
    return [closure(X, 1 << i) for i in range(X.size)]


def is_irreducible(X: FiniteSpace, closed_mask: int) -> bool:
    """Nonempty closed set that is not a union of two proper closed subsets."""
    if not closed_mask:
        return False
    inside = [C for C in X.closed_sets() if C & ~closed_mask == 0 and C != closed_mask]
    for i, A in enumerate(inside):
        for B in inside[i:]:
            if A | B == closed_mask:
                return False
    return True


def is_sober(X: FiniteSpace) -> bool:
    """Each irreducible closed set is the closure of exactly one point."""
    pc = _point_closures(X)
    for C in X.closed_sets():
        if is_irreducible(X, C):
            generic = sum(1 for i in range(X.size) if pc[i] == C)
            if generic != 1:
                return False
    return True


def is_TD_space(X: FiniteSpace) -> bool:
    """Every point has an open neighbourhood that stays open without it."""
    for i in range(X.size):
        x = 1 << i
        if not any(U & x and (U & ~x) in X.opens for U in X.opens):
            return False
    return True


def minimal_neighbourhoods(X: FiniteSpace) -> list[int]:
    out = []
    for i in range(X.size):
        n = X.full
        for U in X.opens:
            if U >> i & 1:
                n &= U
        out.append(n)
    return out


def isolated_points(X: FiniteSpace, mask: int) -> int:
    """Mask of points of the subspace ``mask`` that are isolated in it."""
    out = 0
    for i in bits(mask):
        if any(U & mask == 1 << i for U in X.opens):
            out |= 1 << i
    return out


def is_discrete(X: FiniteSpace) -> bool:
    return all(1 << i in X.opens for i in range(X.size))


def is_scattered_space(X: FiniteSpace, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """Every nonempty subspace has an isolated point.

    All ``2^n - 1`` subspaces are examined. The result is checked against
    the finite-space fact that scattered is the same as T0.
    """
    n = X.size
    if n > max_points:
        raise CapExceeded("scattered-space subsets", n, max_points)
    nbhd = minimal_neighbourhoods(X)
    ys = np.arange(1, 1 << n, dtype=np.int64)
    has_isolated = np.zeros(ys.shape, dtype=bool)
    for i in range(n):
        bit = 1 << i
        has_isolated |= ((ys & bit) != 0) & ((ys & nbhd[i]) == bit)
    result = bool(has_isolated.all())
    if result != is_T0(X):
        raise InconsistencyError("exhaustive scatteredness disagrees with T0 test")
    return result


def skula_space(X: FiniteSpace) -> FiniteSpace:
    """Same points, topology generated by the opens and their complements."""
    subbase = set(X.opens) | {X.full & ~U for U in X.opens}
    return FiniteSpace(X.points, generate_topology(X.size, subbase))
