"""Finite spaces and posets, and the frames built from them.

A :class:`FiniteSpace` keeps its open sets as bitmasks over point
positions: bit ``i`` of an open is set iff ``points[i]`` belongs to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, NotAPartialOrder, NotATopology
from .lattice import DEFAULT_MAX_ELEMENTS, FiniteLattice, build_lattice

DEFAULT_MAX_POINTS = 12


def bits(mask: int) -> list[int]:
    """Positions of the set bits of ``mask``, ascending."""
    mask = int(mask)
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(positions: Iterable[int]) -> int:
    m = 0
    for i in positions:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple
    opens: frozenset

    @classmethod
    def from_sets(cls, points: Sequence[str], opens: Iterable[Iterable[str]]) -> "FiniteSpace":
        index = {p: i for i, p in enumerate(points)}
        masks = set()
        for U in opens:
            masks.add(to_mask(index[p] for p in U))
        return cls(tuple(points), frozenset(masks))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def names(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in bits(mask))

    def open_sets(self) -> list[frozenset]:
        return [self.names(U) for U in sorted(self.opens, key=lambda m: (m.bit_count(), m))]

    def closed_sets(self) -> frozenset:
        return frozenset(self.full & ~U for U in self.opens)


def check_topology(X: FiniteSpace) -> None:
    """Raise :class:`NotATopology` with a witness if ``X`` is not a topology."""
    if 0 not in X.opens:
        raise NotATopology("the empty set is not open", witness=frozenset())
    if X.full not in X.opens:
        raise NotATopology("the whole space is not open", witness=X.names(X.full))
    for U in X.opens:
        if U & ~X.full:
            raise NotATopology("an open set mentions an unknown point")
    opens = sorted(X.opens)
    for i, U in enumerate(opens):
        for V in opens[i + 1:]:
            if U & V not in X.opens:
                raise NotATopology(
                    "not closed under intersection", witness=(X.names(U), X.names(V))
                )
            if U | V not in X.opens:
                raise NotATopology(
                    "not closed under union", witness=(X.names(U), X.names(V))
                )


def is_topology(X: FiniteSpace) -> bool:
    try:
        check_topology(X)
    except NotATopology:
        return False
    return True


def _close(family: set, op) -> set:
    result = set(family)
    work = list(result)
    while work:
        a = work.pop()
        for b in list(result):
            c = op(a, b)
            if c not in result:
                result.add(c)
                work.append(c)
    return result


def generate_topology(num_points: int, subbase: Iterable[int]) -> frozenset:
    """Open-set masks of the topology generated by ``subbase``."""
    full = (1 << num_points) - 1
    base = _close(set(subbase) | {full}, lambda a, b: a & b)
    return frozenset(_close(base | {0}, lambda a, b: a | b))


def subspace(X: FiniteSpace, mask: int) -> FiniteSpace:
    """Subspace on the points selected by ``mask``, in the original order."""
    keep = bits(mask)
    opens = set()
    for U in X.opens:
        opens.add(to_mask(k for k, i in enumerate(keep) if U >> i & 1))
    return FiniteSpace(tuple(X.points[i] for i in keep), frozenset(opens))


def closure(X: FiniteSpace, mask: int) -> int:
    """Smallest closed set containing ``mask``."""
    c = X.full
    for U in X.opens:
        if not U & mask:
            c &= ~U
    return c


def is_T0(X: FiniteSpace) -> bool:
    seen = set()
    for i in range(X.size):
        sig = frozenset(U for U in X.opens if U >> i & 1)
        if sig in seen:
            return False
        seen.add(sig)
    return True


def frame_from_space(X: FiniteSpace, max_elements: int = DEFAULT_MAX_ELEMENTS) -> FiniteLattice:
    """Frame of opens of ``X`` ordered by inclusion.

    Element ``i`` is labeled with the open set (a frozenset of point names);
    the empty set is element 0 and the whole space the last element.
    """
    check_topology(X)
    if len(X.opens) > max_elements:
        raise CapExceeded("lattice elements", len(X.opens), max_elements)
    opens = sorted(X.opens, key=lambda m: (m.bit_count(), m))
    masks = np.array(opens, dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    return build_lattice(leq, labels=[X.names(U) for U in opens], max_elements=max_elements)


@dataclass(frozen=True, eq=False)
class Poset:
    points: tuple
    leq: np.ndarray

    @property
    def size(self) -> int:
        return len(self.points)


def make_poset(points: Sequence[str], pairs: Iterable[tuple[str, str]] = ()) -> Poset:
    """Poset generated by ``pairs`` (reflexive-transitive closure taken)."""
    index = {p: i for i, p in enumerate(points)}
    n = len(points)
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        leq[index[a], index[b]] = True
    # Warshall closure
    for k in range(n):
        leq |= leq[:, k][:, None] & leq[k][None, :]
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise NotAPartialOrder(f"cycle through {points[i]!r} and {points[j]!r}")
    leq.flags.writeable = False
    return Poset(tuple(points), leq)


def poset_from_matrix(leq, points: Sequence[str] | None = None) -> Poset:
    leq = np.array(leq, dtype=bool)
    if leq.size == 0:
        leq = leq.reshape(0, 0)
    n = leq.shape[0]
    if points is None:
        points = [str(i) for i in range(n)]
    pairs = [(points[i], points[j]) for i, j in np.argwhere(leq)]
    P = make_poset(points, pairs)
    if not (P.leq == leq).all():
        raise NotAPartialOrder("relation is not reflexive and transitive")
    return P


def alexandroff_space(P: Poset) -> FiniteSpace:
    """Space on the points of ``P`` whose opens are the up-sets."""
    principal = [to_mask(np.flatnonzero(P.leq[i])) for i in range(P.size)]
    opens = _close(set(principal) | {0, (1 << P.size) - 1}, lambda a, b: a | b)
    return FiniteSpace(P.points, frozenset(opens))


def frame_from_poset_upsets(
    P: Poset, max_points: int = 20, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> FiniteLattice:
    """Frame of up-closed subsets of ``P`` under inclusion.

    Up-sets are found by filtering all subsets, independently of
    :func:`alexandroff_space`.
    """
    n = P.size
    if n > max_points:
        raise CapExceeded("poset points", n, max_points)
    up = [to_mask(np.flatnonzero(P.leq[i])) for i in range(n)]
    ups = [S for S in range(1 << n) if all(up[i] & ~S == 0 for i in bits(S))]
    if len(ups) > max_elements:
        raise CapExceeded("lattice elements", len(ups), max_elements)
    ups.sort(key=lambda m: (m.bit_count(), m))
    masks = np.array(ups, dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    labels = [frozenset(P.points[i] for i in bits(S)) for S in ups]
    return build_lattice(leq, labels=labels, max_elements=max_elements)


def random_space(
    num_points: int, seed: int, density: float = 0.5, max_points: int = DEFAULT_MAX_POINTS
) -> FiniteSpace:
    """Topology generated by ``num_points`` random subsets.

    Each point joins each subbase set independently with probability
    ``density``. Deterministic in ``(num_points, seed, density)``.
    """
    if num_points < 1:
        raise ValueError("num_points must be positive")
    if num_points > max_points:
        raise CapExceeded("random space points", num_points, max_points)
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    draws = rng.random((num_points, num_points)) < density
    subbase = [to_mask(np.flatnonzero(row)) for row in draws]
    points = tuple(f"x{i}" for i in range(num_points))
    return FiniteSpace(points, generate_topology(num_points, subbase))


# common small spaces

def sierpinski() -> FiniteSpace:
    return FiniteSpace.from_sets(["x", "y"], [[], ["y"], ["x", "y"]])


def indiscrete(n: int) -> FiniteSpace:
    return FiniteSpace(tuple(f"x{i}" for i in range(n)), frozenset({0, (1 << n) - 1}))


def discrete(n: int) -> FiniteSpace:
    return FiniteSpace(tuple(f"x{i}" for i in range(n)), frozenset(range(1 << n)))
