"""Sublocales of a finite frame as concrete subsets.

A sublocale is stored as a bitmask over element indices. The module
provides the open, closed and Boolean sublocales, joins and meets in the
coframe of sublocales, and two independent enumerators of that coframe.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InconsistencyError, MixedSources
from .lattice import FiniteLattice, big_meet, build_lattice
from .spaces import bits, to_mask
from .spectrum import primes

DEFAULT_MAX_ASSEMBLY = 18


@dataclass(frozen=True)
class Sublocale:
    source: FiniteLattice
    mask: int

    @property
    def members(self) -> frozenset:
        return frozenset(bits(self.mask))

    def __contains__(self, a: int) -> bool:
        return bool(self.mask >> a & 1)

    def __iter__(self):
        return iter(bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __le__(self, other: "Sublocale") -> bool:
        _same_source([self, other])
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"Sublocale({sorted(self.members)})"

    def sort_key(self):
        return (self.mask.bit_count(), self.mask)


class _Tables:
    """Per-lattice masks used by the sublocale code."""

    def __init__(self, L: FiniteLattice):
        n = L.n
        # boolean[x] = {y -> x : y in L}, the Boolean sublocale of x
        self.boolean = [to_mask(int(v) for v in L.heyting_table[:, x]) for x in range(n)]
        self.open = [to_mask(int(v) for v in L.heyting_table[a, :]) for a in range(n)]
        self.meet = L.meet_table.tolist()
        self.primes_mask = to_mask(primes(L))


_TABLES: "weakref.WeakKeyDictionary[FiniteLattice, _Tables]" = weakref.WeakKeyDictionary()


def _tables(L: FiniteLattice) -> _Tables:
    t = _TABLES.get(L)
    if t is None:
        t = _TABLES[L] = _Tables(L)
    return t


def _same_source(subs: Sequence[Sublocale], L: FiniteLattice | None = None) -> None:
    for S in subs:
        if L is None:
            L = S.source
        elif S.source is not L:
            raise MixedSources("sublocales belong to different lattices")


def _is_sublocale_mask(L: FiniteLattice, mask: int) -> bool:
    if not mask >> L.top & 1:
        return False
    t = _tables(L)
    members = bits(mask)
    for s in members:
        if t.boolean[s] & ~mask:
            return False
    meet = t.meet
    for i, a in enumerate(members):
        row = meet[a]
        for b in members[i + 1:]:
            if not mask >> row[b] & 1:
                return False
    return True


def is_sublocale(L: FiniteLattice, members: Iterable[int]) -> bool:
    """Closed under all meets (top included) and under ``x -> s``."""
    return _is_sublocale_mask(L, to_mask(members))


def make_sublocale(L: FiniteLattice, members: Iterable[int]) -> Sublocale:
    mask = to_mask(members)
    if not _is_sublocale_mask(L, mask):
        raise ValueError(f"{sorted(bits(mask))} is not a sublocale")
    return Sublocale(L, mask)


def meet_closure_mask(L: FiniteLattice, mask: int) -> int:
    """Mask of all meets of finite subsets of ``mask``, top included."""
    meet = _tables(L).meet
    mask |= 1 << L.top
    members = bits(mask)
    frontier = members
    while frontier:
        new = []
        for a in frontier:
            row = meet[a]
            for b in members:
                m = row[b]
                if not mask >> m & 1:
                    mask |= 1 << m
                    new.append(m)
        members = members + new
        frontier = new
    return mask


def closed_sublocale(L: FiniteLattice, a: int) -> Sublocale:
    return Sublocale(L, L.upset_masks[a])


def open_sublocale(L: FiniteLattice, a: int) -> Sublocale:
    return Sublocale(L, _tables(L).open[a])


def boolean_sublocale(L: FiniteLattice, x: int) -> Sublocale:
    """Smallest sublocale containing ``x``: ``{y -> x : y in L}``."""
    return Sublocale(L, _tables(L).boolean[x])


def whole(L: FiniteLattice) -> Sublocale:
    return Sublocale(L, (1 << L.n) - 1)


def void(L: FiniteLattice) -> Sublocale:
    return Sublocale(L, 1 << L.top)


def sublocale_join(L: FiniteLattice, subs: Sequence[Sublocale]) -> Sublocale:
    _same_source(subs, L)
    union = 0
    for S in subs:
        union |= S.mask
    return Sublocale(L, meet_closure_mask(L, union))


def sublocale_meet(L: FiniteLattice, subs: Sequence[Sublocale]) -> Sublocale:
    _same_source(subs, L)
    mask = (1 << L.n) - 1
    for S in subs:
        mask &= S.mask
    return Sublocale(L, mask)


def induced_nucleus(S: Sublocale, x: int) -> int:
    """Least member of ``S`` above ``x``."""
    L = S.source
    return big_meet(L, (s for s in S if L.leq[x, s]))


def points_of_sublocale(S: Sublocale) -> frozenset:
    """Primes of ``L`` lying in ``S``.

    Also computed as the primes of ``S`` in its own order (meets in ``S``
    are meets in ``L``); the two must agree.
    """
    L = S.source
    via_ambient = frozenset(bits(S.mask & _tables(L).primes_mask))
    m = np.array(bits(S.mask))
    below = L.leq[np.ix_(m, m)]  # below[x, p]: x <= p, both in S
    meets = L.meet_table[np.ix_(m, m)]
    # ok[x, y, p]: x ∧ y <= p forces x <= p or y <= p
    ok = ~L.leq[meets[:, :, None], m[None, None, :]] | below[:, None, :] | below[None, :, :]
    internal = {int(p) for j, p in enumerate(m) if p != L.top and ok[:, :, j].all()}
    if via_ambient != internal:
        raise InconsistencyError(f"points of {S!r}: {sorted(via_ambient)} vs {sorted(internal)}")
    return via_ambient


def is_spatial_sublocale(S: Sublocale) -> bool:
    """Every member is the meet of the points of ``S`` above it."""
    L = S.source
    pts = points_of_sublocale(S)
    return all(big_meet(L, (p for p in pts if L.leq[s, p])) == s for s in S)


def two_element_sublocales(L: FiniteLattice) -> list[Sublocale]:
    """All sublocales ``{top, p}``; these are exactly the ``𝔟(p)``, p prime."""
    found = [
        Sublocale(L, (1 << L.top) | (1 << p))
        for p in L.elements
        if p != L.top and _is_sublocale_mask(L, (1 << L.top) | (1 << p))
    ]
    expected = [boolean_sublocale(L, p) for p in sorted(primes(L))]
    if found != expected:
        raise InconsistencyError("two-element sublocales differ from b(p) for primes p")
    return found


def _enumerate_filter(L: FiniteLattice) -> list[int]:
    n = L.n
    t = _tables(L)
    masks = np.arange(1 << n, dtype=np.int64)
    masks = masks[(masks >> L.top) & 1 == 1]
    # descending rank: big elements have small Boolean sublocales and fail fast
    order = sorted(L.elements, key=lambda a: -int(L.leq[:, a].sum()))
    for s in order:
        req = t.boolean[s]
        keep = ((masks >> s) & 1 == 0) | ((masks & req) == req)
        masks = masks[keep]
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            m = t.meet[a][b]
            if m == a or m == b:
                continue
            both = (1 << a) | (1 << b)
            keep = ((masks & both) != both) | ((masks >> m) & 1 == 1)
            masks = masks[keep]
    return [int(m) for m in masks]


def _enumerate_closure(L: FiniteLattice, limit: int | None = None) -> list[int]:
    # every sublocale is the join of the Boolean sublocales of its members
    t = _tables(L)
    meet = t.meet
    gens = sorted({b for b in t.boolean})
    start = 1 << L.top
    seen = {start}
    work = [start]
    while work:
        S = work.pop()
        s_members = bits(S)
        for g in gens:
            if g & ~S == 0:
                continue
            J = 0
            for x in bits(g):
                row = meet[x]
                for s in s_members:
                    J |= 1 << row[s]
            if J not in seen:
                seen.add(J)
                work.append(J)
                if limit is not None and len(seen) > limit:
                    raise CapExceeded("sublocale count", len(seen), limit)
    return list(seen)


def inclusion_matrix(subs: Sequence[Sublocale]) -> np.ndarray:
    """``out[i, j]`` iff ``subs[i]`` is contained in ``subs[j]``."""
    if not subs:
        return np.zeros((0, 0), dtype=bool)
    n = subs[0].source.n
    if n <= 62:
        m = np.array([S.mask for S in subs], dtype=np.int64)
        return (m[:, None] & ~m[None, :]) == 0
    # too wide for int64 masks: count members of S missing from T
    member = np.zeros((len(subs), n), dtype=np.int32)
    for i, S in enumerate(subs):
        member[i, bits(S.mask)] = 1
    return member @ (1 - member).T == 0


@dataclass(frozen=True, eq=False)
class SublocaleCoframe:
    """All sublocales of ``source``, sorted by size then mask."""

    source: FiniteLattice
    sublocales: tuple

    def __len__(self):
        return len(self.sublocales)

    def __iter__(self):
        return iter(self.sublocales)

    @cached_property
    def index(self) -> dict:
        return {S: i for i, S in enumerate(self.sublocales)}

    @cached_property
    def leq(self) -> np.ndarray:
        return inclusion_matrix(self.sublocales)

    @cached_property
    def lattice(self) -> FiniteLattice:
        """The coframe as a :class:`FiniteLattice` labeled by sublocales."""
        return build_lattice(self.leq, labels=self.sublocales)

    @cached_property
    def dual_lattice(self) -> FiniteLattice:
        """Order-dual, a frame; building it validates the coframe laws."""
        return build_lattice(self.leq.T, labels=self.sublocales)


def enumerate_sublocales(
    L: FiniteLattice, cap: int = DEFAULT_MAX_ASSEMBLY, method: str = "auto"
) -> SublocaleCoframe:
    """Every sublocale of ``L``.

    ``method="filter"`` tests all ``2^n`` subsets (vectorized, with the
    cheap implication-closure tests first) and needs ``n <= cap``.
    ``method="closure"`` closes ``{top}`` under joins with Boolean
    sublocales; its work grows with the number of sublocales, so it gives
    up once more than ``2^cap`` have been found. ``"auto"`` filters when
    ``n <= cap`` and falls back to closure otherwise. Each backend is the
    other's oracle.
    """
    if method == "auto":
        method = "filter" if L.n <= cap else "closure"
    if method == "filter":
        if L.n > cap:
            raise CapExceeded("sublocale enumeration", L.n, cap)
        masks = _enumerate_filter(L)
    elif method == "closure":
        masks = _enumerate_closure(L, limit=1 << cap)
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    subs = sorted((Sublocale(L, m) for m in masks), key=Sublocale.sort_key)
    return SublocaleCoframe(L, tuple(subs))
