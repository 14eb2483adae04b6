"""Finite bounded distributive lattices with precomputed operation tables.

Elements are the integers ``0..n-1``. A :class:`FiniteLattice` stores the
order relation together with meet, join and Heyting implication tables, so
every query after construction is a table lookup. Element sets are passed in
as any iterable of indices and returned as ``frozenset``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    InconsistencyError,
    NotALattice,
    NotAPartialOrder,
    NotDistributive,
)

DEFAULT_MAX_ELEMENTS = 4096


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """Immutable finite frame (finite distributive lattice).

    Equality is identity: two lattices built from the same order are
    different objects, and sublocales of one must never be mixed with
    sublocales of the other.
    """

    n: int
    leq: np.ndarray
    meet_table: np.ndarray
    join_table: np.ndarray
    heyting_table: np.ndarray
    bottom: int
    top: int
    labels: Optional[tuple] = None
    upset_masks: tuple = field(default=(), repr=False)

    def __repr__(self):
        return f"FiniteLattice(n={self.n}, bottom={self.bottom}, top={self.top})"

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def heyting(self, a: int, b: int) -> int:
        return int(self.heyting_table[a, b])

    @property
    def elements(self) -> range:
        return range(self.n)

    def label(self, a: int) -> Any:
        return a if self.labels is None else self.labels[a]


def _check_partial_order(leq: np.ndarray) -> None:
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
        raise NotAPartialOrder(f"relation must be square, got shape {leq.shape}")
    n = leq.shape[0]
    if not leq.diagonal().all():
        i = int(np.flatnonzero(~leq.diagonal())[0])
        raise NotAPartialOrder(f"not reflexive at element {i}")
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise NotAPartialOrder(f"not antisymmetric: {i} <= {j} <= {i}")
    if n:
        m = leq.astype(np.int32)
        composed = (m @ m) > 0
        if (composed & ~leq).any():
            i, j = (int(v) for v in np.argwhere(composed & ~leq)[0])
            raise NotAPartialOrder(f"not transitive: {i} <= {j} is implied but missing")


def _bound_table(leq: np.ndarray, lower: bool) -> np.ndarray:
    """Meet table (``lower=True``) or join table, raising NotALattice."""
    n = leq.shape[0]
    rel = leq if lower else leq.T
    # rank of a candidate bound: the greatest lower bound has the largest down-set
    rank = rel.sum(axis=0)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        bounds = rel[:, i][:, None] & rel  # bounds[k, j]: k below both i and j
        score = np.where(bounds, rank[:, None], -1)
        cand = score.argmax(axis=0)
        missing = score.max(axis=0) < 0
        bad = missing | (bounds & ~rel[:, cand]).any(axis=0)
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            kind = "meet" if lower else "join"
            raise NotALattice(f"elements {i} and {j} have no {kind}", pair=(i, j))
        table[i] = cand
    return table


def _check_distributive(meet: np.ndarray, join: np.ndarray) -> None:
    n = meet.shape[0]
    for a in range(n):
        row = meet[a]
        lhs = row[join]
        rhs = join[row[:, None], row[None, :]]
        if (lhs != rhs).any():
            b, c = (int(v) for v in np.argwhere(lhs != rhs)[0])
            raise NotDistributive(
                f"a∧(b∨c) != (a∧b)∨(a∧c) for a={a}, b={b}, c={c}", triple=(a, b, c)
            )


def _heyting_table(leq: np.ndarray, meet: np.ndarray) -> np.ndarray:
    n = leq.shape[0]
    rank = leq.sum(axis=0)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        # admissible[c, b]: c ∧ a <= b
        admissible = leq[meet[:, a], :]
        cand = np.where(admissible, rank[:, None], -1).argmax(axis=0)
        if (admissible & ~leq[:, cand]).any():
            raise InconsistencyError(f"no greatest c with c∧{a} <= b for some b")
        table[a] = cand
    return table


def build_lattice(
    leq,
    labels: Optional[Sequence] = None,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> FiniteLattice:
    """Validate an order relation and build the frame it describes.

    ``leq[i][j]`` is true iff element ``i`` is below element ``j``. Raises
    :class:`NotAPartialOrder`, :class:`NotALattice` or
    :class:`NotDistributive` (with a witnessing triple).
    """
    leq = np.array(leq, dtype=bool)
    n = leq.shape[0] if leq.ndim else 0
    if n > max_elements:
        raise CapExceeded("lattice elements", n, max_elements)
    _check_partial_order(leq)
    if n == 0:
        raise NotALattice("the empty order has no top or bottom")
    meet = _bound_table(leq, lower=True)
    join = _bound_table(leq, lower=False)
    _check_distributive(meet, join)
    heyt = _heyting_table(leq, meet)
    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    masks = tuple(
        sum(1 << int(j) for j in np.flatnonzero(leq[i])) for i in range(n)
    )
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for {n} elements")
    return FiniteLattice(
        n=n,
        leq=_readonly(leq),
        meet_table=_readonly(meet),
        join_table=_readonly(join),
        heyting_table=_readonly(heyt),
        bottom=bottom,
        top=top,
        labels=labels,
        upset_masks=masks,
    )


def dual(L: FiniteLattice) -> FiniteLattice:
    """The order-dual lattice, with the same labels.

    Raises :class:`NotDistributive` exactly when ``L`` is not a coframe;
    for finite lattices that never happens, but it is checked.
    """
    return build_lattice(L.leq.T, labels=L.labels)


def heyting(L: FiniteLattice, a: int, b: int) -> int:
    """Greatest ``c`` with ``c ∧ a <= b``."""
    return int(L.heyting_table[a, b])


def big_meet(L: FiniteLattice, elements: Iterable[int]) -> int:
    return reduce(L.meet, elements, L.top)


def big_join(L: FiniteLattice, elements: Iterable[int]) -> int:
    return reduce(L.join, elements, L.bottom)


def upset(L: FiniteLattice, a: int) -> frozenset:
    return frozenset(int(x) for x in np.flatnonzero(L.leq[a]))


def downset(L: FiniteLattice, a: int) -> frozenset:
    return frozenset(int(x) for x in np.flatnonzero(L.leq[:, a]))


def atoms(L: FiniteLattice) -> frozenset:
    covers_bottom = []
    for a in L.elements:
        if a != L.bottom and L.leq[:, a].sum() == 2:
            covers_bottom.append(a)
    return frozenset(covers_bottom)


def coatoms(L: FiniteLattice) -> frozenset:
    return frozenset(a for a in L.elements if a != L.top and L.leq[a].sum() == 2)


def complement(L: FiniteLattice, a: int) -> Optional[int]:
    """The complement of ``a`` if it has one, else ``None``."""
    for b in L.elements:
        if L.meet(a, b) == L.bottom and L.join(a, b) == L.top:
            return b
    return None


def is_boolean(L: FiniteLattice) -> bool:
    return all(complement(L, a) is not None for a in L.elements)


def chain(n: int) -> FiniteLattice:
    """The ``n``-element chain ``0 < 1 < ... < n-1``."""
    idx = np.arange(n)
    return build_lattice(idx[:, None] <= idx[None, :])


def powerset_lattice(k: int) -> FiniteLattice:
    """Boolean lattice of subsets of ``k`` points, element ``i`` = bitmask ``i``."""
    masks = np.arange(1 << k)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    return build_lattice(leq)
