"""The adjunction between prime subsets and sublocales.

``meet_closure_M`` sends a set of primes to the sublocale of all its meets,
``points_of_sublocale`` goes back. Spatialization and sobrification are the
two composites. The ``check_*`` functions verify the laws relating them
exhaustively on a finite frame, computing both sides of each identity
separately, and return a :class:`DiagramReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Optional

import numpy as np

from .errors import CapExceeded, InconsistencyError, NotPrimes
from .lattice import FiniteLattice
from .spaces import bits, subspace, to_mask
from .spectrum import is_sober, primes, skula_space, spectrum_space
from .sublocales import (
    DEFAULT_MAX_ASSEMBLY,
    Sublocale,
    SublocaleCoframe,
    boolean_sublocale,
    enumerate_sublocales,
    is_spatial_sublocale,
    meet_closure_mask,
    points_of_sublocale,
    two_element_sublocales,
    void,
)

DEFAULT_MAX_SUBSETS = 14


@dataclass
class DiagramReport:
    """Per-law verdicts; a failed law carries its first witness.

    With ``all_witnesses=True`` every failing input is kept instead.
    """

    name: str
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    all_witnesses: bool = False

    def check(self, law: str, ok: bool, witness: Any = None) -> None:
        self.verdicts.setdefault(law, True)
        if ok:
            return
        self.verdicts[law] = False
        if witness is None:
            witness = "failed"
        if self.all_witnesses:
            self.witnesses.setdefault(law, []).append(witness)
        else:
            self.witnesses.setdefault(law, witness)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "verdicts": dict(self.verdicts),
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
        }


def _jsonable(v):
    if isinstance(v, Sublocale):
        return sorted(v.members)
    if isinstance(v, (set, frozenset)):
        return sorted(_jsonable(x) for x in v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _check_primes(L: FiniteLattice, Y: Iterable[int]) -> frozenset:
    Y = frozenset(Y)
    extra = Y - primes(L)
    if extra:
        raise NotPrimes(f"not prime: {sorted(extra)}")
    return Y


def meet_closure_M(L: FiniteLattice, Y: Iterable[int]) -> Sublocale:
    """All meets of subsets of the primes ``Y``; the empty meet is top."""
    Y = _check_primes(L, Y)
    return Sublocale(L, meet_closure_mask(L, to_mask(Y)))


def _join_pair(L: FiniteLattice, S: Sublocale, T: Sublocale) -> Sublocale:
    # S ∨ T = {s ∧ t}: both are meet-closed and contain top
    block = L.meet_table[np.ix_(bits(S.mask), bits(T.mask))]
    return Sublocale(L, to_mask(np.unique(block).tolist()))


def spatialization(S: Sublocale) -> Sublocale:
    """Largest spatial sublocale inside ``S``.

    Computed as the meet closure of ``pt(S)`` and as the join of the
    ``𝔟(p)``, ``p`` in ``pt(S)``; the results must agree.
    """
    L = S.source
    pts = points_of_sublocale(S)
    via_meets = meet_closure_M(L, pts)
    via_joins = void(L)
    for p in sorted(pts):
        via_joins = _join_pair(L, via_joins, boolean_sublocale(L, p))
    if via_meets != via_joins:
        raise InconsistencyError(f"sp({S!r}): {via_meets!r} vs {via_joins!r}")
    return via_meets


def _prime_subsets(ps: tuple, max_subsets: int):
    if len(ps) > max_subsets:
        raise CapExceeded("prime subsets", len(ps), max_subsets)
    for r in range(len(ps) + 1):
        for Y in combinations(ps, r):
            yield frozenset(Y)


def sobrification(
    L: FiniteLattice, Y: Iterable[int], max_subsets: int = DEFAULT_MAX_SUBSETS
) -> frozenset:
    """Smallest sober subspace of ``pt(L)`` containing ``Y``: ``pt(𝔐(Y))``.

    When ``pt(L)`` has at most ``max_subsets`` points the result is checked
    against the intersection of all sober subspaces containing ``Y``.
    """
    Y = _check_primes(L, Y)
    result = points_of_sublocale(meet_closure_M(L, Y))
    spec = spectrum_space(L)
    if len(spec.primes) <= max_subsets:
        rest = [p for p in spec.primes if p not in Y]
        inter = frozenset(spec.primes)
        for r in range(len(rest) + 1):
            for extra in combinations(rest, r):
                Z = Y | frozenset(extra)
                if is_sober(subspace(spec.carrier, spec.to_mask(Z))):
                    inter &= Z
        if inter != result:
            raise InconsistencyError(f"sob({sorted(Y)}): {sorted(result)} vs {sorted(inter)}")
    return result


def _coframe(L, cap, coframe: Optional[SublocaleCoframe]) -> SublocaleCoframe:
    if coframe is not None:
        return coframe
    return enumerate_sublocales(L, cap=cap)


def check_adjunction(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    coframe: Optional[SublocaleCoframe] = None,
    all_witnesses: bool = False,
) -> DiagramReport:
    """``𝔐(Y) ⊆ S`` iff ``Y ⊆ pt(S)`` for every sublocale and prime set."""
    report = DiagramReport("adjunction", all_witnesses=all_witnesses)
    subs = _coframe(L, cap, coframe)
    ps = tuple(sorted(primes(L)))
    pts = {S: points_of_sublocale(S) for S in subs}
    report.check("M_left_adjoint_to_pt", True)
    for Y in _prime_subsets(ps, max_subsets):
        MY = meet_closure_M(L, Y)
        for S in subs:
            lhs = MY.mask & ~S.mask == 0
            rhs = Y <= pts[S]
            report.check("M_left_adjoint_to_pt", lhs == rhs, {"Y": Y, "S": S})
    return report


def check_conucleus(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    coframe: Optional[SublocaleCoframe] = None,
    all_witnesses: bool = False,
) -> DiagramReport:
    """Spatialization is deflationary, idempotent, monotone and preserves binary joins."""
    report = DiagramReport("conucleus", all_witnesses=all_witnesses)
    subs = list(_coframe(L, cap, coframe))
    sp = {S: spatialization(S) for S in subs}
    for law in ("deflationary", "idempotent", "monotone", "preserves_joins", "preserves_bottom"):
        report.check(law, True)
    bottom = void(L)
    report.check("preserves_bottom", spatialization(bottom) == bottom, bottom)
    for S in subs:
        report.check("deflationary", sp[S] <= S, S)
        report.check("idempotent", spatialization(sp[S]) == sp[S], S)
    for i, S in enumerate(subs):
        for T in subs[i:]:
            if S <= T:
                report.check("monotone", sp[S] <= sp[T], (S, T))
            if T <= S:
                report.check("monotone", sp[T] <= sp[S], (T, S))
            J = _join_pair(L, S, T)
            report.check(
                "preserves_joins", sp[J] == _join_pair(L, sp[S], sp[T]), (S, T)
            )
    return report


def _order_iso(pairs: list, leq_a, leq_b) -> bool:
    """Whether ``a -> b`` over ``pairs`` preserves and reflects order."""
    for a1, b1 in pairs:
        for a2, b2 in pairs:
            if leq_a(a1, a2) != leq_b(b1, b2):
                return False
    return True


def check_main_diagram(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    coframe: Optional[SublocaleCoframe] = None,
    all_witnesses: bool = False,
) -> DiagramReport:
    """Spatial sublocales versus sober subspaces, and the commuting square."""
    report = DiagramReport("main_diagram", all_witnesses=all_witnesses)
    subs = _coframe(L, cap, coframe)
    spec = spectrum_space(L)
    ps = spec.primes
    pts = {S: points_of_sublocale(S) for S in subs}

    # fixpoints of 𝔐∘pt versus spatiality checked inside each sublocale
    spatial = []
    report.check("M_pt_fixpoints_are_spatial", True)
    for S in subs:
        fixed = meet_closure_M(L, pts[S]) == S
        own = is_spatial_sublocale(S)
        report.check("M_pt_fixpoints_are_spatial", fixed == own, S)
        if own:
            spatial.append(S)

    # fixpoints of pt∘𝔐 versus sobriety of the subspace
    sober = []
    report.check("pt_M_fixpoints_are_sober", True)
    for Y in _prime_subsets(ps, max_subsets):
        fixed = points_of_sublocale(meet_closure_M(L, Y)) == Y
        own = is_sober(subspace(spec.carrier, spec.to_mask(Y)))
        report.check("pt_M_fixpoints_are_sober", fixed == own, Y)
        if own:
            sober.append(Y)

    images = [pts[S] for S in spatial]
    bijective = len(set(images)) == len(images) and set(images) == set(sober)
    report.check("pt_bijects_spatial_onto_sober", bijective, {"spatial": len(spatial), "sober": len(sober)})
    pairs = list(zip(spatial, images))
    report.check(
        "pt_order_isomorphism",
        _order_iso(pairs, lambda a, b: a <= b, lambda a, b: a <= b),
    )
    report.check("M_inverts_pt_on_spatial", True)
    for S in spatial:
        report.check("M_inverts_pt_on_spatial", meet_closure_M(L, pts[S]) == S, S)
    for Y in sober:
        report.check("M_inverts_pt_on_spatial", points_of_sublocale(meet_closure_M(L, Y)) == Y, Y)

    # triangle identities
    report.check("triangle_identities", True)
    for S in subs:
        report.check(
            "triangle_identities",
            points_of_sublocale(meet_closure_M(L, pts[S])) == pts[S],
            S,
        )
    for Y in _prime_subsets(ps, max_subsets):
        MY = meet_closure_M(L, Y)
        report.check(
            "triangle_identities", meet_closure_M(L, points_of_sublocale(MY)) == MY, Y
        )

    # the square: pt(sp(S)) = pt(S)
    report.check("square_commutes", True)
    sp_image = set()
    for S in subs:
        spS = spatialization(S)
        sp_image.add(spS)
        report.check("square_commutes", points_of_sublocale(spS) == pts[S], S)

    # sp[S(L)] is the join closure of the two-element sublocales
    twos = two_element_sublocales(L)
    closure = {void(L)}
    frontier = list(closure)
    while frontier:
        new = []
        for S in frontier:
            for T in twos:
                J = _join_pair(L, S, T)
                if J not in closure:
                    closure.add(J)
                    new.append(J)
        frontier = new
    report.check("sp_image_is_join_closure_of_points", sp_image == closure)

    # the two-element sublocales are the join primes of S(L)
    join_primes = {subs.sublocales[i] for i in primes(subs.dual_lattice)}
    report.check("join_primes_are_two_element", join_primes == set(twos))
    return report


def assembly_spectrum_vs_skula(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    coframe: Optional[SublocaleCoframe] = None,
    all_witnesses: bool = False,
) -> DiagramReport:
    """``p ↦ 𝔟(p)`` is a homeomorphism from the Skula space of ``pt(L)``
    onto the spectrum of the order-dual of ``S(L)``."""
    report = DiagramReport("assembly_spectrum_vs_skula", all_witnesses=all_witnesses)
    subs = _coframe(L, cap, coframe)
    spec = spectrum_space(L)
    skula = skula_space(spec.carrier)
    dual_spec = spectrum_space(subs.dual_lattice)

    # phi: position of p in spec.carrier -> position of b(p) in dual_spec.carrier
    dual_pos = {q: i for i, q in enumerate(dual_spec.primes)}
    phi = {}
    for i, p in enumerate(spec.primes):
        j = subs.index[boolean_sublocale(L, p)]
        if j in dual_pos:
            phi[i] = dual_pos[j]
    bijective = len(phi) == len(spec.primes) == len(dual_spec.primes) and len(
        set(phi.values())
    ) == len(phi)
    report.check("b_is_bijection_onto_dual_points", bijective, sorted(spec.primes))
    if not bijective:
        report.check("homeomorphism", False, "no bijection")
        return report

    def transport(U: int) -> int:
        return to_mask(phi[i] for i in bits(U))

    image = {transport(U) for U in skula.opens}
    report.check("homeomorphism", image == set(dual_spec.carrier.opens))
    report.check("pointwise_neighbourhoods", True)
    for i, p in enumerate(spec.primes):
        here = {transport(U) for U in skula.opens if U >> i & 1}
        there = {V for V in dual_spec.carrier.opens if V >> phi[i] & 1}
        report.check("pointwise_neighbourhoods", here == there, p)
    return report
