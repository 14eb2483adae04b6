"""Prime classification and the equivalence suites.

Each suite evaluates every characterization of one property separately,
from its own definition, and reports whether they agree. On a finite frame
all of them hold, so any disagreement points at a bug in one of the code
paths involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .errors import (
    CapExceeded,
    InconsistencyError,
    NotACoframe,
    NotDistributive,
    NotMeetOfPrimes,
    NotPrime,
    NotSpatial,
)
from .galois import DEFAULT_MAX_SUBSETS, _order_iso, spatialization
from .lattice import FiniteLattice, atoms, big_meet, build_lattice, dual, is_boolean
from .spaces import subspace
from .spectrum import (
    is_completely_prime,
    is_completely_prime_exhaustive,
    is_discrete,
    is_prime,
    is_scattered_space,
    is_sober,
    is_spatial,
    is_TD_space,
    isolated_points,
    primes,
    skula_space,
    spectrum_space,
)
from .sublocales import (
    DEFAULT_MAX_ASSEMBLY,
    SublocaleCoframe,
    boolean_sublocale,
    enumerate_sublocales,
    inclusion_matrix,
    is_spatial_sublocale,
    points_of_sublocale,
)


def _require_prime(L, p):
    if not is_prime(L, p):
        raise NotPrime(f"element {p} is not prime")


def _strictly_above(L, p, among):
    return [q for q in among if q != p and L.leq[p, q]]


def is_weakly_covered(L: FiniteLattice, p: int, max_subsets: int = DEFAULT_MAX_SUBSETS) -> bool:
    """``p`` is not the meet of any family of primes that omits it.

    Closed form: the meet of the primes strictly above ``p`` differs from
    ``p``. With at most ``max_subsets`` primes every family is also tried.
    """
    _require_prime(L, p)
    ps = sorted(primes(L))
    closed = big_meet(L, _strictly_above(L, p, ps)) != p
    if len(ps) <= max_subsets:
        others = [q for q in ps if q != p]
        exhaustive = True
        for r in range(len(others) + 1):
            if any(big_meet(L, P) == p for P in combinations(others, r)):
                exhaustive = False
                break
        if exhaustive != closed:
            raise InconsistencyError(f"weak coveredness of {p}: closed form {closed}, exhaustive {exhaustive}")
    return closed


def is_covered(L: FiniteLattice, p: int) -> bool:
    """``p`` is completely meet-irreducible: ``⋀{x : p < x} != p``."""
    _require_prime(L, p)
    return big_meet(L, _strictly_above(L, p, L.elements)) != p


def _require_meet_of_primes(L, a, ps):
    above = [p for p in ps if L.leq[a, p]]
    if big_meet(L, above) != a:
        raise NotMeetOfPrimes(f"element {a} is not a meet of primes")
    return above


def essential_primes(L: FiniteLattice, a: int) -> frozenset:
    """Primes ``p >= a`` with ``⋀(pt(↑a) minus ↑p) ≰ p``.

    Also computed as ``p = (p -> a) -> a`` and as membership of ``p`` in
    the Boolean sublocale of ``a``; all three must agree.
    """
    ps = sorted(primes(L))
    above = _require_meet_of_primes(L, a, ps)
    by_definition = frozenset(
        p for p in above if not L.leq[big_meet(L, [q for q in above if not L.leq[p, q]]), p]
    )
    by_double_implication = frozenset(
        p for p in above if L.heyting(L.heyting(p, a), a) == p
    )
    b = boolean_sublocale(L, a)
    by_boolean = frozenset(p for p in above if p in b)
    if not by_definition == by_double_implication == by_boolean:
        raise InconsistencyError(
            f"Ess({a}): {sorted(by_definition)}, {sorted(by_double_implication)}, {sorted(by_boolean)}"
        )
    return by_definition


def absolutely_essential_primes(
    L: FiniteLattice,
    a: int,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    exhaustive: Optional[bool] = None,
) -> frozenset:
    """Primes that belong to every family of primes whose meet is ``a``.

    Computed as essential-and-weakly-covered and as the isolated points of
    the closed subspace ``pt(↑a)``; when there are at most ``max_subsets``
    primes (or ``exhaustive=True``) also by trying every family.
    """
    ps = sorted(primes(L))
    above = _require_meet_of_primes(L, a, ps)
    if exhaustive is None:
        exhaustive = len(ps) <= max_subsets
    elif exhaustive and len(ps) > max_subsets:
        raise CapExceeded("absolutely essential families", len(ps), max_subsets)

    ess = essential_primes(L, a)
    via_covered = frozenset(p for p in ess if is_weakly_covered(L, p, max_subsets))
    spec = spectrum_space(L)
    closed = spec.to_mask(above)
    via_isolated = spec.to_primes(isolated_points(spec.carrier, closed))
    routes = [via_covered, via_isolated]
    if exhaustive:
        # only subfamilies of pt(↑a) can meet to a
        families = [
            frozenset(P)
            for r in range(len(above) + 1)
            for P in combinations(above, r)
            if big_meet(L, P) == a
        ]
        routes.append(frozenset(p for p in above if all(p in P for P in families)))
    if any(r != via_covered for r in routes):
        raise InconsistencyError(f"AbsEss({a}): {[sorted(r) for r in routes]}")
    return via_covered


@dataclass(frozen=True)
class PrimeDossier:
    prime: int
    weakly_covered: bool
    covered: bool
    completely_prime: bool
    isolated_in_skula: bool
    isolated_in_upset_spectrum: bool


def prime_dossier(L: FiniteLattice, p: int, max_subsets: int = DEFAULT_MAX_SUBSETS) -> PrimeDossier:
    _require_prime(L, p)
    completely = is_completely_prime(L, p)
    if L.n <= 16 and is_completely_prime_exhaustive(L, p) != completely:
        raise InconsistencyError(f"complete primality of {p}")
    spec = spectrum_space(L)
    pos = spec.primes.index(p)
    skula = skula_space(spec.carrier)
    above = spec.to_mask(q for q in spec.primes if L.leq[p, q])
    return PrimeDossier(
        prime=p,
        weakly_covered=is_weakly_covered(L, p, max_subsets),
        covered=is_covered(L, p),
        completely_prime=completely,
        isolated_in_skula=(1 << pos) in skula.opens,
        isolated_in_upset_spectrum=bool(isolated_points(spec.carrier, above) >> pos & 1),
    )


@dataclass
class TheoremReport:
    """One verdict per characterization; ``agreement`` iff all are equal."""

    tag: str
    verdicts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def agreement(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def all_true(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "agreement": self.agreement,
            "verdicts": dict(self.verdicts),
            "notes": list(self.notes),
            "witnesses": {k: str(v) for k, v in self.witnesses.items()},
        }


def _all_prime_subsets(ps, max_subsets):
    if len(ps) > max_subsets:
        raise CapExceeded("prime subsets", len(ps), max_subsets)
    for r in range(len(ps) + 1):
        for Y in combinations(ps, r):
            yield frozenset(Y)


def _has_discrete_dense_subspace(X, Y: int, exhaustive: bool) -> bool:
    """Whether the subspace ``Y`` of ``X`` has a discrete dense subspace."""
    traces = {U & Y for U in X.opens if U & Y}

    def ok(D: int) -> bool:
        discrete = isolated_points(X, D) == D
        dense = all(T & D for T in traces)
        return discrete and dense

    if not exhaustive:
        # a discrete dense subspace consists of exactly the isolated points
        return ok(isolated_points(X, Y))
    D = Y
    while True:
        if ok(D):
            return True
        if D == 0:
            return False
        D = (D - 1) & Y


def _coframe(L, cap, coframe):
    return coframe if coframe is not None else enumerate_sublocales(L, cap=cap)


def theorem_TD(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    coframe: Optional[SublocaleCoframe] = None,
) -> TheoremReport:
    """All subspaces sober / spatial sublocales represent all subspaces."""
    rep = TheoremReport("TD")
    subs = _coframe(L, cap, coframe)
    spec = spectrum_space(L)
    ps = spec.primes

    rep.verdicts["all_primes_weakly_covered"] = all(
        is_weakly_covered(L, p, max_subsets) for p in ps
    )
    rep.verdicts["all_subspaces_sober"] = all(
        is_sober(subspace(spec.carrier, spec.to_mask(Y)))
        for Y in _all_prime_subsets(ps, max_subsets)
    )

    spatial = [S for S in subs if spatialization(S) == S]
    images = [points_of_sublocale(S) for S in spatial]
    onto = set(images) == set(_all_prime_subsets(ps, max_subsets))
    injective = len(set(images)) == len(images)
    order = _order_iso(list(zip(spatial, images)), lambda a, b: a <= b, lambda a, b: a <= b)
    rep.verdicts["pt_spatial_sublocales_iso_powerset"] = onto and injective and order

    rep.verdicts["assembly_spectrum_discrete"] = is_discrete(
        spectrum_space(subs.dual_lattice).carrier
    )
    rep.verdicts["spectrum_is_TD"] = is_TD_space(spec.carrier)

    # sp[S(L)] as a lattice in its own right, ordered by inclusion
    sp_lattice = build_lattice(inclusion_matrix(spatial))
    rep.verdicts["spatial_coframe_boolean"] = is_boolean(sp_lattice)
    return rep


def theorem_totally_spatial(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    coframe: Optional[SublocaleCoframe] = None,
) -> TheoremReport:
    """Every sublocale is spatial."""
    rep = TheoremReport("TOTALLY_SPATIAL")
    subs = _coframe(L, cap, coframe)
    spec = spectrum_space(L)
    ps = spec.primes
    spatial_L = is_spatial(L)
    non_top = [a for a in L.elements if a != L.top]

    rep.verdicts["all_sublocales_spatial"] = all(is_spatial_sublocale(S) for S in subs)
    rep.verdicts["assembly_dual_spatial"] = is_spatial(subs.dual_lattice)

    sober = [
        Y for Y in _all_prime_subsets(ps, max_subsets)
        if is_sober(subspace(spec.carrier, spec.to_mask(Y)))
    ]
    images = [points_of_sublocale(S) for S in subs]
    iso = (
        len(set(images)) == len(images)
        and set(images) == set(sober)
        and _order_iso(list(zip(subs, images)), lambda a, b: a <= b, lambda a, b: a <= b)
    )
    rep.verdicts["pt_sublocales_iso_sober_subspaces"] = iso

    prime_set = frozenset(ps)
    rep.verdicts["boolean_sublocales_have_points"] = all(
        boolean_sublocale(L, x).members & prime_set for x in non_top
    )
    ess = {a: essential_primes(L, a) for a in L.elements}
    rep.verdicts["spatial_and_essential_primes_exist"] = spatial_L and all(
        ess[a] for a in non_top
    )
    rep.verdicts["spatial_and_prime_implication_exists"] = spatial_L and all(
        any(L.heyting(y, a) in prime_set for y in L.elements) for a in non_top
    )
    rep.verdicts["meet_of_essential_primes"] = all(
        big_meet(L, ess[a]) == a for a in L.elements
    )
    exhaustive = len(ps) <= min(max_subsets, 12)
    if not exhaustive:
        rep.notes.append("discrete dense subspaces: closed-form only")
    rep.verdicts["spatial_and_closed_subspaces_dds"] = spatial_L and all(
        _has_discrete_dense_subspace(
            spec.carrier, spec.to_mask(p for p in ps if L.leq[a, p]), exhaustive
        )
        for a in L.elements
    )
    return rep


def theorem_scattered(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    coframe: Optional[SublocaleCoframe] = None,
) -> TheoremReport:
    """Sublocales correspond exactly to subspaces of the spectrum."""
    rep = TheoremReport("SCATTERED")
    subs = _coframe(L, cap, coframe)
    spec = spectrum_space(L)
    ps = spec.primes
    spatial_L = is_spatial(L)
    non_top = [a for a in L.elements if a != L.top]
    C = subs.lattice

    rep.verdicts["spatial_and_spectrum_scattered"] = spatial_L and is_scattered_space(spec.carrier)
    rep.verdicts["totally_spatial_and_weakly_covered"] = all(
        is_spatial_sublocale(S) for S in subs
    ) and all(is_weakly_covered(L, p, max_subsets) for p in ps)

    images = [points_of_sublocale(S) for S in subs]
    rep.verdicts["pt_sublocales_iso_powerset"] = (
        len(set(images)) == len(images)
        and set(images) == set(_all_prime_subsets(ps, max_subsets))
        and _order_iso(list(zip(subs, images)), lambda a, b: a <= b, lambda a, b: a <= b)
    )
    boolean = is_boolean(C)
    rep.verdicts["assembly_boolean_with_atoms_equal_points"] = boolean and len(atoms(C)) == len(ps)
    rep.verdicts["assembly_boolean_and_spatial"] = boolean and spatial_L

    abs_ess = {a: absolutely_essential_primes(L, a, max_subsets) for a in L.elements}
    rep.verdicts["spatial_and_absolutely_essential_exist"] = spatial_L and all(
        abs_ess[a] for a in non_top
    )
    rep.verdicts["meet_of_absolutely_essential_primes"] = all(
        big_meet(L, abs_ess[a]) == a for a in L.elements
    )
    exhaustive = len(ps) <= min(max_subsets, 8)
    if not exhaustive:
        rep.notes.append("discrete dense subspaces: closed-form only")
    rep.verdicts["spatial_and_all_subspaces_dds"] = spatial_L and all(
        _has_discrete_dense_subspace(spec.carrier, spec.to_mask(Y), exhaustive)
        for Y in _all_prime_subsets(ps, max_subsets)
    )
    return rep


def coframe_proposition(L: FiniteLattice, max_subsets: int = DEFAULT_MAX_SUBSETS) -> TheoremReport:
    """For a spatial frame that is also a coframe: T_D, all primes
    completely prime, and scattered spectrum coincide."""
    if not is_spatial(L):
        raise NotSpatial("the frame is not spatial")
    try:
        dual(L)
    except NotDistributive as exc:
        raise NotACoframe(str(exc)) from exc
    rep = TheoremReport("COFRAME_PROP")
    spec = spectrum_space(L)
    rep.verdicts["spectrum_is_TD"] = is_TD_space(spec.carrier)
    rep.verdicts["all_primes_completely_prime"] = all(
        is_completely_prime(L, p) for p in spec.primes
    )
    rep.verdicts["spectrum_scattered"] = is_scattered_space(spec.carrier)
    return rep


def run_all_suites(
    L: FiniteLattice,
    cap: int = DEFAULT_MAX_ASSEMBLY,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    coframe: Optional[SublocaleCoframe] = None,
) -> list[TheoremReport]:
    subs = _coframe(L, cap, coframe)
    return [
        theorem_TD(L, cap, max_subsets, subs),
        theorem_totally_spatial(L, cap, max_subsets, subs),
        theorem_scattered(L, cap, max_subsets, subs),
        coframe_proposition(L, max_subsets),
    ]
