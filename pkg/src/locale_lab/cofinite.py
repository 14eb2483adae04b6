"""The frame of opens of the cofinite topology on the natural numbers.

An open is either empty (``BOTTOM``) or the carrier minus a finite set
``F`` (``COFIN F``). Only the finite complements are ever stored.

Statements about infinitely many elements are backed by finite
certificates: a closed-form case analysis plus a check against a finite
"window" model. The window of size ``m`` keeps the points ``0..m-1`` and
lumps every other point into a single point ``inf``; ``COFIN F`` with
``F`` inside the window becomes ``window - F`` (always containing ``inf``)
and ``BOTTOM`` becomes the empty set. These sets form a finite frame that
is closed under the Heyting implication of the big frame, so implications
and primality of window elements can be compared against brute force.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain as _chain, combinations
from typing import Iterable

import numpy as np

from .classify import TheoremReport
from .errors import InconsistencyError
from .lattice import FiniteLattice
from .spaces import FiniteSpace, frame_from_space, to_mask
from .spectrum import primes

BOTTOM_TAG = "BOTTOM"
COFIN_TAG = "COFIN"


@dataclass(frozen=True)
class CofiniteElement:
    tag: str
    complement: frozenset = frozenset()

    def __post_init__(self):
        if self.tag not in (BOTTOM_TAG, COFIN_TAG):
            raise ValueError(f"unknown tag {self.tag!r}")
        comp = frozenset(self.complement)
        if self.tag == BOTTOM_TAG and comp:
            raise ValueError("BOTTOM carries no complement")
        if any(not isinstance(x, (int, np.integer)) or x < 0 for x in comp):
            raise ValueError("complement must be a finite set of natural numbers")
        object.__setattr__(self, "complement", frozenset(int(x) for x in comp))

    @property
    def is_bottom(self) -> bool:
        return self.tag == BOTTOM_TAG

    @property
    def is_top(self) -> bool:
        return self.tag == COFIN_TAG and not self.complement

    def sort_key(self):
        if self.is_bottom:
            return (0, ())
        return (1, len(self.complement), tuple(sorted(self.complement)))

    def __str__(self):
        if self.is_bottom:
            return "BOTTOM"
        return "COFIN{" + ",".join(str(x) for x in sorted(self.complement)) + "}"

    __repr__ = __str__


BOTTOM = CofiniteElement(BOTTOM_TAG)
TOP = CofiniteElement(COFIN_TAG)


def cofin(F: Iterable[int] = ()) -> CofiniteElement:
    return CofiniteElement(COFIN_TAG, frozenset(F))


def cf_leq(a: CofiniteElement, b: CofiniteElement) -> bool:
    if a.is_bottom:
        return True
    if b.is_bottom:
        return False
    return b.complement <= a.complement


def cf_meet(a: CofiniteElement, b: CofiniteElement) -> CofiniteElement:
    # two cofinite sets always meet, so BOTTOM only comes from BOTTOM
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    return cofin(a.complement | b.complement)


def cf_join(a: CofiniteElement, b: CofiniteElement) -> CofiniteElement:
    if a.is_bottom:
        return b
    if b.is_bottom:
        return a
    return cofin(a.complement & b.complement)


def cf_big_meet(elements: Iterable[CofiniteElement]) -> CofiniteElement:
    """Meet of a finite family; the empty meet is the top."""
    out = TOP
    for e in elements:
        out = cf_meet(out, e)
    return out


def cf_heyting(a: CofiniteElement, b: CofiniteElement) -> CofiniteElement:
    if a.is_bottom:
        return TOP
    if b.is_bottom:
        return BOTTOM
    return cofin(b.complement - a.complement)


def cf_is_prime(p: CofiniteElement) -> bool:
    """Closed form: BOTTOM and the ``COFIN{x}``.

    ``COFIN F`` with two or more points in ``F`` splits as
    ``COFIN{x} ∧ COFIN(F - {x})``; the top is excluded by definition.
    """
    return p.is_bottom or len(p.complement) == 1


def cf_prime_split(p: CofiniteElement):
    """A pair ``x, y`` with ``x ∧ y <= p`` but neither below ``p``, or None."""
    if p.is_top:
        return None
    if p.is_bottom or len(p.complement) == 1:
        return None
    x = min(p.complement)
    return cofin({x}), cofin(p.complement - {x})


def cf_is_weakly_covered(p: CofiniteElement) -> bool:
    """``COFIN{x}`` is a coatom, so only the top lies above it. BOTTOM is
    the meet of the infinite family of all ``COFIN{x}``."""
    if not cf_is_prime(p):
        raise ValueError(f"{p} is not prime")
    return not p.is_bottom


def cf_family_lower_bound_escape(G: Iterable[int]) -> int:
    """For ``COFIN G`` a point ``x`` with ``COFIN G ≰ COFIN{x}``.

    Certifies that no nonempty open lies below every ``COFIN{x}``, so the
    meet of that family is BOTTOM.
    """
    G = frozenset(G)
    return max(G, default=-1) + 1


def cf_is_completely_prime(p: CofiniteElement) -> bool:
    """Always false: the family ``{COFIN{y} : y != x}`` has meet BOTTOM,
    which is below every prime, and none of its members lies below
    ``COFIN{x}``; for BOTTOM take all ``COFIN{y}``."""
    if not cf_is_prime(p):
        raise ValueError(f"{p} is not prime")
    return False


def _double_negation_fixed(p: CofiniteElement, a: CofiniteElement) -> bool:
    return cf_heyting(cf_heyting(p, a), a) == p


def cf_essential_primes(a: CofiniteElement, samples: Iterable[int] = range(8)) -> frozenset:
    """Primes ``p >= a`` with ``p = (p -> a) -> a``.

    For ``COFIN F`` the primes above are the finitely many ``COFIN{x}``,
    ``x`` in ``F``. For BOTTOM every prime is above; BOTTOM passes, and a
    generic ``COFIN{x}`` fails because ``COFIN{x} -> BOTTOM = BOTTOM``
    whatever ``x`` is. That uniform failure is re-evaluated on ``samples``.
    """
    if a.is_bottom:
        for x in samples:
            if _double_negation_fixed(cofin({x}), a):
                raise InconsistencyError(f"COFIN{{{x}}} essential for BOTTOM")
        return frozenset({BOTTOM}) if _double_negation_fixed(BOTTOM, a) else frozenset()
    candidates = [cofin({x}) for x in a.complement]
    return frozenset(p for p in candidates if cf_leq(a, p) and _double_negation_fixed(p, a))


def cf_absolutely_essential(a: CofiniteElement, samples: Iterable[int] = range(8)) -> frozenset:
    """Essential and weakly covered."""
    return frozenset(p for p in cf_essential_primes(a, samples) if cf_is_weakly_covered(p))


# finite window model


def window_elements(m: int) -> list[CofiniteElement]:
    """BOTTOM and every ``COFIN F`` with ``F`` inside ``0..m-1``."""
    subsets = _chain.from_iterable(combinations(range(m), r) for r in range(m + 1))
    return [BOTTOM] + [cofin(F) for F in subsets]


def window_space(m: int) -> FiniteSpace:
    """Points ``0..m-1`` and ``inf``; open sets are the empty set and every
    set containing ``inf``."""
    points = tuple(str(i) for i in range(m)) + ("inf",)
    inf = 1 << m
    opens = frozenset({0} | {inf | low for low in range(1 << m)})
    return FiniteSpace(points, opens)


def _window_mask(e: CofiniteElement, m: int) -> int:
    if e.is_bottom:
        return 0
    return ((1 << (m + 1)) - 1) & ~to_mask(e.complement)


@dataclass
class WindowModel:
    m: int
    elements: list
    frame: FiniteLattice
    index: list  # element position -> frame index


def window_model(m: int) -> WindowModel:
    elements = window_elements(m)
    X = window_space(m)
    L = frame_from_space(X)
    by_set = {lab: i for i, lab in enumerate(L.labels)}
    index = [by_set[X.names(_window_mask(e, m))] for e in elements]
    return WindowModel(m, elements, L, index)


def window_oracle(m: int) -> dict:
    """Exhaustive comparison against the window frame of size ``m``.

    Checks, over every element with complement inside ``0..m-1``:
    the adjunction ``c ∧ a <= b  iff  c <= a -> b`` for all triples,
    agreement of meet, join, order and implication with the finite frame,
    distributivity, primality, and essential primes of each element.
    """
    W = window_model(m)
    E, L, idx = W.elements, W.frame, W.index
    k = len(E)
    leq = np.array([[cf_leq(a, b) for b in E] for a in E])
    meet = [[E.index(cf_meet(a, b)) for b in E] for a in E]
    join = [[E.index(cf_join(a, b)) for b in E] for a in E]
    imp = [[E.index(cf_heyting(a, b)) for b in E] for a in E]
    meet_np = np.array(meet)
    imp_np = np.array(imp)
    pos = np.array(idx)

    results = {}
    results["order_matches_frame"] = bool((leq == L.leq[np.ix_(pos, pos)]).all())
    results["meet_matches_frame"] = bool((pos[meet_np] == L.meet_table[np.ix_(pos, pos)]).all())
    results["join_matches_frame"] = bool(
        (pos[np.array(join)] == L.join_table[np.ix_(pos, pos)]).all()
    )
    results["heyting_matches_frame"] = bool(
        (pos[imp_np] == L.heyting_table[np.ix_(pos, pos)]).all()
    )
    # c ∧ a <= b  iff  c <= a -> b, indexed [c, a, b]
    lhs = leq[meet_np.T[:, :, None], np.arange(k)[None, None, :]]
    rhs = leq[np.arange(k)[:, None, None], imp_np[None, :, :]]
    results["adjunction"] = bool((lhs == rhs).all())
    # brute-force implication: greatest c with c ∧ a <= b
    brute = []
    for a in range(k):
        row = []
        for b in range(k):
            ok = [c for c in range(k) if leq[meet[c][a], b]]
            top = [c for c in ok if all(leq[d, c] for d in ok)]
            row.append(top[0] if len(top) == 1 else -1)
        brute.append(row)
    results["heyting_is_greatest"] = brute == imp
    jn = np.array(join)
    a_ = np.arange(k)[:, None, None]
    b_ = np.arange(k)[None, :, None]
    c_ = np.arange(k)[None, None, :]
    results["distributive"] = bool(
        (meet_np[a_, jn[b_, c_]] == jn[meet_np[a_, b_], meet_np[a_, c_]]).all()
    )
    window_primes = primes(L)
    results["primes_match"] = all(cf_is_prime(e) == (idx[i] in window_primes) for i, e in enumerate(E))
    ess_ok = True
    for i, a in enumerate(E):
        fin = frozenset(
            j for j, p in enumerate(E)
            if idx[j] in window_primes
            and L.leq[idx[i], idx[j]]
            and L.heyting_table[L.heyting_table[idx[j], idx[i]], idx[i]] == idx[j]
        )
        sym = frozenset(E.index(p) for p in cf_essential_primes(a, range(m)))
        ess_ok &= fin == sym
    results["essential_primes_match"] = ess_ok
    return results


# facts and classification


@dataclass
class Certificate:
    name: str
    statement: str
    holds: bool
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "holds": self.holds,
            "evidence": {k: _plain(v) for k, v in self.evidence.items()},
        }


def _plain(v):
    if isinstance(v, CofiniteElement):
        return str(v)
    if isinstance(v, (set, frozenset)):
        return sorted((_plain(x) for x in v), key=str)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (np.bool_, np.integer)):
        return v.item()
    return v


@dataclass
class PrimesFacts:
    certificates: list

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.certificates)

    def __getitem__(self, name: str) -> Certificate:
        for c in self.certificates:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "certificates": [c.to_dict() for c in self.certificates]}


def sample_elements(seed: int = 0, count: int = 40, span: int = 50, max_size: int = 5) -> list:
    """Deterministic sample: BOTTOM, top, singletons and random complements."""
    rng = np.random.default_rng(seed)
    out = [BOTTOM, TOP, cofin({0}), cofin({span - 1}), cofin(range(max_size))]
    for _ in range(count):
        size = int(rng.integers(0, max_size + 1))
        out.append(cofin(int(x) for x in rng.choice(span, size=size, replace=False)))
    return out


def cf_primes_facts(seed: int = 0, window: int = 4) -> PrimesFacts:
    sample = sample_elements(seed)
    oracle = window_oracle(window)
    certs = []

    # (i) primes are BOTTOM and the COFIN{x}
    splits = {str(e): cf_prime_split(e) for e in sample if not cf_is_prime(e) and not e.is_top}
    split_ok = all(
        s is not None and cf_leq(cf_meet(*s), e) and not cf_leq(s[0], e) and not cf_leq(s[1], e)
        for e in sample
        if not cf_is_prime(e) and not e.is_top
        for s in [cf_prime_split(e)]
    )
    pair_ok = all(
        cf_leq(x, p) or cf_leq(y, p)
        for p in sample
        if cf_is_prime(p)
        for x in sample
        for y in sample
        if cf_leq(cf_meet(x, y), p)
    )
    certs.append(Certificate(
        "primes",
        "the primes are BOTTOM and every COFIN{x}",
        split_ok and pair_ok and oracle["primes_match"],
        {"non_prime_splits": {k: list(v) for k, v in splits.items() if v},
         "sampled_pairs_respect_primes": pair_ok,
         "window_primes_match": oracle["primes_match"]},
    ))

    # BOTTOM prime: two COFIN elements never meet to BOTTOM
    never_bottom = all(
        not cf_meet(x, y).is_bottom for x in sample for y in sample
        if not x.is_bottom and not y.is_bottom
    )
    certs.append(Certificate(
        "bottom_prime",
        "BOTTOM is prime: the meet of two nonempty opens is nonempty",
        cf_is_prime(BOTTOM) and never_bottom,
        {"sampled_meets_nonempty": never_bottom},
    ))

    # (ii) BOTTOM is the meet of all COFIN{x}
    escapes = {}
    for e in sample:
        if e.is_bottom:
            continue
        x = cf_family_lower_bound_escape(e.complement)
        escapes[str(e)] = x
        if cf_leq(e, cofin({x})):
            raise InconsistencyError(f"{e} is below COFIN{{{x}}}")
    certs.append(Certificate(
        "bottom_is_meet_of_points",
        "BOTTOM is the meet of the family of all COFIN{x}: "
        "every COFIN G misses the lower bound at x = max(G) + 1",
        True,
        {"escape_points": escapes},
    ))

    # (iii) and (iv) weak coverage
    coatom_ok = all(
        q.is_top
        for x in range(5)
        for q in sample
        if cf_leq(cofin({x}), q) and q != cofin({x})
    )
    certs.append(Certificate(
        "bottom_not_weakly_covered",
        "BOTTOM is not weakly covered: the family of all COFIN{x} meets to BOTTOM",
        not cf_is_weakly_covered(BOTTOM),
        {"family": "all COFIN{x}"},
    ))
    certs.append(Certificate(
        "points_weakly_covered",
        "every COFIN{x} is weakly covered: only the top lies strictly above it",
        coatom_ok and all(cf_is_weakly_covered(cofin({x})) for x in range(5)),
        {"sampled_coatom_check": coatom_ok},
    ))

    # (v) completely prime
    certs.append(Certificate(
        "no_prime_completely_prime",
        "no prime is completely prime: COFIN{x} fails on the family of all COFIN{y} "
        "with y != x, whose meet is BOTTOM; BOTTOM fails on the family of all COFIN{y}",
        not cf_is_completely_prime(BOTTOM)
        and not any(cf_is_completely_prime(cofin({x})) for x in range(5))
        and all(not cf_leq(cofin({y}), cofin({x})) for x in range(5) for y in range(5) if y != x),
        {"family_for_COFIN{x}": "COFIN{y}, y != x", "family_for_BOTTOM": "COFIN{y}, all y"},
    ))

    certs.append(Certificate(
        "window_oracle",
        f"operations agree with the finite window frame of size {window}",
        all(oracle.values()),
        oracle,
    ))
    return PrimesFacts(certs)


def cf_classification(seed: int = 0, window: int = 4) -> TheoremReport:
    """Verdicts for the cofinite frame: totally spatial, neither T_D nor scattered."""
    facts = cf_primes_facts(seed, window)
    if not facts.ok:
        bad = [c.name for c in facts.certificates if not c.holds]
        raise InconsistencyError(f"cofinite certificates failed: {bad}")
    sample = sorted(set(sample_elements(seed)), key=CofiniteElement.sort_key)

    spatial_fail = [a for a in sample if cf_big_meet(cf_essential_primes(a)) != a]
    weak_fail = [p for p in [BOTTOM] + [cofin({x}) for x in range(5)] if not cf_is_weakly_covered(p)]
    scattered_fail = [a for a in sample if cf_big_meet(cf_absolutely_essential(a)) != a]

    report = TheoremReport("COFINITE")
    report.verdicts["totally_spatial"] = not spatial_fail
    report.verdicts["TD"] = not weak_fail
    report.verdicts["scattered"] = not scattered_fail
    if weak_fail:
        report.witnesses["TD"] = weak_fail[0]
    if scattered_fail:
        report.witnesses["scattered"] = scattered_fail[0]
    if spatial_fail:
        report.witnesses["totally_spatial"] = spatial_fail[0]

    consistent = report.verdicts["scattered"] == (
        report.verdicts["totally_spatial"] and not weak_fail
    )
    if not consistent:
        raise InconsistencyError("scattered differs from totally spatial with weakly covered primes")
    report.notes.append(
        f"totally spatial checked on {len(sample)} sampled and boundary elements: "
        "each is the meet of its essential primes"
    )
    report.notes.append("scattered == totally_spatial and all primes weakly covered: holds")
    report.notes.append("agreement is expected to be false for this frame")
    return report
