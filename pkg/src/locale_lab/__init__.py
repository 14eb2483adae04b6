"""Exact computations with finite frames, their sublocales and spectra."""

from .classify import (
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
from .cofinite import (
    BOTTOM,
    TOP,
    CofiniteElement,
    cf_absolutely_essential,
    cf_classification,
    cf_essential_primes,
    cf_heyting,
    cf_is_prime,
    cf_join,
    cf_leq,
    cf_meet,
    cf_primes_facts,
    cofin,
)
from .errors import (
    CapExceeded,
    InconsistencyError,
    InputError,
    LocaleLabError,
    MixedSources,
    NotACoframe,
    NotALattice,
    NotAPartialOrder,
    NotATopology,
    NotDistributive,
    NotMeetOfPrimes,
    NotPrime,
    NotPrimes,
    NotSpatial,
    ParseError,
)
from .galois import (
    DiagramReport,
    assembly_spectrum_vs_skula,
    check_adjunction,
    check_conucleus,
    check_main_diagram,
    meet_closure_M,
    sobrification,
    spatialization,
)
from .lattice import (
    FiniteLattice,
    big_join,
    big_meet,
    build_lattice,
    chain,
    heyting,
    powerset_lattice,
    upset,
)
from .spaces import (
    FiniteSpace,
    Poset,
    alexandroff_space,
    frame_from_poset_upsets,
    frame_from_space,
    make_poset,
    random_space,
)
from .spectrum import (
    SpectrumSpace,
    is_completely_prime,
    is_scattered_space,
    is_sober,
    is_spatial,
    is_TD_space,
    primes,
    skula_space,
    spectrum_space,
)
from .sublocales import (
    Sublocale,
    boolean_sublocale,
    closed_sublocale,
    enumerate_sublocales,
    is_sublocale,
    open_sublocale,
    points_of_sublocale,
    sublocale_join,
    sublocale_meet,
    two_element_sublocales,
)

__version__ = "0.1.0"
