# %% [markdown]
# Walk through one small space: its frame of opens, the primes, the
# sublocale coframe and the three classification suites.

# %%
from locale_lab import (
    boolean_sublocale,
    check_main_diagram,
    enumerate_sublocales,
    frame_from_space,
    primes,
    run_all_suites,
    spatialization,
    spectrum_space,
)
from locale_lab.spaces import FiniteSpace

# three points: a below b and c in the specialization order
X = FiniteSpace.from_sets(["a", "b", "c"], [[], ["b"], ["c"], ["b", "c"], ["a", "b", "c"]])
L = frame_from_space(X)
print(L.n, "opens")
print(L.leq.astype(int))

# %%
# primes are the opens X minus the closure of a point
for p in sorted(primes(L)):
    print(L.label(p))

spec = spectrum_space(L)
print([sorted(spec.sigma(a)) for a in L.elements])

# %%
subs = enumerate_sublocales(L)
print(len(subs), "sublocales")
for S in subs:
    print(sorted(S.members), "spatial" if spatialization(S) == S else "")

# %%
# the Boolean sublocale of a prime has exactly two elements
for p in sorted(primes(L)):
    print(L.label(p), sorted(boolean_sublocale(L, p).members))

# %%
print(check_main_diagram(L, coframe=subs).to_dict()["verdicts"])
for r in run_all_suites(L, coframe=subs):
    print(r.tag, r.agreement, r.all_true)
