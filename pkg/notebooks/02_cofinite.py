# %% [markdown]
# The cofinite topology on the naturals: the frame is infinite, so the
# verdicts come from closed forms backed by finite certificates.

# %%
from locale_lab.cofinite import (
    BOTTOM,
    cf_absolutely_essential,
    cf_classification,
    cf_essential_primes,
    cf_heyting,
    cf_primes_facts,
    cofin,
    window_oracle,
)

a, b = cofin({1, 2}), cofin({2, 3})
print(cf_heyting(a, b))          # COFIN{3}
print(cf_essential_primes(a))    # the two points missing from a
print(cf_essential_primes(BOTTOM), cf_absolutely_essential(BOTTOM))

# %%
# the window model checks the closed forms against brute force
for m in range(1, 7):
    print(m, all(window_oracle(m).values()))

# %%
facts = cf_primes_facts()
for c in facts.certificates:
    print(f"{c.name:28s} {c.holds}")

# %%
r = cf_classification()
print(r.verdicts)
print({k: str(v) for k, v in r.witnesses.items()})
