# %% [markdown]
# Hunting for prime triples
#
# sqrt(2) p1 - p2 - p3 close to zero, with p1, p2, p3 in (X/2, X].

# %%
import math

from dioprime.hunt import SearchConfig, find_triples, main_term_report
from dioprime.mollifier import Mollifier
from dioprime.ntheory import sieve_primes
from dioprime.rosser import build_weights

X = 2e4
vartheta = X ** (-1 / 12 + 0.05)
table = sieve_primes(int(X) + 2)
cfg = SearchConfig((math.sqrt(2), -1.0, -1.0), 0.0, X, 0.5, vartheta, z=10.0)

hits = find_triples(cfg, table, limit=5)
for h in hits:
    print(h)

# %%
# sharp, smoothed and sieved counts next to the model B W
rep = main_term_report(cfg, table, Mollifier(vartheta), build_weights(10, 1000, table))
for key in ("hits", "Gamma", "Gamma_tilde", "Gamma0", "BW"):
    print(f"{key:>12}: {rep[key]:.6g}")
