# %% [markdown]
# Rosser weights and the vector sieve

# %%
import itertools

from dioprime.ntheory import sieve_primes
from dioprime.rosser import (G_pm, build_weights, lambda_pm, sandwich_violations, sieve_summary,
                             vector_sieve_lower)

table = sieve_primes(1000)

# %%
# at level 100 the upper weights stop at d = 3; the lower ones also keep 5 and 7
w = build_weights(10, 100, table)
print(w.entries)
print("G-, G+ =", G_pm(w))
print("Lambda(35) =", lambda_pm(35, w), " Lambda(3) =", lambda_pm(3, w))

# %%
# the sandwich holds for every divisor of P(z)
for z, D in itertools.product((7, 10, 20, 30), (10, 100, 1000, 10**5)):
    print(z, D, len(build_weights(z, D, table)), "weights,",
          len(sandwich_violations(build_weights(z, D, table))), "violations")

# %%
# density sums bracket F(z) when 2 <= s <= 3
print(sieve_summary(build_weights(30, 30**2.5, table), table).as_dict())

# %%
# the vector-sieve combination never exceeds the product of indicators
print(vector_sieve_lower((1, 1, 1), (1, 1, 1)), vector_sieve_lower((0, 0, 0), (1, 1, 1)))
