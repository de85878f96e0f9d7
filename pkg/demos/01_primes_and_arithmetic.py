# %% [markdown]
# Primes and arithmetic functions
#
# A prime table is the base object everything else reads from.

# %%
import math

import numpy as np

from dioprime.ntheory import (big_omega, coprime_to_Pz, euler_phi, mobius, phi_reciprocal_sum,
                              primes_in, sieve_primes)

table = sieve_primes(10**6)
print("primes below 10^6:", len(table.primes))
print("primes in (10, 20]:", primes_in(10, 20, table).tolist())

# %%
# phi, mu and Omega on a few values
for n in (12, 30, 96, 105):
    print(n, euler_phi(n), mobius(n), big_omega(n))

# "rough" means no odd prime factor up to z; powers of two always qualify
print(coprime_to_Pz(35, 10), coprime_to_Pz(1024, 10**6), coprime_to_Pz(13 * 17, 10))

# %%
# sum of 1/phi(n) grows like C log X, with C = zeta(2) zeta(3) / zeta(6)
zeta = lambda s: sum(k**-s for k in range(1, 100_000))
C = zeta(2) * zeta(3) / zeta(6)
for e in (3, 4, 5, 6):
    X = 10**e
    print(f"X=1e{e}: ratio {phi_reciprocal_sum(X) / math.log(X):.4f}  (C = {C:.4f})")
