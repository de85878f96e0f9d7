# %% [markdown]
# Exponential sums at a fixed X

# %%
import math

import numpy as np

from dioprime.expsum import (B_eval, ExpSumContext, J1_eval, L_pm, gamma1_major, main_term_ratio,
                             tail_diagnostic)
from dioprime.mollifier import Mollifier
from dioprime.ntheory import sieve_primes
from dioprime.rosser import build_weights, trivial_weights

table = sieve_primes(10**6)

# %%
# at t = 0 the weighted prime sum matches (1 - lambda0) X G to within a percent
ctx = ExpSumContext.build(1e6, 0.5, build_weights(10, 1000, table), table)
print("L(0) / main term:", main_term_ratio(ctx, "+"))

# %%
# with only d = 1 and a wide integration range, the circle-method integral
# counts smoothed prime triples exactly
lam = (math.sqrt(2), -1.0, -1.0)
small = ExpSumContext.build(250, 0.5, trivial_weights(), table)
m = Mollifier(1.0, 10)
r = gamma1_major(small, m, lam, 0.0, tau=80.0)
print("integral:", r.value, "+-", r.error)
print("tail beyond 80 at most:", tail_diagnostic(m, 80.0, float(np.sum(small.logp))))

# %%
# J1 against B G- G+^2
X = 1000.0
ctx = ExpSumContext.build(X, 0.5, build_weights(10, 100, table), table)
m = Mollifier(0.5, 10)
J = J1_eval(ctx, m, lam, 0.0, tau=0.5)
B = B_eval(m, lam, 0.0, X, 0.5)
print("J1 =", J.value, " B G-G+^2 =", B.value * ctx.G["-"] * ctx.G["+"] ** 2)
