# %% [markdown]
# A smoothed indicator and its transform

# %%
import numpy as np

from dioprime.mollifier import Mollifier

m = Mollifier(vartheta=0.01, k=10)
y = np.array([0.0, 0.0075, 0.008, 0.009, 0.0099, 0.01])
print(np.c_[y / m.vartheta, m.theta(y)])

# %%
# the transform is a product of sinc factors and respects the three-term bound
x = np.logspace(-2, 3, 8) / m.vartheta
print(np.c_[x * m.vartheta, np.abs(m.theta_hat(x)), m.bound(x)])
print("bound holds:", bool(np.all(m.check_bound(np.logspace(-4, 4, 10_000) / m.vartheta))))

# %%
# the power-law term only beats 1/(pi x) once 4k/(pi x vartheta) < 1
for k in (2, 5, 10, 20):
    x = 4 * k / (np.pi * m.vartheta)
    print(k, "crossover near x*vartheta =", round(x * m.vartheta, 2))
