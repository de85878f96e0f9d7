# %% [markdown]
# The parameter chain
#
# Everything is driven by one integer q0.  Watch how z stays tiny at desk
# scale: the sieve only becomes non-trivial once X is around 10^14.

# %%
from dioprime.params import derive_params, validate_scale
from dioprime.rosser import positivity_checks

for q0 in (10, 100, 1000, 10**6):
    p = derive_params(q0)
    print(f"q0={q0:>7}  X={p.X:.3e}  vartheta={p.vartheta:.3e}  tau={p.tau:.3e}  "
          f"H={p.H:.3e}  z={p.z:.3f}  D={p.D:.3e}")
    for w in validate_scale(p):
        print("    warning:", w)

# %%
# beta and the almost-prime bound do not depend on q0
c = positivity_checks(2.948)
print(f"beta = {c['beta']:.7f}, h = {c['h']}, f - 2F/3 = {c['f_minus_two_thirds_F']:.4e}")
print("beta below 1/30:", c["beta_below_one_thirtieth"])
