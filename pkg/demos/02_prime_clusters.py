# %% [markdown]
# # Clusters of primes
#
# The construction wants N primes whose largest/smallest ratio is at most
# 1 + 1/N, all below 4 N^2 ln N. Small N often fails; desk mode instead takes
# the N smallest primes above a floor.

# %%
import numpy as np

from unaryufa import primes

for N in (2, 3, 4, 8, 16, 32):
    lo, hi, width = primes.cluster_interval(N)
    try:
        ps = primes.select_cluster(N)
        print(f"N={N:2d} [{lo:8.1f}, {hi:8.1f}] -> {ps[0]}..{ps[-1]} ratio {ps[-1] / ps[0]:.4f} <= {1 + 1 / N:.4f}")
    except primes.ClusterNotFound as exc:
        print(f"N={N:2d} {exc}")

# %% [markdown]
# Prime density inside the search interval, computed with the numpy sieve.

# %%
N = 16
inside = np.array(primes.interval_primes(N))
gaps = np.diff(inside)
print(f"{len(inside)} primes, mean gap {gaps.mean():.2f}, ln(midpoint) {np.log(inside.mean()):.2f}")

# %% [markdown]
# Desk primes for the two running instances.

# %%
print(primes.select_desk(8, 3).primes)
print(primes.select_desk(128, 7).primes[:10], "...")
