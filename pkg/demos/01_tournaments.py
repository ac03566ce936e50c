# %% [markdown]
# # Tournaments without small inbound-covering sets
#
# A set S of vertices is inbound-covering when every vertex outside S has an
# edge pointing into S. We want orientations where every such set is large.

# %%
from itertools import product

from unaryufa import tournament as tt

tri = tt.cyclic_triangle()
print("3-cycle edges:", sorted(tri.edges))
print("{2} covers?", tt.is_inbound_covering(tri, {2}))
print("{1, 2} covers?", tt.is_inbound_covering(tri, {1, 2}))
print("smallest cover of size <= 2:", tt.smallest_inbound_covering_size(tri, 2))

# %% [markdown]
# Of the 8 orientations of a triangle, how many have no single-vertex cover?
# And does any avoid covers of size 2?

# %%
good1 = good2 = 0
for bits in product((0, 1), repeat=3):
    t = tt.from_orientation_bits(3, bits)
    good1 += tt.smallest_inbound_covering_size(t, 1) is None
    good2 += tt.smallest_inbound_covering_size(t, 2) is None
print(f"k=1: {good1} of 8 qualify, k=2: {good2} of 8 qualify")

# %% [markdown]
# Random search with exhaustive certification. For k=2 roughly one orientation
# of K_7 in nine thousand qualifies, so the search needs many tries.

# %%
t7 = tt.find_orientation(2, 7)
print("K_7 threshold:", tt.covering_threshold(t7))
print(t7.to_dot())

# %% [markdown]
# At the vertex count 3 k^2 2^k the union bound on a bad random orientation
# is already negative, so a good orientation exists.

# %%
for k in (2, 4, 8, 12):
    n = tt.lemma6_bound(k)
    print(f"k={k:2d} n={n:>9d} ln P(bad) <= {tt.union_bound_log_probability(n, k):10.1f}")
