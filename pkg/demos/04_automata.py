# %% [markdown]
# # The unambiguous automaton and the sweeping machine
#
# The one-way automaton guesses a vertex i and counts the length modulo m_i.
# The sweeping machine tries the vertices one pass at a time.

# %%
import random
import time

import numpy as np

from unaryufa import automata as au
from unaryufa.residues import desk_instance
from unaryufa.tournament import cyclic_triangle

ms = desk_instance(cyclic_triangle())
ufa = au.build_ufa(ms)
sw = au.build_swdfa(ms)
co = au.build_swdfa(ms, complement=True)
print("UFA states", ufa.n_states, "swDFA states", sw.n_states)

# %%
t0 = time.perf_counter()
print(au.is_unambiguous(ufa), f"{time.perf_counter() - t0:.2f}s")
counts = au.run_counts_window(ufa, 10_000)
print("max runs over [0, 1e4]:", counts.max(), "accepted:", int((counts > 0).sum()))
print("first accepted lengths:", np.flatnonzero(counts)[:12])

# %% [markdown]
# Huge lengths go through repeated squaring of the transition matrix, and the
# sweeping machine jumps over whole sweeps using residues.

# %%
rng = random.Random(0)
big = [rng.randrange(10**30) for _ in range(5)]
print(au.count_accepting_runs_many(ufa, big))
for t in big:
    run = au.run_swdfa(sw, t)
    print(t, run.accepted, run.trace, au.run_swdfa(co, t).accepted)

# %% [markdown]
# Minimal period of the accepted set: every prime except the idle one matters.

# %%
res = au.minimal_period(ms, au.ufa_membership(ms))
print("period", res.period, "primes", [ms.primes[j] for j in res.essential])
print("mismatches", au.check_period(ms, au.ufa_membership(ms), res.period, samples=10_000))
