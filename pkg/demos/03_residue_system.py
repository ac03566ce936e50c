# %% [markdown]
# # Moduli and acceptable residues
#
# Vertex i of the tournament owns the primes whose index has base-b digit
# i-1 equal to 0. A length t is accepted by vertex i when its residues on those
# primes are all 0 or i, at least one is i, and every out-edge i -> v has a
# shared prime where the residue is i.

# %%
import math

from unaryufa import residues as rs
from unaryufa.tournament import cyclic_triangle
from unaryufa.verification import check_cycle_argument, check_lemma8, check_lemma9

ms = rs.desk_instance(cyclic_triangle())
for i in (1, 2, 3):
    print(f"m_{i} = {rs.modulus_value(ms, i)} primes {[ms.primes[j] for j in sorted(rs.modulus_primes(ms, i))]}")
print("idle primes:", [ms.primes[j] for j in ms.idle_indices])

# %%
for t in (0, 1, 2, 3, 6545, ms.prime_product):
    print(t, rs.residues_of(ms, t).to_list(), "->", rs.accepted_by(ms, rs.residues_of(ms, t)))

# %% [markdown]
# No vector is accepted twice: checked exhaustively per oriented pair.

# %%
print(check_lemma8(ms).census["pairs"])

# %% [markdown]
# A cycle length m is blocking when no multiple of m is accepted. Blocking
# lengths must use many primes.

# %%
v = check_lemma9(ms, 1)
print({k: v.census[k] for k in ("blocking", "bound", "min_divisors", "minimal_examples")})
for m in (85, 6545, math.prod(ms.primes)):
    print(m, check_cycle_argument(ms, m))
