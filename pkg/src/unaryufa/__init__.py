"""Unary unambiguous automata with hard-to-complement languages.

Build tournaments without small inbound-covering sets, turn them into moduli
over a set of primes, realise the resulting languages as explicit cycle
UFAs and sweeping DFAs, and check the counting arguments behind the lower
bound, either exhaustively on small instances or in log space at full scale.
"""

from .tournament import (
    Tournament,
    cyclic_triangle,
    find_orientation,
    is_inbound_covering,
    lemma6_bound,
    random_orientation,
    smallest_inbound_covering_size,
    union_bound_log_probability,
)
from .primes import PrimeSet, select_cluster, select_desk, sieve
from .residues import (
    ModuliSystem,
    ResidueVector,
    acceptable,
    accepted_by,
    controlled_edges,
    crt_reconstruct,
    desk_instance,
    is_blocking,
    lemma9_bound,
    modulus_primes,
    modulus_value,
    residues_of,
    witness_residues,
)
from .automata import (
    SweepingDFA,
    UnaryNFA,
    accepts,
    build_swdfa,
    build_ufa,
    complement_accepting_flip,
    count_accepting_runs,
    is_unambiguous,
    minimal_period,
    run_swdfa,
)
from .bundle import InstanceBundle, make_bundle

__version__ = "0.1.0"
