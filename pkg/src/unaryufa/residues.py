"""Moduli built from a tournament and a prime set, and the acceptance predicate.

Vertex ``i`` of the tournament owns the modulus ``m_i``: the product of the
primes ``P_j`` whose index ``j`` has base-``b`` digit 0 at position ``i - 1``.
A length ``t`` is described by its residues modulo every prime, and a residue
vector is *acceptable* for vertex ``i`` when

1. every residue modulo a prime of ``m_i`` is 0 or ``i``;
2. at least one of those residues is nonzero;
3. for every edge ``i -> v`` some prime shared by ``m_i`` and ``m_v`` has
   residue ``i``.

At most one vertex accepts any vector, which is what makes the cycle
automaton built from these moduli unambiguous.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .primes import PrimeSet
from .tournament import Tournament


class AmbiguityError(RuntimeError):
    """Two vertices accept the same residue vector (broken construction)."""


@dataclass(frozen=True)
class ResidueVector:
    """Residues ``r_j`` of one integer modulo each prime ``P_j``."""

    residues: tuple

    def __post_init__(self):
        object.__setattr__(self, "residues", tuple(int(r) for r in self.residues))

    def __len__(self):
        return len(self.residues)

    def __getitem__(self, j):
        return self.residues[j]

    def __iter__(self):
        return iter(self.residues)

    def to_list(self) -> list:
        return list(self.residues)


@dataclass(frozen=True)
class ModuliSystem:
    b: int
    n: int
    primes: PrimeSet
    tournament: Tournament

    def __post_init__(self):
        if self.b < 2:
            raise ValueError(f"base b must be >= 2, got {self.b}")
        if self.tournament.n != self.n:
            raise ValueError(f"tournament has {self.tournament.n} vertices, expected n={self.n}")
        if len(self.primes) != self.b**self.n:
            raise ValueError(f"need N = b^n = {self.b ** self.n} primes, got {len(self.primes)}")
        if self.primes[0] <= self.n:
            raise ValueError(f"smallest prime {self.primes[0]} must exceed n={self.n}")
        N, b = self.N, self.b
        for i in self.tournament.vertices:
            if len(self.modulus_indices[i]) != N // b:
                raise ValueError(f"modulus {i} has {len(self.modulus_indices[i])} primes")
            for j in range(i + 1, self.n + 1):
                if len(self.shared_indices(i, j)) != N // (b * b):
                    raise ValueError(f"moduli {i}, {j} share the wrong number of primes")

    @property
    def N(self) -> int:
        return len(self.primes)

    @cached_property
    def modulus_indices(self) -> tuple:
        """``modulus_indices[i]``: sorted prime indices of ``m_i``; index 0 unused."""
        b, n = self.b, self.n
        out = [()]
        for i in range(1, n + 1):
            step = b ** (i - 1)
            out.append(tuple(j for j in range(self.N) if (j // step) % b == 0))
        return tuple(out)

    @cached_property
    def _index_sets(self) -> tuple:
        return tuple(frozenset(ix) for ix in self.modulus_indices)

    def shared_indices(self, i: int, v: int) -> tuple:
        return tuple(sorted(self._index_sets[i] & self._index_sets[v]))

    @cached_property
    def out_edge_shares(self) -> tuple:
        """Per vertex ``i``: ``(v, shared prime indices)`` for each edge ``i -> v``."""
        t = self.tournament
        out = [()]
        for i in t.vertices:
            out.append(tuple((v, self.shared_indices(i, v)) for v in t.out_neighbours(i)))
        return tuple(out)

    @cached_property
    def idle_indices(self) -> tuple:
        """Indices of primes dividing no modulus (no zero digit at all)."""
        used = set().union(*self._index_sets[1:])
        return tuple(j for j in range(self.N) if j not in used)

    @cached_property
    def prime_product(self) -> int:
        return self.primes.product()

    def check_vertex(self, i: int) -> None:
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise ValueError(f"vertex {i!r} outside 1..{self.n}")

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "n": self.n,
            "primes": list(self.primes),
            "tournament": self.tournament.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def modulus_primes(ms: ModuliSystem, i: int) -> frozenset:
    """Indices ``j`` whose base-``b`` digit at position ``i - 1`` is 0."""
    ms.check_vertex(i)
    return ms._index_sets[i]


def modulus_value(ms: ModuliSystem, i: int) -> int:
    ms.check_vertex(i)
    return math.prod(ms.primes[j] for j in ms.modulus_indices[i])


def residues_of(ms: ModuliSystem, t: int) -> ResidueVector:
    if t < 0:
        raise ValueError(f"length must be nonnegative, got {t}")
    return ResidueVector(tuple(t % p for p in ms.primes))


def _check_vector(ms: ModuliSystem, rv) -> Sequence[int]:
    r = rv.residues if isinstance(rv, ResidueVector) else tuple(rv)
    if len(r) != ms.N:
        raise ValueError(f"residue vector has {len(r)} entries, expected {ms.N}")
    for x, p in zip(r, ms.primes):
        if not 0 <= x < p:
            raise ValueError(f"residue {x} out of range modulo {p}")
    return r


def crt_reconstruct(ms: ModuliSystem, rv) -> int:
    """The unique ``t`` in ``[0, prod P)`` with the given residues."""
    r = _check_vector(ms, rv)
    M = ms.prime_product
    t = 0
    for x, p in zip(r, ms.primes):
        q = M // p
        t += x * q * pow(q, -1, p)
    return t % M


def _acceptable(ms: ModuliSystem, r: Sequence[int], i: int) -> bool:
    nonzero = False
    for j in ms.modulus_indices[i]:
        x = r[j]
        if x == i:
            nonzero = True
        elif x != 0:
            return False
    if not nonzero:
        return False
    for _, shared in ms.out_edge_shares[i]:
        if not any(r[j] == i for j in shared):
            return False
    return True


def acceptable(ms: ModuliSystem, rv, i: int) -> bool:
    """Whether vertex ``i`` accepts the residue vector (conditions 1-3)."""
    ms.check_vertex(i)
    return _acceptable(ms, _check_vector(ms, rv), i)


def accepted_by(ms: ModuliSystem, rv) -> Optional[int]:
    """The vertex accepting ``rv``, or ``None``.

    Raises:
        AmbiguityError: if two vertices accept; the moduli system is broken.
    """
    r = _check_vector(ms, rv)
    found = None
    for i in range(1, ms.n + 1):
        if _acceptable(ms, r, i):
            if found is not None:
                raise AmbiguityError(f"vertices {found} and {i} both accept {list(r)}")
            found = i
    return found


def prime_support(ms: ModuliSystem, m: int) -> frozenset:
    """Indices of the primes dividing ``m``; ``m`` must be squarefree over ``P``."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    support = frozenset(j for j, p in enumerate(ms.primes) if m % p == 0)
    if math.prod(ms.primes[j] for j in support) != m:
        raise ValueError(f"{m} is not a squarefree product of primes from P")
    return support


def subset_product(ms: ModuliSystem, indices) -> int:
    return math.prod(ms.primes[j] for j in indices)


def witness_residues(ms: ModuliSystem, m: int, i: int) -> ResidueVector:
    """Residues of ``m * l`` when ``l`` is chosen to make every free residue ``i``."""
    ms.check_vertex(i)
    support = prime_support(ms, m)
    return ResidueVector(tuple(0 if j in support else i for j in range(ms.N)))


def controlled_edges(ms: ModuliSystem, m: int) -> frozenset:
    """Edges ``(i, j)`` all of whose shared primes divide ``m``."""
    support = prime_support(ms, m)
    out = set()
    for i in ms.tournament.vertices:
        for v, shared in ms.out_edge_shares[i]:
            if support.issuperset(shared):
                out.add((i, v))
    return frozenset(out)


def is_blocking(ms: ModuliSystem, m: int) -> bool:
    """True iff no multiple of ``m`` is accepted by any vertex.

    Only the witness multiple (residue 0 on primes of ``m``, ``i`` elsewhere)
    has to be tried per vertex: any other multiple has the same forced zeros
    and can only do worse on conditions 1-3.
    """
    for i in ms.tournament.vertices:
        if _acceptable(ms, witness_residues(ms, m, i).residues, i):
            return False
    return True


def lemma9_bound(ms: ModuliSystem, k: int) -> int:
    """``floor(N (1 - (1 - 1/b^2)^ceil(k/2)))``: primes a blocking length must use."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return math.floor(ms.N * (1 - Fraction(ms.b * ms.b - 1, ms.b * ms.b) ** ((k + 1) // 2)))


def desk_instance(tournament: Tournament, b: int = 2) -> ModuliSystem:
    """Moduli system over the ``b^n`` smallest primes above ``n``."""
    from .primes import select_desk

    n = tournament.n
    return ModuliSystem(b, n, select_desk(b**n, n), tournament)


def moduli_from_dict(data: dict, mode: Optional[str] = None) -> ModuliSystem:
    primes = data["primes"]
    if isinstance(primes, dict):
        pset = PrimeSet.from_dict(primes)
    else:
        pset = PrimeSet(tuple(primes), mode or "desk")
    return ModuliSystem(
        int(data["b"]), int(data["n"]), pset, Tournament.from_dict(data["tournament"])
    )
