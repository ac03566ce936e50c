"""Tournaments (orientations of complete graphs) and inbound-covering sets.

A vertex set ``S`` is *inbound-covering* when every vertex outside ``S`` has
at least one edge pointing into ``S``.  The construction downstream needs a
tournament in which every inbound-covering set is larger than some ``k``;
:func:`find_orientation` produces such tournaments and certifies them by
exhaustive search.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

import numpy as np


class TournamentError(ValueError):
    """Raised for malformed tournaments or vertex sets."""


class OrientationNotFound(RuntimeError):
    """Raised when :func:`find_orientation` exhausts its tries."""

    def __init__(self, k: int, n: int, tries: int, best_cover: int):
        self.k = k
        self.n = n
        self.tries = tries
        self.best_cover = best_cover
        super().__init__(
            f"no orientation of K_{n} without inbound-covering sets of size <= {k} "
            f"after {tries} tries (closest miss had a covering set of size {best_cover})"
        )


@dataclass(frozen=True)
class Tournament:
    """Complete oriented graph on vertices ``1..n``.

    ``edges`` holds ``(u, v)`` for every edge oriented towards ``v``.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise TournamentError(f"tournament size must be a positive integer, got {self.n!r}")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise TournamentError(f"edge {(u, v)} has a vertex outside 1..{self.n}")
            if u == v:
                raise TournamentError(f"self-loop at vertex {u}")
            if (v, u) in edges:
                raise TournamentError(f"pair {{{u}, {v}}} is oriented both ways")
        expected = self.n * (self.n - 1) // 2
        if len(edges) != expected:
            raise TournamentError(
                f"{len(edges)} edges recorded, a tournament on {self.n} vertices needs {expected}"
            )

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def R(self, u: int, v: int) -> bool:
        """True iff the edge between ``u`` and ``v`` points towards ``v``."""
        return (u, v) in self.edges

    @cached_property
    def out_masks(self) -> tuple:
        """``out_masks[v]`` has bit ``u`` set iff ``R(v, u)``; index 0 unused."""
        masks = [0] * (self.n + 1)
        for u, v in self.edges:
            masks[u] |= 1 << v
        return tuple(masks)

    def out_neighbours(self, v: int) -> list:
        return sorted(u for u in self.vertices if (v, u) in self.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Tournament":
        return cls(int(data["n"]), frozenset(tuple(e) for e in data["edges"]))

    def to_dot(self, name: str = "tournament") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {v};" for v in self.vertices]
        lines += [f"  {u} -> {v};" for u, v in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


def from_orientation_bits(n: int, bits: Iterable[int]) -> Tournament:
    """Build a tournament from one bit per pair ``u < v`` in lexicographic order.

    Bit 1 orients the pair as ``u -> v``, bit 0 as ``v -> u``.
    """
    pairs = list(combinations(range(1, n + 1), 2))
    bits = list(bits)
    if len(bits) != len(pairs):
        raise TournamentError(f"need {len(pairs)} orientation bits, got {len(bits)}")
    return Tournament(n, frozenset((u, v) if b else (v, u) for (u, v), b in zip(pairs, bits)))


def cyclic_triangle() -> Tournament:
    """The 3-cycle 1 -> 2 -> 3 -> 1."""
    return Tournament(3, frozenset({(1, 2), (2, 3), (3, 1)}))


def transitive_tournament(n: int) -> Tournament:
    """``u -> v`` for every ``u < v``."""
    return Tournament(n, frozenset(combinations(range(1, n + 1), 2)))


def _orientation_bits(n: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=n * (n - 1) // 2).tolist()


def random_orientation(n: int, seed: int) -> Tournament:
    """Orient each edge of ``K_n`` by an independent fair coin.

    The generator is seeded per call, so the same ``(n, seed)`` always gives
    the same tournament.
    """
    if n < 1:
        raise TournamentError(f"tournament size must be positive, got {n}")
    return from_orientation_bits(n, _orientation_bits(n, seed))


def _vertex_mask(t: Tournament, s: Iterable[int]) -> int:
    mask = 0
    for v in s:
        if not isinstance(v, (int, np.integer)) or not 1 <= v <= t.n:
            raise TournamentError(f"vertex {v!r} outside 1..{t.n}")
        mask |= 1 << int(v)
    return mask


def _covers(t: Tournament, mask: int) -> bool:
    return _covers_masks(t.out_masks, t.n, mask)


def _covers_masks(out, n: int, mask: int) -> bool:
    for v in range(1, n + 1):
        if not (mask >> v) & 1 and not out[v] & mask:
            return False
    return True


def _smallest_cover(out, n: int, k: int) -> Optional[int]:
    for size in range(1, k + 1):
        for s in combinations(range(1, n + 1), size):
            if _covers_masks(out, n, sum(1 << v for v in s)):
                return size
    return None


def is_inbound_covering(t: Tournament, s: Iterable[int]) -> bool:
    """True iff every vertex outside ``s`` has an edge oriented into ``s``."""
    return _covers(t, _vertex_mask(t, s))


def smallest_inbound_covering_size(t: Tournament, k: int) -> Optional[int]:
    """Size of the smallest inbound-covering set, if it is at most ``k``.

    Subsets are tried by increasing size, lexicographically within a size.
    Returns ``None`` when no set of size ``1..k`` covers.
    """
    if not 1 <= k <= t.n:
        raise TournamentError(f"limit k={k} must lie in 1..{t.n}")
    return _smallest_cover(t.out_masks, t.n, k)


def covering_threshold(t: Tournament) -> int:
    """Largest ``k`` such that no inbound-covering set has size ``<= k``.

    Exhaustive; 0 means some single vertex already covers.
    """
    size = smallest_inbound_covering_size(t, t.n)
    # the full vertex set always covers, so size is never None here
    return size - 1


def lemma6_bound(k: int) -> int:
    """Vertex count ``3 k^2 2^k`` that suffices for a random orientation."""
    if k < 1:
        raise TournamentError(f"k must be positive, got {k}")
    return 3 * k * k * (1 << k)


def union_bound_log_probability(n: int, k: int) -> float:
    """Natural log of ``n^k exp(-(n - k) / 2^k)``.

    Union bound on the probability that a uniformly random orientation of
    ``K_n`` has an inbound-covering set of size at most ``k``.  A negative
    value means some orientation has none.
    """
    if not n > k >= 1:
        raise TournamentError(f"need n > k >= 1, got n={n}, k={k}")
    return -(n - k) / (1 << k) + k * math.log(n)


def find_orientation(
    k: int,
    n: Optional[int] = None,
    max_tries: int = 100_000,
    seed: int = 0,
) -> Tournament:
    """Search random orientations for one with no inbound-covering set of size <= k.

    Each candidate is checked exhaustively, so a returned tournament is a
    certificate.  Candidate ``j`` uses seed ``seed + j``.

    Raises:
        OrientationNotFound: after ``max_tries`` failures.
    """
    if n is None:
        n = lemma6_bound(k)
    if k > n:
        raise TournamentError(f"k={k} exceeds vertex count {n}")
    pairs = list(combinations(range(1, n + 1), 2))
    best = 0
    for j in range(max_tries):
        bits = _orientation_bits(n, seed + j)
        out = [0] * (n + 1)
        for (u, v), bit in zip(pairs, bits):
            if bit:
                out[u] |= 1 << v
            else:
                out[v] |= 1 << u
        size = _smallest_cover(out, n, k)
        if size is None:
            return from_orientation_bits(n, bits)
        best = max(best, size)
    raise OrientationNotFound(k, n, max_tries, best)
