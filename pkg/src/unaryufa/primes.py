"""Prime sets for the moduli construction.

Two selection modes exist.  ``cluster`` looks for ``N`` primes below
``4 N^2 ln N`` whose largest/smallest ratio is at most ``1 + 1/N``; this only
succeeds for large enough ``N``.  ``desk`` just takes the ``N`` smallest
primes above a floor, which keeps explicit automata small enough to build.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass

import numpy as np

CLUSTER = "cluster"
DESK = "desk"

# Miller-Rabin with these bases is deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


class ClusterNotFound(RuntimeError):
    """No window of the search interval holds ``N`` primes."""

    def __init__(self, N: int, lo: float, hi: float, census: dict):
        self.N = N
        self.census = census
        super().__init__(
            f"no cluster of {N} primes in [{lo:.1f}, {hi:.1f}]: densest window "
            f"[{census['window_start']}, {census['window_end']:.1f}] holds "
            f"{census['count']} primes ({census['interval_count']} in the whole interval)"
        )


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n`` below ~3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve(limit: int) -> list:
    """All primes ``<= limit`` in increasing order."""
    if limit < 2:
        return []
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).tolist()


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple
    mode: str = DESK

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", primes)
        if self.mode not in (CLUSTER, DESK):
            raise ValueError(f"unknown prime mode {self.mode!r}")
        if not primes:
            raise ValueError("prime set is empty")
        for p in primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError("primes must be strictly increasing")
        if self.mode == CLUSTER:
            violation = cluster_violation(primes)
            if violation:
                raise ValueError(violation)

    def __len__(self):
        return len(self.primes)

    def __getitem__(self, j):
        return self.primes[j]

    def __iter__(self):
        return iter(self.primes)

    def product(self) -> int:
        return math.prod(self.primes)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "primes": list(self.primes)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "PrimeSet":
        return cls(tuple(data["primes"]), data.get("mode", DESK))


def cluster_interval(N: int) -> tuple:
    """``(3 N^2 ln N, 4 N^2 ln N, 3 N ln N)``: search interval and window length."""
    ln = math.log(N)
    return 3 * N * N * ln, 4 * N * N * ln, 3 * N * ln


def cluster_violation(primes) -> str:
    """Empty string if ``primes`` meets the cluster bounds, else the reason."""
    N = len(primes)
    if N < 2:
        return ""
    if primes[-1] * N > primes[0] * (N + 1):
        return f"ratio {primes[-1]}/{primes[0]} exceeds 1 + 1/{N}"
    if primes[-1] > 4 * N * N * math.log(N):
        return f"largest prime {primes[-1]} exceeds 4 N^2 ln N for N={N}"
    return ""


def interval_primes(N: int) -> list:
    lo, hi, _ = cluster_interval(N)
    return [p for p in sieve(math.floor(hi)) if p >= lo]


def select_cluster(N: int) -> PrimeSet:
    """Pick ``N`` primes from the densest window of length ``3 N ln N``.

    Windows start at each prime of ``[3 N^2 ln N, 4 N^2 ln N]`` and are
    clipped to the interval; the lowest window wins ties.  The first ``N``
    primes of the winning window are returned.

    Raises:
        ClusterNotFound: if no window holds ``N`` primes.
    """
    if N < 2:
        raise ValueError(f"cluster selection needs N >= 2, got {N}")
    lo, hi, width = cluster_interval(N)
    ps = interval_primes(N)
    best_start, best_count = 0, 0
    for a, p in enumerate(ps):
        count = bisect.bisect_right(ps, p + width) - a
        if count > best_count:
            best_start, best_count = a, count
    if best_count < N:
        census = {
            "window_start": ps[best_start] if ps else math.ceil(lo),
            "window_end": (ps[best_start] if ps else lo) + width,
            "count": best_count,
            "interval_count": len(ps),
        }
        raise ClusterNotFound(N, lo, hi, census)
    return PrimeSet(tuple(ps[best_start : best_start + N]), CLUSTER)


def select_desk(N: int, floor: int) -> PrimeSet:
    """The ``N`` smallest primes strictly greater than ``floor``."""
    if N < 1 or floor < 1:
        raise ValueError(f"need N >= 1 and floor >= 1, got N={N}, floor={floor}")
    # primes near x are ~ln x apart; grow the limit until enough are found
    limit = max(16, floor + 2 * N * max(2, math.ceil(math.log(floor + N + 2))))
    while True:
        found = [p for p in sieve(limit) if p > floor]
        if len(found) >= N:
            return PrimeSet(tuple(found[:N]), DESK)
        limit *= 2
