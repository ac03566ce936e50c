"""Explicit unary automata: the cycle UFA, the sweeping DFA, and evaluators.

Lengths are Python integers of any size.  Two evaluators exist for one-way
automata and are meant to be played against each other: step-by-step
successor stepping, and exponentiation of the transition matrix by repeated
squaring.  Run counts live in the saturating semiring ``{0, 1, 2}`` where 2
stands for "two or more".
"""

from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .residues import ModuliSystem, accepted_by, modulus_value

MANY = 2
STEP_LIMIT = 10**6
DENSE_LIMIT = 256

LETTER = "a"
LEFT_END = "|-"
RIGHT_END = "-|"
SYMBOLS = (LETTER, LEFT_END, RIGHT_END)


class CapExceeded(ValueError):
    """The explicit automaton would have more states than allowed."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(f"automaton needs {required} states, cap is {cap}")


class MalformedMachine(ValueError):
    """A sweeping machine broke determinism, sweeping or termination."""


class ProductTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# one-way automata


@dataclass(frozen=True, eq=False)
class UnaryNFA:
    """One-way automaton over a one-letter alphabet.

    ``transitions`` is a set of ``(source, target)`` pairs; the letter is
    implicit.
    """

    n_states: int
    initial: int
    accepting: frozenset
    transitions: frozenset
    labels: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(int(q) for q in self.accepting))
        object.__setattr__(
            self, "transitions", frozenset((int(s), int(t)) for s, t in self.transitions)
        )
        if self.n_states < 1:
            raise ValueError("an automaton needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"initial state {self.initial} out of range")
        for q in self.accepting:
            if not 0 <= q < self.n_states:
                raise ValueError(f"accepting state {q} out of range")
        for s, t in self.transitions:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise ValueError(f"transition {(s, t)} out of range")

    @cached_property
    def successors(self) -> tuple:
        succ = [[] for _ in range(self.n_states)]
        for s, t in sorted(self.transitions):
            succ[s].append(t)
        return tuple(tuple(x) for x in succ)

    @cached_property
    def accepting_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_states, dtype=bool)
        mask[list(self.accepting)] = True
        return mask

    def is_deterministic(self) -> bool:
        return all(len(s) <= 1 for s in self.successors)

    def is_complete(self) -> bool:
        return all(len(s) >= 1 for s in self.successors)

    @cached_property
    def _matrix(self):
        pairs = np.array(sorted(self.transitions), dtype=np.int64).reshape(-1, 2)
        src, dst = pairs[:, 0], pairs[:, 1]
        s = self.n_states
        if s <= DENSE_LIMIT:
            M = np.zeros((s, s))
            M[src, dst] = 1.0
            return M
        return sp.csr_matrix((np.ones(len(src)), (src, dst)), shape=(s, s))

    @cached_property
    def _powers(self) -> list:
        # _powers[j] is the saturated transition matrix raised to 2**j
        return [self._matrix]

    def power(self, j: int):
        while len(self._powers) <= j:
            P = self._powers[-1]
            self._powers.append(_saturate(P @ P))
        return self._powers[j]

    def to_dict(self) -> dict:
        return {
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [list(e) for e in sorted(self.transitions)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "UnaryNFA":
        return cls(
            int(data["states"]),
            int(data["initial"]),
            frozenset(data["accepting"]),
            frozenset(tuple(e) for e in data["transitions"]),
        )

    def to_dot(self, node_cap: int = 2000) -> str:
        if self.n_states > node_cap:
            raise CapExceeded(self.n_states, node_cap)
        lines = ["digraph ufa {", "  rankdir=LR;", "  start [shape=point];"]
        for q in range(self.n_states):
            shape = "doublecircle" if q in self.accepting else "circle"
            name = self.labels[q] if self.labels else q
            lines.append(f'  {q} [shape={shape}, label="{name}"];')
        lines.append(f"  start -> {self.initial};")
        lines += [f"  {s} -> {t};" for s, t in sorted(self.transitions)]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _saturate(X):
    if sp.issparse(X):
        X = X.tocsr()
        np.minimum(X.data, MANY, out=X.data)
        X.eliminate_zeros()
        return X
    if X.dtype == object:
        return X
    return np.minimum(X, MANY)


def _check_length(length) -> int:
    if isinstance(length, bool) or not isinstance(length, (int, np.integer)):
        raise TypeError(f"length must be an integer, got {length!r}")
    if length < 0:
        raise ValueError(f"length must be nonnegative, got {length}")
    return int(length)


def _count_by_stepping(nfa: UnaryNFA, length: int) -> int:
    frontier = {nfa.initial: 1}
    succ = nfa.successors
    for _ in range(length):
        nxt: dict = {}
        for s, c in frontier.items():
            for t in succ[s]:
                nxt[t] = min(nxt.get(t, 0) + c, MANY)
        frontier = nxt
        if not frontier:
            return 0
    return min(sum(c for s, c in frontier.items() if s in nfa.accepting), MANY)


def _exact_power_count(nfa: UnaryNFA, length: int) -> int:
    if nfa.n_states > DENSE_LIMIT:
        raise ValueError("exact run counting is only available for small automata")
    M = np.zeros((nfa.n_states, nfa.n_states), dtype=object)
    M[:, :] = 0
    for s, t in nfa.transitions:
        M[s, t] = 1
    v = np.zeros(nfa.n_states, dtype=object)
    v[:] = 0
    v[nfa.initial] = 1
    while length:
        if length & 1:
            v = v.dot(M)
        M = M.dot(M)
        length >>= 1
    return int(sum(v[q] for q in nfa.accepting))


def count_accepting_runs_many(nfa: UnaryNFA, lengths: Sequence[int]) -> np.ndarray:
    """Saturated accepting-run counts for many lengths by matrix powers.

    All lengths share the cached powers ``M^(2^j)``; the row vectors of the
    batch are advanced together, one squaring level at a time.
    """
    lengths = [_check_length(x) for x in lengths]
    if not lengths:
        return np.zeros(0, dtype=np.int8)
    B, s = len(lengths), nfa.n_states
    bits = max(x.bit_length() for x in lengths)
    sparse = s > DENSE_LIMIT
    if sparse:
        V = sp.csr_matrix((np.ones(B), (np.arange(B), np.full(B, nfa.initial))), shape=(B, s))
    else:
        V = np.zeros((B, s))
        V[:, nfa.initial] = 1.0
    for j in range(bits):
        mask = np.array([(x >> j) & 1 for x in lengths], dtype=bool)
        if not mask.any():
            continue
        P = nfa.power(j)
        if sparse:
            D = sp.diags(mask.astype(float))
            V = _saturate(D @ V @ P + sp.diags((~mask).astype(float)) @ V)
        else:
            V[mask] = _saturate(V[mask] @ P)
    acc = np.array(sorted(nfa.accepting), dtype=np.int64)
    if len(acc) == 0:
        return np.zeros(B, dtype=np.int8)
    tot = V[:, acc].sum(axis=1)
    tot = np.asarray(tot).ravel()
    return np.minimum(tot, MANY).astype(np.int8)


def count_accepting_runs(nfa: UnaryNFA, length: int, method: str = "power", exact: bool = False) -> int:
    """Number of accepting runs of the given length, saturated at 2.

    ``method`` is ``"power"`` (repeated squaring) or ``"step"``.  With
    ``exact=True`` the count is an unsaturated big integer (small automata
    only).
    """
    length = _check_length(length)
    if exact:
        return _exact_power_count(nfa, length)
    if method == "step":
        return _count_by_stepping(nfa, length)
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    return int(count_accepting_runs_many(nfa, [length])[0])


def accepts(nfa: UnaryNFA, length: int, method: str = "auto") -> bool:
    """Whether some run of the given length ends in an accepting state.

    ``auto`` steps through lengths up to ``STEP_LIMIT`` and switches to
    matrix powers above it.
    """
    length = _check_length(length)
    if method == "auto":
        method = "step" if length <= STEP_LIMIT else "power"
    return count_accepting_runs(nfa, length, method=method) > 0


def run_counts_window(nfa: UnaryNFA, max_length: int) -> np.ndarray:
    """Saturated run counts for every length ``0..max_length`` by stepping."""
    M = nfa._matrix
    Mt = M.T.tocsr() if sp.issparse(M) else np.ascontiguousarray(M.T)
    acc = nfa.accepting_mask
    v = np.zeros(nfa.n_states)
    v[nfa.initial] = 1.0
    out = np.empty(max_length + 1, dtype=np.int8)
    for t in range(max_length + 1):
        out[t] = min(v[acc].sum(), MANY)
        v = np.minimum(Mt @ v, MANY)
    return out


# ---------------------------------------------------------------------------
# ambiguity


class AmbiguityVerdict(NamedTuple):
    unambiguous: bool
    witness: Optional[int]
    method: str


def _branch_shape(nfa: UnaryNFA) -> bool:
    """Initial state has no incoming edges and every other state at most one successor."""
    if any(t == nfa.initial for _, t in nfa.transitions):
        return False
    return all(len(s) <= 1 for q, s in enumerate(nfa.successors) if q != nfa.initial)


def _orbit(nfa: UnaryNFA, s: int):
    """``(sequence, tail_length, cycle_length)``; cycle length 0 if the path dies."""
    seq, pos = [], {}
    q = s
    while q not in pos:
        pos[q] = len(seq)
        seq.append(q)
        nxt = nfa.successors[q]
        if not nxt:
            return seq, len(seq), 0
        q = nxt[0]
    mu = pos[q]
    return seq, mu, len(seq) - mu


def _crt_pair(a1: int, n1: int, a2: int, n2: int) -> int:
    g = math.gcd(n1, n2)
    l = n1 // g * n2
    # solve a1 + n1 x = a2 (mod n2)
    x = ((a2 - a1) // g) * pow(n1 // g, -1, n2 // g) % (n2 // g)
    return (a1 + n1 * x) % l


def _orbit_pair_witness(nfa: UnaryNFA, o1, o2) -> Optional[int]:
    (s1, mu1, lam1), (s2, mu2, lam2) = o1, o2
    acc = nfa.accepting

    def at(seq, mu, lam, t):
        if t < mu:
            return seq[t]
        if lam == 0:
            return None
        return seq[mu + (t - mu) % lam]

    t0 = max(mu1, mu2)
    for t in range(t0):
        a, b = at(s1, mu1, lam1, t), at(s2, mu2, lam2, t)
        if a is None or b is None:
            return None
        if a in acc and b in acc:
            return t
    if lam1 == 0 or lam2 == 0:
        return None
    g = math.gcd(lam1, lam2)
    classes = {}
    for x in range(lam1):
        if s1[mu1 + x] in acc:
            classes.setdefault((mu1 + x) % g, x)
    for y in range(lam2):
        if s2[mu2 + y] in acc and (mu2 + y) % g in classes:
            x = classes[(mu2 + y) % g]
            t = _crt_pair(mu1 + x, lam1, mu2 + y, lam2)
            l = lam1 // g * lam2
            if t < t0:
                t += l * (-(-(t0 - t) // l))
            return t
    return None


def _ambiguity_by_orbits(nfa: UnaryNFA) -> AmbiguityVerdict:
    # After the first letter each run is fixed by its first successor, so the
    # product automaton splits into orbits of pairs of rho-shaped paths.
    firsts = nfa.successors[nfa.initial]
    orbits = {s: _orbit(nfa, s) for s in firsts}
    best = None
    for a in range(len(firsts)):
        for c in range(a + 1, len(firsts)):
            t = _orbit_pair_witness(nfa, orbits[firsts[a]], orbits[firsts[c]])
            if t is not None and (best is None or t + 1 < best):
                best = t + 1
    if best is None:
        return AmbiguityVerdict(True, None, "orbits")
    return AmbiguityVerdict(False, best, "orbits")


def _ambiguity_by_product(nfa: UnaryNFA, pair_limit: int) -> AmbiguityVerdict:
    succ = nfa.successors
    start = (nfa.initial, nfa.initial)
    dist = {start: 0}
    preds: dict = {}
    queue = deque([start])
    while queue:
        p, q = pair = queue.popleft()
        for p2 in succ[p]:
            for q2 in succ[q]:
                nxt = (p2, q2)
                preds.setdefault(nxt, []).append(pair)
                if nxt not in dist:
                    if len(dist) >= pair_limit:
                        raise ProductTooLarge(f"more than {pair_limit} reachable state pairs")
                    dist[nxt] = dist[pair] + 1
                    queue.append(nxt)
    acc = nfa.accepting
    back = {pr: 0 for pr in dist if pr[0] in acc and pr[1] in acc}
    queue = deque(back)
    while queue:
        pair = queue.popleft()
        for pr in preds.get(pair, ()):
            if pr not in back:
                back[pr] = back[pair] + 1
                queue.append(pr)
    best = None
    for (p, q), d in dist.items():
        if p != q and (p, q) in back:
            w = d + back[(p, q)]
            if best is None or w < best:
                best = w
    if best is None:
        return AmbiguityVerdict(True, None, "product")
    return AmbiguityVerdict(False, best, "product")


def is_unambiguous(nfa: UnaryNFA, method: str = "auto", pair_limit: int = 5_000_000) -> AmbiguityVerdict:
    """Decide whether every length has at most one accepting run.

    Works on the self-product automaton: the automaton is ambiguous iff an
    off-diagonal state pair is reachable from ``(initial, initial)`` and can
    reach an accepting pair.  ``"product"`` explores pairs explicitly;
    ``"orbits"`` needs the branch-then-deterministic shape of the cycle UFA
    and resolves each pair orbit arithmetically.  The witness is a length with
    two accepting runs (shortest for ``"product"``).
    """
    if method == "auto":
        method = "orbits" if _branch_shape(nfa) else "product"
    if method == "orbits":
        if not _branch_shape(nfa):
            raise ValueError("orbit method needs an initial branch followed by deterministic paths")
        return _ambiguity_by_orbits(nfa)
    if method == "product":
        return _ambiguity_by_product(nfa, pair_limit)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# the cycle UFA


def accepting_residue_table(ms: ModuliSystem, i: int) -> np.ndarray:
    """Boolean array over ``r in 0..m_i-1``: is residue ``r`` acceptable for ``i``?

    Only the primes of ``m_i`` are consulted; the others never influence
    vertex ``i``.
    """
    m = modulus_value(ms, i)
    r = np.arange(m, dtype=np.int64)
    res = {j: r % ms.primes[j] for j in ms.modulus_indices[i]}
    ok = np.ones(m, dtype=bool)
    some = np.zeros(m, dtype=bool)
    for x in res.values():
        ok &= (x == 0) | (x == i)
        some |= x == i
    ok &= some
    for _, shared in ms.out_edge_shares[i]:
        hit = np.zeros(m, dtype=bool)
        for j in shared:
            hit |= res[j] == i
        ok &= hit
    return ok


def ufa_size(ms: ModuliSystem) -> int:
    return 1 + sum(modulus_value(ms, i) for i in ms.tournament.vertices)


def build_ufa(ms: ModuliSystem, state_cap: int = 10**6) -> UnaryNFA:
    """The cycle automaton: guess a vertex, then count the length modulo ``m_i``.

    State 0 is the initial state; ``(i, r)`` sits at index ``offset_i + r``.
    Reading the first letter enters cycle ``i`` at residue 1.
    """
    need = ufa_size(ms)
    if need > state_cap:
        raise CapExceeded(need, state_cap)
    transitions = set()
    accepting = []
    labels = [("start",)]
    offset = 1
    for i in ms.tournament.vertices:
        m = modulus_value(ms, i)
        table = accepting_residue_table(ms, i)
        transitions.add((0, offset + 1 % m))
        for r in range(m):
            transitions.add((offset + r, offset + (r + 1) % m))
            labels.append((i, r))
        accepting.extend((offset + np.flatnonzero(table)).tolist())
        offset += m
    return UnaryNFA(need, 0, frozenset(accepting), frozenset(transitions), tuple(labels))


def ufa_member(ms: ModuliSystem, length: int) -> Optional[int]:
    """Accepting vertex for ``length`` straight from the residue predicate."""
    length = _check_length(length)
    return accepted_by(ms, tuple(length % p for p in ms.primes))


# ---------------------------------------------------------------------------
# sweeping automata


@dataclass(frozen=True, eq=False)
class SweepingDFA:
    """Deterministic two-way automaton that reverses only at the end markers.

    ``transitions`` maps ``(state, symbol)`` to ``(target, move)`` with move in
    ``{+1, -1, 0}``; a move of 0 ends the run.  The head starts on position 1
    (the first letter, or the right marker of the empty word).
    """

    n_states: int
    initial: int
    accepting: frozenset
    transitions: dict
    directions: tuple
    passes: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "transitions", MappingProxyType(dict(self.transitions)))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        self.validate()

    def validate(self) -> None:
        s = self.n_states
        if len(self.directions) != s or len(self.passes) != s:
            raise MalformedMachine("per-state direction/pass tables have the wrong length")
        if not 0 <= self.initial < s:
            raise MalformedMachine("initial state out of range")
        for (q, sym), (t, move) in self.transitions.items():
            if sym not in SYMBOLS:
                raise MalformedMachine(f"unknown symbol {sym!r}")
            if not (0 <= q < s and 0 <= t < s):
                raise MalformedMachine(f"transition {(q, sym)} -> {t} out of range")
            if move not in (-1, 0, 1):
                raise MalformedMachine(f"bad move {move}")
            if move == 0:
                continue
            if sym == LETTER and (move != self.directions[q] or self.directions[t] != move):
                raise MalformedMachine(f"state {q} reverses direction inside the word")
            if sym == LEFT_END and move != 1:
                raise MalformedMachine(f"state {q} moves left off the left marker")
            if sym == RIGHT_END and move != -1:
                raise MalformedMachine(f"state {q} moves right off the right marker")

    @cached_property
    def residues(self) -> tuple:
        """Counter residue of each state, ``None`` for non-counting states."""
        if not self.labels:
            return (None,) * self.n_states
        return tuple(lab[2] if lab[0] == "count" else None for lab in self.labels)

    @cached_property
    def _tables(self):
        nxt = np.full((self.n_states, 3), -1, dtype=np.int64)
        mv = np.full((self.n_states, 3), 9, dtype=np.int64)
        for (q, sym), (t, move) in self.transitions.items():
            c = SYMBOLS.index(sym)
            nxt[q, c] = t
            mv[q, c] = move
        return nxt, mv

    @cached_property
    def _letter_orbits(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "passes": list(self.passes),
            "directions": list(self.directions),
            "transitions": [
                [q, sym, t, move] for (q, sym), (t, move) in sorted(self.transitions.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class SweepRun(NamedTuple):
    accepted: bool
    trace: tuple  # (pass index, residue or state) each time the right marker is read


def swdfa_size(ms: ModuliSystem) -> int:
    return sum(modulus_value(ms, i) for i in ms.tournament.vertices) + ms.n + 1


def build_swdfa(ms: ModuliSystem, complement: bool = False, state_cap: int = 10**6) -> SweepingDFA:
    """Pass ``i`` counts the length modulo ``m_i`` left to right.

    At the right marker an acceptable residue halts the machine (accepting
    unless ``complement``); otherwise a return state walks back to the left
    marker and pass ``i + 1`` begins.  After pass ``n`` the machine halts with
    the opposite verdict.  States: ``sum m_i`` counters, ``n - 1`` return
    states, two halting states.
    """
    need = swdfa_size(ms)
    if need > state_cap:
        raise CapExceeded(need, state_cap)
    n = ms.n
    mods = [modulus_value(ms, i) for i in range(1, n + 1)]
    offsets = [0]
    for m in mods:
        offsets.append(offsets[-1] + m)
    back0 = offsets[-1]
    found, exhausted = back0 + n - 1, back0 + n
    directions, passes, labels = [], [], []
    T = {}
    for i in range(1, n + 1):
        m, off = mods[i - 1], offsets[i - 1]
        table = accepting_residue_table(ms, i)
        for r in range(m):
            q = off + r
            directions.append(1)
            passes.append(i)
            labels.append(("count", i, r))
            T[(q, LETTER)] = (off + (r + 1) % m, 1)
            if table[r]:
                T[(q, RIGHT_END)] = (found, 0)
            elif i < n:
                T[(q, RIGHT_END)] = (back0 + i - 1, -1)
            else:
                T[(q, RIGHT_END)] = (exhausted, 0)
    for i in range(1, n):
        q = back0 + i - 1
        directions.append(-1)
        passes.append(i)
        labels.append(("return", i))
        T[(q, LETTER)] = (q, -1)
        T[(q, LEFT_END)] = (offsets[i], 1)
    directions += [0, 0]
    passes += [0, 0]
    labels += [("halt", "found"), ("halt", "exhausted")]
    accepting = {exhausted} if complement else {found}
    return SweepingDFA(need, 0, frozenset(accepting), T, tuple(directions), tuple(passes), tuple(labels))


def _symbol_at(pos: int, length: int) -> str:
    if pos == 0:
        return LEFT_END
    if pos == length + 1:
        return RIGHT_END
    return LETTER


def _trace_item(sw: SweepingDFA, q: int):
    r = sw.residues[q]
    return (sw.passes[q], q if r is None else r)


def _run_direct(sw: SweepingDFA, length: int) -> SweepRun:
    q, pos = sw.initial, 1
    trace = []
    budget = sw.n_states * (length + 2) + 1
    for _ in range(budget):
        sym = _symbol_at(pos, length)
        if sym == RIGHT_END:
            trace.append(_trace_item(sw, q))
        try:
            t, move = sw.transitions[(q, sym)]
        except KeyError:
            raise MalformedMachine(f"no transition for state {q} on {sym!r}") from None
        q = t
        if move == 0:
            return SweepRun(q in sw.accepting, tuple(trace))
        pos += move
    raise MalformedMachine(f"run on length {length} does not terminate")


def _letter_orbit(sw: SweepingDFA, start: int):
    """``(sequence, tail, cycle, stop)`` of the letter-transition path from ``start``."""
    cache = sw._letter_orbits
    if start not in cache:
        seq, pos = [], {}
        stop = None
        q = start
        while q not in pos:
            pos[q] = len(seq)
            seq.append(q)
            tr = sw.transitions.get((q, LETTER))
            if tr is None:
                stop = ("missing", q)
                break
            if tr[1] == 0:
                stop = ("halt", tr[0])
                break
            q = tr[0]
        if stop is None:
            mu = pos[q]
            cache[start] = (seq, mu, len(seq) - mu, None)
        else:
            cache[start] = (seq, len(seq), 0, stop)
    return cache[start]


def _jump(sw: SweepingDFA, q: int, steps: int):
    """State after ``steps`` letter moves from ``q``; ``("halt", state)`` if the run stops."""
    seq, mu, lam, stop = _letter_orbit(sw, q)
    if lam:
        return ("move", seq[steps] if steps < mu else seq[mu + (steps - mu) % lam])
    if steps < len(seq):
        return ("move", seq[steps])
    kind, target = stop
    if kind == "missing":
        raise MalformedMachine(f"no letter transition for state {target}")
    return ("halt", target)


def _run_by_residues(sw: SweepingDFA, length: int) -> SweepRun:
    q, pos = sw.initial, 1
    trace = []
    seen = set()
    while True:
        if pos in (0, length + 1):
            key = (q, pos == 0)
            if key in seen:
                raise MalformedMachine(f"run on length {length} does not terminate")
            seen.add(key)
            sym = _symbol_at(pos, length)
            if sym == RIGHT_END:
                trace.append(_trace_item(sw, q))
            tr = sw.transitions.get((q, sym))
            if tr is None:
                raise MalformedMachine(f"no transition for state {q} on {sym!r}")
            q, move = tr
            if move == 0:
                return SweepRun(q in sw.accepting, tuple(trace))
            pos += move
            continue
        d = sw.directions[q]
        if d == 0:
            tr = sw.transitions.get((q, LETTER))
            if tr is None or tr[1] != 0:
                raise MalformedMachine(f"non-moving state {q} on a letter without a halting transition")
            return SweepRun(tr[0] in sw.accepting, tuple(trace))
        steps = length - pos + 1 if d == 1 else pos
        kind, q = _jump(sw, q, steps)
        if kind == "halt":
            return SweepRun(q in sw.accepting, tuple(trace))
        pos = length + 1 if d == 1 else 0


def run_swdfa(sw: SweepingDFA, length: int, mode: str = "auto", direct_cap: int = 10**5) -> SweepRun:
    """Run the sweeping machine on the word of the given length.

    ``"direct"`` moves the head cell by cell; ``"residue"`` jumps over each
    sweep with the letter-transition orbit of the current state, which is what
    makes astronomically long words tractable.
    """
    length = _check_length(length)
    if mode == "auto":
        mode = "direct" if length <= direct_cap else "residue"
    if mode == "direct":
        return _run_direct(sw, length)
    if mode == "residue":
        return _run_by_residues(sw, length)
    raise ValueError(f"unknown mode {mode!r}")


def run_swdfa_direct_batch(sw: SweepingDFA, lengths: Sequence[int]) -> np.ndarray:
    """Cell-by-cell simulation of many (native-size) lengths in lockstep."""
    nxt, mv = sw._tables
    L = np.asarray(lengths, dtype=np.int64)
    q = np.full(len(L), sw.initial, dtype=np.int64)
    pos = np.ones(len(L), dtype=np.int64)
    live = np.ones(len(L), dtype=bool)
    budget = sw.n_states * (int(L.max(initial=0)) + 2) + 1
    for _ in range(budget):
        if not live.any():
            break
        idx = np.flatnonzero(live)
        p = pos[idx]
        sym = np.where(p == 0, 1, np.where(p == L[idx] + 1, 2, 0))
        t = nxt[q[idx], sym]
        m = mv[q[idx], sym]
        if (t < 0).any():
            raise MalformedMachine("missing transition reached")
        q[idx] = t
        pos[idx] = p + m
        live[idx[m == 0]] = False
    else:
        raise MalformedMachine("batch run does not terminate")
    acc = np.zeros(sw.n_states, dtype=bool)
    acc[list(sw.accepting)] = True
    return acc[q]


# ---------------------------------------------------------------------------
# complement by flipping


def complement_accepting_flip(machine):
    """Swap accepting and rejecting states of a deterministic complete machine."""
    if isinstance(machine, UnaryNFA):
        if not (machine.is_deterministic() and machine.is_complete()):
            raise ValueError("flipping accepting states is only sound for complete deterministic automata")
        rest = frozenset(range(machine.n_states)) - machine.accepting
        return UnaryNFA(machine.n_states, machine.initial, rest, machine.transitions, machine.labels)
    if isinstance(machine, SweepingDFA):
        rest = frozenset(range(machine.n_states)) - machine.accepting
        return SweepingDFA(
            machine.n_states,
            machine.initial,
            rest,
            dict(machine.transitions),
            machine.directions,
            machine.passes,
            machine.labels,
        )
    raise TypeError(f"cannot complement {type(machine).__name__}")


# ---------------------------------------------------------------------------
# minimal period of residue-defined languages


class PeriodResult(NamedTuple):
    preperiod: int
    period: int
    essential: tuple  # prime indices kept in the period
    witnesses: dict  # index -> (residue vector, replacement value) changing membership


def structured_residue_sampler(ms: ModuliSystem) -> Callable[[random.Random], tuple]:
    """Residue vectors biased towards the few values that matter.

    Mixes two-level vectors (each residue 0 or a common value ``v`` in
    ``1..n``), vectors of small values, and uniformly random vectors.
    Uniform vectors alone almost never land in an accepting class.
    """
    primes, n = ms.primes.primes, ms.n

    def sample(rng: random.Random) -> tuple:
        u = rng.random()
        if u < 0.6:
            v = rng.randint(1, n)
            dens = rng.random()
            r = [v if rng.random() < dens else 0 for _ in primes]
            if rng.random() < 0.3:
                j = rng.randrange(len(primes))
                r[j] = rng.randint(0, n)
            return tuple(r)
        if u < 0.9:
            return tuple(rng.randint(0, n) for _ in primes)
        return tuple(rng.randrange(p) for p in primes)

    return sample


def minimal_period(
    ms: ModuliSystem,
    membership: Callable[[tuple], bool],
    trials: int = 4000,
    seed: int = 0,
    sampler: Optional[Callable[[random.Random], tuple]] = None,
) -> PeriodResult:
    """Smallest squarefree ``d | prod P`` with membership invariant under ``t -> t + d``.

    Invariance under ``d`` means membership ignores the residues at primes not
    dividing ``d``, and the set of coordinates a function ignores is closed
    under union, so primes can be dropped greedily.  A prime is kept only when
    a residue flip at that prime changing membership is found; the flip is
    returned as its certificate.  Dropping is therefore sampling-based.
    Length 0 is excluded from the periodic part (preperiod 1).
    """
    rng = random.Random(seed)
    sampler = sampler or structured_residue_sampler(ms)
    values = list(range(ms.n + 1))
    essential, witnesses = [], {}
    for j, p in enumerate(ms.primes):
        found = None
        for _ in range(trials):
            base = sampler(rng)
            want = membership(base)
            for v in values + [rng.randrange(p)]:
                if v % p == base[j]:
                    continue
                alt = base[:j] + (v % p,) + base[j + 1 :]
                if membership(alt) != want:
                    found = (base, v % p)
                    break
            if found:
                break
        if found:
            essential.append(j)
            witnesses[j] = found
    period = math.prod(ms.primes[j] for j in essential)
    return PeriodResult(1, period, tuple(essential), witnesses)


def ufa_membership(ms: ModuliSystem) -> Callable[[tuple], bool]:
    return lambda rv: accepted_by(ms, rv) is not None


def check_period(
    ms: ModuliSystem,
    membership: Callable[[tuple], bool],
    period: int,
    samples: int = 10**5,
    seed: int = 0,
) -> int:
    """Count lengths ``t >= 1`` with ``member(t) != member(t + period)``.

    Lengths are drawn through the structured sampler and CRT, so accepting
    classes are actually visited.
    """
    from .residues import crt_reconstruct

    rng = random.Random(seed)
    sample = structured_residue_sampler(ms)
    bad = 0
    primes = ms.primes.primes
    for _ in range(samples):
        t = crt_reconstruct(ms, sample(rng)) or ms.prime_product
        a = membership(tuple(t % p for p in primes))
        b = membership(tuple((t + period) % p for p in primes))
        bad += a != b
    return bad


def parallel_cycles_nfa() -> UnaryNFA:
    """Two accepting self-loops entered from the initial state: ambiguous at every length >= 1."""
    return UnaryNFA(3, 0, frozenset({1, 2}), frozenset({(0, 1), (0, 2), (1, 1), (2, 2)}))


def random_nfa(n_states: int, rng: random.Random, density: float = 0.15) -> UnaryNFA:
    edges = {(s, t) for s in range(n_states) for t in range(n_states) if rng.random() < density}
    acc = {q for q in range(n_states) if rng.random() < 0.3}
    return UnaryNFA(n_states, 0, frozenset(acc), frozenset(edges))
