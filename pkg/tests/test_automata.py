import math
import random

import numpy as np
import pytest

from unaryufa import automata
from unaryufa.automata import (
    CapExceeded,
    MalformedMachine,
    SweepingDFA,
    UnaryNFA,
    accepts,
    build_swdfa,
    build_ufa,
    check_period,
    complement_accepting_flip,
    count_accepting_runs,
    count_accepting_runs_many,
    is_unambiguous,
    minimal_period,
    parallel_cycles_nfa,
    random_nfa,
    run_counts_window,
    run_swdfa,
    run_swdfa_direct_batch,
    ufa_member,
    ufa_membership,
)
from unaryufa.residues import accepted_by, crt_reconstruct, residues_of

PROD = 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29


def exact_counts(nfa, max_length):
    """Run counts by dynamic programming over exact integers."""
    vec = {nfa.initial: 1}
    out = []
    for _ in range(max_length + 1):
        out.append(sum(c for q, c in vec.items() if q in nfa.accepting))
        nxt = {}
        for s, c in vec.items():
            for t in nfa.successors[s]:
                nxt[t] = nxt.get(t, 0) + c
        vec = nxt
    return out


def branchy_nfa(rng, branches, max_len):
    """Initial state fanning out into rho-shaped paths, one out-edge per other state."""
    edges, acc, nxt = set(), set(), 1
    for _ in range(branches):
        length = rng.randint(1, max_len)
        states = list(range(nxt, nxt + length))
        nxt += length
        edges.add((0, states[0]))
        for a, b in zip(states, states[1:]):
            edges.add((a, b))
        edges.add((states[-1], states[rng.randrange(length)]))
        acc.update(q for q in states if rng.random() < 0.3)
    return UnaryNFA(nxt, 0, frozenset(acc), frozenset(edges))


def test_ufa_size_and_basic_runs(ms3, ufa3):
    assert ufa3.n_states == 1 + 21505 + 11305 + 5005 == 37816
    assert count_accepting_runs(ufa3, 0) == 0
    assert count_accepting_runs(ufa3, 1) == 1
    assert accepts(ufa3, 1)
    assert not accepts(ufa3, PROD)
    assert not accepts(ufa3, 0)


def test_ufa_is_unambiguous(ufa3):
    v = is_unambiguous(ufa3)
    assert v.unambiguous and v.witness is None


def test_ufa_matches_residue_predicate(ms3, ufa3):
    counts = run_counts_window(ufa3, 3000)
    for t in range(3001):
        assert (counts[t] == 1) == (accepted_by(ms3, residues_of(ms3, t)) is not None)
        assert counts[t] <= 1
    rng = random.Random(7)
    big = [rng.randrange(PROD * 1000) for _ in range(300)]
    got = count_accepting_runs_many(ufa3, big)
    for t, c in zip(big, got):
        assert (c == 1) == (ufa_member(ms3, t) is not None)


def test_parallel_cycles_ambiguous():
    nfa = parallel_cycles_nfa()
    assert count_accepting_runs(nfa, 5) == automata.MANY
    assert count_accepting_runs(nfa, 5, exact=True) == 2
    for method in ("orbits", "product"):
        v = is_unambiguous(nfa, method=method)
        assert not v.unambiguous and v.witness == 1


def test_deterministic_automaton_unambiguous():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(1, 12)
        edges = {(s, rng.randrange(n)) for s in range(n)}
        nfa = UnaryNFA(n, 0, frozenset(q for q in range(n) if rng.random() < 0.5), frozenset(edges))
        assert is_unambiguous(nfa).unambiguous


def test_initial_accepting_accepts_empty_word():
    nfa = UnaryNFA(2, 0, frozenset({0}), frozenset({(0, 1)}))
    assert accepts(nfa, 0)
    assert not accepts(nfa, 1)


def test_power_and_step_agree_on_random_nfas():
    rng = random.Random(2024)
    for _ in range(50):
        nfa = random_nfa(rng.randint(1, 30), rng)
        window = run_counts_window(nfa, 10_000)
        power = count_accepting_runs_many(nfa, list(range(10_001)))
        assert np.array_equal(window, power)
        oracle = np.minimum(exact_counts(nfa, 60), 2)
        assert np.array_equal(window[:61], oracle)
        for t in (0, 1, 17, 999, 10_000):
            assert count_accepting_runs(nfa, t, method="step") == window[t]


def test_ambiguity_methods_agree_with_counts():
    rng = random.Random(11)
    for _ in range(60):
        nfa = branchy_nfa(rng, rng.randint(1, 4), 9)
        a = is_unambiguous(nfa, method="orbits")
        b = is_unambiguous(nfa, method="product")
        counts = exact_counts(nfa, 400)
        assert a.unambiguous == b.unambiguous == (max(counts) <= 1)
        if not a.unambiguous:
            assert counts[a.witness] >= 2 and counts[b.witness] >= 2


def test_product_method_on_general_nfas():
    rng = random.Random(5)
    for _ in range(40):
        nfa = random_nfa(rng.randint(1, 8), rng, density=0.25)
        v = is_unambiguous(nfa, method="product")
        counts = exact_counts(nfa, 200)
        assert v.unambiguous == (max(counts) <= 1)


def test_ufa_cap(ms3, ms7):
    with pytest.raises(CapExceeded) as info:
        build_ufa(ms3, state_cap=1000)
    assert info.value.required == 37816
    with pytest.raises(CapExceeded):
        build_ufa(ms7)


def test_nfa_json_and_dot(ufa3):
    d = ufa3.to_dict()
    assert d["states"] == 37816 and d["initial"] == 0
    small = parallel_cycles_nfa()
    assert UnaryNFA.from_dict(small.to_dict()).to_dict() == small.to_dict()
    assert small.to_dot().count("->") == 5
    with pytest.raises(CapExceeded):
        ufa3.to_dot(node_cap=100)


def test_swdfa_examples(ms3, sw3, co3):
    assert sw3.n_states == 21505 + 11305 + 5005 + 2 + 2
    r1 = run_swdfa(sw3, 1)
    assert r1.accepted and r1.trace == ((1, 1),)
    assert not run_swdfa(co3, 1).accepted
    r0 = run_swdfa(sw3, 0)
    assert not r0.accepted and r0.trace == ((1, 0), (2, 0), (3, 0))
    assert run_swdfa(co3, 0).accepted
    full = run_swdfa(co3, PROD, mode="residue")
    assert full.accepted and len(full.trace) == 3


def test_swdfa_modes_agree(ms3, sw3, co3, ufa3):
    lengths = list(range(2001))
    batch = run_swdfa_direct_batch(sw3, lengths)
    counts = run_counts_window(ufa3, 2000)
    for t in lengths:
        direct = run_swdfa(sw3, t, mode="direct")
        fast = run_swdfa(sw3, t, mode="residue")
        assert direct == fast
        assert direct.accepted == bool(batch[t]) == (counts[t] == 1)
        assert run_swdfa(co3, t, mode="residue").accepted != direct.accepted


def test_swdfa_validation_rejects_reversal():
    with pytest.raises(MalformedMachine):
        SweepingDFA(2, 0, frozenset(), {(0, "a"): (1, 1)}, (1, -1), (1, 1))
    with pytest.raises(MalformedMachine):
        SweepingDFA(1, 0, frozenset(), {(0, "-|"): (0, 1)}, (1,), (1,))
    with pytest.raises(MalformedMachine):
        SweepingDFA(1, 0, frozenset(), {(0, "|-"): (0, -1)}, (1,), (1,))


def test_swdfa_json(sw3):
    d = sw3.to_dict()
    assert d["states"] == sw3.n_states
    assert len(d["passes"]) == len(d["directions"]) == sw3.n_states


def test_complement_flip(ms3, sw3, co3):
    flipped = complement_accepting_flip(sw3)
    assert flipped.n_states == sw3.n_states
    rng = random.Random(1)
    for _ in range(1000):
        t = rng.randrange(PROD * 3)
        assert run_swdfa(flipped, t, mode="residue").accepted == run_swdfa(co3, t, mode="residue").accepted
    back = complement_accepting_flip(flipped)
    assert back.accepting == sw3.accepting

    one = UnaryNFA(1, 0, frozenset({0}), frozenset({(0, 0)}))
    empty = complement_accepting_flip(one)
    assert not any(accepts(empty, t) for t in range(20))
    assert complement_accepting_flip(empty).to_dict() == one.to_dict()
    with pytest.raises(ValueError):
        complement_accepting_flip(parallel_cycles_nfa())


def test_minimal_period_constant():
    from unaryufa.residues import desk_instance
    from unaryufa.tournament import cyclic_triangle

    ms = desk_instance(cyclic_triangle())
    res = minimal_period(ms, lambda rv: True, trials=50)
    assert res.period == 1 and res.preperiod == 1


def test_minimal_period_n3(ms3):
    member = ufa_membership(ms3)
    res = minimal_period(ms3, member)
    assert (PROD // 29) % res.period == 0
    assert res.period % 23 == 0
    flip = [1] * 8
    flip[6] = 2
    assert member(tuple([1] * 8)) != member(tuple(flip))
    for j, (base, v) in res.witnesses.items():
        alt = base[:j] + (v,) + base[j + 1 :]
        assert member(base) != member(alt)
    assert check_period(ms3, member, res.period, samples=5000) == 0
    for j in res.essential:
        assert check_period(ms3, member, res.period // ms3.primes[j], samples=5000) > 0


def test_period_certificate_through_crt(ms3, ufa3):
    res = minimal_period(ms3, ufa_membership(ms3))
    for j, (base, v) in res.witnesses.items():
        alt = base[:j] + (v,) + base[j + 1 :]
        t1, t2 = crt_reconstruct(ms3, base), crt_reconstruct(ms3, alt)
        assert accepts(ufa3, t1 or PROD) != accepts(ufa3, t2 or PROD)
