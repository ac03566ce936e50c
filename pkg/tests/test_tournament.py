from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unaryufa.tournament import (
    OrientationNotFound,
    Tournament,
    TournamentError,
    covering_threshold,
    cyclic_triangle,
    find_orientation,
    from_orientation_bits,
    is_inbound_covering,
    lemma6_bound,
    random_orientation,
    smallest_inbound_covering_size,
    transitive_tournament,
    union_bound_log_probability,
)


def oracle_covers(t, s):
    s = set(s)
    return all(any(t.R(v, u) for u in s) for v in t.vertices if v not in s)


def oracle_smallest(t, k):
    for size in range(1, k + 1):
        if any(oracle_covers(t, s) for s in combinations(t.vertices, size)):
            return size
    return None


def all_orientations(n):
    m = n * (n - 1) // 2
    return [from_orientation_bits(n, bits) for bits in product((0, 1), repeat=m)]


def test_single_vertex_has_no_edges():
    t = random_orientation(1, 123)
    assert t.edges == frozenset()


def test_random_orientation_is_deterministic():
    assert random_orientation(9, 42) == random_orientation(9, 42)
    assert random_orientation(9, 42).to_json() == random_orientation(9, 42).to_json()


def test_zero_size_rejected():
    with pytest.raises(TournamentError):
        random_orientation(0, 1)


def test_cyclic_orientation_appears_in_seed_sweep():
    cyclic = {cyclic_triangle(), Tournament(3, frozenset({(2, 1), (3, 2), (1, 3)}))}
    seen = {random_orientation(3, s) for s in range(64)}
    assert seen & cyclic


def test_two_of_eight_triangle_orientations_are_cyclic():
    ts = all_orientations(3)
    assert len(set(ts)) == 8
    cyclic = [t for t in ts if all(len(t.out_neighbours(v)) == 1 for v in t.vertices)]
    assert len(cyclic) == 2


def test_malformed_tournaments_rejected():
    with pytest.raises(TournamentError):
        Tournament(3, frozenset({(1, 2), (2, 1), (2, 3), (3, 1)}))
    with pytest.raises(TournamentError):
        Tournament(2, frozenset({(1, 1)}))
    with pytest.raises(TournamentError):
        Tournament(3, frozenset({(1, 2), (2, 3)}))
    with pytest.raises(TournamentError):
        Tournament(2, frozenset({(1, 5)}))


def test_inbound_covering_examples():
    c = cyclic_triangle()
    assert is_inbound_covering(c, {1, 2, 3})
    assert not is_inbound_covering(c, {2})
    assert is_inbound_covering(c, {1, 2})
    with pytest.raises(TournamentError):
        is_inbound_covering(c, {4})


def test_smallest_cover_examples():
    c = cyclic_triangle()
    assert smallest_inbound_covering_size(c, 1) is None
    assert smallest_inbound_covering_size(c, 2) == 2
    assert smallest_inbound_covering_size(transitive_tournament(3), 1) == 1
    assert covering_threshold(c) == 1
    with pytest.raises(TournamentError):
        smallest_inbound_covering_size(c, 4)


def test_smallest_cover_matches_oracle_on_all_small_tournaments():
    for n in (3, 4):
        for t in all_orientations(n):
            for k in range(1, n + 1):
                assert smallest_inbound_covering_size(t, k) == oracle_smallest(t, k)


def test_find_orientation_k1_n3_gives_cyclic_triangle():
    t = find_orientation(1, 3)
    assert all(len(t.out_neighbours(v)) == 1 for v in t.vertices)
    assert oracle_smallest(t, 1) is None


def test_find_orientation_k2_n7_certified(t7):
    assert t7.n == 7
    assert oracle_smallest(t7, 2) is None


def test_find_orientation_k2_n3_fails():
    assert all(oracle_smallest(t, 2) is not None for t in all_orientations(3))
    with pytest.raises(OrientationNotFound) as info:
        find_orientation(2, 3, max_tries=50)
    assert info.value.best_cover == 2


def test_vertex_bound_values():
    assert lemma6_bound(1) == 6
    assert lemma6_bound(2) == 48
    assert lemma6_bound(3) == 216
    with pytest.raises(TournamentError):
        lemma6_bound(0)


@given(st.integers(8, 40))
def test_union_bound_negative_at_vertex_bound(k):
    assert union_bound_log_probability(lemma6_bound(k), k) < 0


def test_json_and_dot_round_trip():
    t = random_orientation(6, 5)
    assert Tournament.from_dict(t.to_dict()) == t
    dot = cyclic_triangle().to_dot()
    assert dot.count("->") == 3 and dot.startswith("digraph")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32))
def test_tournament_invariants(n, seed):
    t = random_orientation(n, seed)
    for v in t.vertices:
        assert not t.R(v, v)
    for u, v in combinations(t.vertices, 2):
        assert t.R(u, v) != t.R(v, u)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32), st.data())
def test_covering_is_monotone_and_matches_oracle(n, seed, data):
    t = random_orientation(n, seed)
    s = data.draw(st.sets(st.integers(1, n), min_size=1))
    extra = data.draw(st.integers(1, n))
    assert is_inbound_covering(t, s) == oracle_covers(t, s)
    if is_inbound_covering(t, s):
        assert is_inbound_covering(t, s | {extra})
