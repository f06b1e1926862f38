"""Property tests on random small graphs and tournaments."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fraisse_rank.enumeration import canonical_form, random_graph, random_tournament
from fraisse_rank.oracles import GRAPHS, TOURNAMENTS
from fraisse_rank.rank import RankMemo, check_intermediate_values
from fraisse_rank.structures import free_amalgam, graph, induced_with_map, list_to_mask, relabel

from reference import reference_rank, restrict

hosts = st.tuples(st.sampled_from(["graph", "tournament"]), st.integers(0, 6), st.integers(0, 10**6))


def build(host_params):
    kind, n, seed = host_params
    rng = random.Random(seed)
    if kind == "graph":
        return random_graph(n, rng), GRAPHS
    return random_tournament(n, rng), TOURNAMENTS


@settings(max_examples=60, deadline=None)
@given(hosts, st.integers(0, 2**6 - 1))
def test_rank_is_monotone_in_the_subset(host_params, raw):
    X, oracle = build(host_params)
    memo = RankMemo(X, oracle)
    F = raw & memo.full
    for v in range(X.size):
        if not F >> v & 1:
            assert memo.rank(F | 1 << v) <= memo.rank(F)


@settings(max_examples=60, deadline=None)
@given(hosts, st.integers(0, 2**6 - 1))
def test_rank_bounded_by_spare_vertices(host_params, raw):
    X, oracle = build(host_params)
    memo = RankMemo(X, oracle)
    F = raw & memo.full
    assert memo.rank(F) <= X.size - bin(F).count("1")


@settings(max_examples=40, deadline=None)
@given(hosts, st.integers(0, 2**6 - 1), st.randoms(use_true_random=False))
def test_rank_is_invariant_under_relabelling(host_params, raw, rnd):
    X, oracle = build(host_params)
    perm = list(range(X.size))
    rnd.shuffle(perm)
    Y = relabel(X, perm)
    F = [v for v in range(X.size) if raw >> v & 1]
    assert RankMemo(X, oracle).rank(list_to_mask(F)) == RankMemo(Y, oracle).rank(list_to_mask(perm[v] for v in F))
    assert canonical_form(X) == canonical_form(Y)


@settings(max_examples=40, deadline=None)
@given(hosts, st.integers(0, 2**6 - 1), st.integers(0, 2**6 - 1))
def test_sub_host_rank_is_at_most_host_rank(host_params, raw_sub, raw_f):
    X, oracle = build(host_params)
    full = (1 << X.size) - 1
    S = raw_sub & full
    F = raw_f & S
    sub, pos = induced_with_map(X, [v for v in range(X.size) if S >> v & 1])
    inner = RankMemo(sub, oracle).rank(list_to_mask(pos[v] for v in range(X.size) if F >> v & 1))
    assert inner <= RankMemo(X, oracle).rank(F)


@settings(max_examples=40, deadline=None)
@given(hosts)
def test_intermediate_values_are_attained(host_params):
    X, oracle = build(host_params)
    assert check_intermediate_values(X, oracle).passed


@settings(max_examples=25, deadline=None)
@given(st.tuples(st.sampled_from(["graph", "tournament"]), st.integers(0, 5), st.integers(0, 10**6)),
       st.integers(0, 2**5 - 1))
def test_engine_agrees_with_reference(host_params, raw):
    X, oracle = build(host_params)
    F = [v for v in range(X.size) if raw >> v & 1]
    assert RankMemo(X, oracle).rank(list_to_mask(F)) == reference_rank(X, oracle, F)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 10**6))
def test_free_amalgams_of_graphs_are_graphs(k, a, b, seed):
    rng = random.Random(seed)
    base = random_graph(k, rng)
    B = with_prefix(random_graph(k + a, rng), base)
    C = with_prefix(random_graph(k + b, rng), base)
    shared = list(range(k))
    M = free_amalgam(B, C, shared, shared, {i: i for i in shared})
    assert GRAPHS(M) and M.size == k + a + b
    assert restrict(M, list(range(k + a))) == B
    assert restrict(M, shared + list(range(k + a, k + a + b))) == C
    assert not any(u < k + a <= v and u >= k for u, v in M.tuples["E"])


def with_prefix(X, base):
    """``X`` with its first ``base.size`` vertices made to induce ``base``."""
    k = base.size
    es = {(u, v) for u, v in X.tuples["E"] if u < v and v >= k}
    es |= {(u, v) for u, v in base.tuples["E"] if u < v}
    return graph(X.size, es)
