import random

import pytest

from fraisse_rank.constructions import build_graph_Hn, build_tournament_Hn, ordered_sum
from fraisse_rank.enumeration import enumerate_structures, random_graph, random_tournament
from fraisse_rank.errors import InputError, ResourceError
from fraisse_rank.extensions import neighbor_type, tournament_type
from fraisse_rank.oracles import GRAPHS, LINEAR_ORDERS, PARTIAL_ORDERS, TOURNAMENTS, kn_free, unary_only
from fraisse_rank.rank import (
    RankMemo,
    all_ranks,
    check_intermediate_values,
    embeds_all_up_to,
    rank,
    rank_subset,
    rank_zero_witness,
    search_universality_number,
    unary_rank_check,
)
from fraisse_rank.structures import FiniteStructure, GRAPH_SIGNATURE, ORDER_SIGNATURE, chain, graph, unary_structure

from reference import reference_rank

P3 = graph(3, [(0, 1), (1, 2)])
FIVE = graph(5, [(0, 1), (0, 2), (1, 2), (0, 3)])
T2 = FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 1)]})


def test_small_rank_values():
    assert rank_subset(RankMemo(FIVE, GRAPHS), 0) == 2
    assert rank_subset(RankMemo(P3, GRAPHS), [1]) == 0
    assert rank_subset(RankMemo(P3, GRAPHS), []) == 2
    assert rank(T2, TOURNAMENTS) == 1
    assert rank(graph(0), GRAPHS) == 0
    assert rank(chain(7), LINEAR_ORDERS) == 3
    assert rank(build_tournament_Hn(3).base, TOURNAMENTS) == 3


# values produced by the reference implementation in tests/reference.py
FROZEN = [
    ("C4", graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), GRAPHS, 2),
    ("C5", graph(5, [(i, (i + 1) % 5) for i in range(5)]), GRAPHS, 2),
    ("K3", graph(3, [(0, 1), (1, 2), (0, 2)]), GRAPHS, 1),
    ("P4", graph(4, [(0, 1), (1, 2), (2, 3)]), GRAPHS, 2),
    ("C5 triangle-free", graph(5, [(i, (i + 1) % 5) for i in range(5)]), kn_free(3), 2),
    ("poset V", FiniteStructure(ORDER_SIGNATURE, 3, {"<": [(0, 1), (0, 2)]}), PARTIAL_ORDERS, 1),
    ("graph H2", build_graph_Hn(None, GRAPHS, 2).base, GRAPHS, 2),
    ("graph H3", build_graph_Hn(None, GRAPHS, 3).base, GRAPHS, 3),
]


@pytest.mark.parametrize("name, X, oracle, expected", FROZEN, ids=[f[0] for f in FROZEN])
def test_frozen_ranks(name, X, oracle, expected):
    assert rank(X, oracle) == expected


def test_engine_matches_reference_on_random_hosts():
    rng = random.Random(11)
    for i in range(40):
        n = rng.randint(0, 5)
        X, oracle = (random_graph(n, rng), GRAPHS) if i % 2 else (random_tournament(n, rng), TOURNAMENTS)
        memo = RankMemo(X, oracle)
        for F in range(1 << n):
            verts = [v for v in range(n) if F >> v & 1]
            assert memo.rank(F) == reference_rank(X, oracle, verts)


def test_engine_matches_reference_on_posets_and_triangle_free():
    for oracle in (PARTIAL_ORDERS, kn_free(3)):
        for n in range(5):
            for X in enumerate_structures(None, oracle, n):
                assert rank(X, oracle) == reference_rank(X, oracle)


def test_shuffled_linear_order_matches_chain():
    # 0 > 1 > ... : the reversed chain with relabelled vertices
    X = FiniteStructure(ORDER_SIGNATURE, 7, {"<": [(b, a) for a in range(7) for b in range(a + 1, 7)]})
    memo_x, memo_c = RankMemo(X, LINEAR_ORDERS), RankMemo(chain(7), LINEAR_ORDERS)
    for F in range(1 << 7):
        mirrored = sum(1 << (6 - v) for v in range(7) if F >> v & 1)
        assert memo_x.rank(F) == memo_c.rank(mirrored)


def test_rank_zero_witnesses():
    X = graph(3, [(1, 2)])
    T = rank_zero_witness(RankMemo(X, GRAPHS), [0])
    assert T == neighbor_type([0])
    S = ordered_sum([T2, T2], "tournament")
    # a = 0 in the first part, z = 2 in the second; witness type S = {a}
    T = rank_zero_witness(RankMemo(S, TOURNAMENTS), [0, 2])
    assert T == tournament_type([0], 2)
    assert rank_zero_witness(RankMemo(P3, GRAPHS), []) is None


def test_rank_errors():
    with pytest.raises(InputError):
        RankMemo(FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 1)]}), GRAPHS)
    with pytest.raises(InputError):
        rank_subset(RankMemo(P3, GRAPHS), [5])
    with pytest.raises(ResourceError):
        RankMemo(graph(30), GRAPHS)


def test_host_cap_from_environment(monkeypatch):
    monkeypatch.setenv("RANK_MAX_HOST", "2")
    with pytest.raises(ResourceError):
        RankMemo(P3, GRAPHS)
    monkeypatch.setenv("RANK_MAX_HOST", "zero")
    with pytest.raises(InputError):
        RankMemo(P3, GRAPHS)


def test_embeds_all_up_to_examples():
    assert embeds_all_up_to(FIVE, GRAPHS, 3)
    assert embeds_all_up_to(T2, TOURNAMENTS, 2)
    assert not embeds_all_up_to(graph(3, [(0, 1), (1, 2), (0, 2)]), GRAPHS, 2)


def test_rank_at_least_n_embeds_everything_of_size_n():
    rng = random.Random(5)
    for _ in range(60):
        X = random_graph(rng.randint(1, 7), rng)
        r = rank(X, GRAPHS)
        assert embeds_all_up_to(X, GRAPHS, r)


def test_intermediate_values_on_p3():
    rep = check_intermediate_values(P3, GRAPHS)
    assert rep.passed
    assert set(all_ranks(RankMemo(P3, GRAPHS)).values()) == {0, 1, 2}
    assert check_intermediate_values(graph(0), GRAPHS).passed


def test_unary_rank_examples():
    X = unary_structure(1, [(True,)] * 3 + [(False,)] * 5)
    assert unary_rank_check(X, unary_only(1), []) == 3 == rank(X, unary_only(1))
    assert unary_rank_check(X, unary_only(1), range(8)) == 0
    Y = unary_structure(0, [()] * 6)
    assert unary_rank_check(Y, unary_only(0), [0, 1]) == 4 == rank_subset(RankMemo(Y, unary_only(0)), [0, 1])


def test_universality_number_small_cases():
    r1 = search_universality_number(GRAPHS, 1, 4)
    assert (r1.candidate, r1.conclusive) == (1, True)
    r2 = search_universality_number(GRAPHS, 2, 4)
    assert (r2.lower, r2.candidate, r2.upper) == (2, 2, 3)
    r3 = search_universality_number(GRAPHS, 3, 5)
    assert r3.lower >= 4
    assert r3.upper == 11
