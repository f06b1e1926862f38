import pytest

from fraisse_rank.enumeration import canonical_form, enumerate_structures, is_isomorphic
from fraisse_rank.errors import InputError, ResourceError
from fraisse_rank.extensions import (
    ExtensionType,
    apply_type,
    enumerate_extension_types,
    good_types,
    is_good,
    neighbor_type,
    position_type,
    realizations,
    tournament_type,
    type_of,
)
from fraisse_rank.oracles import GRAPHS, LINEAR_ORDERS, TOURNAMENTS, all_irreflexive, kn_free, unary_only
from fraisse_rank.structures import (
    FiniteStructure,
    GRAPH_SIGNATURE,
    ORDER_SIGNATURE,
    chain,
    graph,
    unary_signature,
)

from reference import count_iso_classes, one_point_extensions


def test_two_vertex_graph_has_four_types():
    types = enumerate_extension_types(graph(2), oracle=GRAPHS)
    assert len(types) == 4
    assert {frozenset(rest[0] for _, _, rest in T.atoms) for T in types} == {
        frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})
    }


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_unary_types_of_empty_set(k):
    F = FiniteStructure(unary_signature(k), 0)
    assert len(enumerate_extension_types(F, oracle=unary_only(k))) == 2 ** k
    assert len(enumerate_extension_types(F)) == 2 ** k


def test_tournament_types_of_three_set():
    F = FiniteStructure(GRAPH_SIGNATURE, 3, {"E": [(0, 1), (1, 2), (2, 0)]})
    assert len(enumerate_extension_types(F, oracle=TOURNAMENTS)) == 8


def test_generic_enumeration_counts_digraph_types():
    # each of the 2 other vertices: no arc, out, in, both
    assert len(enumerate_extension_types(graph(2), oracle=all_irreflexive())) == 16


def test_type_budget_is_enforced():
    with pytest.raises(ResourceError):
        enumerate_extension_types(graph(4), budget=8, oracle=all_irreflexive())


def test_full_type_on_k2_gives_k3():
    K2 = graph(2, [(0, 1)])
    assert apply_type(K2, neighbor_type([0, 1])) == graph(3, [(0, 1), (1, 2), (0, 2)])


def test_empty_type_adds_isolated_vertex():
    assert apply_type(graph(1), ExtensionType(frozenset())) == graph(2)


def test_position_type_inserts_between():
    G = apply_type(chain(2), position_type(1, 2))
    assert G.tuples["<"] == {(0, 1), (0, 2), (2, 1)}
    assert is_isomorphic(G, chain(3))


def test_position_types_follow_the_base_order():
    # base where vertex 1 < vertex 0
    F = FiniteStructure(ORDER_SIGNATURE, 2, {"<": [(1, 0)]})
    for T in enumerate_extension_types(F, oracle=LINEAR_ORDERS):
        assert LINEAR_ORDERS(apply_type(F, T))
    assert len(good_types(F, LINEAR_ORDERS)) == 3


def test_goodness_examples():
    K2 = graph(2, [(0, 1)])
    for T in enumerate_extension_types(K2, oracle=GRAPHS):
        assert is_good(T, K2, GRAPHS)
    assert not is_good(neighbor_type([0, 1]), K2, kn_free(3))
    C3 = FiniteStructure(GRAPH_SIGNATURE, 3, {"E": [(0, 1), (1, 2), (2, 0)]})
    assert all(is_good(T, C3, TOURNAMENTS) for T in enumerate_extension_types(C3, oracle=TOURNAMENTS))


def test_apply_type_rejects_foreign_vertices():
    with pytest.raises(InputError):
        apply_type(graph(1), neighbor_type([3]))


P3 = graph(3, [(0, 1), (1, 2)])
C3 = FiniteStructure(GRAPH_SIGNATURE, 3, {"E": [(0, 1), (1, 2), (2, 0)]})


def test_realizations_examples():
    assert realizations(P3, [0], neighbor_type([0])) == [1]
    assert realizations(P3, [0, 1], neighbor_type([0, 1])) == []
    # in-neighbour of 0: the type S = {0} means z -> 0
    assert realizations(C3, [0], tournament_type([0], 1)) == [2]


def test_type_of_round_trips():
    for z in range(3):
        if z == 0:
            continue
        T = type_of(C3, [0], z)
        assert realizations(C3, [0], T) == [z]


@pytest.mark.parametrize("oracle", [GRAPHS, TOURNAMENTS, LINEAR_ORDERS, kn_free(3)])
def test_good_types_match_raw_extensions(oracle):
    """Good types correspond one-to-one with raw one-point extensions."""
    for m in range(4):
        for F in enumerate_structures(None, oracle, m):
            goods = good_types(F, oracle)
            raw = one_point_extensions(F, oracle)
            assert len(goods) == len(raw) == oracle.count_good_types(F)
            assert {apply_type(F, T) for T in goods} == set(raw)


def test_canonical_form_agrees_with_brute_force():
    graphs = enumerate_structures(None, GRAPHS, 4, up_to_iso=False)
    assert len({canonical_form(G) for G in graphs}) == count_iso_classes(graphs) == 11
