import json

import pytest

from fraisse_rank.errors import InputError
from fraisse_rank.oracles import GRAPHS, PARTIAL_ORDERS, TOURNAMENTS, kn_free
from fraisse_rank.structures import (
    FiniteStructure,
    GRAPH_SIGNATURE,
    RelationalSignature,
    adjacent,
    chain,
    dumps,
    edges,
    free_amalgam,
    graph,
    induced,
    is_complete,
    load,
    relabel,
    reverse,
)

FIVE = graph(5, [(0, 1), (0, 2), (1, 2), (0, 3)])


def test_signature_rejects_duplicate_names():
    with pytest.raises(InputError):
        RelationalSignature((("E", 2),), ("E",))


def test_signature_rejects_unary_relation_entry():
    with pytest.raises(InputError):
        RelationalSignature((("P", 1),))


def test_structure_rejects_bad_tuples():
    with pytest.raises(InputError):
        FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 0)]})
    with pytest.raises(InputError):
        FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 2)]})
    with pytest.raises(InputError):
        FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 1, 1)]})


def test_json_round_trip(tmp_path):
    X = graph(4, [(0, 1), (2, 3)])
    path = tmp_path / "x.json"
    path.write_text(dumps(X, note="hi"))
    Y, raw = load(path)
    assert Y == X
    assert raw["note"] == "hi"
    data = json.loads(dumps(X))
    assert data["size"] == 4
    assert [0, 1] in data["tuples"]["E"] and [1, 0] in data["tuples"]["E"]


def test_load_reports_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    with pytest.raises(InputError):
        load(path)


def test_induced_non_adjacent_pair():
    P3 = graph(3, [(0, 1), (1, 2)])
    assert induced(P3, [0, 2]) == graph(2)


def test_induced_everything_is_identity():
    assert induced(FIVE, range(5)) == FIVE


def test_induced_triangle_in_five_vertex_graph():
    assert induced(FIVE, [0, 1, 2]) == graph(3, [(0, 1), (1, 2), (0, 2)])


def test_induced_rejects_unknown_vertex():
    with pytest.raises(InputError):
        induced(FIVE, [7])


def test_adjacent_examples():
    assert adjacent(graph(2, [(0, 1)]), 0, 1)
    assert not adjacent(graph(2), 0, 1)
    hyper = FiniteStructure(RelationalSignature((("R", 3),)), 3, {"R": [(0, 1, 2)]})
    assert adjacent(hyper, 0, 2)
    assert adjacent(hyper, 2, 1)


def test_is_complete_examples():
    assert is_complete(graph(3), [1])
    assert is_complete(graph(3, [(0, 1), (1, 2), (0, 2)]), [0, 1, 2])
    assert not is_complete(graph(3, [(0, 1), (1, 2)]), [0, 1, 2])


def test_free_amalgam_over_a_vertex_is_a_path():
    K2 = graph(2, [(0, 1)])
    P = free_amalgam(K2, K2, [0], [0], {0: 0})
    assert P == graph(3, [(0, 1), (0, 2)])


def test_free_amalgam_over_nothing_is_disjoint_union():
    K2 = graph(2, [(0, 1)])
    assert free_amalgam(K2, K2, [], [], {}) == graph(4, [(0, 1), (2, 3)])


def test_free_amalgam_rejects_non_isomorphic_glue():
    K2 = graph(2, [(0, 1)])
    with pytest.raises(InputError):
        free_amalgam(K2, graph(2), [0, 1], [0, 1], {0: 0, 1: 1})


def test_reverse_and_relabel():
    C = chain(3)
    R = reverse(C)
    assert (2, 1) in R.tuples["<"] and (1, 2) not in R.tuples["<"]
    assert relabel(C, [2, 1, 0]) == R


def test_oracle_membership():
    assert GRAPHS(graph(3, [(0, 1)]))
    assert not GRAPHS(FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 1)]}))
    assert TOURNAMENTS(FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 1)]}))
    assert not kn_free(3)(graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert PARTIAL_ORDERS(chain(4))
    assert edges(graph(3, [(2, 0)])) == [(0, 2)]
