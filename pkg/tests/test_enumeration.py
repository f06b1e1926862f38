import random

import pytest

from fraisse_rank.enumeration import (
    automorphisms,
    canonical_form,
    embeddings,
    enumerate_structures,
    find_embedding,
    is_isomorphic,
    random_graph,
    random_tournament,
)
from fraisse_rank.errors import ResourceError
from fraisse_rank.oracles import GRAPHS, LINEAR_ORDERS, PARTIAL_ORDERS, TOURNAMENTS, kn_free
from fraisse_rank.structures import graph, relabel

from reference import brute_isomorphic


# iso-class counts; the labelled counts are 2^C(n,2), n!, and the poset numbers
@pytest.mark.parametrize(
    "oracle, counts",
    [
        (GRAPHS, [1, 1, 2, 4, 11, 34]),
        (TOURNAMENTS, [1, 1, 1, 2, 4, 12]),
        (LINEAR_ORDERS, [1, 1, 1, 1, 1, 1]),
        (PARTIAL_ORDERS, [1, 1, 2, 5, 16]),
        (kn_free(3), [1, 1, 2, 3, 7, 14]),
    ],
)
def test_iso_class_counts(oracle, counts):
    assert [len(enumerate_structures(None, oracle, n)) for n in range(len(counts))] == counts


@pytest.mark.parametrize(
    "oracle, counts",
    [
        (GRAPHS, [1, 1, 2, 8, 64]),
        (TOURNAMENTS, [1, 1, 2, 8, 64]),
        (LINEAR_ORDERS, [1, 1, 2, 6, 24]),
        (PARTIAL_ORDERS, [1, 1, 3, 19, 219]),
    ],
)
def test_labelled_counts(oracle, counts):
    assert [len(enumerate_structures(None, oracle, n, up_to_iso=False)) for n in range(len(counts))] == counts


def test_enumeration_cap():
    with pytest.raises(ResourceError):
        enumerate_structures(None, GRAPHS, 9)


def test_canonical_form_invariant_under_relabelling():
    rng = random.Random(3)
    for _ in range(50):
        X = random_graph(6, rng)
        perm = list(range(6))
        rng.shuffle(perm)
        assert canonical_form(relabel(X, perm)) == canonical_form(X)


def test_canonical_form_matches_brute_force_on_random_pairs():
    rng = random.Random(4)
    for _ in range(100):
        A, B = random_tournament(5, rng), random_tournament(5, rng)
        assert is_isomorphic(A, B) == brute_isomorphic(A, B)


def test_regular_graphs_are_told_apart():
    # C6 and two triangles: both 2-regular on 6 vertices
    C6 = graph(6, [(i, (i + 1) % 6) for i in range(6)])
    two_triangles = graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not is_isomorphic(C6, two_triangles)


def test_embeddings_and_automorphisms():
    P3 = graph(3, [(0, 1), (1, 2)])
    C4 = graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    # 4 choices of centre, 2 orientations
    assert len(list(embeddings(P3, C4))) == 8
    assert find_embedding(graph(3, [(0, 1), (1, 2), (0, 2)]), C4) is None
    assert len(list(automorphisms(C4))) == 8
