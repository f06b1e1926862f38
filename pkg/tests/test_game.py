import pytest

from fraisse_rank.constructions import build_tournament_Hn
from fraisse_rank.enumeration import enumerate_structures
from fraisse_rank.errors import MoveError
from fraisse_rank.extensions import neighbor_type
from fraisse_rank.game import game_step, game_value, game_value_table, new_game
from fraisse_rank.oracles import GRAPHS, TOURNAMENTS, kn_free
from fraisse_rank.rank import RankMemo, all_ranks
from fraisse_rank.structures import graph

from reference import reference_rank

P3 = graph(3, [(0, 1), (1, 2)])


def test_game_value_on_p3():
    sol = game_value(P3, GRAPHS)
    assert sol.value == 2
    # II answers the single-vertex type with an endpoint, never the centre
    assert sol.player_two[0][neighbor_type([])] == 0


def test_game_value_on_three_cycle():
    assert game_value(build_tournament_Hn(2).base, TOURNAMENTS).value == 2


def test_rank_zero_position_records_the_unrealized_type():
    sol = game_value(P3, GRAPHS, [0, 1])
    assert sol.value == 0
    # unrealized over the edge {0,1}: neighbourhoods {}, {0} and {0,1}; the first wins ties
    assert sol.player_one[0b011] == neighbor_type([])


def test_table_matches_reference_rank():
    for X in enumerate_structures(None, kn_free(3), 4):
        table = game_value_table(X, kn_free(3))
        for F, v in table.items():
            assert v == reference_rank(X, kn_free(3), [u for u in range(X.size) if F >> u & 1])


def test_table_matches_engine_on_tournaments():
    for X in enumerate_structures(None, TOURNAMENTS, 5):
        assert game_value_table(X, TOURNAMENTS) == all_ranks(RankMemo(X, TOURNAMENTS))


def test_interactive_play_on_p3():
    state = new_game(P3, GRAPHS)
    assert state.to_move == "I"
    assert len(state.legal_types()) == 1
    state = game_step(state, ("type", 0))
    assert state.to_move == "II"
    assert state.legal_picks() == [0, 1, 2]
    state = game_step(state, ("pick", 0))
    assert state.round == 1 and state.subset == 1
    # a vertex adjacent to 0: only 1 realizes it
    state = game_step(state, ("type", neighbor_type([0])))
    assert state.legal_picks() == [1]
    state = game_step(state, ("pick", 1))
    # adjacent to both 0 and 1: nobody, so II loses
    state = game_step(state, ("type", neighbor_type([0, 1])))
    assert state.terminal and state.round == 2


def test_illegal_moves_list_legal_options():
    state = new_game(P3, GRAPHS)
    with pytest.raises(MoveError) as err:
        game_step(state, ("pick", 0))
    assert err.value.legal == [0]
    state = game_step(state, ("type", 0))
    with pytest.raises(MoveError) as err:
        game_step(state, ("pick", 7))
    assert err.value.legal == [0, 1, 2]
    with pytest.raises(MoveError):
        game_step(new_game(P3, GRAPHS), ("type", 4))
