import pytest

from fraisse_rank.errors import InputError
from fraisse_rank.oracles import LINEAR_ORDERS
from fraisse_rank.orders import (
    find_splitters,
    interval_profile,
    interval_size_threshold,
    rank_closed_form,
    rank_via_intervals,
    rank_via_recursion,
    reversal_check,
    splitter_check,
    sum_bound_check,
)
from fraisse_rank.rank import RankMemo, rank_subset
from fraisse_rank.structures import chain, reverse

from reference import reference_rank


def test_closed_form_examples():
    assert rank_closed_form(0) == 0
    assert rank_closed_form(7) == 3
    assert rank_closed_form(6) == 2
    with pytest.raises(InputError):
        rank_closed_form(-1)


def test_closed_form_matches_reference():
    for m in range(7):
        assert rank_closed_form(m) == reference_rank(chain(m), LINEAR_ORDERS)


def test_interval_profiles():
    assert tuple(interval_profile(5, [2])) == (2, 2)
    assert tuple(interval_profile(5, [])) == (5,)
    assert tuple(interval_profile(7, [1, 5])) == (1, 3, 1)
    assert tuple(interval_profile(reverse(chain(7)), [1, 5])) == (1, 3, 1)
    with pytest.raises(InputError):
        interval_profile(3, [3])


def test_rank_via_intervals_examples():
    assert rank_via_intervals(7, []) == 3
    assert rank_via_intervals(7, [0]) == 0 == rank_subset(RankMemo(chain(7), LINEAR_ORDERS), [0])
    assert rank_via_intervals(15, [7]) == 3 == rank_subset(RankMemo(chain(15), LINEAR_ORDERS), [7])


def test_interval_characterization_matches_reference():
    for m in range(6):
        for F in range(1 << m):
            verts = [v for v in range(m) if F >> v & 1]
            assert rank_via_intervals(m, verts) == reference_rank(chain(m), LINEAR_ORDERS, verts)


def test_interval_size_threshold():
    assert interval_size_threshold((7, 7), 3)
    assert not interval_size_threshold((3, 7), 3)
    assert interval_size_threshold((), 0)


def test_recursion_agrees_with_closed_form():
    for m in range(100):
        assert rank_via_recursion([m]) == rank_closed_form(m)


def test_sum_bounds():
    # rk(3) = 2, so the bound for 3+3 is 3 and it is not attained
    rep = sum_bound_check(3, 3, engine=True)
    assert (rep.rank_left, rep.rank_sum, rep.bound, rep.holds, rep.sharp) == (2, 2, 3, True, False)
    assert sum_bound_check(3, 4).sharp
    rep = sum_bound_check(1, 1)
    assert (rep.rank_left, rep.rank_sum, rep.holds) == (1, 1, True)
    rep = sum_bound_check(7, 0)
    assert (rep.rank_sum, rep.bound, rep.holds) == (3, 4, True)


def test_reversal():
    assert reversal_check(chain(5)).passed
    rep = reversal_check(6, [1])
    assert rep.passed and rep.rank == rep.reversed_rank == 1
    assert reversal_check(0).passed


def test_splitters():
    assert find_splitters(7, 2, 0) == [0, 1, 2]
    assert find_splitters(7, 2, 1) == [1, 3, 5]
    assert find_splitters(15, 2, 2) == [3, 7, 11]
    assert splitter_check(20).passed


def test_nonempty_pieces_need_rank_above_n():
    # 2^n - 1 splitters leaving 2^n nonempty intervals need 2^(n+1) - 1 points
    assert find_splitters(7, 3, 1) is None
    assert find_splitters(14, 3, 1) is None
    assert find_splitters(15, 3, 1) == list(range(1, 15, 2))
