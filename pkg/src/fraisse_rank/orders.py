"""Rank of finite linear orders through their intervals.

A finite linear order is determined up to isomorphism by its size, so most
functions take the size ``m`` and a set of positions ``0..m-1``.  Functions
that also accept a :class:`FiniteStructure` read positions off the order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError
from .oracles import LINEAR_ORDERS
from .rank import RankMemo, rank_subset
from .structures import FiniteStructure, chain, reverse


def rank_closed_form(m: int) -> int:
    """``floor(log2(m+1))``."""
    if m < 0:
        raise InputError("size must be >= 0")
    return (m + 1).bit_length() - 1


def order_size(Y) -> int:
    if isinstance(Y, int):
        if Y < 0:
            raise InputError("size must be >= 0")
        return Y
    if not LINEAR_ORDERS(Y):
        raise InputError("structure is not a linear order")
    return Y.size


def positions(Y: FiniteStructure) -> list[int]:
    """Position of each vertex: the number of vertices below it."""
    below = [0] * Y.size
    for _, b in Y.tuples[Y.signature.relations[0][0]]:
        below[b] += 1
    return below


def to_structure(m: int) -> FiniteStructure:
    return chain(m)


def from_structure(Y: FiniteStructure) -> int:
    return order_size(Y)


@dataclass(frozen=True)
class IntervalProfile:
    sizes: tuple[int, ...]

    def __iter__(self):
        return iter(self.sizes)

    def __len__(self):
        return len(self.sizes)


def _positions_of(Y, F: Iterable[int]) -> tuple[int, list[int]]:
    m = order_size(Y)
    F = set(F)
    for v in F:
        if not 0 <= v < m:
            raise InputError(f"element {v} outside the order of size {m}")
    if isinstance(Y, FiniteStructure):
        pos = positions(Y)
        return m, sorted(pos[v] for v in F)
    return m, sorted(F)


def interval_profile(Y, F: Iterable[int]) -> IntervalProfile:
    """Sizes of the ``|F|+1`` gaps that ``F`` leaves in ``Y``, in order."""
    m, ps = _positions_of(Y, F)
    cuts = [-1] + ps + [m]
    return IntervalProfile(tuple(b - a - 1 for a, b in zip(cuts, cuts[1:])))


def rank_via_intervals(Y, F: Iterable[int]) -> int:
    """Rank of ``F`` in ``Y``: the least closed-form rank of its intervals."""
    return min(rank_closed_form(s) for s in interval_profile(Y, F))


def interval_size_threshold(profile: Sequence[int] | IntervalProfile, n: int) -> bool:
    """Whether every interval has at least ``2^n - 1`` points."""
    if n < 0:
        raise InputError("n must be >= 0")
    return all(s >= 2 ** n - 1 for s in profile)


def rank_via_recursion(sizes: Sequence[int]) -> int:
    """Interval characterization evaluated recursively, without the closed form.

    The rank of a single interval of size ``s`` is 0 if it is empty and
    otherwise ``1 + max`` over split points of the smaller side's rank.
    """
    memo = {0: 0}

    def one(s: int) -> int:
        if s not in memo:
            memo[s] = 1 + max(min(one(c), one(s - c - 1)) for c in range(s))
        return memo[s]

    return min(one(s) for s in sizes)


@dataclass
class SumBoundReport:
    left: int
    right: int
    rank_left: int
    rank_right: int
    rank_sum: int
    bound: int
    holds: bool
    sharp: bool
    engine_checked: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def sum_bound_check(A, B, engine: bool = False) -> SumBoundReport:
    """``rk(A+B) <= max(rk A, rk B) + 1``, flagging equality.

    With ``engine=True`` the three ranks are also computed by the generic
    rank engine and compared to the closed form.
    """
    a, b = order_size(A), order_size(B)
    ra, rb, rs = rank_closed_form(a), rank_closed_form(b), rank_closed_form(a + b)
    if engine:
        for size, expected in ((a, ra), (b, rb), (a + b, rs)):
            got = rank_subset(RankMemo(chain(size), LINEAR_ORDERS), 0)
            if got != expected:
                raise AssertionError(f"engine rank {got} of chain {size} differs from closed form {expected}")
    bound = max(ra, rb) + 1
    return SumBoundReport(a, b, ra, rb, rs, bound, rs <= bound, rs == bound, engine)


@dataclass
class ReversalReport:
    size: int
    subset: list[int]
    rank: int
    reversed_rank: int
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def reversal_check(Y, F: Iterable[int] = ()) -> ReversalReport:
    """Rank of ``F`` in ``Y`` and in the reversed order, by the generic engine."""
    X = Y if isinstance(Y, FiniteStructure) else chain(order_size(Y))
    F = sorted(set(F))
    r = rank_subset(RankMemo(X, LINEAR_ORDERS), F)
    rr = rank_subset(RankMemo(reverse(X), LINEAR_ORDERS), F)
    return ReversalReport(X.size, F, r, rr, r == rr)


# -- splitters -----------------------------------------------------------------------


def find_splitters(m: int, n: int, level: int = 0) -> list[int] | None:
    """``2^n - 1`` positions of a size-``m`` chain cutting it into ``2^n`` intervals
    of rank at least ``level``, or None if there are none.

    Depth-first over the positions, left to right.
    """
    count = 2 ** n - 1
    need = 2 ** level - 1

    def search(start: int, left: int, chosen: list[int]):
        if left == 0:
            return list(chosen) if m - start >= need else None
        for p in range(start + need, m):
            # the remaining intervals need room
            if m - p - 1 < left * need + (left - 1):
                break
            chosen.append(p)
            got = search(p + 1, left - 1, chosen)
            chosen.pop()
            if got is not None:
                return got
        return None

    return search(0, count, [])


@dataclass
class SplitterReport:
    checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def splitter_check(max_size: int = 20) -> SplitterReport:
    """For every ``m <= max_size`` and ``level + n <= rk(m)``, splitters exist,
    and their intervals all reach ``level`` (checked by the profile)."""
    report = SplitterReport()
    for m in range(max_size + 1):
        r = rank_closed_form(m)
        for n in range(r + 1):
            for level in range(r - n + 1):
                report.checked += 1
                s = find_splitters(m, n, level)
                ok = s is not None and len(s) == 2 ** n - 1
                if ok:
                    ok = all(rank_closed_form(x) >= level for x in interval_profile(m, s))
                if not ok:
                    report.failures.append({"size": m, "n": n, "level": level, "splitters": s})
    return report
