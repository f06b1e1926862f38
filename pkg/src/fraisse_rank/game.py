"""The rank game, solved by plain minimax.

Player I proposes a good one-point extension type of the current set ``F``;
player II must answer with a vertex of the host realizing it, which is then
added to ``F``.  II loses in the first round without an answer.  The value of
a position is the number of rounds II can survive against best play.

This solver deliberately avoids the machinery in :mod:`rank`: it works with
explicit :class:`ExtensionType` objects and :func:`realizations`, so the
two computations serve as independent checks of each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import InputError, MoveError
from .extensions import ExtensionType, good_types, realizations
from .oracles import ClassOracle
from .structures import FiniteStructure, induced, list_to_mask, mask_to_list


@dataclass
class GameSolution:
    value: int
    # position mask -> I's pessimal type (an unrealizable one if value is 0)
    player_one: dict[int, ExtensionType] = field(default_factory=dict)
    # position mask -> {type: II's best realization}
    player_two: dict[int, dict[ExtensionType, int]] = field(default_factory=dict)
    values: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "positions": [
                {
                    "subset": mask_to_list(m),
                    "value": self.values[m],
                    "player_one": self.player_one[m].to_dict(),
                    "player_two": [
                        {"type": T.to_dict(), "pick": z} for T, z in self.player_two.get(m, {}).items()
                    ],
                }
                for m in sorted(self.values)
            ],
        }


class _Solver:
    def __init__(self, host: FiniteStructure, oracle: ClassOracle):
        self.host = host
        self.oracle = oracle
        self.sol = GameSolution(0)

    def options(self, mask: int):
        verts = mask_to_list(mask)
        base = induced(self.host, verts)
        return [(T, realizations(self.host, verts, T)) for T in good_types(base, self.oracle)]

    def value(self, mask: int) -> int:
        sol = self.sol
        if mask in sol.values:
            return sol.values[mask]
        opts = self.options(mask)
        unrealized = next((T for T, zs in opts if not zs), None)
        if unrealized is not None:
            sol.values[mask] = 0
            sol.player_one[mask] = unrealized
            return 0
        replies: dict[ExtensionType, int] = {}
        best_t, best_v = None, None
        for T, zs in opts:
            pick, pv = None, -1
            for z in zs:
                v = self.value(mask | 1 << z)
                if v > pv:
                    pick, pv = z, v
            replies[T] = pick
            if best_v is None or pv < best_v:
                best_t, best_v = T, pv
        sol.values[mask] = best_v + 1
        sol.player_one[mask] = best_t
        sol.player_two[mask] = replies
        return best_v + 1


def game_value(host: FiniteStructure, oracle: ClassOracle, F=()) -> GameSolution:
    """Minimax value of the rank game from ``F`` with strategy tables.

    I's ties go to the earliest type in canonical order, II's to the lowest
    vertex id.
    """
    if not oracle(host):
        raise InputError(f"host is not a member of class {oracle}")
    mask = F if isinstance(F, int) else list_to_mask(F)
    if mask & ~((1 << host.size) - 1):
        raise InputError("subset has vertices outside the host")
    solver = _Solver(host, oracle)
    solver.sol.value = solver.value(mask)
    return solver.sol


def game_value_table(host: FiniteStructure, oracle: ClassOracle) -> dict[int, int]:
    """Game value of every subset of the host, sharing one solver."""
    if not oracle(host):
        raise InputError(f"host is not a member of class {oracle}")
    solver = _Solver(host, oracle)
    return {mask: solver.value(mask) for mask in range(1 << host.size)}


# -- interactive play ------------------------------------------------------------


@dataclass(frozen=True)
class GameState:
    host: FiniteStructure
    oracle: ClassOracle
    subset: int = 0
    round: int = 0
    pending: ExtensionType | None = None
    history: tuple = ()
    terminal: bool = False

    @property
    def to_move(self) -> str:
        if self.terminal:
            return "none"
        return "I" if self.pending is None else "II"

    def legal_types(self) -> list[ExtensionType]:
        verts = mask_to_list(self.subset)
        return good_types(induced(self.host, verts), self.oracle)

    def legal_picks(self) -> list[int]:
        if self.pending is None:
            return []
        return realizations(self.host, mask_to_list(self.subset), self.pending)


def new_game(host: FiniteStructure, oracle: ClassOracle, F=()) -> GameState:
    if not oracle(host):
        raise InputError(f"host is not a member of class {oracle}")
    mask = F if isinstance(F, int) else list_to_mask(F)
    return GameState(host, oracle, mask)


def game_step(state: GameState, move) -> GameState:
    """Apply ``("type", T_or_index)`` for player I or ``("pick", vertex)`` for II."""
    if state.terminal:
        raise MoveError("the game is over", legal=[])
    kind, arg = move
    if state.pending is None:
        types = state.legal_types()
        if kind != "type":
            raise MoveError("player I must propose a type", legal=list(range(len(types))))
        if isinstance(arg, int):
            if not 0 <= arg < len(types):
                raise MoveError(f"no type with index {arg}", legal=list(range(len(types))))
            T = types[arg]
        elif arg in types:
            T = arg
        else:
            raise MoveError("type is not a good type of the current set", legal=list(range(len(types))))
        nxt = replace(state, pending=T)
        if not nxt.legal_picks():
            return replace(nxt, terminal=True)
        return nxt
    picks = state.legal_picks()
    if kind != "pick" or arg not in picks:
        raise MoveError("player II must pick a realizing vertex", legal=picks)
    return GameState(
        state.host,
        state.oracle,
        state.subset | 1 << arg,
        state.round + 1,
        None,
        state.history + ((state.pending, arg),),
    )
