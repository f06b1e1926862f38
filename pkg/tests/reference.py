"""Slow reference implementations used as test oracles.

Nothing here touches the package's type machinery: one-point extensions are
generated as raw structures, realizations are found by comparing induced
substructures tuple by tuple, and rank follows the recursive definition.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from fraisse_rank.structures import FiniteStructure


def _tuples_with(size: int, new: int, arity: int):
    """All ``arity``-tuples over ``0..size-1`` with distinct entries that contain ``new``."""
    return [t for t in permutations(range(size), arity) if new in t]


def one_point_extensions(F: FiniteStructure, oracle) -> list[FiniteStructure]:
    """Every class member on ``F``'s vertices plus ``F.size`` restricting to ``F``."""
    m = F.size
    slots = [(name, t) for name, arity in F.signature.relations for t in _tuples_with(m + 1, m, arity)]
    out = []
    for bits in product((False, True), repeat=len(slots)):
        tuples = {name: set(ts) for name, ts in F.tuples.items()}
        for (name, t), on in zip(slots, bits):
            if on:
                tuples[name].add(t)
        for flags in product((False, True), repeat=len(F.signature.unaries)):
            uf = {u: set(F.unary_flags[u]) | ({m} if f else set()) for u, f in zip(F.signature.unaries, flags)}
            G = FiniteStructure(F.signature, m + 1, tuples, uf)
            if oracle(G):
                out.append(G)
    return out


def restrict(X: FiniteStructure, verts: list[int]) -> FiniteStructure:
    """Induced substructure with ``verts[i]`` renamed ``i`` (order preserved as given)."""
    pos = {v: i for i, v in enumerate(verts)}
    tuples = {
        name: {tuple(pos[v] for v in t) for t in ts if all(v in pos for v in t)}
        for name, ts in X.tuples.items()
    }
    flags = {u: {pos[v] for v in vs if v in pos} for u, vs in X.unary_flags.items()}
    return FiniteStructure(X.signature, len(verts), tuples, flags)


def reference_rank(X: FiniteStructure, oracle, F=()) -> int:
    """Rank of ``F`` in ``X`` straight from the recursive definition."""
    return _ranker(X, oracle)(frozenset(F))


@lru_cache(maxsize=64)
def _ranker(X: FiniteStructure, oracle):
    n = X.size

    @lru_cache(maxsize=None)
    def rk(S: frozenset) -> int:
        base_verts = sorted(S)
        base = restrict(X, base_verts)
        best = None
        for G in one_point_extensions(base, oracle):
            realizers = [z for z in range(n) if z not in S and restrict(X, base_verts + [z]) == G]
            if not realizers:
                return 0
            v = max(rk(S | {z}) for z in realizers)
            best = v if best is None else min(best, v)
        return best + 1

    return rk


def brute_isomorphic(A: FiniteStructure, B: FiniteStructure) -> bool:
    if A.size != B.size or A.signature != B.signature:
        return False
    for p in permutations(range(A.size)):
        if restrict(B, list(p)) == A:
            return True
    return False


def count_iso_classes(structures) -> int:
    reps: list[FiniteStructure] = []
    for X in structures:
        if not any(brute_isomorphic(X, R) for R in reps):
            reps.append(X)
    return len(reps)
