"""Canonical forms, embedding search and small-structure enumeration."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator, Mapping

from .errors import InputError, ResourceError
from .extensions import apply_type, enumerate_extension_types
from .oracles import ClassOracle, Kind
from .structures import (
    FiniteStructure,
    RelationalSignature,
    graph,
    tournament,
)

MAX_ENUMERATION_SIZE = 7
MAX_LABELLED = 2_000_000


# -- canonical form ---------------------------------------------------------


def _refine(X: FiniteStructure, colors: list[int]) -> list[int]:
    inc = X.incidence
    ncls = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted((r, j, tuple(colors[u] for u in rest)) for r, j, rest in inc[v])))
            for v in range(X.size)
        ]
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [order[s] for s in sigs]
        if len(order) == ncls:
            return colors
        ncls = len(order)


def _encode(X: FiniteStructure, label: list[int]):
    rels = tuple(
        tuple(sorted(tuple(label[v] for v in t) for t in X.tuples[name]))
        for name in X.signature.relation_names
    )
    flags = tuple(tuple(sorted(label[v] for v in X.unary_flags[u])) for u in X.signature.unaries)
    return rels, flags


def canonical_form(X: FiniteStructure):
    """A hashable key equal for two structures iff they are isomorphic.

    Individualization-refinement: colour refinement, then branch on every
    vertex of the first non-singleton cell; the minimum encoding over the
    discrete leaves is the certificate.
    """
    start = [0] * X.size
    for v in range(X.size):
        start[v] = sum(1 << i for i, u in enumerate(X.signature.unaries) if v in X.unary_flags[u])
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(X, colors)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            enc = _encode(X, colors)
            if best is None or enc < best:
                best = enc
            return
        for v in target:
            nxt = [2 * c + 1 for c in colors]
            nxt[v] = 2 * colors[v]
            search(nxt)

    search(start)
    return (X.signature, X.size, best)


def is_isomorphic(A: FiniteStructure, B: FiniteStructure) -> bool:
    return canonical_form(A) == canonical_form(B)


# -- embeddings -----------------------------------------------------------------


def embeddings(
    A: FiniteStructure, X: FiniteStructure, partial: Mapping[int, int] | None = None
) -> Iterator[dict[int, int]]:
    """Yield every embedding ``A -> X`` (as dicts), extending ``partial``."""
    if A.signature != X.signature:
        raise InputError("embedding between structures of different signatures")
    a = A.size
    back = [
        [(r, j, rest) for r, j, rest in A.incidence[i] if all(u < i for u in rest)]
        for i in range(a)
    ]
    patterns_x = [X.unary_pattern(x) for x in range(X.size)]
    f: dict[int, int] = {}
    used: set[int] = set()
    fixed = dict(partial or {})

    def ok(i: int, x: int) -> bool:
        if patterns_x[x] != A.unary_pattern(i):
            return False
        for r, j, rest in back[i]:
            img = tuple(f[u] for u in rest)
            if img[:j] + (x,) + img[j:] not in X.tuples[r]:
                return False
        count = sum(1 for _, _, rest in X.incidence[x] if all(u in used for u in rest))
        return count == len(back[i])

    def extend(i: int):
        if i == a:
            yield dict(f)
            return
        cands = [fixed[i]] if i in fixed else range(X.size)
        for x in cands:
            if x in used or not ok(i, x):
                continue
            f[i] = x
            used.add(x)
            yield from extend(i + 1)
            del f[i]
            used.discard(x)

    yield from extend(0)


def find_embedding(A: FiniteStructure, X: FiniteStructure) -> dict[int, int] | None:
    return next(embeddings(A, X), None)


def automorphisms(X: FiniteStructure) -> Iterator[dict[int, int]]:
    return embeddings(X, X)


# -- enumeration ------------------------------------------------------------------


def enumerate_structures(
    signature: RelationalSignature | None,
    oracle: ClassOracle,
    n: int,
    up_to_iso: bool = True,
    cap: int = MAX_ENUMERATION_SIZE,
) -> list[FiniteStructure]:
    """Every class member of size ``n`` (one per iso class if ``up_to_iso``).

    Members of size ``n`` are grown from members of size ``n-1`` by every
    one-point extension type; heredity guarantees nothing is missed, and in
    the labelled case each structure arises exactly once (as the extension
    of its restriction to ``0..n-2``).
    """
    if n < 0:
        raise InputError("size must be >= 0")
    if n > cap:
        raise ResourceError(f"enumeration of size {n} exceeds cap {cap}")
    sig = signature if signature is not None else oracle.signature
    level = [FiniteStructure(sig, 0)]
    if not oracle(level[0]):
        return []
    for _ in range(n):
        nxt: list[FiniteStructure] = []
        seen = set()
        for F in level:
            for T in enumerate_extension_types(F, oracle=oracle):
                G = apply_type(F, T)
                if not oracle(G):
                    continue
                if up_to_iso:
                    key = canonical_form(G)
                    if key in seen:
                        continue
                    seen.add(key)
                nxt.append(G)
                if len(nxt) > MAX_LABELLED:
                    raise ResourceError(f"more than {MAX_LABELLED} structures of size {F.size + 1}")
        level = nxt
    return level


def enumerate_up_to(signature, oracle: ClassOracle, n: int, cap: int = MAX_ENUMERATION_SIZE):
    """Iso-class representatives of every size ``0..n``."""
    out = []
    for k in range(n + 1):
        out.extend(enumerate_structures(signature, oracle, k, True, cap))
    return out


# -- random hosts -------------------------------------------------------------------


def random_graph(n: int, rng: random.Random, p: float = 0.5) -> FiniteStructure:
    return graph(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_tournament(n: int, rng: random.Random) -> FiniteStructure:
    return tournament(n, [(u, v) if rng.random() < 0.5 else (v, u) for u, v in combinations(range(n), 2)])


def random_member(oracle: ClassOracle, n: int, rng: random.Random) -> FiniteStructure:
    if oracle.kind is Kind.GRAPH:
        return random_graph(n, rng)
    if oracle.kind is Kind.TOURNAMENT:
        return random_tournament(n, rng)
    raise InputError(f"no random generator for class {oracle}")


__all__ = [
    "automorphisms",
    "canonical_form",
    "embeddings",
    "enumerate_structures",
    "enumerate_up_to",
    "find_embedding",
    "is_isomorphic",
    "random_graph",
    "random_member",
    "random_tournament",
]
