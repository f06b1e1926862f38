"""Finite relational structures and the basic operations on them.

Vertices are always the dense integers ``0..size-1``.  Relations of arity
at least two are stored as sets of fully oriented tuples (a graph edge
``{u, v}`` is stored as both ``(u, v)`` and ``(v, u)``); unary predicates
are stored as vertex sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InputError


@dataclass(frozen=True)
class RelationalSignature:
    """Relation symbols (arity >= 2) plus unary predicate names."""

    relations: tuple[tuple[str, int], ...] = ()
    unaries: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(n), int(a)) for n, a in self.relations))
        object.__setattr__(self, "unaries", tuple(str(u) for u in self.unaries))
        names = [n for n, _ in self.relations] + list(self.unaries)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate symbol names in signature: {names}")
        for name, arity in self.relations:
            if arity < 2:
                raise InputError(f"relation {name!r} has arity {arity}; unary symbols go in 'unaries'")

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise InputError(f"unknown relation {name!r}")

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    @property
    def is_binary(self) -> bool:
        return all(a == 2 for _, a in self.relations)

    def to_dict(self) -> dict:
        return {
            "relations": [{"name": n, "arity": a} for n, a in self.relations],
            "unaries": list(self.unaries),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RelationalSignature":
        try:
            rels = tuple((r["name"], r["arity"]) for r in data.get("relations", []))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad signature entry: {exc}") from None
        return cls(rels, tuple(data.get("unaries", [])))


GRAPH_SIGNATURE = RelationalSignature((("E", 2),))
ORDER_SIGNATURE = RelationalSignature((("<", 2),))


def unary_signature(k: int) -> RelationalSignature:
    return RelationalSignature((), tuple(f"P{i}" for i in range(k)))


class FiniteStructure:
    """An immutable finite structure on the vertex set ``0..size-1``."""

    def __init__(
        self,
        signature: RelationalSignature,
        size: int,
        tuples: Mapping[str, Iterable[Sequence[int]]] | None = None,
        unary_flags: Mapping[str, Iterable[int]] | None = None,
    ):
        if size < 0:
            raise InputError(f"negative structure size {size}")
        self.signature = signature
        self.size = int(size)
        tuples = dict(tuples or {})
        unary_flags = dict(unary_flags or {})
        extra = set(tuples) - set(signature.relation_names)
        if extra:
            raise InputError(f"tuples given for undeclared relations {sorted(extra)}")
        extra = set(unary_flags) - set(signature.unaries)
        if extra:
            raise InputError(f"flags given for undeclared unaries {sorted(extra)}")
        rels = {}
        for name, arity in signature.relations:
            ts = set()
            for t in tuples.get(name, ()):
                t = tuple(int(v) for v in t)
                if len(t) != arity:
                    raise InputError(f"tuple {t} in {name!r} does not have arity {arity}")
                for v in t:
                    if not 0 <= v < self.size:
                        raise InputError(f"vertex {v} of tuple {t} out of range 0..{self.size - 1}")
                if len(set(t)) != arity:
                    raise InputError(f"tuple {t} in {name!r} repeats a vertex")
                ts.add(t)
            rels[name] = frozenset(ts)
        flags = {}
        for name in signature.unaries:
            vs = frozenset(int(v) for v in unary_flags.get(name, ()))
            for v in vs:
                if not 0 <= v < self.size:
                    raise InputError(f"vertex {v} flagged {name!r} out of range")
            flags[name] = vs
        self._tuples = rels
        self._flags = flags

    @property
    def tuples(self) -> Mapping[str, frozenset]:
        return self._tuples

    @property
    def unary_flags(self) -> Mapping[str, frozenset]:
        return self._flags

    @property
    def vertices(self) -> range:
        return range(self.size)

    def __len__(self):
        return self.size

    def _key(self):
        return (
            self.signature,
            self.size,
            tuple(sorted((n, tuple(sorted(ts))) for n, ts in self._tuples.items())),
            tuple(sorted((n, tuple(sorted(vs))) for n, vs in self._flags.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        counts = ", ".join(f"{n}:{len(ts)}" for n, ts in self._tuples.items())
        return f"FiniteStructure(size={self.size}, {counts})"

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[str, int, tuple[int, ...]], ...], ...]:
        """For each vertex, the ``(relation, position, rest)`` atoms it occurs in."""
        inc = [[] for _ in range(self.size)]
        for name, _ in self.signature.relations:
            for t in self._tuples[name]:
                for j, v in enumerate(t):
                    inc[v].append((name, j, t[:j] + t[j + 1:]))
        return tuple(tuple(sorted(a)) for a in inc)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Bitmask of the vertices adjacent (in any relation) to each vertex."""
        masks = [0] * self.size
        for ts in self._tuples.values():
            for t in ts:
                for x in t:
                    for y in t:
                        if x != y:
                            masks[x] |= 1 << y
        return tuple(masks)

    def unary_pattern(self, v: int) -> tuple[bool, ...]:
        return tuple(v in self._flags[u] for u in self.signature.unaries)

    def has(self, name: str, t: Sequence[int]) -> bool:
        return tuple(t) in self._tuples[name]

    def to_dict(self) -> dict:
        return {
            "signature": self.signature.to_dict(),
            "size": self.size,
            "tuples": {n: sorted(list(t) for t in ts) for n, ts in self._tuples.items()},
            "unary_flags": {n: sorted(vs) for n, vs in self._flags.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteStructure":
        if not isinstance(data, Mapping) or "size" not in data:
            raise InputError("structure JSON needs at least a 'size' field")
        sig = RelationalSignature.from_dict(data.get("signature", {}))
        return cls(sig, data["size"], data.get("tuples", {}), data.get("unary_flags", {}))


def dumps(structure: FiniteStructure, **extra) -> str:
    data = structure.to_dict()
    data.update(extra)
    return json.dumps(data, sort_keys=True)


def load(path) -> tuple[FiniteStructure, dict]:
    """Read a structure file; returns the structure and the raw JSON dict."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    return FiniteStructure.from_dict(data), data


# -- builders ---------------------------------------------------------------


def graph(n: int, edges: Iterable[tuple[int, int]] = ()) -> FiniteStructure:
    pairs = set()
    for u, v in edges:
        pairs.add((u, v))
        pairs.add((v, u))
    return FiniteStructure(GRAPH_SIGNATURE, n, {"E": pairs})


def digraph(n: int, arcs: Iterable[tuple[int, int]] = ()) -> FiniteStructure:
    return FiniteStructure(GRAPH_SIGNATURE, n, {"E": arcs})


tournament = digraph


def chain(m: int) -> FiniteStructure:
    """The linear order ``0 < 1 < ... < m-1``."""
    return FiniteStructure(ORDER_SIGNATURE, m, {"<": combinations(range(m), 2)})


def unary_structure(k: int, patterns: Sequence[Sequence[bool]]) -> FiniteStructure:
    """Pure unary structure; ``patterns[v][i]`` says whether ``v`` has colour ``i``."""
    sig = unary_signature(k)
    flags = {u: [v for v, p in enumerate(patterns) if p[i]] for i, u in enumerate(sig.unaries)}
    return FiniteStructure(sig, len(patterns), {}, flags)


def edges(X: FiniteStructure, name: str = "E") -> list[tuple[int, int]]:
    """Unordered pairs of a symmetric binary relation."""
    return sorted({tuple(sorted(t)) for t in X.tuples[name]})


# -- operations -------------------------------------------------------------


def _check_vertices(X: FiniteStructure, S: Iterable[int]) -> list[int]:
    S = sorted(set(int(v) for v in S))
    for v in S:
        if not 0 <= v < X.size:
            raise InputError(f"vertex {v} out of range 0..{X.size - 1}")
    return S


def induced_with_map(X: FiniteStructure, S: Iterable[int]) -> tuple[FiniteStructure, dict[int, int]]:
    """Induced substructure on ``S`` and the map old id -> new id."""
    S = _check_vertices(X, S)
    relabel = {v: i for i, v in enumerate(S)}
    tuples = {
        name: [tuple(relabel[v] for v in t) for t in ts if all(v in relabel for v in t)]
        for name, ts in X.tuples.items()
    }
    flags = {name: [relabel[v] for v in vs if v in relabel] for name, vs in X.unary_flags.items()}
    return FiniteStructure(X.signature, len(S), tuples, flags), relabel


def induced(X: FiniteStructure, S: Iterable[int]) -> FiniteStructure:
    """Induced substructure on ``S``, relabelled ``0..|S|-1`` by ascending id."""
    return induced_with_map(X, S)[0]


def induced_mask(X: FiniteStructure, mask: int) -> FiniteStructure:
    return induced(X, mask_to_list(mask))


def mask_to_list(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def list_to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def adjacent(X: FiniteStructure, x: int, y: int) -> bool:
    """Whether some tuple of some relation contains both ``x`` and ``y``."""
    _check_vertices(X, (x, y))
    if x == y:
        raise InputError("adjacency is only defined for distinct vertices")
    return bool(X.adjacency_masks[x] >> y & 1)


def is_complete(X: FiniteStructure, S: Iterable[int]) -> bool:
    S = _check_vertices(X, S)
    adj = X.adjacency_masks
    return all(adj[x] >> y & 1 for x, y in combinations(S, 2))


def reverse(X: FiniteStructure) -> FiniteStructure:
    """Reverse every tuple; for a linear order this is the reversed order."""
    return FiniteStructure(
        X.signature,
        X.size,
        {n: [t[::-1] for t in ts] for n, ts in X.tuples.items()},
        X.unary_flags,
    )


def relabel(X: FiniteStructure, perm: Sequence[int]) -> FiniteStructure:
    """Structure isomorphic to ``X`` via ``v -> perm[v]``."""
    return FiniteStructure(
        X.signature,
        X.size,
        {n: [tuple(perm[v] for v in t) for t in ts] for n, ts in X.tuples.items()},
        {n: [perm[v] for v in vs] for n, vs in X.unary_flags.items()},
    )


def without(X: FiniteStructure, name: str, t: Sequence[int]) -> FiniteStructure:
    """Copy of ``X`` with one tuple removed (used to build perturbed fixtures)."""
    tuples = {n: set(ts) for n, ts in X.tuples.items()}
    tuples[name].discard(tuple(t))
    return FiniteStructure(X.signature, X.size, tuples, X.unary_flags)


def with_tuples(X: FiniteStructure, name: str, extra: Iterable[Sequence[int]]) -> FiniteStructure:
    tuples = {n: set(ts) for n, ts in X.tuples.items()}
    tuples[name] |= {tuple(t) for t in extra}
    return FiniteStructure(X.signature, X.size, tuples, X.unary_flags)


def is_isomorphism(A: FiniteStructure, B: FiniteStructure, f: Mapping[int, int]) -> bool:
    """Whether ``f`` (A-vertex -> B-vertex) is an isomorphism ``A -> B``."""
    if A.signature != B.signature or A.size != B.size or len(f) != A.size:
        return False
    if sorted(f) != list(range(A.size)) or sorted(f.values()) != list(range(B.size)):
        return False
    for name, ts in A.tuples.items():
        if {tuple(f[v] for v in t) for t in ts} != B.tuples[name]:
            return False
    for name, vs in A.unary_flags.items():
        if {f[v] for v in vs} != B.unary_flags[name]:
            return False
    return True


def free_amalgam(
    B: FiniteStructure,
    C: FiniteStructure,
    A_in_B: Iterable[int],
    A_in_C: Iterable[int],
    glue: Mapping[int, int] | Iterable[tuple[int, int]],
) -> FiniteStructure:
    """Free amalgam of ``B`` and ``C`` over a common substructure.

    ``glue`` maps each vertex of ``A_in_C`` to its partner in ``A_in_B``.  The
    result keeps ``B`` on ``0..|B|-1`` and appends ``C \\ A`` in ascending
    order.  No tuple mixes ``B \\ A`` with ``C \\ A``.
    """
    if B.signature != C.signature:
        raise InputError("free amalgam of structures with different signatures")
    glue = dict(glue)
    A_in_B = _check_vertices(B, A_in_B)
    A_in_C = _check_vertices(C, A_in_C)
    if sorted(glue) != A_in_C or sorted(glue.values()) != A_in_B:
        raise InputError("glue must be a bijection from A_in_C onto A_in_B")
    AB, mapB = induced_with_map(B, A_in_B)
    AC, mapC = induced_with_map(C, A_in_C)
    f = {mapC[c]: mapB[b] for c, b in glue.items()}
    if not is_isomorphism(AC, AB, f):
        raise InputError("glue is not an isomorphism between the two copies of the base")
    cmap = dict(glue)
    nxt = B.size
    for c in range(C.size):
        if c not in cmap:
            cmap[c] = nxt
            nxt += 1
    tuples = {n: set(ts) for n, ts in B.tuples.items()}
    for n, ts in C.tuples.items():
        tuples[n].update(tuple(cmap[v] for v in t) for t in ts)
    flags = {n: set(vs) for n, vs in B.unary_flags.items()}
    for n, vs in C.unary_flags.items():
        flags[n].update(cmap[v] for v in vs)
    return FiniteStructure(B.signature, nxt, tuples, flags)
