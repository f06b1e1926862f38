"""One-point extension types and their realizations.

A type of ``F`` is stored as a set of *atoms* ``(relation, j, rest)``: the
new point ``z`` sits at position ``j`` of a tuple of ``relation`` whose
remaining entries, in order, are ``rest`` (vertices of ``F``).  This is a
flat encoding of the slot sets ``A_i^j``.  The unary part is the set of
unary names that hold at ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .errors import InputError, ResourceError
from .oracles import ClassOracle, Kind
from .structures import FiniteStructure, induced_with_map

DEFAULT_TYPE_BUDGET = 2 ** 20

Atom = tuple[str, int, tuple[int, ...]]


@dataclass(frozen=True)
class ExtensionType:
    atoms: frozenset = frozenset()
    unary: frozenset = frozenset()

    def slot_set(self, relation: str, j: int) -> frozenset:
        """The slot set ``A_relation^j``."""
        return frozenset(rest for r, i, rest in self.atoms if r == relation and i == j)

    def is_empty(self) -> bool:
        return not self.atoms

    def is_full(self, F: FiniteStructure) -> bool:
        covered = {v for _, _, rest in self.atoms for v in rest}
        return covered >= set(F.vertices)

    def sort_key(self):
        return (tuple(sorted(self.unary)), tuple(sorted(self.atoms)))

    def to_dict(self) -> dict:
        return {
            "atoms": [[r, j, list(rest)] for r, j, rest in sorted(self.atoms)],
            "unary": sorted(self.unary),
        }

    @classmethod
    def from_dict(cls, data) -> "ExtensionType":
        return cls(
            frozenset((r, int(j), tuple(rest)) for r, j, rest in data.get("atoms", [])),
            frozenset(data.get("unary", [])),
        )

    def describe(self, oracle: ClassOracle | None = None) -> str:
        kind = oracle.kind if oracle is not None else None
        if kind in (Kind.GRAPH, Kind.KN_FREE):
            return "neighbours " + _fmt(sorted({rest[0] for _, _, rest in self.atoms}))
        if kind is Kind.TOURNAMENT:
            return "dominates " + _fmt(sorted(rest[0] for _, j, rest in self.atoms if j == 0))
        if kind is Kind.LINEAR_ORDER:
            return f"position {sum(1 for _, j, _ in self.atoms if j == 1)}"
        parts = [f"{r}@{j}{list(rest)}" for r, j, rest in sorted(self.atoms)]
        if self.unary:
            parts.append("unary " + ",".join(sorted(self.unary)))
        return "; ".join(parts) or "empty"


def _fmt(vs) -> str:
    return "{" + ",".join(map(str, vs)) + "}"


# -- convenience constructors for the reduced forms --------------------------


def neighbor_type(S: Iterable[int], name: str = "E") -> ExtensionType:
    """Graph type: the new vertex is adjacent exactly to ``S``."""
    return ExtensionType(frozenset(a for v in S for a in ((name, 0, (v,)), (name, 1, (v,)))))


def tournament_type(S: Iterable[int], m: int, name: str = "E") -> ExtensionType:
    """Tournament type: the new vertex beats exactly the vertices in ``S``."""
    S = set(S)
    return ExtensionType(frozenset((name, 0 if v in S else 1, (v,)) for v in range(m)))


def position_type(k: int, m: int, name: str = "<", order: Sequence[int] | None = None) -> ExtensionType:
    """Linear-order type: new element placed after the first ``k`` of ``m``.

    ``order`` lists the base vertices from least to greatest; it defaults to
    ``0..m-1``.
    """
    if not 0 <= k <= m:
        raise InputError(f"position {k} outside 0..{m}")
    order = range(m) if order is None else order
    return ExtensionType(frozenset((name, 1 if i < k else 0, (v,)) for i, v in enumerate(order)))


def unary_type(names: Iterable[str]) -> ExtensionType:
    return ExtensionType(frozenset(), frozenset(names))


# -- enumeration --------------------------------------------------------------


def possible_atoms(F: FiniteStructure) -> list[Atom]:
    """Every atom a type of ``F`` may contain, in canonical order."""
    atoms = []
    for name, arity in F.signature.relations:
        rests = sorted(permutations(range(F.size), arity - 1))
        for j in range(arity):
            atoms.extend((name, j, rest) for rest in rests)
    return atoms


def _unary_patterns(F: FiniteStructure) -> list[frozenset]:
    names = F.signature.unaries
    return [
        frozenset(n for n, bit in zip(names, bits) if bit)
        for bits in product((False, True), repeat=len(names))
    ]


def _subsets(items: Sequence) -> Iterator[frozenset]:
    for bits in range(2 ** len(items)):
        yield frozenset(items[i] for i in range(len(items)) if bits >> i & 1)


def enumerate_extension_types(
    F: FiniteStructure,
    budget: int = DEFAULT_TYPE_BUDGET,
    oracle: ClassOracle | None = None,
) -> list[ExtensionType]:
    """All combinatorially possible types of ``F`` in canonical order.

    When ``oracle`` is a graph, tournament or linear-order class the reduced
    type families are produced directly (neighbourhoods, dominated subsets,
    positions); otherwise every subset of :func:`possible_atoms` is used.
    """
    m = F.size
    kind = oracle.kind if oracle is not None else None
    if kind in (Kind.GRAPH, Kind.KN_FREE, Kind.TOURNAMENT) and F.signature.relations:
        name = F.signature.relations[0][0]
        if 2 ** m > budget:
            raise ResourceError(f"{2 ** m} types of a {m}-set exceed budget {budget} (arity 2)")
        make = neighbor_type if kind is not Kind.TOURNAMENT else (lambda S, name: tournament_type(S, m, name))
        return [make([v for v in range(m) if bits >> v & 1], name=name) for bits in range(2 ** m)]
    if kind is Kind.LINEAR_ORDER and F.signature.relations:
        name = F.signature.relations[0][0]
        below = [0] * m
        for _, b in F.tuples[name]:
            below[b] += 1
        order = sorted(range(m), key=below.__getitem__)
        return [position_type(k, m, name, order) for k in range(m + 1)]

    atoms = possible_atoms(F)
    patterns = _unary_patterns(F)
    total = len(patterns) * 2 ** len(atoms)
    if total > budget:
        arities = sorted({a for _, a in F.signature.relations}, reverse=True)
        raise ResourceError(
            f"{total} types of a {m}-set exceed budget {budget} "
            f"(relation arity {arities[0] if arities else 1})"
        )
    return [ExtensionType(A, s) for s in patterns for A in _subsets(atoms)]


def apply_type(F: FiniteStructure, T: ExtensionType) -> FiniteStructure:
    """The prime extension ``F_T``: ``F`` plus a new vertex ``z = |F|``."""
    z = F.size
    tuples = {n: set(ts) for n, ts in F.tuples.items()}
    for name, j, rest in T.atoms:
        if name not in tuples:
            raise InputError(f"type mentions unknown relation {name!r}")
        if len(rest) != F.signature.arity(name) - 1 or not 0 <= j <= len(rest):
            raise InputError(f"malformed atom {(name, j, rest)}")
        tuples[name].add(rest[:j] + (z,) + rest[j:])
    flags = {n: set(vs) for n, vs in F.unary_flags.items()}
    for name in T.unary:
        if name not in flags:
            raise InputError(f"type mentions unknown unary {name!r}")
        flags[name].add(z)
    return FiniteStructure(F.signature, z + 1, tuples, flags)


def is_good(T: ExtensionType, F: FiniteStructure, oracle: ClassOracle) -> bool:
    return oracle(apply_type(F, T))


def good_types(F: FiniteStructure, oracle: ClassOracle, budget: int = DEFAULT_TYPE_BUDGET) -> list[ExtensionType]:
    return [T for T in enumerate_extension_types(F, budget, oracle) if is_good(T, F, oracle)]


# -- realizations ---------------------------------------------------------------


def type_of(X: FiniteStructure, F: Sequence[int], z: int) -> ExtensionType:
    """Type of ``z`` over ``F`` in ``X``, in the coordinates of ``induced(X, F)``."""
    pos = {v: i for i, v in enumerate(sorted(F))}
    atoms = []
    for name, j, rest in X.incidence[z]:
        if all(v in pos for v in rest):
            atoms.append((name, j, tuple(pos[v] for v in rest)))
    unary = frozenset(u for u in X.signature.unaries if z in X.unary_flags[u])
    return ExtensionType(frozenset(atoms), unary)


def realizations(X: FiniteStructure, F: Iterable[int], T: ExtensionType) -> list[int]:
    """Vertices ``z`` outside ``F`` such that ``F + z`` realizes ``F_T`` in ``X``."""
    F = sorted(set(F))
    for v in F:
        if not 0 <= v < X.size:
            raise InputError(f"vertex {v} out of range")
    inF = set(F)
    return [z for z in range(X.size) if z not in inF and type_of(X, F, z) == T]


def realized_types(X: FiniteStructure, F: Iterable[int], candidates: Iterable[int] | None = None):
    """Map type -> realizing vertices, for every type realized over ``F``."""
    F = sorted(set(F))
    inF = set(F)
    out: dict[ExtensionType, list[int]] = {}
    for z in (range(X.size) if candidates is None else candidates):
        if z not in inF:
            out.setdefault(type_of(X, F, z), []).append(z)
    return out


def base_structure(X: FiniteStructure, F: Iterable[int]) -> FiniteStructure:
    return induced_with_map(X, F)[0]
