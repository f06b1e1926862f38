"""Membership oracles for the hereditary classes the engine knows about."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from math import perm

from .errors import InputError
from .structures import (
    GRAPH_SIGNATURE,
    ORDER_SIGNATURE,
    FiniteStructure,
    RelationalSignature,
    unary_signature,
)


class Kind(enum.Enum):
    ALL_IRREFLEXIVE = "all-irreflexive"
    GRAPH = "graph"
    KN_FREE = "kn-free"
    TOURNAMENT = "tournament"
    LINEAR_ORDER = "linear-order"
    PARTIAL_ORDER = "partial-order"
    UNARY_ONLY = "unary"


@dataclass(frozen=True)
class ClassOracle:
    """A hereditary, isomorphism-invariant class of finite structures.

    ``param`` is the clique size for ``KN_FREE`` and the number of unary
    predicates for ``UNARY_ONLY``; it is ignored otherwise.  For
    ``ALL_IRREFLEXIVE`` the signature must be supplied.
    """

    kind: Kind
    param: int = 0
    sig: RelationalSignature | None = None

    def __post_init__(self):
        if self.kind is Kind.KN_FREE and self.param < 2:
            raise InputError("K_n-free needs n >= 2")
        if self.kind is Kind.UNARY_ONLY and self.param < 0:
            raise InputError("number of unary predicates must be >= 0")

    @property
    def name(self) -> str:
        if self.kind is Kind.KN_FREE:
            return f"k{self.param}-free"
        if self.kind is Kind.UNARY_ONLY:
            return f"unary-{self.param}"
        return self.kind.value

    def __str__(self):
        return self.name

    @property
    def signature(self) -> RelationalSignature:
        if self.kind in (Kind.GRAPH, Kind.KN_FREE, Kind.TOURNAMENT):
            return GRAPH_SIGNATURE
        if self.kind in (Kind.LINEAR_ORDER, Kind.PARTIAL_ORDER):
            return ORDER_SIGNATURE
        if self.kind is Kind.UNARY_ONLY:
            return unary_signature(self.param)
        if self.sig is None:
            return GRAPH_SIGNATURE
        return self.sig

    @property
    def has_fap_and_fep(self) -> bool:
        return self.kind in (Kind.ALL_IRREFLEXIVE, Kind.GRAPH)

    # -- membership ---------------------------------------------------------

    def _binary(self, X: FiniteStructure):
        rels = X.signature.relations
        if len(rels) != 1 or rels[0][1] != 2 or X.signature.unaries:
            return None
        return X.tuples[rels[0][0]]

    def __call__(self, X: FiniteStructure) -> bool:
        return self.contains(X)

    def contains(self, X: FiniteStructure) -> bool:
        k = self.kind
        if k is Kind.ALL_IRREFLEXIVE:
            return self.sig is None or X.signature == self.sig
        if k is Kind.UNARY_ONLY:
            return not X.signature.relations and len(X.signature.unaries) == self.param
        E = self._binary(X)
        if E is None:
            return False
        if k in (Kind.GRAPH, Kind.KN_FREE):
            if any((b, a) not in E for a, b in E):
                return False
            if k is Kind.KN_FREE:
                return not _has_clique(X, self.param)
            return True
        n = X.size
        if k in (Kind.TOURNAMENT, Kind.LINEAR_ORDER):
            for a, b in combinations(range(n), 2):
                if ((a, b) in E) == ((b, a) in E):
                    return False
            if k is Kind.LINEAR_ORDER:
                return _transitive(E)
            return True
        if k is Kind.PARTIAL_ORDER:
            if any((b, a) in E for a, b in E):
                return False
            return _transitive(E)
        raise AssertionError(k)

    # -- type counting ------------------------------------------------------

    def count_good_types(self, F: FiniteStructure) -> int:
        """Number of one-point extension types of ``F`` that stay in the class."""
        k = self.kind
        m = F.size
        if k in (Kind.GRAPH, Kind.TOURNAMENT):
            return 2 ** m
        if k is Kind.LINEAR_ORDER:
            return m + 1
        if k is Kind.UNARY_ONLY:
            return 2 ** self.param
        if k is Kind.ALL_IRREFLEXIVE:
            sig = F.signature
            bits = len(sig.unaries) + sum(a * perm(m, a - 1) for _, a in sig.relations)
            return 2 ** bits
        # KN_FREE and PARTIAL_ORDER: count by enumeration
        from .extensions import apply_type, enumerate_extension_types

        return sum(1 for T in enumerate_extension_types(F, oracle=self) if self(apply_type(F, T)))


def _transitive(E) -> bool:
    succ = {}
    for a, b in E:
        succ.setdefault(a, set()).add(b)
    for a, b in E:
        for c in succ.get(b, ()):
            if c != a and (a, c) not in E:
                return False
            if c == a:
                return False
    return True


def _has_clique(X: FiniteStructure, n: int) -> bool:
    adj = X.adjacency_masks

    def extend(cands: int, size: int) -> bool:
        if size == n:
            return True
        while cands:
            v = cands.bit_length() - 1
            cands &= ~(1 << v)
            if extend(cands & adj[v], size + 1):
                return True
        return False

    return extend((1 << X.size) - 1, 0)


GRAPHS = ClassOracle(Kind.GRAPH)
TOURNAMENTS = ClassOracle(Kind.TOURNAMENT)
LINEAR_ORDERS = ClassOracle(Kind.LINEAR_ORDER)
PARTIAL_ORDERS = ClassOracle(Kind.PARTIAL_ORDER)


def kn_free(n: int) -> ClassOracle:
    return ClassOracle(Kind.KN_FREE, n)


def unary_only(k: int) -> ClassOracle:
    return ClassOracle(Kind.UNARY_ONLY, k)


def all_irreflexive(sig: RelationalSignature | None = None) -> ClassOracle:
    return ClassOracle(Kind.ALL_IRREFLEXIVE, sig=sig)


def parse_class(name: str, signature: RelationalSignature | None = None) -> ClassOracle:
    """Oracle from a CLI class name such as ``graph``, ``k3-free`` or ``unary-2``."""
    name = name.strip().lower()
    simple = {
        "graph": GRAPHS,
        "tournament": TOURNAMENTS,
        "linear-order": LINEAR_ORDERS,
        "partial-order": PARTIAL_ORDERS,
    }
    if name in simple:
        return simple[name]
    if name in ("all-irreflexive", "digraph"):
        return all_irreflexive(signature)
    if name.startswith("k") and name.endswith("-free"):
        try:
            return kn_free(int(name[1:-5]))
        except ValueError:
            pass
    if name.startswith("unary"):
        if name == "unary" and signature is not None:
            return unary_only(len(signature.unaries))
        try:
            return unary_only(int(name.split("-", 1)[1]))
        except (IndexError, ValueError):
            pass
    raise InputError(
        f"unknown class {name!r}; expected graph, tournament, linear-order, "
        "partial-order, all-irreflexive, kN-free or unary-K"
    )
