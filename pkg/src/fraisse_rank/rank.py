"""Exact rank of finite subsets of a finite host.

For a finite host ``X`` the rank of ``F`` is a natural number:

* 0 if some class-legal one-point extension of ``F`` has no realization;
* otherwise ``1 + min_T max_z rank(F + z)`` over good types ``T`` and
  realizations ``z`` of ``T``.

Every vertex outside ``F`` realizes exactly one type over ``F`` and every
realized type is good (the class is hereditary), so the realized types are
found by grouping vertices by their type key and compared by *count* with
the number of good types.  Subsets are bitmasks relative to the host.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from .enumeration import enumerate_up_to, find_embedding
from .errors import InputError, ResourceError
from .extensions import ExtensionType, good_types, realizations
from .oracles import ClassOracle, Kind
from .structures import FiniteStructure, induced, list_to_mask, mask_to_list

DEFAULT_MAX_HOST = 24


def max_host_size() -> int:
    raw = os.environ.get("RANK_MAX_HOST")
    if raw is None:
        return DEFAULT_MAX_HOST
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"RANK_MAX_HOST must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("RANK_MAX_HOST must be positive")
    return value


def as_mask(F) -> int:
    if isinstance(F, int):
        return F
    return list_to_mask(F)


class RankMemo:
    """Memoized rank computation over one fixed host and class."""

    def __init__(self, host: FiniteStructure, oracle: ClassOracle, max_host: int | None = None):
        cap = max_host if max_host is not None else max_host_size()
        if host.size > cap:
            raise ResourceError(
                f"host has {host.size} vertices; exhaustive rank is capped at {cap} "
                "(set RANK_MAX_HOST to override)"
            )
        if not oracle(host):
            raise InputError(f"host is not a member of class {oracle}")
        self.host = host
        self.oracle = oracle
        self.n = host.size
        self.full = (1 << self.n) - 1
        self.table: dict[int, int] = {}
        self._good_count: dict[int, int] = {}
        self._compile()

    def _compile(self):
        X = self.host
        self._binary = [name for name, a in X.signature.relations if a == 2]
        self._higher = [name for name, a in X.signature.relations if a > 2]
        self._out = {r: [0] * self.n for r in self._binary}
        self._in = {r: [0] * self.n for r in self._binary}
        for r in self._binary:
            for a, b in X.tuples[r]:
                self._out[r][a] |= 1 << b
                self._in[r][b] |= 1 << a
        self._hi_atoms = [
            [(r, j, rest, list_to_mask(rest)) for r, j, rest in X.incidence[v] if r in self._higher]
            for v in range(self.n)
        ]
        self._unary = [X.unary_pattern(v) for v in range(self.n)]
        self._outs = [self._out[r] for r in self._binary]
        self._ins = [self._in[r] for r in self._binary]

    def type_key(self, z: int, F: int):
        """Hashable key identifying the type of ``z`` over ``F``."""
        key = [self._unary[z]]
        for o, i in zip(self._outs, self._ins):
            key.append(o[z] & F)
            key.append(i[z] & F)
        if self._higher:
            key.append(frozenset((r, j, rest) for r, j, rest, m in self._hi_atoms[z] if m & ~F == 0))
        return tuple(key)

    def groups(self, F: int) -> dict:
        """Realizing vertices outside ``F`` grouped by type, in vertex order."""
        out: dict = {}
        rest = self.full & ~F
        while rest:
            low = rest & -rest
            z = low.bit_length() - 1
            rest ^= low
            out.setdefault(self.type_key(z, F), []).append(z)
        return out

    def good_type_count(self, F: int) -> int:
        k = self.oracle.kind
        if k in (Kind.GRAPH, Kind.TOURNAMENT):
            return 1 << bin(F).count("1")
        if k is Kind.LINEAR_ORDER:
            return bin(F).count("1") + 1
        if k is Kind.UNARY_ONLY:
            return 1 << self.oracle.param
        c = self._good_count.get(F)
        if c is None:
            c = self.oracle.count_good_types(induced(self.host, mask_to_list(F)))
            self._good_count[F] = c
        return c

    def rank(self, F: int) -> int:
        r = self.table.get(F)
        if r is not None:
            return r
        groups = self.groups(F)
        needed = self.good_type_count(F)
        if len(groups) < needed:
            self.table[F] = 0
            return 0
        if len(groups) > needed:
            raise AssertionError("realized types outnumber good types; class oracle is inconsistent")
        best = None
        for zs in groups.values():
            gmax = -1
            for z in zs:
                r = self.rank(F | 1 << z)
                if r > gmax:
                    gmax = r
                    if best is not None and gmax >= best:
                        break
            if best is None or gmax < best:
                best = gmax
                if best == 0:
                    break
        value = best + 1
        self.table[F] = value
        return value

    def check_mask(self, F: int):
        if F < 0 or F & ~self.full:
            raise InputError(f"subset mask {F:#x} has vertices outside the host")

    def witness(self, F: int) -> ExtensionType | None:
        """Unrealizable good type if the rank is 0, else the pessimal type.

        Ties are broken by canonical type order.
        """
        verts = mask_to_list(F)
        base = induced(self.host, verts)
        best_t, best_v = None, None
        for T in good_types(base, self.oracle):
            zs = realizations(self.host, verts, T)
            if not zs:
                return T
            v = max(self.rank(F | 1 << z) for z in zs)
            if best_v is None or v < best_v:
                best_t, best_v = T, v
        return best_t


def rank_subset(memo: RankMemo, F: int | Iterable[int]) -> int:
    """Exact rank of the subset ``F`` (bitmask or vertex iterable) in ``memo.host``."""
    F = as_mask(F)
    memo.check_mask(F)
    return memo.rank(F)


def rank(X: FiniteStructure, oracle: ClassOracle) -> int:
    return rank_subset(RankMemo(X, oracle), 0)


def rank_zero_witness(memo: RankMemo, F: int | Iterable[int]) -> ExtensionType | None:
    """A good type with no realization over ``F``, or None if the rank is positive."""
    F = as_mask(F)
    memo.check_mask(F)
    if memo.rank(F) != 0:
        return None
    return memo.witness(F)


def all_ranks(memo: RankMemo) -> dict[int, int]:
    """Rank of every subset of the host."""
    return {F: memo.rank(F) for F in range(memo.full + 1)}


# -- embeddability --------------------------------------------------------------


def embeds_all_up_to(X: FiniteStructure, oracle: ClassOracle, n: int, cap: int = 7) -> bool:
    """Whether every class member with at most ``n`` vertices embeds into ``X``."""
    for A in enumerate_up_to(X.signature, oracle, n, cap):
        if find_embedding(A, X) is None:
            return False
    return True


@dataclass
class IntermediateValuesReport:
    passed: bool
    attained: list[int]
    counterexample: dict | None = None


def check_intermediate_values(X: FiniteStructure, oracle: ClassOracle, memo: RankMemo | None = None):
    """For each subset of rank ``a`` and each ``b < a``, some subset has rank ``b``."""
    memo = memo or RankMemo(X, oracle)
    ranks = all_ranks(memo)
    attained = sorted(set(ranks.values()))
    top = max(attained) if attained else 0
    for b in range(top):
        if b not in attained:
            F = next(m for m, r in ranks.items() if r > b)
            return IntermediateValuesReport(
                False, attained, {"subset": mask_to_list(F), "rank": ranks[F], "missing": b}
            )
    return IntermediateValuesReport(True, attained)


# -- unary classes --------------------------------------------------------------


def unary_rank_check(X: FiniteStructure, oracle: ClassOracle, F: Iterable[int] | int) -> int:
    """Rank in a purely unary class: least number of spare vertices of any colour."""
    if oracle.kind is not Kind.UNARY_ONLY or X.signature.relations:
        raise InputError("unary_rank_check needs a unary-only class and host")
    if not oracle(X):
        raise InputError(f"host is not a member of class {oracle}")
    Fset = set(mask_to_list(F) if isinstance(F, int) else F)
    counts = {}
    for v in range(X.size):
        if v not in Fset:
            p = X.unary_pattern(v)
            counts[p] = counts.get(p, 0) + 1
    k = oracle.param
    if len(counts) < 2 ** k:
        return 0
    return min(counts.values())


# -- N(n) search harness ------------------------------------------------------------


@dataclass
class UniversalitySearch:
    rank: int
    lower: int
    candidate: int | None
    upper: int | None
    conclusive: bool
    max_size: int
    certificates: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "lower": self.lower,
            "candidate": self.candidate,
            "upper": self.upper,
            "conclusive": self.conclusive,
            "max_size": self.max_size,
            "certificates": self.certificates,
            "notes": self.notes,
        }


def search_universality_number(
    oracle: ClassOracle, n: int, max_size: int = 7, hosts=None
) -> UniversalitySearch:
    """Bounds on the least ``N`` such that containing all ``N``-vertex graphs forces rank >= ``n``.

    A host of at most ``max_size`` vertices that contains every graph of size
    ``N`` but has rank below ``n`` proves ``N(n) > N``.  The smallest ``N`` with
    no such host up to the cap is reported as ``candidate``; it is only a
    proven value when it meets the upper bound ``|H_n|``.
    """
    if oracle.kind is not Kind.GRAPH:
        raise InputError("the universality-number search is implemented for graphs only")
    if n < 1:
        raise InputError("target rank must be >= 1")
    if hosts is None:
        hosts = enumerate_up_to(oracle.signature, oracle, max_size, cap=max(max_size, 7))
    from .constructions import hn_layer_sizes

    upper = sum(hn_layer_sizes(oracle, n))
    result = UniversalitySearch(n, 0, None, upper, False, max_size)
    ranked = [(X, rank(X, oracle)) for X in hosts]
    N = 0
    while True:
        if N > max_size:
            result.notes.append(f"no candidate within host cap {max_size}")
            break
        small = enumerate_up_to(oracle.signature, oracle, N)
        small = [A for A in small if A.size == N]
        witness = None
        for X, r in ranked:
            if r < n and X.size >= N and all(find_embedding(A, X) is not None for A in small):
                witness = (X, r)
                break
        if witness is None:
            result.candidate = N
            break
        X, r = witness
        result.lower = N + 1
        result.certificates.append({"contains_all_of_size": N, "rank": r, "host": X.to_dict()})
        N += 1
    result.conclusive = result.candidate is not None and result.candidate == result.upper
    if result.candidate is not None and not result.conclusive:
        result.notes.append(
            f"no counterexample host with <= {max_size} vertices for N={result.candidate}; "
            f"proven bounds {result.lower} <= N({n}) <= {upper}"
        )
    return result
