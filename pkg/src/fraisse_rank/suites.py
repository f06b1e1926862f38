"""Named verification suites.

Each suite runs an exhaustive or seeded-random family of checks and returns a
:class:`SuiteResult`.  With ``fault=True`` the first check of every suite is
deliberately inverted, which exercises the failure path end to end.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable

from .constructions import (
    build_graph_Hn,
    build_tournament_Hn,
    certify_cover_property,
    certify_no_large_complete,
    kernel_amalgam,
    ordered_sum,
    verify_kernel_bound,
)
from .enumeration import (
    automorphisms,
    enumerate_structures,
    find_embedding,
    random_graph,
    random_tournament,
)
from .extensions import apply_type, enumerate_extension_types, good_types, realizations
from .game import game_value_table
from .oracles import GRAPHS, LINEAR_ORDERS, TOURNAMENTS, unary_only
from .orders import rank_closed_form, rank_via_intervals, rank_via_recursion, splitter_check
from .ordinals import (
    OMEGA,
    CNFOrdinal,
    cnf_add,
    certify_successor_steps,
    floor_log2,
    h_recurrence,
    hausdorff_vd,
    one_plus,
    omega_times,
    parse_ordinal,
    random_ordinal,
    rank_of_ordinal,
    rank_of_Z_times,
    rank_property_witness,
    successor,
)
from .rank import (
    RankMemo,
    all_ranks,
    check_intermediate_values,
    embeds_all_up_to,
    rank,
    search_universality_number,
    unary_rank_check,
)
from .structures import (
    FiniteStructure,
    GRAPH_SIGNATURE,
    chain,
    graph,
    induced_with_map,
    is_complete,
    list_to_mask,
    mask_to_list,
    unary_structure,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    seconds: float
    seed: int
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "seconds": round(self.seconds, 3),
            "seed": self.seed,
            "counterexample": self.counterexample,
            "details": self.details,
        }


class Checker:
    """Counts checks and keeps the first failure."""

    def __init__(self, fault: bool = False):
        self.count = 0
        self.failure: dict | None = None
        self.fault = fault
        self.details: dict = {}

    def check(self, ok: bool, **context) -> bool:
        if self.fault and self.count == 0:
            ok = not ok
            context = {"injected_fault": True, **context}
        self.count += 1
        if not ok and self.failure is None:
            self.failure = _jsonable(context)
        return ok

    @property
    def failed(self) -> bool:
        return self.failure is not None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in (sorted(x) if isinstance(x, (set, frozenset)) else x)]
    if isinstance(x, FiniteStructure):
        return x.to_dict()
    if isinstance(x, CNFOrdinal):
        return str(x)
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return x


# -- acceptance suites --------------------------------------------------------------------


def suite_finite_linear_orders(c: Checker, rng: random.Random):
    for m in range(21):
        got = rank(chain(m), LINEAR_ORDERS)
        c.check(got == floor_log2(m + 1), size=m, rank=got)


def suite_interval_characterization(c: Checker, rng: random.Random):
    for m in range(13):
        memo = RankMemo(chain(m), LINEAR_ORDERS)
        for F, r in all_ranks(memo).items():
            c.check(r == rank_via_intervals(m, mask_to_list(F)), size=m, subset=mask_to_list(F), rank=r)


def suite_tournament_hn(c: Checker, rng: random.Random):
    for n in range(1, 5):
        L = build_tournament_Hn(n)
        c.check(L.size == 2 ** n - 1, n=n, size=L.size)
        r = rank(L.base, TOURNAMENTS)
        c.check(r == n, n=n, rank=r)


def suite_graph_hn(c: Checker, rng: random.Random):
    for n in range(1, 4):
        L = build_graph_Hn(None, GRAPHS, n)
        r = rank(L.base, GRAPHS)
        c.check(r == n, n=n, rank=r)
    L = build_graph_Hn(None, GRAPHS, 4)
    c.details["graph_h4_size"] = L.size
    cover = certify_cover_property(L, GRAPHS)
    c.check(bool(cover.passed), certificate=cover)
    complete = certify_no_large_complete(L, 4)
    c.check(bool(complete.passed), certificate=complete)


FIVE_VERTEX = graph(5, [(0, 1), (0, 2), (1, 2), (0, 3)])


def suite_small_counterexamples(c: Checker, rng: random.Random):
    threes = enumerate_structures(None, GRAPHS, 3)
    c.check(len(threes) == 4, count=len(threes))
    for A in threes:
        c.check(find_embedding(A, FIVE_VERTEX) is not None, missing=A)
    r = rank(FIVE_VERTEX, GRAPHS)
    c.check(r == 2, rank=r)
    empty3 = graph(3)
    # every labelled 4-vertex graph containing a triangle
    pairs = list(combinations(range(4), 2))
    for bits in range(1 << len(pairs)):
        X = graph(4, [p for i, p in enumerate(pairs) if bits >> i & 1])
        if any(is_complete(X, S) for S in combinations(range(4), 3)):
            c.check(find_embedding(empty3, X) is None, host=X)
    T2 = FiniteStructure(GRAPH_SIGNATURE, 2, {"E": [(0, 1)]})
    c.check(embeds_all_up_to(T2, TOURNAMENTS, 2), host=T2)
    r = rank(T2, TOURNAMENTS)
    c.check(r == 1, rank=r)


def _tournaments_up_to(n: int) -> list[FiniteStructure]:
    return [T for k in range(1, n + 1) for T in enumerate_structures(None, TOURNAMENTS, k)]


def _sum_checks(c: Checker, A: FiniteStructure, B: FiniteStructure, ranks: dict):
    S = ordered_sum([A, B], "tournament")
    memo = RankMemo(S, TOURNAMENTS)
    a_part = range(A.size)
    for a in a_part:
        for z in range(A.size, S.size):
            r = memo.rank(1 << a | 1 << z)
            c.check(r == 0, check="cross-piece", A=A, B=B, pair=[a, z], rank=r)
    ra, rb = ranks[A], ranks[B]
    rs = memo.rank(0)
    c.check(rs <= max(ra, rb) + 2, check="sum-bound", A=A, B=B, rank=rs)
    memo_a = RankMemo(A, TOURNAMENTS)
    for F in range(1, 1 << A.size):
        r, ra_f = memo.rank(F), memo_a.rank(F)
        c.check(r <= ra_f + 1, check="localization", A=A, B=B, subset=mask_to_list(F), rank=r, local=ra_f)


def suite_cross_piece(c: Checker, rng: random.Random, max_size: int = 5, random_pairs: int = 200):
    small = _tournaments_up_to(max_size)
    ranks = {T: rank(T, TOURNAMENTS) for T in small}
    for A, B in product(small, repeat=2):
        _sum_checks(c, A, B, ranks)
    for _ in range(random_pairs):
        A, B = random_tournament(5, rng), random_tournament(5, rng)
        for T in (A, B):
            if T not in ranks:
                ranks[T] = rank(T, TOURNAMENTS)
        _sum_checks(c, A, B, ranks)
    chain_ranks = {m: rank(chain(m), LINEAR_ORDERS) for m in range(21)}
    for a, b in product(range(11), repeat=2):
        S = ordered_sum([chain(a), chain(b)], "linear-order")
        c.check(S == chain(a + b), check="sum is a chain", sizes=[a, b])
        c.check(
            chain_ranks[a + b] <= max(chain_ranks[a], chain_ranks[b]) + 1,
            check="order-sum-bound",
            sizes=[a, b],
        )


def suite_game_rank(c: Checker, rng: random.Random):
    for oracle in (GRAPHS, TOURNAMENTS):
        for n in range(6):
            for X in enumerate_structures(None, oracle, n):
                memo = RankMemo(X, oracle)
                for F, v in game_value_table(X, oracle).items():
                    r = memo.rank(F)
                    c.check(v == r, host=X, subset=mask_to_list(F), game=v, rank=r)


def _monotone_checks(c: Checker, X: FiniteStructure, oracle, rng: random.Random):
    memo = RankMemo(X, oracle)
    ranks = all_ranks(memo)
    n = X.size
    for F, r in ranks.items():
        c.check(r <= n - bin(F).count("1"), check="size-bound", host=X, subset=mask_to_list(F), rank=r)
        for v in range(n):
            if not F >> v & 1:
                c.check(ranks[F | 1 << v] <= r, check="monotone", host=X, subset=mask_to_list(F), vertex=v)
    autos = []
    for f in automorphisms(X):
        autos.append(f)
        if len(autos) >= 24:
            break
    for f in autos:
        for F, r in ranks.items():
            img = list_to_mask(f[v] for v in mask_to_list(F))
            c.check(ranks[img] == r, check="automorphism", host=X, subset=mask_to_list(F), map=f)
    for _ in range(2):
        S = [v for v in range(n) if rng.random() < 0.7]
        Y, to_y = induced_with_map(X, S)
        memo_y = RankMemo(Y, oracle)
        for F in range(1 << len(S)):
            orig = list_to_mask(S[i] for i in mask_to_list(F))
            c.check(memo_y.rank(F) <= ranks[orig], check="sub-host", host=X, sub=S, subset=mask_to_list(F))
        c.check(memo_y.rank(0) <= ranks[0], check="induced rank", host=X, sub=S)
    rep = check_intermediate_values(X, oracle, memo)
    c.check(rep.passed, check="intermediate values", host=X, counterexample=rep.counterexample)


def suite_monotonicity(c: Checker, rng: random.Random, hosts: int = 500):
    for i in range(hosts):
        n = rng.randint(1, 7)
        if i % 2 == 0:
            _monotone_checks(c, random_graph(n, rng), GRAPHS, rng)
        else:
            _monotone_checks(c, random_tournament(n, rng), TOURNAMENTS, rng)


def _random_leaf(H: FiniteStructure, size: int, oracle, rng: random.Random):
    """Random class member of the given size containing ``H`` on ``0..|H|-1``."""
    while True:
        X = random_graph(size, rng) if oracle is GRAPHS else random_tournament(size, rng)
        extra = {name: {t for t in ts if any(v >= H.size for v in t)} for name, ts in X.tuples.items()}
        for name, ts in H.tuples.items():
            extra[name] |= set(ts)
        X = FiniteStructure(X.signature, size, extra)
        if oracle(X):
            return X, {v: v for v in range(H.size)}


def kernel_fixtures(rng: random.Random, count: int = 6):
    """Amalgams with at most 16 vertices over the kernels: empty, one vertex, 3-cycle."""
    E0 = FiniteStructure(GRAPH_SIGNATURE, 0)
    K1 = FiniteStructure(GRAPH_SIGNATURE, 1)
    T2 = build_tournament_Hn(2).base
    T3 = build_tournament_Hn(3).base
    triangle = graph(3, [(0, 1), (1, 2), (0, 2)])
    path = graph(2, [(0, 1)])
    out = [
        ("free-empty-triangles", kernel_amalgam(E0, [(triangle, {}), (triangle, {})], "free"), GRAPHS),
        ("free-k1-edges", kernel_amalgam(K1, [(path, {0: 0}), (path, {0: 0})], "free"), GRAPHS),
        ("sum-empty-3cycles", kernel_amalgam(E0, [(T2, {}), (T2, {})], "tournament-sum"), TOURNAMENTS),
        (
            "sum-3cycle-h3",
            kernel_amalgam(T2, [(T3, {0: 0, 1: 1, 2: 2}), (T3, {0: 0, 1: 1, 2: 2})], "tournament-sum"),
            TOURNAMENTS,
        ),
    ]
    for i in range(count):
        for H, mode, oracle in ((E0, "free", GRAPHS), (K1, "free", GRAPHS),
                                (E0, "tournament-sum", TOURNAMENTS), (K1, "tournament-sum", TOURNAMENTS),
                                (T2, "tournament-sum", TOURNAMENTS)):
            k = rng.randint(2, 3)
            budget = 14 - H.size
            sizes = [rng.randint(1, max(1, budget // k)) for _ in range(k)]
            leaves = [_random_leaf(H, H.size + s, oracle, rng) for s in sizes]
            out.append((f"{mode}-{H.size}-random-{i}", kernel_amalgam(H, leaves, mode), oracle))
    return out


def _kernel_checks(c: Checker, rng: random.Random, strict: bool):
    positive = 0
    for name, A, oracle in kernel_fixtures(rng):
        c.check(A.structure.size <= 16, fixture=name, size=A.structure.size)
        memo = RankMemo(A.structure, oracle)
        for leaf in range(len(A.leaves)):
            rep = verify_kernel_bound(A, oracle, leaf, memo=memo, strict=strict)
            c.check(rep.passed, fixture=name, leaf=leaf, failures=rep.failures[:3], count=len(rep.failures))
            positive += len(rep.cross_leaf_positive)
    if not strict:
        c.details["cross_leaf_positive_with_kernel"] = positive


def suite_kernel_bounds(c: Checker, rng: random.Random):
    """Kernel bound plus unconditional rank-0 claims for outside vertices."""
    _kernel_checks(c, rng, strict=True)


def suite_kernel_bounds_scoped(c: Checker, rng: random.Random):
    """Kernel bound, the |H| step, and rank-0 claims only where the amalgam
    is disconnected or an ordered sum."""
    _kernel_checks(c, rng, strict=False)


def _random_infinite(rng: random.Random, max_exp: int = 4, max_coeff: int = 64) -> CNFOrdinal:
    while True:
        a = random_ordinal(rng, max_exp, 4, max_coeff)
        if not a.is_finite():
            return a


def suite_ordinal_closed_forms(c: Checker, rng: random.Random, pairs: int = 10_000, certs: int = 1000):
    P = parse_ordinal
    table = [("w", "w"), ("w*2", "w+1"), ("w^2*3+w*5", "w*2+1"), ("w+7", "w")]
    for a, r in table:
        got = rank_of_ordinal(P(a))
        c.check(got == P(r), alpha=a, rank=got)
    for b in range(1, 6):
        for m in range(1, 70):
            alpha = CNFOrdinal.omega_power(CNFOrdinal.nat(b), m)
            want = cnf_add(omega_times(CNFOrdinal.nat(b)), CNFOrdinal.nat(floor_log2(m)))
            c.check(rank_of_ordinal(alpha) == want, alpha=alpha)
            c.check(rank_of_Z_times(alpha) == cnf_add(omega_times(one_plus(CNFOrdinal.nat(b))), CNFOrdinal.nat(floor_log2(m))), zalpha=alpha)
    for b in ("w", "w+1", "w^2"):
        alpha = CNFOrdinal.omega_power(P(b), 3)
        want = cnf_add(omega_times(one_plus(P(b))), CNFOrdinal.nat(1))
        c.check(rank_of_Z_times(alpha) == want, zalpha=alpha)
    for m in range(1, 200):
        c.check(rank_of_Z_times(CNFOrdinal.nat(m)) == cnf_add(OMEGA, CNFOrdinal.nat(floor_log2(m + 1))), m=m)
    for _ in range(pairs):
        a = _random_infinite(rng)
        lead = CNFOrdinal(a.terms[:1])
        c.check(rank_of_ordinal(a) == rank_of_ordinal(lead), check="leading term", alpha=a)
        c.check(rank_of_ordinal(a) == cnf_add(omega_times(hausdorff_vd(a)), CNFOrdinal.nat(floor_log2(a.leading_coefficient))), alpha=a)
        x, y = sorted((random_ordinal(rng), random_ordinal(rng)))
        c.check(rank_of_ordinal(x) <= rank_of_ordinal(y), check="monotone", pair=[x, y])
    h = [OMEGA]
    for k in range(1, 1001):
        h.append(successor(max(min(h[j], h[k - j - 1]) for j in range(k))))
    for m, v in enumerate(h):
        c.check(v == cnf_add(OMEGA, CNFOrdinal.nat(floor_log2(m + 1))), m=m, h=v)
    c.check(h_recurrence(1000) == h[1000], m=1000)
    for _ in range(certs):
        a = _random_infinite(rng)
        cert = certify_successor_steps(a)
        c.check(cert.passed, certificate=cert)


def suite_rank_property(c: Checker, rng: random.Random):
    for d in range(5):
        for k in range(10):
            gamma = cnf_add(omega_times(CNFOrdinal.nat(d)), CNFOrdinal.nat(k))
            w = rank_property_witness(gamma)
            c.check(rank_of_ordinal(w) == gamma, target=gamma, witness=w)
            if d == 0:
                c.check(w == CNFOrdinal.nat(2 ** k - 1), target=gamma, witness=w)
    # also targets with infinite and multi-term multipliers of w
    for _ in range(200):
        d = random_ordinal(rng, 4, 3, 5)
        gamma = cnf_add(omega_times(d), CNFOrdinal.nat(rng.randrange(10)))
        w = rank_property_witness(gamma)
        c.check(rank_of_ordinal(w) == gamma, target=gamma, witness=w)


def _count_vectors(k: int, total: int):
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _count_vectors(k - 1, total - first):
            yield (first,) + rest


def suite_unary(c: Checker, rng: random.Random):
    for k in (0, 1, 2):
        oracle = unary_only(k)
        patterns = list(product((False, True), repeat=k))
        for size in range(9):
            for counts in _count_vectors(len(patterns), size):
                rows = [p for p, n in zip(patterns, counts) for _ in range(n)]
                X = unary_structure(k, rows)
                memo = RankMemo(X, oracle)
                for F in range(1 << size):
                    want = memo.rank(F)
                    got = unary_rank_check(X, oracle, F)
                    c.check(got == want, k=k, counts=counts, subset=mask_to_list(F), closed=got, rank=want)


# -- supporting suites ------------------------------------------------------------------


def suite_extension_types(c: Checker, rng: random.Random):
    for oracle, count in ((GRAPHS, lambda m: 2 ** m), (TOURNAMENTS, lambda m: 2 ** m), (LINEAR_ORDERS, lambda m: m + 1)):
        for m in range(5):
            for F in enumerate_structures(None, oracle, m):
                types = enumerate_extension_types(F, oracle=oracle)
                c.check(len(types) == count(m), oracle=oracle.name, base=F, count=len(types))
                c.check(types == enumerate_extension_types(F, oracle=oracle), check="deterministic")
                c.check(len(good_types(F, oracle)) == oracle.count_good_types(F), base=F)
                for T in types:
                    G = apply_type(F, T)
                    c.check(realizations(G, range(m), T) == [m], check="round trip", base=F, type=T)


def suite_hereditary(c: Checker, rng: random.Random):
    from .oracles import PARTIAL_ORDERS, kn_free

    for oracle in (GRAPHS, TOURNAMENTS, LINEAR_ORDERS, PARTIAL_ORDERS, kn_free(3)):
        for m in range(5):
            for X in enumerate_structures(None, oracle, m):
                for S in range(1 << m):
                    Y, _ = induced_with_map(X, mask_to_list(S))
                    c.check(oracle(Y), oracle=oracle.name, host=X, subset=mask_to_list(S))


def suite_interval_recursion(c: Checker, rng: random.Random):
    for m in range(64):
        c.check(rank_via_recursion([m]) == rank_closed_form(m), size=m)
    rep = splitter_check(20)
    c.check(rep.passed, failures=rep.failures[:3])
    c.details["splitter_cases"] = rep.checked


def suite_hn_prefix_bound(c: Checker, rng: random.Random):
    for L, oracle, top in ((build_tournament_Hn(4), TOURNAMENTS, 4),) + tuple(
        (build_graph_Hn(None, GRAPHS, n), GRAPHS, n) for n in (1, 2, 3)
    ):
        memo = RankMemo(L.base, oracle)
        n = L.n
        for j in range(n + 1):
            for xs in product(*L.layers[:j]):
                r = memo.rank(list_to_mask(xs))
                c.check(r >= n - j, construction=L.kind, n=n, prefix=list(xs), rank=r)


def suite_planted_hn(c: Checker, rng: random.Random, hosts: int = 20):
    for n in (2, 3):
        H = build_graph_Hn(None, GRAPHS, n).base
        for _ in range(hosts):
            extra = rng.randint(0, 3)
            X = random_graph(H.size + extra, rng)
            edges = {t for t in X.tuples["E"] if max(t) >= H.size} | set(H.tuples["E"])
            X = FiniteStructure(GRAPH_SIGNATURE, X.size, {"E": edges})
            r = rank(X, GRAPHS)
            c.check(r >= n, n=n, host=X, rank=r)


def suite_universality(c: Checker, rng: random.Random):
    r1 = search_universality_number(GRAPHS, 1, 4)
    c.check(r1.candidate == 1 and r1.conclusive, result=r1)
    r2 = search_universality_number(GRAPHS, 2, 4)
    c.check(r2.candidate == 2 and r2.lower == 2, result=r2)
    r3 = search_universality_number(GRAPHS, 3, 5)
    c.check(r3.lower >= 4, result=r3)


SUITES: dict[str, tuple[Callable, str]] = {
    "finite-linear-orders": (suite_finite_linear_orders, "chain ranks equal floor(log2(m+1)) for m <= 20"),
    "interval-characterization": (suite_interval_characterization, "subset rank equals least interval rank, |Y| <= 12"),
    "tournament-hn": (suite_tournament_hn, "tournament H_n has 2^n-1 vertices and rank n, n <= 4"),
    "graph-hn": (suite_graph_hn, "graph H_n has rank n for n <= 3; H_4 certificates"),
    "small-counterexamples": (suite_small_counterexamples, "embedding all small members does not force rank"),
    "cross-piece": (suite_cross_piece, "cross pairs, sum bounds and localization for ordered sums"),
    "game-rank": (suite_game_rank, "game value equals rank on graphs and tournaments up to 5 vertices"),
    "monotonicity": (suite_monotonicity, "monotonicity, sub-hosts, automorphisms, intermediate values"),
    "kernel-bounds": (suite_kernel_bounds, "kernel bound and unconditional rank-0 claims on amalgams"),
    "kernel-bounds-scoped": (suite_kernel_bounds_scoped, "kernel bound and rank-0 claims under their hypotheses"),
    "ordinal-closed-forms": (suite_ordinal_closed_forms, "closed-form ordinal ranks and successor certificates"),
    "rank-property": (suite_rank_property, "every target rank below w*5+10 has a witness order"),
    "unary": (suite_unary, "rank in unary classes is the scarcest colour count"),
    "extension-types": (suite_extension_types, "type counts, determinism and round trips"),
    "hereditary": (suite_hereditary, "oracles are closed under induced substructures"),
    "interval-recursion": (suite_interval_recursion, "recursive interval rank and splitter existence"),
    "hn-prefix-bound": (suite_hn_prefix_bound, "transversal prefixes of H_n keep rank >= n - j"),
    "planted-hn": (suite_planted_hn, "hosts containing graph H_n have rank >= n"),
    "universality": (suite_universality, "bounds on the universality number N(n), n <= 3"),
}

ACCEPTANCE = {
    1: "finite-linear-orders",
    2: "interval-characterization",
    3: "tournament-hn",
    4: "graph-hn",
    5: "small-counterexamples",
    6: "cross-piece",
    7: "game-rank",
    8: "monotonicity",
    9: "kernel-bounds",
    10: "ordinal-closed-forms",
    11: "rank-property",
    12: "unary",
}


def run_suite(name: str, seed: int = 0, fault: bool = False) -> SuiteResult:
    if name not in SUITES:
        from .errors import InputError

        raise InputError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    fn, _ = SUITES[name]
    checker = Checker(fault)
    start = time.perf_counter()
    fn(checker, random.Random(seed))
    elapsed = time.perf_counter() - start
    return SuiteResult(name, not checker.failed, checker.count, elapsed, seed, checker.failure, checker.details)


def run_suites(names, seed: int = 0, fault: bool = False) -> list[SuiteResult]:
    return [run_suite(n, seed, fault) for n in sorted(names)]
