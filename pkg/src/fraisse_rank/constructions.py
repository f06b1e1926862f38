"""Explicit finite structures: layered universal structures, kernel amalgams, sums.

Also the structural certificates (cover property, no large complete sets,
kernel bounds) used where brute-force rank is out of reach.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .errors import InputError, ResourceError
from .extensions import apply_type, good_types, type_of
from .oracles import TOURNAMENTS, ClassOracle, Kind
from .rank import RankMemo
from .structures import (
    GRAPH_SIGNATURE,
    ORDER_SIGNATURE,
    FiniteStructure,
    RelationalSignature,
    free_amalgam,
    induced_with_map,
    is_complete,
    list_to_mask,
    mask_to_list,
)

DEFAULT_MAX_HN = 2000
MAX_TOURNAMENT_HN = 10


@dataclass
class LayeredStructure:
    base: FiniteStructure
    layers: list[list[int]]
    provenance: dict[int, dict]
    kind: str
    n: int

    @property
    def size(self) -> int:
        return self.base.size

    def layer_of(self, v: int) -> int:
        return self.provenance[v]["layer"]

    def extra_json(self) -> dict:
        return {
            "construction": {"kind": self.kind, "n": self.n},
            "layers": self.layers,
            "provenance": {str(v): p for v, p in sorted(self.provenance.items())},
        }

    @classmethod
    def from_json(cls, structure: FiniteStructure, data: dict) -> "LayeredStructure":
        try:
            meta = data["construction"]
            layers = [list(map(int, layer)) for layer in data["layers"]]
            prov = {int(v): p for v, p in data.get("provenance", {}).items()}
        except (KeyError, TypeError, ValueError):
            raise InputError("structure file has no layer information") from None
        return cls(structure, layers, prov, meta["kind"], int(meta["n"]))


# -- graph-style H_n ----------------------------------------------------------------


def hn_layer_sizes(oracle: ClassOracle, n: int, signature: RelationalSignature | None = None) -> list[int]:
    """Layer sizes of the free-amalgamation H_n without building it.

    For the built-in classes with free amalgamation the number of good types
    of a ``j``-element set depends only on ``j``.
    """
    sig = signature or oracle.signature
    sizes: list[int] = []
    for j in range(n):
        transversals = 1
        for s in sizes:
            transversals *= s
        sizes.append(transversals * oracle.count_good_types(FiniteStructure(sig, j)))
    return sizes


def _check_fap_fep(oracle: ClassOracle):
    if not oracle.has_fap_and_fep:
        raise InputError(
            f"class {oracle} lacks free amalgamation or the full extension property; "
            "use build_tournament_Hn for tournaments"
        )


def build_graph_Hn(
    signature: RelationalSignature | None,
    oracle: ClassOracle,
    n: int,
    max_size: int = DEFAULT_MAX_HN,
) -> LayeredStructure:
    """Universal layered structure H_n for a class with free amalgamation.

    Layer 0 has one vertex per unary pattern.  Layer ``j`` has a fresh vertex
    for every transversal of the earlier layers and every good type of it,
    attached by free amalgamation over the transversal.  Vertices are
    numbered layer by layer, then by transversal, then by type.
    """
    _check_fap_fep(oracle)
    if n < 0:
        raise InputError("n must be >= 0")
    sig = signature or oracle.signature
    if oracle.kind is Kind.GRAPH and sig != GRAPH_SIGNATURE:
        raise InputError("graph class needs the graph signature")
    sizes = hn_layer_sizes(oracle, n, sig)
    total = sum(sizes)
    if total > max_size:
        raise ResourceError(f"H_{n} would have {total} vertices, over the cap of {max_size}")

    H = FiniteStructure(sig, 0)
    layers: list[list[int]] = []
    prov: dict[int, dict] = {}
    for j in range(n):
        layer = []
        for xs in product(*layers):
            xs = list(xs)
            base, _ = induced_with_map(H, xs)
            for T in good_types(base, oracle):
                ext = apply_type(base, T)
                z = H.size
                H = free_amalgam(H, ext, xs, range(len(xs)), {i: x for i, x in enumerate(xs)})
                layer.append(z)
                prov[z] = {"layer": j, "transversal": xs, "type": T.to_dict()}
        layers.append(layer)
    assert H.size == total
    return LayeredStructure(H, layers, prov, oracle.name, n)


# -- tournament H_n -------------------------------------------------------------------


def build_tournament_Hn(n: int) -> LayeredStructure:
    """Tournament on binary strings of length ``< n``.

    ``v(j,s) -> v(i,t)`` for ``j > i`` iff ``s[i] = 1``; within a layer
    ``v(j,s) -> v(j,t)`` iff ``s`` precedes ``t`` lexicographically.
    """
    if n < 0:
        raise InputError("n must be >= 0")
    if n > MAX_TOURNAMENT_HN:
        raise ResourceError(f"tournament H_{n} would have {2 ** n - 1} vertices; cap is n <= {MAX_TOURNAMENT_HN}")
    labels: list[tuple[int, tuple[int, ...]]] = []
    layers = []
    for j in range(n):
        layer = []
        for s in product((0, 1), repeat=j):
            layer.append(len(labels))
            labels.append((j, s))
        layers.append(layer)
    arcs = []
    for u, v in combinations(range(len(labels)), 2):
        (j, s), (i, t) = labels[v], labels[u]
        if j > i:
            arcs.append((v, u) if s[i] == 1 else (u, v))
        else:
            arcs.append((u, v) if t < s else (v, u))
    X = FiniteStructure(GRAPH_SIGNATURE, len(labels), {"E": arcs})
    prov = {v: {"layer": j, "string": "".join(map(str, s))} for v, (j, s) in enumerate(labels)}
    return LayeredStructure(X, layers, prov, "tournament", n)


# -- kernel amalgams and sums -----------------------------------------------------------


def is_embedding(A: FiniteStructure, X: FiniteStructure, f: dict[int, int]) -> bool:
    """Whether ``f`` is an induced embedding of ``A`` into ``X``."""
    if A.signature != X.signature or sorted(f) != list(range(A.size)):
        return False
    img = list(f.values())
    if len(set(img)) != len(img) or any(not 0 <= x < X.size for x in img):
        return False
    inside = set(img)
    for name, ts in A.tuples.items():
        mapped = {tuple(f[v] for v in t) for t in ts}
        present = {t for t in X.tuples[name] if all(v in inside for v in t)}
        if mapped != present:
            return False
    for name, vs in A.unary_flags.items():
        if {f[v] for v in vs} != X.unary_flags[name] & inside:
            return False
    return True


@dataclass
class KernelAmalgam:
    structure: FiniteStructure
    kernel: list[int]
    leaves: list[list[int]]
    leaf_maps: list[dict[int, int]]
    mode: str

    def leaf_with_kernel(self, k: int) -> list[int]:
        return sorted(self.kernel + self.leaves[k])

    def to_json_extra(self) -> dict:
        return {"kernel_amalgam": {"mode": self.mode, "kernel": self.kernel, "leaves": self.leaves}}


MODES = ("free", "tournament-sum")


def kernel_amalgam(
    H: FiniteStructure,
    leaves: Sequence[tuple[FiniteStructure, dict[int, int]]],
    mode: str = "free",
) -> KernelAmalgam:
    """Glue the leaves over a common kernel ``H``.

    ``leaves`` holds ``(leaf, embedding of H into leaf)`` pairs.  The kernel
    occupies ``0..|H|-1``; each leaf's remaining vertices follow in leaf
    order.  In ``free`` mode nothing relates different leaves; in
    ``tournament-sum`` mode every vertex of an earlier leaf beats every
    vertex of a later one.
    """
    if mode not in MODES:
        raise InputError(f"unknown amalgam mode {mode!r}; expected one of {MODES}")
    if mode == "tournament-sum":
        for leaf, _ in leaves:
            if not TOURNAMENTS(leaf):
                raise InputError("tournament-sum needs tournament leaves")
        if not TOURNAMENTS(H):
            raise InputError("tournament-sum needs a tournament kernel")
    tuples = {name: set(ts) for name, ts in H.tuples.items()}
    flags = {name: set(vs) for name, vs in H.unary_flags.items()}
    nxt = H.size
    parts, maps = [], []
    for idx, (leaf, emb) in enumerate(leaves):
        emb = {int(h): int(x) for h, x in dict(emb).items()}
        if leaf.signature != H.signature or not is_embedding(H, leaf, emb):
            raise InputError(f"leaf {idx}: the given map is not an embedding of the kernel")
        m = {x: h for h, x in emb.items()}
        part = []
        for v in range(leaf.size):
            if v not in m:
                m[v] = nxt
                part.append(nxt)
                nxt += 1
        for name, ts in leaf.tuples.items():
            tuples[name].update(tuple(m[v] for v in t) for t in ts)
        for name, vs in leaf.unary_flags.items():
            flags[name].update(m[v] for v in vs)
        parts.append(part)
        maps.append(m)
    if mode == "tournament-sum":
        name = H.signature.relations[0][0]
        for a, b in combinations(range(len(parts)), 2):
            tuples[name].update((u, w) for u in parts[a] for w in parts[b])
    X = FiniteStructure(H.signature, nxt, tuples, flags)
    return KernelAmalgam(X, list(range(H.size)), parts, maps, mode)


def ordered_sum(parts: Sequence[FiniteStructure], kind: str) -> FiniteStructure:
    """Concatenation with every cross pair oriented from earlier to later part."""
    if kind == "linear-order":
        from .oracles import LINEAR_ORDERS as oracle
        sig = ORDER_SIGNATURE
    elif kind == "tournament":
        oracle, sig = TOURNAMENTS, GRAPH_SIGNATURE
    else:
        raise InputError(f"unknown sum kind {kind!r}; expected linear-order or tournament")
    name = sig.relations[0][0]
    arcs = []
    offsets = []
    off = 0
    for i, P in enumerate(parts):
        if not oracle(P):
            raise InputError(f"part {i} is not a {kind}")
        arcs.extend(tuple(v + off for v in t) for t in P.tuples[name])
        offsets.append(off)
        off += P.size
    for a, b in combinations(range(len(parts)), 2):
        for u in range(parts[a].size):
            for w in range(parts[b].size):
                arcs.append((offsets[a] + u, offsets[b] + w))
    return FiniteStructure(sig, off, {name: arcs})


# -- certificates ------------------------------------------------------------------


@dataclass
class CertificateReport:
    name: str
    passed: bool | None
    checked: int = 0
    failure: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "certificate": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failure": self.failure,
            "notes": self.notes,
        }


def certify_cover_property(L: LayeredStructure, oracle: ClassOracle) -> CertificateReport:
    """Every good type of every transversal of layers ``< j`` is realized in layer ``j``."""
    X = L.base
    report = CertificateReport("cover", True)
    for j, layer in enumerate(L.layers):
        for xs in product(*L.layers[:j]):
            xs = list(xs)
            base, _ = induced_with_map(X, xs)
            realized = {type_of(X, xs, z) for z in layer}
            for T in good_types(base, oracle):
                report.checked += 1
                if T not in realized:
                    report.passed = False
                    report.failure = {"layer": j, "transversal": xs, "type": T.to_dict()}
                    return report
    return report


BRUTE_FORCE_COMPLETE_MAX = 16


def certify_no_large_complete(L: LayeredStructure, n: int | None = None) -> CertificateReport:
    """No ``n+1`` vertices are pairwise adjacent.

    Primary argument: at most ``n`` layers and no adjacency inside a layer,
    so by pigeonhole any ``n+1`` vertices contain a non-adjacent pair.
    Exhaustive search cross-checks small structures.
    """
    n = L.n if n is None else n
    report = CertificateReport("no-large-complete", True)
    if L.kind == "tournament":
        report.passed = None
        report.notes.append("not applicable: in a tournament every pair is joined by an arc")
        return report
    X = L.base
    if len(L.layers) > n:
        report.passed = False
        report.failure = {"reason": "more layers than n", "layers": len(L.layers), "n": n}
        return report
    adj = X.adjacency_masks
    for j, layer in enumerate(L.layers):
        mask = list_to_mask(layer)
        for v in layer:
            report.checked += 1
            if adj[v] & mask:
                w = mask_to_list(adj[v] & mask)[0]
                report.passed = False
                report.failure = {"reason": "adjacent vertices within a layer", "layer": j, "pair": [v, w]}
                return report
    report.notes.append(f"{len(L.layers)} layers, none with internal adjacency")
    if X.size <= BRUTE_FORCE_COMPLETE_MAX:
        for S in combinations(range(X.size), n + 1):
            report.checked += 1
            if is_complete(X, S):
                report.passed = False
                report.failure = {"reason": "complete set found by exhaustive search", "set": list(S)}
                return report
        report.notes.append("cross-checked by exhaustive search")
    return report


@dataclass
class KernelBoundReport:
    passed: bool
    bound_checks: int = 0
    zero_checks: int = 0
    small_checks: int = 0
    failures: list[dict] = field(default_factory=list)
    # cross-leaf pairs of positive rank when the kernel is nonempty
    cross_leaf_positive: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "bound_checks": self.bound_checks,
            "zero_checks": self.zero_checks,
            "small_checks": self.small_checks,
            "failures": self.failures,
            "cross_leaf_positive": self.cross_leaf_positive,
            "notes": self.notes,
        }


def _leaf_isolated(A: KernelAmalgam, k: int) -> bool:
    """Whether no vertex outside leaf ``k`` (minus kernel) is adjacent to it."""
    adj = A.structure.adjacency_masks
    inside = list_to_mask(A.leaves[k])
    return all(adj[v] & ~inside == 0 for v in A.leaves[k])


def verify_kernel_bound(
    A: KernelAmalgam,
    oracle: ClassOracle,
    leaf_id: int = 0,
    samples: int | None = None,
    seed: int = 0,
    memo: RankMemo | None = None,
    strict: bool = False,
) -> KernelBoundReport:
    """Check the kernel bound and the rank-0 consequences on one leaf.

    For ``F`` inside leaf+kernel meeting the leaf:

    * rank in the amalgam is at most rank in leaf+kernel plus ``|H| + 1``;
    * adding a vertex from outside leaf+kernel leaves rank at most ``|H|``.

    Rank-0 checks run where their hypotheses hold: in free mode when the leaf
    is disconnected from everything else (then any nonempty ``F`` in the leaf
    plus an outside vertex has rank 0); in tournament-sum mode when the
    kernel is empty, so the amalgam is an ordered sum and a pair from two
    leaves has rank 0.  With a nonempty kernel the cross-leaf pairs of
    positive rank are listed in ``cross_leaf_positive`` without failing the
    report.  ``samples=None`` checks every ``F``.

    With ``strict=True`` the rank-0 claims are checked unconditionally, as
    often stated for kernel amalgams: every checked ``F`` plus any outside
    vertex in free mode, every cross-leaf pair in tournament-sum mode.  These
    fail on many amalgams with a nonempty kernel.
    """
    if not 0 <= leaf_id < len(A.leaves):
        raise InputError(f"no leaf {leaf_id}")
    X = A.structure
    memo = memo or RankMemo(X, oracle)
    local_verts = A.leaf_with_kernel(leaf_id)
    local, to_local = induced_with_map(X, local_verts)
    local_memo = RankMemo(local, oracle)
    h = len(A.kernel)
    leaf_mask = list_to_mask(A.leaves[leaf_id])
    local_mask = list_to_mask(local_verts)
    outside = [v for v in range(X.size) if not local_mask >> v & 1]
    report = KernelBoundReport(True)

    subsets = [F for F in _submasks(local_mask) if F & leaf_mask]
    if samples is not None and samples < len(subsets):
        subsets = random.Random(seed).sample(subsets, samples)
        report.notes.append(f"{samples} sampled subsets, seed {seed}")

    for F in subsets:
        verts = mask_to_list(F)
        rx = memo.rank(F)
        ry = local_memo.rank(list_to_mask(to_local[v] for v in verts))
        report.bound_checks += 1
        if rx > ry + h + 1:
            report.failures.append({"check": "kernel-bound", "subset": verts, "rank": rx, "local_rank": ry})
        for x in outside:
            r = memo.rank(F | 1 << x)
            report.small_checks += 1
            if r > h:
                report.failures.append({"check": "kernel-size", "subset": verts, "outside": x, "rank": r})

    if strict:
        for F in subsets:
            for x in outside:
                if A.mode == "tournament-sum" and F & ~leaf_mask:
                    continue
                report.zero_checks += 1
                r = memo.rank(F | 1 << x)
                if r != 0:
                    report.failures.append(
                        {"check": "strict-zero", "subset": mask_to_list(F), "outside": x, "rank": r}
                    )
    elif A.mode == "free":
        if _leaf_isolated(A, leaf_id):
            for F in _submasks(leaf_mask):
                if not F:
                    continue
                for x in outside:
                    report.zero_checks += 1
                    r = memo.rank(F | 1 << x)
                    if r != 0:
                        report.failures.append(
                            {"check": "disconnected-zero", "subset": mask_to_list(F), "outside": x, "rank": r}
                        )
        else:
            report.notes.append("leaf is adjacent to the kernel; disconnected rank-0 check not applicable")
    else:
        for k, other in enumerate(A.leaves):
            if k == leaf_id:
                continue
            for a in A.leaves[leaf_id]:
                for z in other:
                    r = memo.rank(1 << a | 1 << z)
                    if h == 0:
                        report.zero_checks += 1
                        if r != 0:
                            report.failures.append({"check": "cross-leaf-zero", "pair": [a, z], "rank": r})
                    elif r != 0:
                        report.cross_leaf_positive.append({"pair": [a, z], "rank": r})
        if h and report.cross_leaf_positive:
            report.notes.append(
                f"{len(report.cross_leaf_positive)} cross-leaf pairs have positive rank: "
                "with a nonempty kernel the amalgam is not an ordered sum"
            )
    report.passed = not report.failures
    return report


def _submasks(mask: int):
    sub = mask
    out = []
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return sorted(out)
