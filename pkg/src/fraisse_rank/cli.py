"""Command-line interface.

Machine output is a single JSON document on stdout (keys sorted, so equal
inputs give byte-identical output); ``--pretty`` prints a plain table
instead.  Diagnostics go to stderr.  Exit codes: 0 success, 1 a check or
certificate failed, 2 bad input, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .constructions import (
    LayeredStructure,
    MODES,
    build_graph_Hn,
    build_tournament_Hn,
    certify_cover_property,
    certify_no_large_complete,
    kernel_amalgam,
    ordered_sum,
)
from .enumeration import find_embedding
from .errors import InputError, MoveError, RankError
from .game import game_step, game_value, new_game
from .oracles import GRAPHS, Kind, parse_class
from .orders import rank_via_intervals
from .ordinals import (
    certify_successor_steps,
    format_ordinal,
    hausdorff_vd,
    parse_ordinal,
    rank_of_ordinal,
    rank_of_reversed,
    rank_of_Z_times,
)
from .rank import RankMemo, rank_subset, search_universality_number
from .structures import FiniteStructure, dumps, load, mask_to_list
from .suites import SUITES, run_suites


@dataclass
class CommandConfig:
    subcommand: str
    class_name: str | None = None
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    max_host: int | None = None
    seed: int = 0
    pretty: bool = False
    verbose: int = 0

    def __post_init__(self):
        if self.max_host is not None and self.max_host <= 0:
            raise InputError("--max-host must be positive")
        if self.class_name is not None:
            parse_class(self.class_name)


def _config(args) -> CommandConfig:
    inputs = [p for p in (getattr(args, "host", None), getattr(args, "kernel", None)) if p]
    inputs += list(getattr(args, "leaves", None) or getattr(args, "parts", None) or [])
    return CommandConfig(
        subcommand=args.command,
        class_name=getattr(args, "cls", None),
        inputs=inputs,
        output=getattr(args, "out", None),
        max_host=getattr(args, "max_host", None),
        seed=getattr(args, "seed", 0),
        pretty=args.pretty,
        verbose=args.verbose,
    )


# -- output -------------------------------------------------------------------------------


def _emit(data: dict, pretty: bool, out=None):
    out = out or sys.stdout
    if not pretty:
        out.write(json.dumps(data, sort_keys=True) + "\n")
        return
    if "suites" in data:
        width = max(len(s["suite"]) for s in data["suites"]) if data["suites"] else 5
        for s in data["suites"]:
            mark = "PASS" if s["passed"] else "FAIL"
            out.write(f"{s['suite']:<{width}}  {mark}  {s['checks']:>8} checks  {s['seconds']:>8.2f}s\n")
        out.write(f"{'all':<{width}}  {'PASS' if data['passed'] else 'FAIL'}\n")
        return
    for key in sorted(data):
        value = data[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        out.write(f"{key:<16} {value}\n")


def _log(cfg: CommandConfig, msg: str):
    if cfg.verbose:
        print(msg, file=sys.stderr)


def _parse_subset(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise InputError(f"subset must be comma-separated vertex ids, got {text!r}") from None


def _load_host(path: str, class_name: str | None):
    X, raw = load(path)
    oracle = parse_class(class_name or "graph", X.signature)
    if not oracle(X):
        raise InputError(f"{path} is not a member of class {oracle}")
    return X, raw, oracle


def _write_structure(cfg: CommandConfig, X: FiniteStructure, extra: dict, summary: dict) -> dict:
    text = dumps(X, **extra)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
        _log(cfg, f"wrote {cfg.output}")
        return {**summary, "out": cfg.output}
    return json.loads(text)


# -- subcommands ----------------------------------------------------------------------------


def cmd_rank(args, cfg: CommandConfig) -> int:
    subset = _parse_subset(args.subset)
    if args.size is not None:
        if args.host:
            raise InputError("give either --host or --size, not both")
        if parse_class(args.cls or "linear-order").kind is not Kind.LINEAR_ORDER:
            raise InputError("--size is only meaningful for --class linear-order")
        r = rank_via_intervals(args.size, subset)
        _emit({"rank": str(r)}, cfg.pretty)
        return 0
    if not args.host:
        raise InputError("rank needs --host FILE or --size N")
    X, _, oracle = _load_host(args.host, args.cls)
    memo = RankMemo(X, oracle, cfg.max_host)
    r = rank_subset(memo, subset)
    T = memo.witness(sum(1 << v for v in subset))
    witness = {"type": T.to_dict(), "description": T.describe(oracle)} if T is not None else None
    _emit({"rank": str(r), "subset": subset, "witness": witness}, cfg.pretty)
    return 0


def cmd_game(args, cfg: CommandConfig) -> int:
    X, _, oracle = _load_host(args.host, args.cls)
    subset = _parse_subset(args.subset)
    RankMemo(X, oracle, cfg.max_host)  # enforces the host cap
    if args.interactive:
        return _play(new_game(X, oracle, subset), sys.stdin, cfg)
    sol = game_value(X, oracle, subset)
    if args.solve:
        _emit(sol.to_dict(), cfg.pretty)
    else:
        _emit({"value": sol.value, "subset": subset}, cfg.pretty)
    return 0


def _state_json(state) -> dict:
    out = {
        "round": state.round,
        "subset": mask_to_list(state.subset),
        "to_move": state.to_move,
    }
    if state.to_move == "I":
        out["legal"] = [
            {"index": i, "type": T.describe(state.oracle)} for i, T in enumerate(state.legal_types())
        ]
    elif state.to_move == "II":
        out["pending"] = state.pending.describe(state.oracle)
        out["legal"] = state.legal_picks()
    return out


def _play(state, stream, cfg: CommandConfig) -> int:
    _emit(_state_json(state), False)
    sys.stdout.flush()
    for line in stream:
        words = line.split()
        if not words:
            continue
        if words[0] in ("quit", "exit"):
            break
        try:
            if len(words) != 2 or words[0] not in ("type", "pick"):
                raise MoveError("expected 'type <index>' or 'pick <vertex>'", legal=_state_json(state).get("legal", []))
            try:
                arg = int(words[1])
            except ValueError:
                raise MoveError(f"not an integer: {words[1]!r}", legal=_state_json(state).get("legal", [])) from None
            state = game_step(state, (words[0], arg))
        except MoveError as exc:
            print(f"illegal move: {exc}", file=sys.stderr)
            continue
        if state.terminal:
            _emit(
                {"result": "player I wins", "rounds_survived": state.round, "subset": mask_to_list(state.subset),
                 "unrealized": state.pending.describe(state.oracle)},
                False,
            )
            return 0
        _emit(_state_json(state), False)
        sys.stdout.flush()
    _emit({"result": "abandoned", "rounds_survived": state.round, "subset": mask_to_list(state.subset)}, False)
    return 0


def cmd_construct(args, cfg: CommandConfig) -> int:
    if args.what == "hn":
        oracle = parse_class(args.cls or "graph")
        if oracle.kind is Kind.TOURNAMENT:
            L = build_tournament_Hn(args.n)
        else:
            L = build_graph_Hn(None, oracle, args.n, args.max_size)
        summary = {"construction": "hn", "class": oracle.name, "n": L.n, "size": L.size,
                   "layer_sizes": [len(layer) for layer in L.layers]}
        _emit(_write_structure(cfg, L.base, L.extra_json(), summary), cfg.pretty)
        return 0
    if args.what == "kernel":
        if not args.kernel or not args.leaves:
            raise InputError("construct kernel needs --kernel FILE and --leaves FILE...")
        H, _ = load(args.kernel)
        leaves = []
        for path in args.leaves:
            leaf, raw = load(path)
            emb = raw.get("kernel_embedding")
            if emb is None:
                emb = find_embedding(H, leaf)
                if emb is None:
                    raise InputError(f"{path}: the kernel does not embed in this leaf")
            leaves.append((leaf, {int(k): v for k, v in dict(emb).items()}))
        A = kernel_amalgam(H, leaves, args.mode)
        summary = {"construction": "kernel", "mode": A.mode, "size": A.structure.size,
                   "kernel": A.kernel, "leaves": A.leaves}
        _emit(_write_structure(cfg, A.structure, A.to_json_extra(), summary), cfg.pretty)
        return 0
    # ordered sum
    if not args.parts:
        raise InputError("construct sum needs --parts FILE...")
    parts = [load(p)[0] for p in args.parts]
    S = ordered_sum(parts, args.kind)
    summary = {"construction": "sum", "kind": args.kind, "size": S.size}
    _emit(_write_structure(cfg, S, {}, summary), cfg.pretty)
    return 0


def cmd_certify(args, cfg: CommandConfig) -> int:
    X, raw = load(args.host)
    L = LayeredStructure.from_json(X, raw)
    if not (args.cover or args.no_complete is not None):
        raise InputError("certify needs --cover and/or --no-complete N")
    oracle = parse_class(args.cls or L.kind, X.signature)
    reports = []
    if args.cover:
        reports.append(certify_cover_property(L, oracle).to_dict())
    if args.no_complete is not None:
        reports.append(certify_no_large_complete(L, args.no_complete).to_dict())
    failed = any(r["passed"] is False for r in reports)
    _emit({"passed": not failed, "certificates": reports}, cfg.pretty)
    return 1 if failed else 0


ORDINAL_OPS = {
    "rank": rank_of_ordinal,
    "zrank": rank_of_Z_times,
    "reversed": rank_of_reversed,
    "vd": hausdorff_vd,
}


def cmd_ordinal(args, cfg: CommandConfig) -> int:
    alpha = parse_ordinal(args.expr)
    if args.op == "certify":
        cert = certify_successor_steps(alpha)
        _emit(cert.to_dict(), cfg.pretty)
        return 0 if cert.passed else 1
    key = "vd" if args.op == "vd" else "rank"
    _emit({key: format_ordinal(ORDINAL_OPS[args.op](alpha))}, cfg.pretty)
    return 0


def cmd_search_n(args, cfg: CommandConfig) -> int:
    oracle = parse_class(args.cls or "graph")
    if oracle != GRAPHS:
        raise InputError("search-n supports --class graph only")
    _emit(search_universality_number(oracle, args.rank, args.max_size).to_dict(), cfg.pretty)
    return 0


def cmd_verify(args, cfg: CommandConfig) -> int:
    names = sorted(SUITES) if args.suite in (None, "all") else [s.strip() for s in args.suite.split(",")]
    if args.list:
        _emit({"suites": {n: SUITES[n][1] for n in sorted(SUITES)}}, False)
        return 0
    results = run_suites(names, cfg.seed, args.inject_fault)
    for r in results:
        print(f"[verify] {r.name}: {'pass' if r.passed else 'FAIL'} ({r.checks} checks, seed {r.seed})", file=sys.stderr)
    passed = all(r.passed for r in results)
    data = {"passed": passed, "seed": cfg.seed, "suites": [r.to_dict() for r in results]}
    if not cfg.pretty:
        # timings would break byte-identical reruns
        for s in data["suites"]:
            s.pop("seconds")
    _emit(data, cfg.pretty)
    return 0 if passed else 1


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--max-host", type=int, help="vertex cap for exhaustive rank (default: RANK_MAX_HOST or 24)")

    p = argparse.ArgumentParser(prog="fraisse-rank", description="Exact rank computations on finite structures.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rank", parents=[common], help="rank of a subset of a host")
    r.add_argument("--host", help="structure JSON file")
    r.add_argument("--class", dest="cls", help="class name (graph, tournament, linear-order, k3-free, ...)")
    r.add_argument("--subset", help="comma-separated vertex ids")
    r.add_argument("--size", type=int, help="size of a finite linear order (no host file needed)")
    r.set_defaults(func=cmd_rank)

    g = sub.add_parser("game", parents=[common], help="solve or play the rank game")
    g.add_argument("--host", required=True)
    g.add_argument("--class", dest="cls")
    g.add_argument("--subset")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--interactive", action="store_true", help="play against stdin: 'type <i>' / 'pick <v>'")
    mode.add_argument("--solve", action="store_true", help="print the full strategy tables")
    g.set_defaults(func=cmd_game)

    c = sub.add_parser("construct", parents=[common], help="build H_n, kernel amalgams or ordered sums")
    c.add_argument("what", choices=["hn", "kernel", "sum"])
    c.add_argument("--class", dest="cls")
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--max-size", type=int, default=2000, help="refuse to build H_n larger than this")
    c.add_argument("--kernel")
    c.add_argument("--leaves", nargs="+")
    c.add_argument("--mode", choices=list(MODES), default="free")
    c.add_argument("--parts", nargs="+")
    c.add_argument("--kind", choices=["linear-order", "tournament"], default="tournament")
    c.add_argument("--out", help="write the structure here instead of stdout")
    c.set_defaults(func=cmd_construct)

    ce = sub.add_parser("certify", parents=[common], help="structural certificates for layered H_n files")
    ce.add_argument("--host", required=True)
    ce.add_argument("--class", dest="cls")
    ce.add_argument("--cover", action="store_true")
    ce.add_argument("--no-complete", type=int, metavar="N")
    ce.set_defaults(func=cmd_certify)

    o = sub.add_parser("ordinal", parents=[common], help="closed-form ranks of ordinals")
    o.add_argument("op", choices=sorted(ORDINAL_OPS) + ["certify"])
    o.add_argument("expr", help="ordinal expression, e.g. 'w^2*3+w*5'")
    o.set_defaults(func=cmd_ordinal)

    s = sub.add_parser("search-n", parents=[common], help="bounds on the universality number N(n)")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--max-size", type=int, default=7)
    s.add_argument("--class", dest="cls")
    s.set_defaults(func=cmd_search_n)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", default="all", help="suite name, comma list, or 'all'")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help="invert the first check of each suite")
    v.add_argument("--list", action="store_true", help="list suite names")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except RankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except RecursionError:
        print("error: recursion limit hit; the input is too large", file=sys.stderr)
        return 3


def run(argv: Sequence[str] | None = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
