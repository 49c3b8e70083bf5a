"""Command-line driver: ``petrigame {solve,validate,unfold,generate,export,oracle}``.

Exit codes: 0 system wins / success, 1 environment wins / check failed,
2 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import io
from .game import validate
from .graphgame import PLAIN, PRIMED, VertexCapExceeded, plain_vertex_count, solve_explicit
from .net import BoundExceeded, format_marking
from .reductions import (
    brute_force_sat,
    builtin_examples,
    format_g5,
    gen_3sat,
    gen_g5,
    random_3sat,
    random_g5,
    random_game,
    read_instance,
    solve_g5_tiny,
    write_dimacs,
)
from .solver import AUTO, GENERAL, TWOSAT, decide
from .unfolding import check_axioms, default_depth, unfold

SCHEMA = 1
EXIT_SYSTEM, EXIT_ENV, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, indent=2, ensure_ascii=False)


def _load(path: str):
    builtins = builtin_examples()
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        if name not in builtins:
            raise UsageError(f"unknown builtin {name!r}; choose from {', '.join(sorted(builtins))}")
        return builtins[name]
    return io.read_game(path)


def _winner_code(winner: str) -> int:
    return EXIT_SYSTEM if winner == "system" else EXIT_ENV


def cmd_solve(args, out) -> int:
    game = _load(args.game)
    verdict = decide(game, mode=args.mode, workers=args.workers)
    stats = {
        "winner": verdict.winner,
        "mode": verdict.mode,
        "reachable_markings": verdict.reachable_markings,
        "iterations": verdict.iterations,
        "sat_calls": verdict.sat_calls,
        "attractor_size": len(verdict.attractor),
    }
    if args.format == "json":
        if verdict.strategy is not None:
            stats["strategy"] = verdict.strategy.to_json()
        out.write(_dump(stats) + "\n")
    elif args.format == "dot":
        if verdict.strategy is None:
            out.write(io.game_to_dot(game))
        else:
            out.write(io.strategy_to_dot(game, verdict.strategy))
    else:
        for k in ("winner", "mode", "reachable_markings", "iterations", "sat_calls"):
            out.write(f"{k}: {stats[k]}\n")
        if verdict.strategy is not None and args.show_strategy:
            for m in sorted(verdict.strategy.choices):
                c = ",".join(sorted(verdict.strategy[m]))
                out.write(f"  {format_marking(m)} -> {{{c}}}\n")
    return _winner_code(verdict.winner)


def cmd_validate(args, out) -> int:
    game = _load(args.game)
    report = validate(game)
    data = report.as_dict()
    data["system_tokens_per_marking"] = 1
    if args.format == "json":
        out.write(_dump(data) + "\n")
    else:
        for k in sorted(data):
            out.write(f"{k}: {data[k]}\n")
    return EXIT_SYSTEM


def cmd_unfold(args, out) -> int:
    game = _load(args.game)
    verdict = decide(game, mode=args.mode, workers=args.workers)
    if verdict.strategy is None:
        sys.stderr.write("environment wins; there is no strategy to unfold\n")
        return EXIT_ENV
    depth = default_depth(game) if args.depth is None else args.depth
    prefix = unfold(game, verdict.strategy, depth)
    report = check_axioms(game, prefix)
    summary = {
        "depth": depth,
        "places": prefix.num_places,
        "transitions": prefix.num_transitions,
        "truncated": prefix.truncated,
        "cuts": report.cuts,
        "checked_cuts": report.checked,
        "truncated_cuts": report.truncated,
        "violations": [
            {"axiom": a, "cut": sorted(c), "detail": d} for a, c, d in report.violations
        ],
    }
    if args.format == "json":
        out.write(_dump(summary) + "\n")
    elif args.format == "text":
        for k in ("depth", "places", "transitions", "truncated", "cuts", "checked_cuts", "truncated_cuts"):
            out.write(f"{k}: {summary[k]}\n")
        out.write(f"violations: {len(report.violations)}\n")
        for a, c, d in report.violations:
            out.write(f"  {a}: {d}\n")
    else:
        out.write(io.prefix_to_dot(prefix, game))
        sys.stderr.write(
            f"axioms: {'ok' if report.ok else 'VIOLATED'} "
            f"({report.checked} cuts checked, {report.truncated} truncated)\n"
        )
    return EXIT_SYSTEM if report.ok else EXIT_ENV


def cmd_generate(args, out) -> int:
    rng = random.Random(args.seed)
    if args.instance:
        if args.kind == "random":
            raise UsageError("--kind random takes no instance file")
        inst = read_instance(args.instance, args.kind)
    elif args.seed is None:
        raise UsageError("generate needs an instance file or --seed")
    elif args.kind == "3sat":
        inst = random_3sat(rng, rng.randint(3, 5), rng.randint(2, 6))
    elif args.kind == "g5":
        inst = random_g5(rng)
    else:
        inst = None
    if args.kind == "3sat":
        game = gen_3sat(inst)
    elif args.kind == "g5":
        game = gen_g5(inst)
    else:
        game = random_game(rng, env_tokens=args.env_tokens)
    if args.instance_out and inst is not None:
        text = write_dimacs(inst) if args.kind == "3sat" else format_g5(inst)
        Path(args.instance_out).write_text(text, encoding="utf-8")
    out.write(io.serialize(game))
    return EXIT_SYSTEM


def cmd_export(args, out) -> int:
    game = _load(args.game)
    if args.what == "game":
        out.write(io.game_to_dot(game))
    elif args.what == "reachability":
        out.write(io.reachability_to_dot(game.reachability, game))
    else:
        verdict = decide(game, mode=args.mode, workers=args.workers)
        if verdict.strategy is None:
            sys.stderr.write("environment wins; there is no strategy to export\n")
            return EXIT_ENV
        out.write(io.strategy_to_dot(game, verdict.strategy))
    return EXIT_SYSTEM


def cmd_oracle(args, out) -> int:
    rows = {}
    if args.kind == "game":
        game = _load(args.game)
        rows["decide"] = decide(game, mode=args.mode, workers=args.workers).winner
        if plain_vertex_count(game) <= args.cap:
            rows["explicit_plain"] = solve_explicit(game, PLAIN, args.cap).winner
            rows["explicit_primed"] = solve_explicit(game, PRIMED, args.cap).winner
        else:
            rows["skipped"] = f"Graph(G) exceeds cap {args.cap}"
    else:
        inst = read_instance(args.game, args.kind)
        if args.kind == "3sat":
            rows["oracle"] = "system" if brute_force_sat(inst) else "environment"
            rows["decide"] = decide(gen_3sat(inst), mode=args.mode).winner
        else:
            rows["oracle"] = solve_g5_tiny(inst)
            rows["decide"] = decide(gen_g5(inst), mode=args.mode).winner
    winners = {v for k, v in rows.items() if k != "skipped"}
    agree = len(winners) == 1
    rows["agree"] = agree
    if args.format == "json":
        out.write(_dump(rows) + "\n")
    else:
        for k in sorted(rows):
            out.write(f"{k}: {rows[k]}\n")
    return EXIT_SYSTEM if agree else EXIT_ENV


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="petrigame", description="Synthesis for Petri games with one system player.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modes=True, formats=("text", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])
        if modes:
            p.add_argument("--mode", choices=(AUTO, GENERAL, TWOSAT), default=AUTO)
            p.add_argument("--workers", type=int, default=1)

    game_help = "game file, or builtin:<name>"
    p = sub.add_parser("solve", help="decide the winner")
    p.add_argument("game", help=game_help)
    p.add_argument("--show-strategy", action="store_true", help="list witness commitments (text format)")
    common(p, formats=("text", "json", "dot"))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check boundedness and the one-system-token restriction")
    p.add_argument("game", help=game_help)
    common(p, modes=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("unfold", help="unfold the winning strategy and check the strategy axioms")
    p.add_argument("game", help=game_help)
    p.add_argument("--depth", type=int, default=None, help="max fired transitions per play (default 2x reachable markings)")
    common(p, formats=("dot", "text", "json"))
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("generate", help="emit a game file from a reduction instance or a seed")
    p.add_argument("instance", nargs="?", help="DIMACS file (3sat) or G5 instance file (g5)")
    p.add_argument("--kind", choices=("3sat", "g5", "random"), required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--env-tokens", type=int, default=2, help="environment tokens for --kind random")
    p.add_argument("--instance-out", help="also write the generated instance here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("export", help="Graphviz DOT of the game, its reachability graph or the strategy")
    p.add_argument("game", help=game_help)
    p.add_argument("--what", choices=("game", "reachability", "strategy"), default="game")
    p.add_argument("--format", choices=("dot",), default="dot")
    p.add_argument("--mode", choices=(AUTO, GENERAL, TWOSAT), default=AUTO)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("oracle", help="compare decide against the explicit or brute-force oracle")
    p.add_argument("game", help="game file, builtin:<name>, or an instance file with --kind 3sat|g5")
    p.add_argument("--kind", choices=("game", "3sat", "g5"), default="game")
    p.add_argument("--cap", type=int, default=10**5, help="vertex cap for the explicit solver")
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        import logging

        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    if getattr(args, "depth", None) is not None and args.depth < 0:
        parser.error("--depth must be non-negative")
    if getattr(args, "cap", 1) < 1:
        parser.error("--cap must be positive")
    try:
        return args.func(args, out)
    except (UsageError, ValueError, OSError, BoundExceeded, VertexCapExceeded) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
