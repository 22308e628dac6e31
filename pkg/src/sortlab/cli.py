"""Headless operator tool.

Subcommands: trace (dump one algorithm run), battle (race two
algorithms), tasks (the scripted three-battle classroom challenge),
replay (verify an action log), serve (run the collaboration server).

Exit codes are a stable contract: 0 success, 1 runtime or verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import session, wire
from .algorithms import generate_trace, get_algorithm, list_algorithms
from .battle import Arrangement, BattleConfig, make_arrangement, result_to_doc, run_battle
from .errors import BindFailure, InvalidInput, SizeOutOfRange, SortLabError, UnknownAlgorithm
from .hub import ServerConfig
from .rng import shuffled_permutation
from .trace import format_trace_lines, format_trace_text

DEFAULT_TASKS_SEED = 7

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def _usage_error(flag: str, message: str) -> int:
    print(f"error: {flag}: {message}", file=sys.stderr)
    return USAGE_ERROR


def _parse_values(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise InvalidInput(f"not a comma-separated integer list: {exc}") from exc


def cmd_trace(args: argparse.Namespace) -> int:
    try:
        spec = get_algorithm(args.algo)
    except UnknownAlgorithm:
        known = ", ".join(s.id for s in list_algorithms())
        return _usage_error("--algo", f"unknown algorithm {args.algo!r} (known: {known})")
    if args.input is not None:
        try:
            values = _parse_values(args.input)
        except InvalidInput as exc:
            return _usage_error("--input", str(exc))
    else:
        if args.size < 0:
            return _usage_error("--size", "must be non-negative")
        values = shuffled_permutation(args.size, args.seed)
    try:
        trace = generate_trace(args.algo, values)
    except InvalidInput as exc:
        return _usage_error("--input", str(exc))
    if args.format == "lines":
        sys.stdout.write(format_trace_lines(trace))
    else:
        sys.stdout.write(format_trace_text(trace, spec.pseudo_code))
    return 0


def _battle_config(args: argparse.Namespace) -> BattleConfig | int:
    for flag, algo in (("--left", args.left), ("--right", args.right)):
        try:
            get_algorithm(algo)
        except UnknownAlgorithm:
            return _usage_error(flag, f"unknown algorithm {algo!r}")
    if args.arrangement == "random":
        arrangement = Arrangement("random", args.seed)
    else:
        arrangement = Arrangement(args.arrangement)
    try:
        make_arrangement(arrangement, args.size)  # bounds check before running
    except SizeOutOfRange as exc:
        return _usage_error("--size", str(exc))
    return BattleConfig(args.left, args.right, arrangement, args.size)


def _print_battle(result) -> None:
    config = result.config
    print(
        f"{config.left} (cost {result.left_cost}) vs "
        f"{config.right} (cost {result.right_cost}) on "
        f"{config.arrangement.kind} x{config.size} -> winner: {result.winner}"
    )


def cmd_battle(args: argparse.Namespace) -> int:
    config = _battle_config(args)
    if isinstance(config, int):
        return config
    result = run_battle(config)
    _print_battle(result)
    if args.out:
        doc = {"type": "battle_result", "v": wire.PROTOCOL_VERSION}
        doc.update(result_to_doc(result))
        Path(args.out).write_text(wire.encode(doc) + "\n", "utf-8")
    return 0


def cmd_tasks(args: argparse.Namespace) -> int:
    seed = args.seed
    battles = [
        BattleConfig("merge", "insertion", Arrangement("random", seed), 100),
        BattleConfig("merge", "radix", Arrangement("random", seed), 100),
        BattleConfig("insertion", "radix", Arrangement("sorted"), 100),
    ]
    print(f"classroom battle script (seed {seed}, size 100)")
    print(f"{'left':<12}{'right':<12}{'arrangement':<14}{'left cost':>10}{'right cost':>11}  winner")
    for config in battles:
        result = run_battle(config)
        winner = {"left": config.left, "right": config.right, "draw": "draw"}[result.winner]
        print(
            f"{config.left:<12}{config.right:<12}{config.arrangement.kind:<14}"
            f"{result.left_cost:>10}{result.right_cost:>11}  {winner}"
        )
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    path = Path(args.log)
    try:
        lines = [line for line in path.read_text("utf-8").splitlines() if line.strip()]
    except OSError as exc:
        return _usage_error("--log", str(exc))

    records = []
    for lineno, line in enumerate(lines, start=1):
        try:
            doc = wire.parse(line)
        except wire.MalformedMessage as exc:
            print(f"malformed log line {lineno}: {exc}", file=sys.stderr)
            return USAGE_ERROR
        if doc.get("type") != "action_applied" or "action" not in doc:
            print(f"malformed log line {lineno}: not an action_applied record", file=sys.stderr)
            return USAGE_ERROR
        records.append(doc)

    room_id = records[0].get("room", "replay") if records else "replay"
    room = session.create_room(room_id)
    if not records:
        print(f"empty log; fresh room digest {session.state_digest(room)}")
        return 0
    for record in records:
        action = record["action"]
        try:
            room = session.apply_action(room, action)
        except (ValueError, KeyError, TypeError, SortLabError) as exc:
            print(f"divergence at seq {action.get('seq', '?')}: cannot apply: {exc}")
            return RUNTIME_ERROR
        if args.verify and "digest" in record:
            actual = session.state_digest(room)
            if actual != record["digest"]:
                print(f"divergence at seq {action['seq']}: digest mismatch")
                print(f"  recorded {record['digest']}")
                print(f"  computed {actual}")
                return RUNTIME_ERROR
    print(
        f"replayed {len(records)} actions into room {room_id!r}; "
        f"final digest {session.state_digest(room)}"
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve  # lazy: pulls in the asyncio stack

    try:
        config = ServerConfig(
            bind=args.bind,
            port=args.port,
            max_rooms=args.max_rooms,
            room_capacity=args.room_capacity,
            heartbeat_interval=args.heartbeat_interval,
            heartbeat_timeout=args.heartbeat_timeout,
            scoreboard_dir=args.scoreboard_dir,
            ui_dir=args.ui_dir,
            action_log_dir=args.action_log_dir,
        )
    except ValueError as exc:
        return _usage_error("--heartbeat-interval/--heartbeat-timeout", str(exc))
    if args.ui_dir and not Path(args.ui_dir).is_dir():
        return _usage_error("--ui-dir", f"not a directory: {args.ui_dir}")
    try:
        serve(config)
    except BindFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sortlab",
        description="Collaborative sorting-algorithm lab: traces, battles, rooms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="dump the step trace of one algorithm run")
    p_trace.add_argument("--algo", required=True, help="algorithm id (see README for the catalog)")
    p_trace.add_argument("--input", help="comma-separated permutation of 1..n, e.g. 2,1,3")
    p_trace.add_argument("--size", type=int, default=10, help="random input size (default 10)")
    p_trace.add_argument("--seed", type=int, default=1, help="random input seed (default 1)")
    p_trace.add_argument("--format", choices=("text", "lines"), default="text")
    p_trace.set_defaults(func=cmd_trace)

    p_battle = sub.add_parser("battle", help="race two algorithms on the same input")
    p_battle.add_argument("--left", required=True)
    p_battle.add_argument("--right", required=True)
    p_battle.add_argument("--arrangement", choices=("random", "reversed", "sorted"), default="random")
    p_battle.add_argument("--seed", type=int, default=1, help="seed for random arrangement")
    p_battle.add_argument("--size", type=int, default=100)
    p_battle.add_argument("--out", help="write the full result document to this file")
    p_battle.set_defaults(func=cmd_battle)

    p_tasks = sub.add_parser("tasks", help="run the scripted classroom battles")
    p_tasks.add_argument("--script", choices=("default",), default="default")
    p_tasks.add_argument("--seed", type=int, default=DEFAULT_TASKS_SEED)
    p_tasks.set_defaults(func=cmd_tasks)

    p_replay = sub.add_parser("replay", help="replay a server action log")
    p_replay.add_argument("--log", required=True)
    p_replay.add_argument("--verify", action="store_true", help="check recorded digests")
    p_replay.set_defaults(func=cmd_replay)

    p_serve = sub.add_parser("serve", help="run the collaboration server")
    p_serve.add_argument("--bind", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--max-rooms", type=int, default=64)
    p_serve.add_argument("--room-capacity", type=int, default=8)
    p_serve.add_argument("--heartbeat-interval", type=float, default=10.0)
    p_serve.add_argument("--heartbeat-timeout", type=float, default=30.0)
    p_serve.add_argument("--scoreboard-dir")
    p_serve.add_argument("--ui-dir", help="serve this static UI bundle over HTTP")
    p_serve.add_argument("--action-log-dir", help="append per-room action logs here")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
