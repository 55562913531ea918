"""Command-line front end.

Exit status: 0 accept, 1 reject, 2 usage or input error, 3 audit failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import fixtures
from .errors import AuditError
from .harness import completeness_suite, simulate_transcript, soundness_suite, zk_suite
from .protocols import HonestProver, verify_shikaku
from .puzzle import (Partition, Puzzle, PuzzleError, check_solution, format_solution, parse_puzzle,
                     parse_solution, solve_brute_force)
from .shuffle import ShuffleSource
from .transcript import Transcript, verifier_view

EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE, EXIT_AUDIT = 0, 1, 2, 3
AUDIT_MAX_CELLS = 6


class InputError(Exception):
    pass


def _read(path: str, parser, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read {what}: {exc.strerror}") from None
    try:
        return parser(text)
    except PuzzleError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_puzzle(path: str) -> Puzzle:
    return _read(path, parse_puzzle, "puzzle")


def load_solution(path: str) -> Partition:
    return _read(path, parse_solution, "solution")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise InputError(f"{out}: cannot write: {exc.strerror}") from None


def _transcript_json(t: Transcript, view: str) -> str:
    shown = t if view == "audit" else verifier_view(t)
    return shown.to_json() + "\n"


def cmd_solve(args) -> int:
    puzzle = load_puzzle(args.puzzle)
    try:
        sols = solve_brute_force(puzzle, max_cells=args.max_cells)
    except PuzzleError as exc:
        raise InputError(str(exc)) from None
    blocks = [f"# solution {k}\n{format_solution(s)}" for k, s in enumerate(sols, 1)]
    _emit("\n".join(blocks), args.out)
    print(f"{len(sols)} solution(s)", file=sys.stderr)
    return EXIT_ACCEPT if sols else EXIT_REJECT


def _check(puzzle: Puzzle, partition: Partition):
    try:
        return check_solution(puzzle, partition)
    except PuzzleError as exc:
        raise InputError(str(exc)) from None


def cmd_check(args) -> int:
    puzzle, partition = load_puzzle(args.puzzle), load_solution(args.solution)
    result = _check(puzzle, partition)
    if result.accepted:
        print("accept")
        return EXIT_ACCEPT
    print(f"reject: condition {result.condition} violated: {result.detail}")
    return EXIT_REJECT


def cmd_zkp(args) -> int:
    puzzle, partition = load_puzzle(args.puzzle), load_solution(args.solution)
    _check(puzzle, partition)  # structural errors only; rule violations go to the verifier
    verdict, transcript = verify_shikaku(puzzle, HonestProver(puzzle, partition), ShuffleSource.seeded(args.seed))
    _emit(_transcript_json(transcript, args.view), args.out)
    print(verdict.describe(), file=sys.stderr)
    return EXIT_ACCEPT if verdict.accepted else EXIT_REJECT


def cmd_simulate(args) -> int:
    puzzle = load_puzzle(args.puzzle)
    try:
        t = simulate_transcript(puzzle, ShuffleSource.seeded(args.seed))
    except PuzzleError as exc:
        print(f"simulator refuses: {exc}", file=sys.stderr)
        return EXIT_REJECT
    _emit(t.to_json() + "\n", args.out)
    return EXIT_ACCEPT


def cmd_audit(args) -> int:
    if args.max_cells > AUDIT_MAX_CELLS:
        raise InputError(f"--max-cells {args.max_cells}: exhaustive search is limited to {AUDIT_MAX_CELLS} cells")
    small = fixtures.small_puzzles()
    search = {k: p for k, p in small.items() if p.cells <= args.max_cells}
    fig1 = [("fig1", fixtures.fig1(), fixtures.fig1_solution())]
    rows = completeness_suite(small, seeds=args.seeds, extra=fig1)
    rows += soundness_suite(search)
    rows += zk_suite(small["split22"], trials=args.trials, seed=args.seed)
    width = max(len(name) for name, _, _ in rows)
    for name, ok, detail in rows:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    failed = sum(not ok for _, ok, _ in rows)
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return EXIT_ACCEPT if not failed else EXIT_AUDIT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shikaku-zkp", description="Card-based zero-knowledge proof for Shikaku.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, puzzle=True, solution=False):
        p = sub.add_parser(name, help=help)
        if puzzle:
            p.add_argument("--puzzle", required=True, help="puzzle file: header 'm n' then m rows of tokens")
        if solution:
            p.add_argument("--solution", required=True, help="solution file: lines 'index a b a2 b2'")
        p.set_defaults(func=func)
        return p

    p = add("solve", cmd_solve, "list every solution by brute force")
    p.add_argument("--max-cells", type=int, default=25)
    p.add_argument("--out")
    add("check", cmd_check, "check a solution against the rules", solution=True)
    p = add("zkp", cmd_zkp, "run the card protocol and write its transcript", solution=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--view", choices=("verifier", "audit"), default="verifier")
    p = add("simulate", cmd_simulate, "write a transcript built without any solution")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p = add("audit", cmd_audit, "run the completeness, soundness and zero-knowledge suites", puzzle=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=100, help="seeds per completeness case")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--max-cells", type=int, default=AUDIT_MAX_CELLS)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_ACCEPT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AuditError as exc:
        print(f"internal invariant breached: {exc}", file=sys.stderr)
        return EXIT_AUDIT


if __name__ == "__main__":
    sys.exit(main())
