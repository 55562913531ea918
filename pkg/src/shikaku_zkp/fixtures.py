"""Built-in puzzles used by the audit suites and tests."""

from __future__ import annotations

from typing import Dict

from .puzzle import Partition, Puzzle, parse_puzzle, parse_solution

FIG1_PUZZLE = """\
7 7
. . . . 4 2 2
2 . 8 . . . .
2 . . . . . 2
. . 2 . . . 4
. . . . . 3 .
. . . 3 2 . .
3 . 6 . . 4 .
"""

# index a b a' b' (clue indices in reading order, starting at 2)
FIG1_SOLUTION = """\
2 1 2 1 5
3 1 6 2 6
4 1 7 2 7
5 1 1 2 1
6 2 2 3 5
7 3 1 4 1
8 3 6 3 7
9 4 2 4 3
10 4 4 4 7
11 5 5 5 7
12 5 4 7 4
13 6 5 7 5
14 5 1 7 1
15 5 2 7 3
16 6 6 7 7
"""

# name -> puzzle text; every grid here has at most 25 cells
SMALL = {
    "one": "1 1\n1\n",
    "domino": "1 2\n2 .\n",
    "split22": "2 2\n2 .\n. 2\n",
    "square22": "2 2\n4 .\n. .\n",
    "unsat22": "2 2\n3 .\n. .\n",
    "pair23": "2 3\n3 . .\n. . 3\n",
    "l_trap23": "2 3\n4 . .\n. . 2\n",
    "row14": "1 4\n3 . . 1\n",
    "unsat14": "1 4\n. 1 . 3\n",
    "col31": "3 1\n.\n3\n.\n",
    "mixed32": "3 2\n2 .\n. 2\n2 .\n",
    "grid33": "3 3\n3 . .\n. . 3\n. 3 .\n",
    "grid44": "4 4\n4 . . .\n. . 4 .\n. 4 . .\n. . . 4\n",
    "grid55": "5 5\n. 5 . . .\n4 . . 3 .\n. . 4 . .\n. 3 . . 2\n. . . 4 .\n",
}


def fig1() -> Puzzle:
    return parse_puzzle(FIG1_PUZZLE)


def fig1_solution() -> Partition:
    return parse_solution(FIG1_SOLUTION)


def small_puzzles() -> Dict[str, Puzzle]:
    return {name: parse_puzzle(text) for name, text in SMALL.items()}


def soundness_puzzles() -> Dict[str, Puzzle]:
    """Fixtures small enough (mn <= 6) for exhaustive strategy search."""
    return {k: p for k, p in small_puzzles().items() if p.cells <= 6}


def dominoes(size: int) -> Puzzle:
    """A size x size grid tiled by horizontal dominoes, clue on each left cell."""
    if size % 2:
        raise ValueError("size must be even")
    clues = [((x, y), 2) for x in range(1, size + 1) for y in range(1, size + 1, 2)]
    return Puzzle.from_clues(size, size, clues)
