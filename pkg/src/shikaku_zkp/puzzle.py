"""Shikaku puzzles, solutions, the plain validity check and a brute-force solver.

Coordinates are 1-based ``(row, col)``. Clue indices start at 2 and follow
reading order, so the card value written into a rectangle during the second
flood is the clue index itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Cell = Tuple[int, int]

FIRST_CLUE_INDEX = 2
DEFAULT_MAX_CELLS = 25


class PuzzleError(ValueError):
    """Malformed puzzle or solution input."""


class PuzzleSizeError(PuzzleError):
    """Instance is larger than the configured search bound."""


class StructuralError(PuzzleError):
    """A partition that does not even describe rectangles inside the grid."""


@dataclass(frozen=True)
class Clue:
    index: int
    cell: Cell
    value: int


@dataclass(frozen=True)
class Puzzle:
    m: int
    n: int
    clues: Tuple[Clue, ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise PuzzleError(f"grid must be at least 1x1, got {self.m}x{self.n}")
        object.__setattr__(self, "clues", tuple(self.clues))
        seen_cells = set()
        seen_idx = set()
        for clue in self.clues:
            x, y = clue.cell
            if not (1 <= x <= self.m and 1 <= y <= self.n):
                raise PuzzleError(f"clue {clue.index} cell {clue.cell} outside grid")
            if clue.value < 1:
                raise PuzzleError(f"clue {clue.index} value must be >= 1, got {clue.value}")
            if clue.cell in seen_cells:
                raise PuzzleError(f"duplicate clue cell {clue.cell}")
            if clue.index in seen_idx:
                raise PuzzleError(f"duplicate clue index {clue.index}")
            seen_cells.add(clue.cell)
            seen_idx.add(clue.index)

    @classmethod
    def from_clues(cls, m: int, n: int, clues: Iterable[Tuple[Cell, int]]) -> "Puzzle":
        """Build a puzzle from ``(cell, value)`` pairs, indexing them in reading order."""
        ordered = sorted(clues, key=lambda cv: cv[0])
        return cls(m, n, tuple(
            Clue(FIRST_CLUE_INDEX + k, tuple(cell), value)
            for k, (cell, value) in enumerate(ordered)
        ))

    @property
    def k(self) -> int:
        return len(self.clues)

    @property
    def cells(self) -> int:
        return self.m * self.n

    @property
    def clue_sum(self) -> int:
        return sum(c.value for c in self.clues)

    @property
    def balanced(self) -> bool:
        """Whether the clue values add up to the grid area."""
        return self.clue_sum == self.cells

    def clue(self, index: int) -> Clue:
        for c in self.clues:
            if c.index == index:
                return c
        raise KeyError(index)

    def relabel(self, mapping: Dict[int, int]) -> "Puzzle":
        return Puzzle(self.m, self.n, tuple(
            Clue(mapping[c.index], c.cell, c.value) for c in self.clues))


@dataclass(frozen=True, order=True)
class Rectangle:
    top_left: Cell
    bottom_right: Cell

    def __post_init__(self):
        (a, b), (a2, b2) = self.top_left, self.bottom_right
        if a > a2 or b > b2:
            raise StructuralError(f"corners out of order: {self.top_left} {self.bottom_right}")

    @property
    def height(self) -> int:
        return self.bottom_right[0] - self.top_left[0] + 1

    @property
    def width(self) -> int:
        return self.bottom_right[1] - self.top_left[1] + 1

    @property
    def area(self) -> int:
        return self.height * self.width

    def contains(self, cell: Cell) -> bool:
        (a, b), (a2, b2) = self.top_left, self.bottom_right
        return a <= cell[0] <= a2 and b <= cell[1] <= b2

    def cells(self) -> List[Cell]:
        (a, b), (a2, b2) = self.top_left, self.bottom_right
        return [(x, y) for x in range(a, a2 + 1) for y in range(b, b2 + 1)]

    def disjoint(self, other: "Rectangle") -> bool:
        (a, b), (a2, b2) = self.top_left, self.bottom_right
        (c, d), (c2, d2) = other.top_left, other.bottom_right
        return a2 < c or c2 < a or b2 < d or d2 < b

    def within(self, m: int, n: int) -> bool:
        (a, b), (a2, b2) = self.top_left, self.bottom_right
        return 1 <= a and 1 <= b and a2 <= m and b2 <= n


@dataclass(frozen=True)
class Partition:
    rects: Dict[int, Rectangle] = field(default_factory=dict)

    def key(self) -> Tuple:
        return tuple((i, r.top_left, r.bottom_right) for i, r in sorted(self.rects.items()))

    def __hash__(self):
        return hash(self.key())

    def coloring(self, m: int, n: int) -> Tuple[Tuple[int, ...], ...]:
        """Grid of clue indices covering each cell (0 where uncovered)."""
        grid = [[0] * n for _ in range(m)]
        for i, rect in self.rects.items():
            for x, y in rect.cells():
                grid[x - 1][y - 1] = i
        return tuple(tuple(row) for row in grid)

    def relabel(self, mapping: Dict[int, int]) -> "Partition":
        return Partition({mapping[i]: r for i, r in self.rects.items()})


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    condition: Optional[int] = None
    indices: Tuple[int, ...] = ()
    detail: str = ""
    tiles: bool = False

    def __bool__(self):
        return self.accepted


# -- text formats -----------------------------------------------------------

def parse_puzzle(text: str) -> Puzzle:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise PuzzleError("line 1: empty puzzle")
    header = lines[0].split()
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise PuzzleError(f"line 1: expected header 'm n', got {lines[0]!r}")
    m, n = int(header[0]), int(header[1])
    if m < 1 or n < 1:
        raise PuzzleError(f"line 1: grid must be at least 1x1, got {m}x{n}")
    rows = lines[1:]
    if len(rows) != m:
        raise PuzzleError(f"line {len(lines) + 1}: expected {m} grid rows, got {len(rows)}")
    clues = []
    seen = set()
    for x, row in enumerate(rows, start=1):
        tokens = row.split()
        if len(tokens) != n:
            raise PuzzleError(f"line {x + 1}: expected {n} tokens, got {len(tokens)}")
        for y, tok in enumerate(tokens, start=1):
            if tok == ".":
                continue
            try:
                value = int(tok)
            except ValueError:
                raise PuzzleError(f"line {x + 1}, column {y}: bad token {tok!r}") from None
            if value < 1:
                raise PuzzleError(f"line {x + 1}, column {y}: clue value must be >= 1")
            if (x, y) in seen:
                raise PuzzleError(f"line {x + 1}, column {y}: duplicate clue cell")
            seen.add((x, y))
            clues.append(((x, y), value))
    return Puzzle.from_clues(m, n, clues)


def format_puzzle(puzzle: Puzzle) -> str:
    grid = [["."] * puzzle.n for _ in range(puzzle.m)]
    for c in puzzle.clues:
        grid[c.cell[0] - 1][c.cell[1] - 1] = str(c.value)
    return "\n".join([f"{puzzle.m} {puzzle.n}"] + [" ".join(r) for r in grid]) + "\n"


def parse_solution(text: str) -> Partition:
    rects = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise PuzzleError(f"line {lineno}: expected 'index a b a' b'', got {line!r}")
        try:
            i, a, b, a2, b2 = map(int, parts)
        except ValueError:
            raise PuzzleError(f"line {lineno}: non-integer field in {line!r}") from None
        if i in rects:
            raise PuzzleError(f"line {lineno}: duplicate clue index {i}")
        try:
            rects[i] = Rectangle((a, b), (a2, b2))
        except StructuralError as exc:
            raise PuzzleError(f"line {lineno}: {exc}") from None
    return Partition(rects)


def format_solution(partition: Partition) -> str:
    return "".join(
        f"{i} {r.top_left[0]} {r.top_left[1]} {r.bottom_right[0]} {r.bottom_right[1]}\n"
        for i, r in sorted(partition.rects.items()))


# -- oracle -----------------------------------------------------------------

def check_solution(puzzle: Puzzle, partition: Partition) -> CheckResult:
    """Check the three validity conditions: clue inside, area matches, no overlap.

    Raises StructuralError when the partition names the wrong clue indices or a
    rectangle leaves the grid; those are input errors, not rule violations.
    """
    expected = {c.index for c in puzzle.clues}
    if set(partition.rects) != expected:
        raise StructuralError(
            f"partition indices {sorted(partition.rects)} != clue indices {sorted(expected)}")
    for i, rect in sorted(partition.rects.items()):
        if not rect.within(puzzle.m, puzzle.n):
            raise StructuralError(f"rectangle {i} {rect.top_left}-{rect.bottom_right} leaves the grid")

    for clue in puzzle.clues:
        if not partition.rects[clue.index].contains(clue.cell):
            return CheckResult(False, 1, (clue.index,),
                               f"clue {clue.index} cell {clue.cell} not inside its rectangle")
    for clue in puzzle.clues:
        area = partition.rects[clue.index].area
        if area != clue.value:
            return CheckResult(False, 2, (clue.index,),
                               f"rectangle {clue.index} has area {area}, clue is {clue.value}")
    pairs_ok = True
    for i, j in combinations(sorted(partition.rects), 2):
        if not partition.rects[i].disjoint(partition.rects[j]):
            pairs_ok = False
            result = CheckResult(False, 3, (i, j), f"rectangles {i} and {j} overlap")
            break

    # coverage grid: must agree with the pairwise test
    cover = [[0] * puzzle.n for _ in range(puzzle.m)]
    for rect in partition.rects.values():
        for x, y in rect.cells():
            cover[x - 1][y - 1] += 1
    overlap = any(v > 1 for row in cover for v in row)
    assert overlap == (not pairs_ok), "pairwise and coverage overlap checks disagree"
    if not pairs_ok:
        return result
    tiles = all(v == 1 for row in cover for v in row)
    assert tiles == puzzle.balanced
    return CheckResult(True, tiles=tiles, detail="ok")


# -- solver -----------------------------------------------------------------

def candidate_rectangles(puzzle: Puzzle, clue: Clue) -> List[Rectangle]:
    """All in-grid rectangles of the clue's area covering its cell and no other clue."""
    others = [c.cell for c in puzzle.clues if c.index != clue.index]
    x, y = clue.cell
    out = []
    for h in range(1, clue.value + 1):
        if clue.value % h:
            continue
        w = clue.value // h
        for a in range(x - h + 1, x + 1):
            for b in range(y - w + 1, y + 1):
                rect = Rectangle((a, b), (a + h - 1, b + w - 1))
                if rect.within(puzzle.m, puzzle.n) and not any(rect.contains(o) for o in others):
                    out.append(rect)
    return sorted(out)


def solve_brute_force(puzzle: Puzzle, limit: Optional[int] = None,
                      max_cells: int = DEFAULT_MAX_CELLS) -> List[Partition]:
    """Every valid partition, sorted by (clue index, corners); at most ``limit``."""
    if puzzle.cells > max_cells:
        raise PuzzleSizeError(f"{puzzle.m}x{puzzle.n} grid exceeds {max_cells} cells")
    if not puzzle.balanced or not puzzle.clues:
        return []
    options = {c.index: candidate_rectangles(puzzle, c) for c in puzzle.clues}
    order = sorted(options, key=lambda i: (len(options[i]), i))
    used = [[False] * (puzzle.n + 1) for _ in range(puzzle.m + 1)]
    chosen: Dict[int, Rectangle] = {}
    found: List[Partition] = []

    def place(rect: Rectangle, flag: bool) -> None:
        for x, y in rect.cells():
            used[x][y] = flag

    def backtrack(depth: int) -> None:
        if depth == len(order):
            found.append(Partition(dict(chosen)))
            return
        i = order[depth]
        for rect in options[i]:
            if any(used[x][y] for x, y in rect.cells()):
                continue
            place(rect, True)
            chosen[i] = rect
            backtrack(depth + 1)
            del chosen[i]
            place(rect, False)

    backtrack(0)
    found.sort(key=Partition.key)
    return found if limit is None else found[:limit]


def rectangles_of(cells: Sequence[Cell]) -> Optional[Rectangle]:
    """The rectangle exactly covering ``cells``, or None if they are not one."""
    if not cells:
        return None
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    rect = Rectangle((min(xs), min(ys)), (max(xs), max(ys)))
    return rect if rect.area == len(set(cells)) else None
