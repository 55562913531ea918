"""Cards, encodings, the bordered board and the physical table.

A face-down card's value can only be read inside :func:`private_knowledge`,
which marks code acting with the prover's knowledge (strategies, audit
logging). Anything else that touches a hidden value raises
:class:`~shikaku_zkp.errors.HiddenValueError`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import ContractError, FormatViolation, HiddenValueError, InventoryError, Rejected
from .puzzle import Cell, Puzzle
from .transcript import COLLECT, PUBLIC_PLACEMENT, REPLACE, REVEAL, SECRET_PLACEMENT, Transcript

DUMMY = -1

LEFT, RIGHT, TOP, BOTTOM = "left", "right", "top", "bottom"
DIRECTIONS = (LEFT, RIGHT, TOP, BOTTOM)

_privileged: ContextVar[int] = ContextVar("privileged", default=0)
_ids = itertools.count(1)


@contextmanager
def private_knowledge():
    """Allow reading face-down values (prover strategy or audit code only)."""
    token = _privileged.set(_privileged.get() + 1)
    try:
        yield
    finally:
        _privileged.reset(token)


class Card:
    __slots__ = ("_value", "face_up", "id")

    def __init__(self, value: int, id: Optional[int] = None, face_up: bool = False):
        self._value = value
        self.face_up = face_up
        self.id = next(_ids) if id is None else id

    @property
    def value(self) -> int:
        if not self.face_up and not _privileged.get():
            raise HiddenValueError(f"read of face-down card #{self.id}")
        return self._value

    def __repr__(self):
        shown = self._value if (self.face_up or _privileged.get()) else "?"
        return f"Card({shown}{'' if self.face_up else ', down'})"


def peek(cards: Iterable[Card]) -> List[int]:
    with private_knowledge():
        return [c.value for c in cards]


# -- encodings ----------------------------------------------------------------

def encoding_values(v: int, modulus: int) -> Tuple[int, ...]:
    if modulus not in (2, 3):
        raise ContractError(f"modulus must be 2 or 3, got {modulus}")
    if not 0 <= v < modulus:
        raise ContractError(f"{v} out of range for Z/{modulus}Z")
    return tuple(1 if k == v else 0 for k in range(modulus))


@dataclass
class EncodedInt:
    cards: List[Card]
    modulus: int

    def __post_init__(self):
        if len(self.cards) != self.modulus:
            raise ContractError(f"{self.modulus}-encoding needs {self.modulus} cards, got {len(self.cards)}")


def encode(v: int, modulus: int = 3) -> EncodedInt:
    return EncodedInt([Card(x) for x in encoding_values(v, modulus)], modulus)


def decode(e: EncodedInt) -> int:
    values = peek(e.cards)
    if sorted(values) != [0] * (e.modulus - 1) + [1]:
        raise FormatViolation("decode", f"malformed encoding {values}")
    return values.index(1)


def negate_mod3(e: EncodedInt) -> EncodedInt:
    """Swap the two rightmost cards: encodes -s mod 3. Card objects are reused."""
    if e.modulus != 3:
        raise ContractError("negation is defined on mod-3 encodings")
    a, b, c = e.cards
    return EncodedInt([a, c, b], 3)


def truncate_to_mod2(e: EncodedInt) -> Tuple[EncodedInt, Card]:
    """Split off the two leftmost cards as a mod-2 encoding; returns (pair, rest).

    Honest only for values 0 and 1; a 2 leaves an all-zero pair that the
    neighbor selection's row reveal rejects.
    """
    if e.modulus != 3:
        raise ContractError("truncation takes a mod-3 encoding")
    return EncodedInt(e.cards[:2], 2), e.cards[2]


# -- board geometry -----------------------------------------------------------

def linear_index(row: int, col: int, n: int) -> int:
    """1-based reading-order index of board position (row, col), both 0-based with border."""
    return row * (n + 2) + col + 1


def board_coord(i: int, n: int) -> Tuple[int, int]:
    return divmod(i - 1, n + 2)


def cell_slot(cell: Cell, n: int) -> int:
    """Board slot of 1-based grid cell ``(x, y)``; the border shifts nothing."""
    return linear_index(cell[0], cell[1], n)


def slot_cell(i: int, n: int) -> Cell:
    return board_coord(i, n)


NEIGHBOR_OFFSETS = {LEFT: lambda n: -1, RIGHT: lambda n: 1, TOP: lambda n: -(n + 2), BOTTOM: lambda n: n + 2}


def neighbor_offset(direction: str, n: int) -> int:
    return NEIGHBOR_OFFSETS[direction](n)


def neighbor_index(i: int, direction: str, n: int, m: Optional[int] = None) -> int:
    """Slot of the neighbor of interior slot ``i``: i-1, i+1, i-(n+2), i+(n+2)."""
    row, col = board_coord(i, n)
    bottom_edge = m is not None and row >= m + 1
    if i < 1 or row == 0 or col == 0 or col == n + 1 or bottom_edge:
        raise ContractError(f"slot {i} is not an interior cell")
    if direction not in NEIGHBOR_OFFSETS:
        raise ContractError(f"unknown direction {direction!r}")
    return i + neighbor_offset(direction, n)


@dataclass
class Board:
    m: int
    n: int
    cards: List[Card]

    @property
    def rows(self) -> int:
        return self.m + 2

    @property
    def cols(self) -> int:
        return self.n + 2

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def card(self, i: int) -> Card:
        return self.cards[i - 1]

    def cell(self, x: int, y: int) -> Card:
        return self.card(cell_slot((x, y), self.n))

    def values(self) -> Tuple[int, ...]:
        """All slot values, via prover knowledge."""
        return tuple(peek(self.cards))

    def interior(self) -> Tuple[Tuple[int, ...], ...]:
        vals = self.values()
        w = self.cols
        return tuple(tuple(vals[x * w + 1: x * w + 1 + self.n]) for x in range(1, self.m + 1))

    def render(self) -> str:
        vals = self.values()
        w = self.cols
        return "\n".join(" ".join(f"{v:>2}" for v in vals[r * w:(r + 1) * w]) for r in range(self.rows))


# -- inventory ----------------------------------------------------------------

# total <= INVENTORY_SLOPE * mn + INVENTORY_INTERCEPT for balanced puzzles
INVENTORY_SLOPE = 11
INVENTORY_INTERCEPT = 26


@dataclass
class CardInventory:
    """Card counts needed to run the flooding protocol on one puzzle.

    With q = (m+2)(n+2):

    * dummies: 2m+2n+4 cards of -1
    * board zeros: mn
    * flood ones: max p_i, reused from rectangle to rectangle
    * clue cards: p_i cards of value i
    * board-cut helpers: indicator rows 2 and 3, i.e. 2 ones and 2(q-1) zeros
    * neighbor-cut helper: row 3 of the two-card cut, 1 one and 1 zero
    * encodings R and S: 2 ones and 4 zeros

    Total 3q + max p + sum p + 8. Since m+n <= mn+1 we have q <= 3mn+6, so for
    balanced puzzles the total is at most 11mn + 26.
    """
    roles: Dict[str, Counter] = field(default_factory=dict)

    def by_value(self) -> Counter:
        total = Counter()
        for counts in self.roles.values():
            total.update(counts)
        return total

    @property
    def total(self) -> int:
        return sum(self.by_value().values())

    def count(self, value: int) -> int:
        return self.by_value()[value]

    @staticmethod
    def bound(puzzle: Puzzle) -> int:
        return INVENTORY_SLOPE * puzzle.cells + INVENTORY_INTERCEPT


def inventory(puzzle: Puzzle, sea_area: int = 0) -> CardInventory:
    m, n = puzzle.m, puzzle.n
    q = (m + 2) * (n + 2)
    max_p = max((c.value for c in puzzle.clues), default=0)
    roles = {
        "dummies": Counter({DUMMY: 2 * m + 2 * n + 4}),
        "board_zeros": Counter({0: m * n}),
        "flood_ones": Counter({1: max_p}),
        "clue_cards": Counter({c.index: c.value for c in puzzle.clues}),
        "board_cut_helpers": Counter({1: 2, 0: 2 * (q - 1)}),
        "neighbor_cut_helpers": Counter({1: 1, 0: 1}),
        "encodings": Counter({1: 2, 0: 4}),
    }
    if sea_area:
        # four-way neighbor cut (rows 2 and 3 of a 3x4 matrix) plus ones for the sea
        roles["sea_helpers"] = Counter({1: 2 + max(0, sea_area - max_p), 0: 6})
    return CardInventory(roles)


# -- the table ----------------------------------------------------------------

Expect = Union[None, int, str, Callable[[List[int]], bool]]
ONE_HOT = "one_hot"


class Table:
    """Board, spare-card pool and transcript of one protocol run.

    The pool starts as the puzzle's inventory; every card on the table is drawn
    from it and returned to it, so card counts are conserved.
    """

    def __init__(self, puzzle: Puzzle, transcript: Optional[Transcript] = None,
                 stock: Optional[CardInventory] = None):
        self.puzzle = puzzle
        self.transcript = transcript if transcript is not None else Transcript()
        self.stock = stock or inventory(puzzle)
        self.pool: Counter = self.stock.by_value()
        self._ids = itertools.count(1)
        self.board = setup_board(puzzle, self)

    # card movement
    def draw(self, values: Sequence[int]) -> List[Card]:
        need = Counter(values)
        for v, k in need.items():
            if self.pool[v] < k:
                raise InventoryError(f"out of {v}-cards (need {k}, have {self.pool[v]})")
        self.pool.subtract(need)
        return [Card(v, next(self._ids)) for v in values]

    def place_public(self, values: Sequence[int], label: str) -> List[Card]:
        cards = self.draw(values)
        self.transcript.log(PUBLIC_PLACEMENT, {"ids": [c.id for c in cards]},
                            label=label, values=list(values))
        return cards

    def place_secret(self, values: Sequence[int], label: str) -> List[Card]:
        cards = self.draw(values)
        self.transcript.log(SECRET_PLACEMENT, {"values": list(values), "ids": [c.id for c in cards]},
                            label=label, count=len(cards))
        return cards

    def collect(self, cards: Sequence[Card], label: str) -> None:
        for c in cards:
            c.face_up = False
        values = peek(cards)
        self.pool.update(values)
        self.transcript.log(COLLECT, {"values": values, "ids": [c.id for c in cards]},
                            label=label, count=len(cards))

    def reveal(self, cards: Sequence[Card], label: str, expect: Expect = None,
               positions: Optional[Sequence[int]] = None, keep_up: bool = False) -> List[int]:
        """Turn cards face up, log their values, check, and turn them back down.

        ``keep_up`` leaves them face up after a passing check, for a following shift.
        """
        for c in cards:
            c.face_up = True
        values = [c.value for c in cards]
        pos = list(positions) if positions is not None else list(range(len(cards)))
        self.transcript.log(REVEAL, {"ids": [c.id for c in cards]},
                            label=label, positions=pos, values=values)
        ok = False
        try:
            _check(label, values, expect)
            ok = True
        finally:
            if not (ok and keep_up):
                for c in cards:
                    c.face_up = False
        return values

    def replace(self, row: List[Card], col: int, new_value: int, label: str) -> Card:
        """Swap ``row[col]`` for a fresh ``new_value`` card; both values are public."""
        old = row[col]
        (new,) = self.draw([new_value])
        with private_knowledge():
            old_value = old.value
        self.pool[old_value] += 1
        row[col] = new
        self.transcript.log(REPLACE, {"removed_id": old.id, "added_id": new.id},
                            label=label, slot=col, old=old_value, new=new_value)
        return new

    def on_table(self) -> Counter:
        return Counter(self.board.values())


def _check(label: str, values: List[int], expect: Expect) -> None:
    if expect is None:
        return
    if expect == ONE_HOT:
        if values.count(1) != 1 or any(v not in (0, 1) for v in values):
            raise FormatViolation(label, f"expected exactly one 1, saw {values}")
    elif callable(expect):
        if not expect(values):
            raise Rejected(label, f"unexpected reveal {values}")
    elif values != [expect]:
        raise Rejected(label, f"expected {expect}, saw {values}")


def setup_board(puzzle: Puzzle, table: Optional[Table] = None) -> Board:
    """Lay out the (m+2)x(n+2) board: -1 border, 0 on every grid cell, all face down."""
    m, n = puzzle.m, puzzle.n
    values = [0 if 1 <= r <= m and 1 <= c <= n else DUMMY
              for r in range(m + 2) for c in range(n + 2)]
    if table is None:
        return Board(m, n, [Card(v) for v in values])
    return Board(m, n, table.place_public(values, "board"))
