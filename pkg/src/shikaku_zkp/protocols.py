"""Sea formation and the flooding protocol for Shikaku.

The verifier is implicit: every check it performs is a reveal inside
:mod:`shikaku_zkp.primitives` or here, and a failed check raises
:class:`~shikaku_zkp.errors.Rejected`. The prover acts only through a
:class:`ProverStrategy`, so honest and malicious provers drive the very same
code path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cards import (BOTTOM, DIRECTIONS, LEFT, RIGHT, TOP, EncodedInt, Table, cell_slot,
                    decode, encoding_values, inventory, neighbor_offset, private_knowledge,
                    slot_cell, truncate_to_mod2)
from .errors import ContractError, Rejected
from .puzzle import Cell, Clue, Partition, Puzzle, Rectangle, check_solution
from .primitives import add_mod3, chosen_cut, neighbor_selection, reveal_rightmost_is_zero
from .shuffle import ShuffleSource
from .transcript import Transcript

FIRST = "first_flood"
SECOND = "second_flood"
CLUE = "clue_reveal"
SEA = "sea_formation"


@dataclass(frozen=True)
class FloodRule:
    """Public parameters of one flood phase."""
    corner_expect: str      # "zero" or "one"
    grow: str               # value the flood spreads: "one" or "index"
    c0: str
    c1: str

    def value(self, which: str, clue: int) -> int:
        return {"zero": 0, "one": 1, "index": clue}[which]


RULES = {
    FIRST: FloodRule("zero", "one", BOTTOM, RIGHT),
    SECOND: FloodRule("one", "index", TOP, LEFT),
}


@dataclass
class FloodState:
    clue: int
    phase: str
    p: int
    r: EncodedInt
    iteration: int = 0
    r_history: List[int] = field(default_factory=list)


@dataclass
class Verdict:
    accepted: bool
    step: Optional[str] = None
    detail: str = ""
    clue: Optional[int] = None
    iteration: Optional[int] = None
    final_board: Optional[Tuple[Tuple[int, ...], ...]] = None
    audit: Dict = field(default_factory=dict)

    def __bool__(self):
        return self.accepted

    @classmethod
    def reject(cls, exc: Rejected, **kw) -> "Verdict":
        return cls(False, exc.step, exc.detail, exc.clue, exc.iteration, **kw)

    def describe(self) -> str:
        if self.accepted:
            return "accept"
        where = self.step or "?"
        if self.clue is not None:
            where += f", clue {self.clue}"
        if self.iteration is not None:
            where += f", iteration {self.iteration}"
        return f"reject at {where}: {self.detail}"


# -- prover interface -------------------------------------------------------------

class ProverStrategy:
    """Every secret choice the prover makes. Slots are 1-based board indices."""

    def flood_corner(self, clue: int, phase: str) -> int:
        raise NotImplementedError

    def direction(self, clue: int, phase: str, iteration: int) -> Sequence[int]:
        """Card values for the secret sequence S (honestly an encoding of 0 or 1)."""
        raise NotImplementedError

    def flood_source(self, clue: int, phase: str, iteration: int) -> int:
        raise NotImplementedError

    def indicator(self, q: int, slot: int) -> List[int]:
        """Row-2 values for a chosen cut selecting ``slot``."""
        return [1 if k == slot - 1 else 0 for k in range(q)]

    # sea formation
    def sea_start(self) -> int:
        raise NotImplementedError

    def sea_source(self, iteration: int) -> int:
        raise NotImplementedError

    def sea_neighbor(self, iteration: int) -> int:
        """Position in (left, right, top, bottom) of the neighbor to flip."""
        raise NotImplementedError


# -- flooding protocol steps ------------------------------------------------------------

def _with_context(exc: Rejected, clue, iteration) -> Rejected:
    if exc.clue is None:
        exc.clue = clue
    if exc.iteration is None:
        exc.iteration = iteration
    exc.args = (exc.describe(),)
    return exc


def open_flood(table: Table, clue: int, p: int, phase: str, corner: int, src: ShuffleSource,
               indicator: Optional[Sequence[int]] = None) -> FloodState:
    """Steps 1-3 of a flood: cut the corner, check it, flip it, publish R = 0."""
    rule = RULES[phase]
    board = table.board
    table.transcript.claim(clue, phase)
    try:
        sel = table.place_secret(indicator or _one_hot(board.size, corner), "corner.row2")
        h = chosen_cut(table, board.cards, sel, src, "board")
        h.reveal("corner", rule.value(rule.corner_expect, clue))
        h.replace(rule.value(rule.grow, clue), "corner")
        board.cards = h.close(src)
        r = EncodedInt(table.place_public(encoding_values(0, 3), "R"), 3)
    except Rejected as exc:
        raise _with_context(exc, clue, None)
    return FloodState(clue, phase, p, r, r_history=[0])


def flood_step(table: Table, state: FloodState, s_values: Sequence[int], source: int,
               src: ShuffleSource, indicator: Optional[Sequence[int]] = None) -> None:
    """One flood iteration: update the direction counter, grow by one cell."""
    rule = RULES[state.phase]
    board = table.board
    clue = state.clue
    it = state.iteration + 1
    grow = rule.value(rule.grow, clue)
    old = 0 if state.phase == FIRST else 1
    try:
        s = EncodedInt(table.place_secret(list(s_values), "S"), 3)
        reveal_rightmost_is_zero(table, s, "S.rightmost")
        state.r = add_mod3(table, state.r, s, src)
        reveal_rightmost_is_zero(table, state.r, "R.rightmost")
        with private_knowledge():
            state.r_history.append(decode(state.r))

        sel = table.place_secret(indicator or _one_hot(board.size, source), "source.row2")
        h = chosen_cut(table, board.cards, sel, src, "board")
        h.reveal("source", grow)
        off0, off1 = neighbor_offset(rule.c0, board.n), neighbor_offset(rule.c1, board.n)
        c0, c1 = h.take(off0), h.take(off1)
        r2, rest = truncate_to_mod2(state.r)
        nh = neighbor_selection(table, c0, c1, r2, src)
        nh.reveal("neighbor", old)
        nh.replace(grow, "neighbor")
        c0, c1 = nh.close(src, keep_selector=True)
        h.put(off0, c0)
        h.put(off1, c1)
        state.r = EncodedInt(nh.selector + [rest], 3)
        board.cards = h.close(src)
    except Rejected as exc:
        raise _with_context(exc, clue, it)
    state.iteration = it


def close_flood(table: Table, state: FloodState) -> None:
    table.collect(state.r.cards, "R")


def run_flood(table: Table, clue: Clue, phase: str, strategy: ProverStrategy, src: ShuffleSource) -> FloodState:
    q = table.board.size
    corner = strategy.flood_corner(clue.index, phase)
    state = open_flood(table, clue.index, clue.value, phase, corner, src, strategy.indicator(q, corner))
    for it in range(1, clue.value):
        s_values = strategy.direction(clue.index, phase, it)
        source = strategy.flood_source(clue.index, phase, it)
        flood_step(table, state, s_values, source, src, strategy.indicator(q, source))
    close_flood(table, state)
    return state


def first_flood(table: Table, clue: Clue, strategy: ProverStrategy, src: ShuffleSource) -> FloodState:
    """Turn the rectangle's 0s into 1s from its top-left corner. Raises Rejected."""
    return run_flood(table, clue, FIRST, strategy, src)


def second_flood(table: Table, clue: Clue, strategy: ProverStrategy, src: ShuffleSource) -> FloodState:
    """Turn the rectangle's 1s into clue-index cards from its bottom-right corner."""
    return run_flood(table, clue, SECOND, strategy, src)


def reveal_clue(table: Table, clue: Clue) -> None:
    slot = cell_slot(clue.cell, table.board.n)
    table.transcript.claim(clue.index, CLUE)
    try:
        table.reveal([table.board.card(slot)], "clue", clue.index, positions=[slot])
    except Rejected as exc:
        raise _with_context(exc, clue.index, None)


def verify_shikaku(puzzle: Puzzle, strategy: ProverStrategy, src: ShuffleSource,
                   order: Optional[Sequence[int]] = None,
                   transcript: Optional[Transcript] = None) -> Tuple[Verdict, Transcript]:
    """Run the whole flooding protocol; the verdict carries the final board for audits."""
    transcript = transcript if transcript is not None else Transcript()
    table = Table(puzzle, transcript)
    order = list(order) if order is not None else sorted(c.index for c in puzzle.clues)
    if sorted(order) != sorted(c.index for c in puzzle.clues):
        raise ContractError("order must be a permutation of the clue indices")
    r_histories = {}
    try:
        if not puzzle.balanced:
            raise Rejected("setup", f"clues sum to {puzzle.clue_sum}, grid has {puzzle.cells} cells")
        for index in order:
            clue = puzzle.clue(index)
            for phase in (FIRST, SECOND):
                state = run_flood(table, clue, phase, strategy, src)
                r_histories[(index, phase)] = list(state.r_history)
            reveal_clue(table, clue)
    except Rejected as exc:
        verdict = Verdict.reject(exc)
    else:
        verdict = Verdict(True)
    verdict.final_board = table.board.interior()
    verdict.audit = {"r_histories": r_histories, "pool": dict(table.pool)}
    transcript.verdict = "accept" if verdict.accepted else "reject"
    return verdict, transcript


def _one_hot(q: int, slot: int) -> List[int]:
    if not 1 <= slot <= q:
        raise ContractError(f"slot {slot} outside a {q}-card board")
    return [1 if k == slot - 1 else 0 for k in range(q)]


# -- sea formation ----------------------------------------------------------------

def sea_formation(table: Table, t: int, strategy: ProverStrategy, src: ShuffleSource) -> Verdict:
    """Show that t cells form one 4-connected region, without saying which."""
    board = table.board
    q = board.size
    table.transcript.claim(0, SEA)
    it = None
    try:
        start = strategy.sea_start()
        h = chosen_cut(table, board.cards, table.place_secret(strategy.indicator(q, start), "corner.row2"),
                       src, "board")
        h.reveal("corner", 0)
        h.replace(1, "corner")
        board.cards = h.close(src)
        offsets = [neighbor_offset(d, board.n) for d in DIRECTIONS]
        for it in range(1, t):
            source = strategy.sea_source(it)
            h = chosen_cut(table, board.cards,
                           table.place_secret(strategy.indicator(q, source), "source.row2"), src, "board")
            h.reveal("source", 1)
            four = [h.take(d) for d in offsets]
            choice = strategy.sea_neighbor(it)
            sel = table.place_secret([1 if k == choice else 0 for k in range(4)], "sea.row2")
            nh = chosen_cut(table, four, sel, src, "sea")
            nh.reveal("neighbor", 0)
            nh.replace(1, "neighbor")
            four = nh.close(src)
            for d, card in zip(offsets, four):
                h.put(d, card)
            board.cards = h.close(src)
    except Rejected as exc:
        return Verdict.reject(_with_context(exc, None, it), final_board=board.interior())
    return Verdict(True, final_board=board.interior())


class SeaStrategy(ProverStrategy):
    """Grows a connected cell set in breadth-first order from its first cell."""

    def __init__(self, cells: Sequence[Cell], n: int):
        cells = list(cells)
        self.n = n
        wanted = set(cells)
        order = [cells[0]]
        self.steps: List[Tuple[int, int]] = []
        seen = {cells[0]}
        queue = deque([cells[0]])
        deltas = [(0, -1), (0, 1), (-1, 0), (1, 0)]
        while queue:
            x, y = queue.popleft()
            for k, (dx, dy) in enumerate(deltas):
                nxt = (x + dx, y + dy)
                if nxt in wanted and nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
                    self.steps.append((cell_slot((x, y), n), k))
        if seen != wanted:
            raise ContractError("cells are not 4-connected")
        self.start = cell_slot(cells[0], n)

    def sea_start(self) -> int:
        return self.start

    def sea_source(self, iteration: int) -> int:
        return self.steps[iteration - 1][0]

    def sea_neighbor(self, iteration: int) -> int:
        return self.steps[iteration - 1][1]


def run_sea_formation(puzzle: Puzzle, t: int, strategy: ProverStrategy, src: ShuffleSource,
                      transcript: Optional[Transcript] = None) -> Tuple[Verdict, Transcript]:
    transcript = transcript if transcript is not None else Transcript()
    table = Table(puzzle, transcript, inventory(puzzle, sea_area=t))
    verdict = sea_formation(table, t, strategy, src)
    transcript.verdict = "accept" if verdict.accepted else "reject"
    return verdict, transcript


# -- honest prover ----------------------------------------------------------------

@dataclass
class FloodPlan:
    corner: Cell
    s: List[int]
    sources: List[Cell]
    cells: List[Cell]       # order in which cells join the flood


def plan_first_flood(rect: Rectangle, fill: str = "column") -> FloodPlan:
    """Down the left edge, one direction change, then fill rightwards.

    ``fill="column"`` extends the least advanced row first (topmost on ties),
    filling column by column; ``fill="row"`` completes the topmost row first.
    """
    (a, b), (a2, b2) = rect.top_left, rect.bottom_right
    h, p = rect.height, rect.area
    rightmost = {x: None for x in range(a, a2 + 1)}
    rightmost[a] = b
    plan = FloodPlan((a, b), [], [], [(a, b)])
    for t in range(1, p):
        if t < h:
            src_cell, new = (a + t - 1, b), (a + t, b)
            plan.s.append(0)
        else:
            plan.s.append(1 if t == h else 0)
            open_rows = [x for x in range(a, a2 + 1) if rightmost[x] < b2]
            if fill == "column":
                x = min(open_rows, key=lambda r: (rightmost[r], r))
            elif fill == "row":
                x = open_rows[0]
            else:
                raise ContractError(f"unknown fill order {fill!r}")
            src_cell, new = (x, rightmost[x]), (x, rightmost[x] + 1)
        rightmost[new[0]] = new[1]
        plan.sources.append(src_cell)
        plan.cells.append(new)
    return plan


def plan_second_flood(rect: Rectangle, fill: str = "column") -> FloodPlan:
    """Mirror image: up the right edge, then fill leftwards (bottommost on ties)."""
    (a, b), (a2, b2) = rect.top_left, rect.bottom_right
    h, p = rect.height, rect.area
    leftmost = {x: None for x in range(a, a2 + 1)}
    leftmost[a2] = b2
    plan = FloodPlan((a2, b2), [], [], [(a2, b2)])
    for t in range(1, p):
        if t < h:
            src_cell, new = (a2 - t + 1, b2), (a2 - t, b2)
            plan.s.append(0)
        else:
            plan.s.append(1 if t == h else 0)
            open_rows = [x for x in range(a2, a - 1, -1) if leftmost[x] > b]
            if fill == "column":
                x = max(open_rows, key=lambda r: (leftmost[r], r))
            elif fill == "row":
                x = open_rows[0]
            else:
                raise ContractError(f"unknown fill order {fill!r}")
            src_cell, new = (x, leftmost[x]), (x, leftmost[x] - 1)
        leftmost[new[0]] = new[1]
        plan.sources.append(src_cell)
        plan.cells.append(new)
    return plan


class HonestProver(ProverStrategy):
    """Deterministic strategy from a partition.

    Nothing here checks the partition, so the same class plays a cheating
    prover when handed a wrong one; :func:`honest_prover` validates first.
    """

    def __init__(self, puzzle: Puzzle, partition: Partition, fill: str = "column"):
        self.n = puzzle.n
        self.plans: Dict[Tuple[int, str], FloodPlan] = {}
        for i, rect in partition.rects.items():
            self.plans[(i, FIRST)] = plan_first_flood(rect, fill)
            self.plans[(i, SECOND)] = plan_second_flood(rect, fill)

    def flood_corner(self, clue: int, phase: str) -> int:
        return cell_slot(self.plans[(clue, phase)].corner, self.n)

    # a wrong partition can ask for more iterations than its rectangle has
    # cells; the prover keeps playing and lets the verifier reject

    def direction(self, clue: int, phase: str, iteration: int) -> Sequence[int]:
        s = self.plans[(clue, phase)].s
        return encoding_values(s[iteration - 1] if iteration <= len(s) else 0, 3)

    def flood_source(self, clue: int, phase: str, iteration: int) -> int:
        plan = self.plans[(clue, phase)]
        cell = plan.sources[iteration - 1] if iteration <= len(plan.sources) else plan.corner
        return cell_slot(cell, self.n)


def honest_prover(puzzle: Puzzle, partition: Partition, fill: str = "column") -> HonestProver:
    result = check_solution(puzzle, partition)
    if not result.accepted:
        raise ContractError(f"not a valid solution: {result.detail}")
    return HonestProver(puzzle, partition, fill)


class ScriptedProver(ProverStrategy):
    """Per-decision overrides on top of a fallback strategy."""

    def __init__(self, base: Optional[ProverStrategy] = None, corners=None, directions=None,
                 sources=None, indicators=None):
        self.base = base
        self.corners = corners or {}
        self.directions = directions or {}
        self.sources = sources or {}
        self.indicators = indicators or {}

    def flood_corner(self, clue, phase):
        key = (clue, phase)
        return self.corners[key] if key in self.corners else self.base.flood_corner(clue, phase)

    def direction(self, clue, phase, iteration):
        key = (clue, phase, iteration)
        return self.directions[key] if key in self.directions else self.base.direction(clue, phase, iteration)

    def flood_source(self, clue, phase, iteration):
        key = (clue, phase, iteration)
        return self.sources[key] if key in self.sources else self.base.flood_source(clue, phase, iteration)

    def indicator(self, q, slot):
        if slot in self.indicators:
            return list(self.indicators[slot])
        return super().indicator(q, slot)


def slot_of(cell: Cell, puzzle: Puzzle) -> int:
    return cell_slot(cell, puzzle.n)


def cell_of(slot: int, puzzle: Puzzle) -> Cell:
    return slot_cell(slot, puzzle.n)
