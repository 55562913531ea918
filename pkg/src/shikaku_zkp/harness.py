"""Completeness, soundness and zero-knowledge checks for the flooding protocol.

* :func:`simulate_transcript` builds a verifier view from public data only.
* :func:`enumerate_accepting_paths` searches every prover strategy on a tiny
  puzzle and returns the final board of each accepting run.
* :func:`staircase_attack` tries to pass a left-aligned non-rectangle.
* :func:`zk_distribution_test` compares what the verifier sees for two
  different solutions.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from scipy import stats

from .cards import Table, cell_slot, decode, private_knowledge
from .errors import AuditError, Rejected
from .protocols import (CLUE, FIRST, SECOND, FloodState, close_flood, flood_step, honest_prover,
                        open_flood, reveal_clue, verify_shikaku)
from .puzzle import Partition, Puzzle, PuzzleError, PuzzleSizeError, check_solution, solve_brute_force
from .shuffle import ShuffleSource, ZeroSource
from .transcript import (CLAIM, COLLECT, PUBLIC_PLACEMENT, REPLACE, REVEAL, SECRET_PLACEMENT, SHIFT,
                         SHUFFLE, Event, Transcript, canonical_reveal_sequence, skeleton, verifier_view)

__all__ = [
    "verifier_view", "canonical_reveal_sequence", "skeleton", "simulate_transcript",
    "enumerate_accepting_paths", "staircase_attack", "shape_attack", "StaircaseShape", "zk_distribution_test",
    "reveal_positions", "enumerated_position_counts", "partition_colorings",
]

Coloring = Tuple[Tuple[int, ...], ...]
SEARCH_MAX_CELLS = 6
HONEST_S = ((1, 0, 0), (0, 1, 0))
ALL_S = tuple(itertools.product((0, 1), repeat=3))


# -- simulator --------------------------------------------------------------------

class _Emitter:
    """Writes the verifier-visible events of each subprotocol with uniform positions."""

    def __init__(self, src: ShuffleSource):
        self.src = src
        self.t = Transcript(view="verifier")

    def ev(self, type, **public):
        self.t.events.append(Event(type, public, {}))

    def one_hot_reveal(self, label, q) -> int:
        j = self.src.offset(q)
        self.ev(REVEAL, label=label, positions=list(range(q)), values=[int(k == j) for k in range(q)])
        return j

    def open_cut(self, label, q) -> int:
        self.ev(PUBLIC_PLACEMENT, label=f"{label}.row3", values=[1] + [0] * (q - 1))
        self.ev(SHUFFLE, label=f"{label}.open", shape=[3, q])
        return self.one_hot_reveal(f"{label}.row2", q)

    def close_cut(self, label, q, keep_selector=False):
        self.ev(SHUFFLE, label=f"{label}.close", shape=[3, q])
        k = self.one_hot_reveal(f"{label}.row3", q)
        self.ev(SHIFT, label=f"{label}.restore", amount=(-k) % q)
        self.ev(COLLECT, label=f"{label}.row3", count=q)
        if not keep_selector:
            self.ev(COLLECT, label=f"{label}.row2", count=q)

    def flood(self, clue, p, phase, q):
        corner_expect, grow = (0, 1) if phase == FIRST else (1, clue)
        old = 0 if phase == FIRST else 1
        self.ev(CLAIM, clue=clue, phase=phase)
        self.ev(SECRET_PLACEMENT, label="corner.row2", count=q)
        j = self.open_cut("board", q)
        self.ev(REVEAL, label="corner", positions=[j], values=[corner_expect])
        self.ev(REPLACE, label="corner", slot=j, old=corner_expect, new=grow)
        self.close_cut("board", q)
        self.ev(PUBLIC_PLACEMENT, label="R", values=[1, 0, 0])
        for _ in range(1, p):
            self.ev(SECRET_PLACEMENT, label="S", count=3)
            self.ev(REVEAL, label="S.rightmost", positions=[2], values=[0])
            self.ev(SHUFFLE, label="add.shuffle", shape=[2, 3])
            a = self.one_hot_reveal("add.row1", 3)
            self.ev(SHIFT, label="add.shift", amount=(-a) % 3)
            self.ev(COLLECT, label="add.row1", count=3)
            self.ev(REVEAL, label="R.rightmost", positions=[2], values=[0])
            self.ev(SECRET_PLACEMENT, label="source.row2", count=q)
            j = self.open_cut("board", q)
            self.ev(REVEAL, label="source", positions=[j], values=[grow])
            jj = self.open_cut("neighbor", 2)
            self.ev(REVEAL, label="neighbor", positions=[jj], values=[old])
            self.ev(REPLACE, label="neighbor", slot=jj, old=old, new=grow)
            self.close_cut("neighbor", 2, keep_selector=True)
            self.close_cut("board", q)
        self.ev(COLLECT, label="R", count=3)


def simulate_transcript(puzzle: Puzzle, src: ShuffleSource) -> Transcript:
    """A verifier view of an accepting run, produced without any solution."""
    if not puzzle.balanced:
        raise PuzzleError(f"clues sum to {puzzle.clue_sum} but the grid has {puzzle.cells} cells; "
                          "no accepting transcript exists")
    m, n = puzzle.m, puzzle.n
    q = (m + 2) * (n + 2)
    em = _Emitter(src)
    em.ev(PUBLIC_PLACEMENT, label="board",
          values=[0 if 1 <= r <= m and 1 <= c <= n else -1 for r in range(m + 2) for c in range(n + 2)])
    for clue in sorted(puzzle.clues, key=lambda c: c.index):
        em.flood(clue.index, clue.value, FIRST, q)
        em.flood(clue.index, clue.value, SECOND, q)
        em.ev(CLAIM, clue=clue.index, phase=CLUE)
        em.ev(REVEAL, label="clue", positions=[cell_slot(clue.cell, n)], values=[clue.index])
    em.t.verdict = "accept"
    return em.t


# -- exhaustive soundness search ---------------------------------------------------------

def _phase_values(phase: str, clue: int) -> Tuple[int, int]:
    """(value a flood corner must hold, value the flood spreads)."""
    return (0, 1) if phase == FIRST else (1, clue)


class _Search:
    """Depth-first search over every prover choice, cloning the table at each branch.

    Offsets never change a verdict (the prover, not the shuffle, decides which
    card is selected), so one all-zero source serves every branch. States that
    agree on the board, the direction counter and the position in the protocol
    have identical futures and are visited once.
    """

    def __init__(self, puzzle: Puzzle, exhaustive_inputs: bool):
        self.puzzle = puzzle
        self.src = ZeroSource()
        self.exhaustive = exhaustive_inputs
        self.s_options = ALL_S if exhaustive_inputs else HONEST_S
        self.nodes = 0

    def candidates(self, table: Table, value: int) -> List[int]:
        if self.exhaustive:
            return list(range(1, table.board.size + 1))
        return [i + 1 for i, v in enumerate(table.board.values()) if v == value]

    def starts(self, table: Table, clue, phase: str) -> List[Tuple[Table, FloodState]]:
        corner_value, _ = _phase_values(phase, clue.index)
        out = []
        for slot in self.candidates(table, corner_value):
            t2 = copy.deepcopy(table)
            self.nodes += 1
            try:
                state = open_flood(t2, clue.index, clue.value, phase, slot, self.src)
            except Rejected:
                continue
            out.append((t2, state))
        return out

    def steps(self, table: Table, state: FloodState) -> List[Tuple[Table, FloodState]]:
        _, grow = _phase_values(state.phase, state.clue)
        out = []
        for s_values in self.s_options:
            for slot in self.candidates(table, grow):
                t2, st2 = copy.deepcopy((table, state))
                self.nodes += 1
                try:
                    flood_step(t2, st2, s_values, slot, self.src)
                except Rejected:
                    continue
                out.append((t2, st2))
        return out

    def flood_finals(self, table: Table, clue, phase: str, keep=None) -> List[Table]:
        """Every distinct board reachable by completing one flood phase.

        ``keep`` optionally prunes boards the caller has no use for.
        """
        finals = {}
        seen = set()
        stack = self.starts(table, clue, phase)
        while stack:
            t, st = stack.pop()
            with private_knowledge():
                key = (st.iteration, decode(st.r), t.board.values())
            if key in seen or (keep is not None and not keep(t)):
                continue
            seen.add(key)
            if st.iteration == clue.value - 1:
                close_flood(t, st)
                finals.setdefault(t.board.values(), t)
                continue
            stack.extend(self.steps(t, st))
        return list(finals.values())


def enumerate_accepting_paths(puzzle: Puzzle, bound: int = SEARCH_MAX_CELLS,
                              exhaustive_inputs: bool = False) -> Set[Coloring]:
    """Final grid colorings of every accepting run, over all prover strategies.

    By default the prover ranges over every corner or source card holding the
    value the verifier is about to check, and every s in {0, 1}. With
    ``exhaustive_inputs`` it also tries every other board slot and all eight
    0/1 patterns for S, which the verifier must reject on sight.
    """
    if puzzle.cells > bound:
        raise PuzzleSizeError(f"{puzzle.m}x{puzzle.n} exceeds the search bound of {bound} cells")
    if not puzzle.balanced:
        return set()
    search = _Search(puzzle, exhaustive_inputs)
    clues = sorted(puzzle.clues, key=lambda c: c.index)
    frontier = [Table(puzzle, Transcript(enabled=False))]
    for clue in clues:
        nxt = {}
        for table in frontier:
            for t1 in search.flood_finals(table, clue, FIRST):
                for t2 in search.flood_finals(t1, clue, SECOND):
                    try:
                        reveal_clue(t2, clue)
                    except Rejected:
                        continue
                    nxt.setdefault(t2.board.values(), t2)
        frontier = list(nxt.values())
    return {t.board.interior() for t in frontier}


def partition_colorings(puzzle: Puzzle, partitions: Sequence[Partition]) -> Set[Coloring]:
    return {p.coloring(puzzle.m, puzzle.n) for p in partitions}


# -- staircase attack ----------------------------------------------------------------

@dataclass(frozen=True)
class StaircaseShape:
    lengths: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(self.lengths))
        if not self.lengths or any(length < 1 for length in self.lengths):
            raise ValueError("a staircase needs at least one bar, each of length >= 1")

    @property
    def h(self) -> int:
        return len(self.lengths)

    @property
    def area(self) -> int:
        return sum(self.lengths)

    @property
    def is_rectangle(self) -> bool:
        return len(set(self.lengths)) == 1

    def cells(self, top: int = 1, left: int = 1) -> Set[Tuple[int, int]]:
        return {(top + j, left + c) for j, length in enumerate(self.lengths) for c in range(length)}


@dataclass
class StaircaseReport:
    shape: StaircaseShape
    verdict: str                  # "accept" or "reject"
    failed_phase: Optional[str]   # FIRST, SECOND or None when accepted
    second_flood_finals: int = 0

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


def staircase_attack(shape: StaircaseShape, margin: int = 1) -> StaircaseReport:
    """Try to get a flood pair accepted over ``shape`` instead of a rectangle.

    The shape sits in an otherwise empty grid ``margin`` cells larger than its
    bounding box on the right and bottom, under one clue whose value is its
    area.
    """
    phase = shape_attack(shape.cells(), margin)
    if phase is None:
        return StaircaseReport(shape, "accept", None, 1)
    return StaircaseReport(shape, "reject", phase)


def shape_attack(cells: Set[Tuple[int, int]], margin: int = 1) -> Optional[str]:
    """Search all strategies for a flood pair covering exactly ``cells``.

    Returns None if some strategy passes both floods, else the phase at which
    every strategy fails: first every first-flood strategy is searched for one
    leaving exactly ``cells`` as 1s, then every second-flood strategy is tried.
    """
    target = set(cells)
    m = max(x for x, _ in target) + margin
    n = max(y for _, y in target) + margin
    puzzle = Puzzle.from_clues(m, n, [(min(target), len(target))])
    clue = puzzle.clues[0]
    search = _Search(puzzle, exhaustive_inputs=False)
    table = Table(puzzle, Transcript(enabled=False))

    def ones(t: Table) -> Set[Tuple[int, int]]:
        return {(x, y) for x, row in enumerate(t.board.interior(), 1) for y, v in enumerate(row, 1) if v == 1}

    # a 1 outside the shape can never be taken back, so such branches are dropped
    finals = search.flood_finals(table, clue, FIRST, keep=lambda t: ones(t) <= target)
    reached = next((t for t in finals if ones(t) == target), None)
    if reached is None:
        return FIRST
    if not search.flood_finals(reached, clue, SECOND):
        return SECOND
    return None


# -- zero-knowledge distribution test ---------------------------------------------------

def reveal_positions(view: Transcript) -> List[int]:
    """For each multi-card reveal, where its single 1 landed."""
    return [e.public["values"].index(1) for e in view.events
            if e.type == REVEAL and len(e.public["values"]) > 1]


def _row_widths(view: Transcript) -> List[int]:
    return [len(e.public["values"]) for e in view.events if e.type == REVEAL and len(e.public["values"]) > 1]


@dataclass
class ZKReport:
    exact_equal: bool
    simulator_equal: bool
    classes: List[Dict] = field(default_factory=list)
    alpha: float = 0.01
    trials: int = 0

    @property
    def corrected_alpha(self) -> float:
        return self.alpha / max(1, 2 * len(self.classes))

    @property
    def min_uniform_p(self) -> float:
        return min(min(c["p_uniform_a"], c["p_uniform_b"]) for c in self.classes)

    @property
    def min_two_sample_p(self) -> float:
        return min(c["p_two_sample"] for c in self.classes)

    @property
    def uniform_ok(self) -> bool:
        return self.min_uniform_p > self.corrected_alpha

    @property
    def indistinguishable_ok(self) -> bool:
        return self.min_two_sample_p > self.alpha / max(1, len(self.classes))

    @property
    def passed(self) -> bool:
        return self.exact_equal and self.simulator_equal and self.uniform_ok and self.indistinguishable_ok

    def to_dict(self) -> Dict:
        return {
            "exact_equal": self.exact_equal,
            "simulator_equal": self.simulator_equal,
            "trials": self.trials,
            "alpha": self.alpha,
            "uniform_ok": self.uniform_ok,
            "indistinguishable_ok": self.indistinguishable_ok,
            "passed": self.passed,
            "classes": self.classes,
        }


def zk_distribution_test(puzzle: Puzzle, sol_a: Partition, sol_b: Partition, trials: int = 2000,
                         seed: int = 0, alpha: float = 0.01) -> ZKReport:
    """Compare verifier views of runs with two different solutions.

    Exact part: every run of either solution, and the simulator, yields the same
    canonical reveal sequence. Statistical part: for each row reveal (one event
    class per position in the sequence), the landing position of its 1 is tested
    for uniformity (chi-square goodness of fit) in both samples, and the two
    samples are tested against each other (chi-square contingency). The family
    of tests is held at ``alpha`` with a Bonferroni correction.
    """
    for sol in (sol_a, sol_b):
        if not check_solution(puzzle, sol).accepted:
            raise PuzzleError("both partitions must be valid solutions")
    provers = [honest_prover(puzzle, sol_a), honest_prover(puzzle, sol_b)]
    canon = set()
    positions: List[List[List[int]]] = [[], []]
    widths = None
    for k, prover in enumerate(provers):
        for trial in range(trials):
            src = ShuffleSource.seeded(seed * 1_000_003 + 2 * trial + k)
            verdict, t = verify_shikaku(puzzle, prover, src)
            if not verdict.accepted:
                raise AuditError(f"honest run rejected: {verdict.describe()}")
            view = verifier_view(t)
            canon.add(tuple(canonical_reveal_sequence(view)))
            positions[k].append(reveal_positions(view))
            widths = widths or _row_widths(view)
    sim = verifier_view(simulate_transcript(puzzle, ShuffleSource.seeded(seed)))
    sim_equal = len(canon) == 1 and tuple(canonical_reveal_sequence(sim)) in canon

    report = ZKReport(exact_equal=len(canon) == 1, simulator_equal=sim_equal, alpha=alpha, trials=trials)
    for c, q in enumerate(widths):
        counts = []
        for k in range(2):
            hist = [0] * q
            for run in positions[k]:
                hist[run[c]] += 1
            counts.append(hist)
        p_a = stats.chisquare(counts[0]).pvalue
        p_b = stats.chisquare(counts[1]).pvalue
        p_two = stats.chi2_contingency(counts, correction=False).pvalue
        report.classes.append({"index": c, "width": q, "counts_a": counts[0], "counts_b": counts[1],
                               "p_uniform_a": float(p_a), "p_uniform_b": float(p_b),
                               "p_two_sample": float(p_two)})
    return report


def enumerated_position_counts(puzzle: Puzzle, partition: Partition) -> List[Dict[int, int]]:
    """Run the protocol under every offset script; count landing positions per row reveal."""
    prover = honest_prover(puzzle, partition)
    sizes = _shuffle_sizes(puzzle, prover)
    counts: Optional[List[Dict[int, int]]] = None
    for script in itertools.product(*[range(q) for q in sizes]):
        src = ShuffleSource.scripted(script)
        verdict, t = verify_shikaku(puzzle, prover, src)
        if not (verdict.accepted and src.exhausted):
            raise AuditError(f"offset script {script}: {verdict.describe()}")
        pos = reveal_positions(verifier_view(t))
        if counts is None:
            counts = [dict() for _ in pos]
        for c, j in enumerate(pos):
            counts[c][j] = counts[c].get(j, 0) + 1
    return counts or []


def _shuffle_sizes(puzzle: Puzzle, prover) -> List[int]:
    _, t = verify_shikaku(puzzle, prover, ShuffleSource.seeded(0))
    return [e.public["shape"][1] for e in t.events if e.type == SHUFFLE]


# -- audit suites (used by the CLI) ---------------------------------------------------

def completeness_suite(puzzles: Dict[str, Puzzle], seeds: int = 100, extra=()) -> List[Tuple[str, bool, str]]:
    rows = []
    cases = [(f"{name}#{k}", p, sol) for name, p in puzzles.items()
             for k, sol in enumerate(solve_brute_force(p), 1)]
    cases.extend(extra)
    for name, puzzle, sol in cases:
        prover = honest_prover(puzzle, sol)
        bad = [s for s in range(seeds)
               if not verify_shikaku(puzzle, prover, ShuffleSource.seeded(s))[0].accepted]
        rows.append((f"completeness {name}", not bad, f"{seeds - len(bad)}/{seeds} seeds accepted"))
    return rows


def soundness_suite(puzzles: Dict[str, Puzzle], exhaustive_inputs: bool = True) -> List[Tuple[str, bool, str]]:
    rows = []
    for name, puzzle in puzzles.items():
        got = enumerate_accepting_paths(puzzle, exhaustive_inputs=exhaustive_inputs)
        want = partition_colorings(puzzle, solve_brute_force(puzzle))
        rows.append((f"soundness {name}", got == want, f"{len(got)} accepting colorings, {len(want)} solutions"))
    for lengths in ((2, 4, 1, 3), (2, 2, 3)):
        rep = staircase_attack(StaircaseShape(lengths))
        rows.append((f"staircase {lengths}", not rep.accepted, f"rejected at {rep.failed_phase}"))
    return rows


def zk_suite(puzzle: Puzzle, trials: int = 2000, seed: int = 0) -> List[Tuple[str, bool, str]]:
    sols = solve_brute_force(puzzle)
    if len(sols) < 2:
        return [("zero-knowledge", False, "need a puzzle with two solutions")]
    rep = zk_distribution_test(puzzle, sols[0], sols[1], trials, seed)
    return [
        ("zk exact sequences", rep.exact_equal and rep.simulator_equal, "solutions and simulator agree"),
        ("zk uniform positions", rep.uniform_ok, f"min p = {rep.min_uniform_p:.4f}"),
        ("zk two-sample", rep.indistinguishable_ok, f"min p = {rep.min_two_sample_p:.4f}"),
    ]
