import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shikaku_zkp import fixtures
from shikaku_zkp.puzzle import (Partition, Puzzle, PuzzleError, PuzzleSizeError, Rectangle,
                                StructuralError, check_solution, format_puzzle, format_solution,
                                parse_puzzle, parse_solution, rectangles_of, solve_brute_force)


def rect(a, b, a2, b2):
    return Rectangle((a, b), (a2, b2))


# -- parsing -------------------------------------------------------------------------

def test_fig1_parses_with_fifteen_clues_summing_to_grid():
    p = fixtures.fig1()
    assert (p.m, p.n, p.k, p.clue_sum) == (7, 7, 15, 49)
    assert sorted(c.value for c in p.clues) == sorted([3, 6, 4, 3, 2, 3, 2, 4, 2, 2, 2, 8, 4, 2, 2])


def test_indices_follow_reading_order_from_two():
    p = fixtures.fig1()
    assert [c.index for c in p.clues] == list(range(2, 17))
    assert [c.cell for c in p.clues] == sorted(c.cell for c in p.clues)
    assert p.clue(2).cell == (1, 5) and p.clue(2).value == 4


def test_single_cell_puzzle():
    p = parse_puzzle("1 1\n1\n")
    assert (p.m, p.n, p.k) == (1, 1, 1)
    assert p.clues[0].cell == (1, 1)


def test_two_by_two_split():
    p = fixtures.small_puzzles()["split22"]
    assert p.k == 2 and p.clue_sum == 4
    assert [c.cell for c in p.clues] == [(1, 1), (2, 2)]


@pytest.mark.parametrize("text, where", [
    ("", "line 1"),
    ("2\n. .\n", "line 1"),
    ("2 x\n", "line 1"),
    ("0 3\n", "line 1"),
    ("2 2\n1 .\n", "line 3"),
    ("2 2\n1 . .\n. 3\n", "line 2"),
    ("1 2\n1 y\n", "line 2, column 2"),
    ("1 2\n0 2\n", "line 2, column 1"),
    ("1 2\n-1 3\n", "line 2, column 1"),
])
def test_malformed_puzzles_name_the_line(text, where):
    with pytest.raises(PuzzleError, match=where):
        parse_puzzle(text)


def test_duplicate_clue_cell_rejected_at_construction():
    with pytest.raises(PuzzleError, match="duplicate"):
        Puzzle.from_clues(2, 2, [((1, 1), 2), ((1, 1), 2)])


def test_clue_outside_grid_rejected():
    with pytest.raises(PuzzleError, match="outside"):
        Puzzle.from_clues(2, 2, [((3, 1), 2)])


def test_comments_and_blank_lines_ignored():
    assert parse_puzzle("# hi\n\n1 2\n2 .\n") == parse_puzzle("1 2\n2 .\n")


@pytest.mark.parametrize("text, where", [
    ("2 1 1\n", "line 1"),
    ("2 1 1 1 x\n", "line 1"),
    ("2 1 1 1 1\n2 1 1 1 1\n", "line 2: duplicate"),
    ("2 2 2 1 1\n", "line 1"),
])
def test_malformed_solutions(text, where):
    with pytest.raises(PuzzleError, match=where):
        parse_solution(text)


@st.composite
def puzzles(draw, max_side=5):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    cells = draw(st.lists(st.tuples(st.integers(1, m), st.integers(1, n)), unique=True, max_size=m * n))
    values = draw(st.lists(st.integers(1, 30), min_size=len(cells), max_size=len(cells)))
    return Puzzle.from_clues(m, n, zip(cells, values))


@given(puzzles())
def test_puzzle_text_round_trips(p):
    assert parse_puzzle(format_puzzle(p)) == p


def test_solution_text_round_trips():
    sol = fixtures.fig1_solution()
    assert parse_solution(format_solution(sol)) == sol
    assert format_solution(sol) == fixtures.FIG1_SOLUTION


# -- validity check ------------------------------------------------------------------

def test_fig1_solution_accepted():
    res = check_solution(fixtures.fig1(), fixtures.fig1_solution())
    assert res.accepted and res.tiles


def test_single_cell_solution_accepted():
    p = parse_puzzle("1 1\n1\n")
    assert check_solution(p, Partition({2: rect(1, 1, 1, 1)})).accepted


def test_swapped_rectangles_violate_condition_one():
    rects = dict(fixtures.fig1_solution().rects)
    rects[2], rects[3] = rects[3], rects[2]
    res = check_solution(fixtures.fig1(), Partition(rects))
    assert not res.accepted
    assert res.condition == 1 and res.indices == (2,)


def test_wrong_area_violates_condition_two():
    p = fixtures.small_puzzles()["split22"]
    res = check_solution(p, Partition({2: rect(1, 1, 1, 1), 3: rect(1, 2, 2, 2)}))
    assert (res.accepted, res.condition, res.indices) == (False, 2, (2,))


def test_overlap_violates_condition_three():
    p = Puzzle.from_clues(2, 2, [((1, 1), 2), ((1, 2), 2)])
    res = check_solution(p, Partition({2: rect(1, 1, 2, 1), 3: rect(1, 2, 2, 2)}))
    assert res.accepted
    res = check_solution(p, Partition({2: rect(1, 1, 1, 2), 3: rect(1, 2, 2, 2)}))
    assert (res.accepted, res.condition, res.indices) == (False, 3, (2, 3))


def test_conditions_reported_in_order():
    # misses its clue and also has the wrong area: condition 1 wins
    p = fixtures.small_puzzles()["split22"]
    res = check_solution(p, Partition({2: rect(2, 1, 2, 1), 3: rect(1, 2, 2, 2)}))
    assert res.condition == 1


def test_out_of_grid_rectangle_is_structural():
    p = fixtures.small_puzzles()["split22"]
    with pytest.raises(StructuralError, match="leaves the grid"):
        check_solution(p, Partition({2: rect(1, 1, 1, 2), 3: rect(2, 1, 2, 3)}))


def test_wrong_indices_are_structural():
    p = fixtures.small_puzzles()["split22"]
    with pytest.raises(StructuralError, match="indices"):
        check_solution(p, Partition({2: rect(1, 1, 1, 2)}))


def test_reversed_corners_are_structural():
    with pytest.raises(StructuralError):
        rect(2, 1, 1, 1)


def test_disjoint_matches_cell_intersection():
    boxes = [rect(a, b, a2, b2) for a, a2 in itertools.combinations_with_replacement(range(1, 4), 2)
             for b, b2 in itertools.combinations_with_replacement(range(1, 4), 2)]
    for r, s in itertools.product(boxes, repeat=2):
        assert r.disjoint(s) == (not set(r.cells()) & set(s.cells()))


# -- solver ----------------------------------------------------------------------------

def cell_coloring_solutions(p):
    """Independent oracle: try every assignment of cells to clues."""
    idx = [c.index for c in p.clues]
    cells = [(x, y) for x in range(1, p.m + 1) for y in range(1, p.n + 1)]
    out = set()
    for colors in itertools.product(idx, repeat=len(cells)):
        groups = {i: [c for c, k in zip(cells, colors) if k == i] for i in idx}
        ok = True
        rects = {}
        for clue in p.clues:
            r = rectangles_of(groups[clue.index])
            if r is None or r.area != clue.value or not r.contains(clue.cell):
                ok = False
                break
            rects[clue.index] = r
        if ok:
            out.add(Partition(rects).key())
    return out


EXPECTED_COUNTS = {"one": 1, "domino": 1, "split22": 2, "square22": 1, "unsat22": 0, "pair23": 1,
                   "l_trap23": 1, "row14": 1, "unsat14": 0, "col31": 1, "mixed32": 3, "grid33": 2,
                   "grid44": 9, "grid55": 1}


@pytest.mark.parametrize("name", sorted(EXPECTED_COUNTS))
def test_fixture_solution_counts(name):
    assert len(solve_brute_force(fixtures.small_puzzles()[name])) == EXPECTED_COUNTS[name]


@pytest.mark.parametrize("name", [k for k, p in fixtures.small_puzzles().items() if p.k ** p.cells <= 20000])
def test_solver_matches_cell_coloring_oracle(name):
    p = fixtures.small_puzzles()[name]
    assert {s.key() for s in solve_brute_force(p)} == cell_coloring_solutions(p)


def test_split22_has_row_and_column_split():
    sols = solve_brute_force(fixtures.small_puzzles()["split22"])
    assert [s.rects for s in sols] == [
        {2: rect(1, 1, 1, 2), 3: rect(2, 1, 2, 2)},
        {2: rect(1, 1, 2, 1), 3: rect(1, 2, 2, 2)},
    ]


def test_fig1_solution_is_unique():
    assert solve_brute_force(fixtures.fig1(), max_cells=49) == [fixtures.fig1_solution()]


def test_solver_refuses_large_grid():
    with pytest.raises(PuzzleSizeError):
        solve_brute_force(fixtures.fig1())


def test_solver_limit_and_order():
    p = fixtures.small_puzzles()["grid44"]
    sols = solve_brute_force(p)
    assert [s.key() for s in sols] == sorted(s.key() for s in sols)
    assert solve_brute_force(p, limit=2) == sols[:2]


def test_solver_output_tiles_grid_exactly_once():
    for p in fixtures.small_puzzles().values():
        for sol in solve_brute_force(p):
            assert check_solution(p, sol).accepted
            cover = [0] * p.cells
            for r in sol.rects.values():
                for x, y in r.cells():
                    cover[(x - 1) * p.n + y - 1] += 1
            assert cover == [1] * p.cells


@settings(max_examples=60, deadline=None)
@given(puzzles(max_side=3), st.randoms(use_true_random=False))
def test_check_invariant_under_relabeling(p, rnd):
    sols = solve_brute_force(p)
    idx = [c.index for c in p.clues]
    perm = idx[:]
    rnd.shuffle(perm)
    mapping = dict(zip(idx, perm))
    relabeled = {s.key() for s in solve_brute_force(p.relabel(mapping))}
    assert relabeled == {s.relabel(mapping).key() for s in sols}
    for s in sols:
        assert check_solution(p.relabel(mapping), s.relabel(mapping)).accepted


@settings(max_examples=80, deadline=None)
@given(puzzles(max_side=3))
def test_solver_agrees_with_check_on_random_puzzles(p):
    sols = solve_brute_force(p)
    assert all(check_solution(p, s).accepted for s in sols)
    if p.k and p.k ** p.cells <= 5000:
        assert {s.key() for s in sols} == cell_coloring_solutions(p)
