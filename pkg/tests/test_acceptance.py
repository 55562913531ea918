"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed in the pytest terminal summary (see conftest.py) and
also when this file is run directly with ``python tests/test_acceptance.py``.
"""

import itertools
import subprocess
import sys
import time

from shikaku_zkp import fixtures
from shikaku_zkp.cards import CardInventory, EncodedInt, Table, decode, encoding_values, inventory, negate_mod3
from shikaku_zkp.harness import (StaircaseShape, enumerate_accepting_paths, enumerated_position_counts,
                                 partition_colorings, staircase_attack, zk_distribution_test)
from shikaku_zkp.primitives import add_mod3, chosen_cut, secret_indicator
from shikaku_zkp.protocols import honest_prover, verify_shikaku
from shikaku_zkp.puzzle import solve_brute_force
from shikaku_zkp.shuffle import ShuffleSource
from shikaku_zkp.transcript import verifier_view

RESULTS = []


def report(number, name, ok, detail):
    line = f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_1_completeness():
    start = time.perf_counter()
    cases = [("fig1", fixtures.fig1(), fixtures.fig1_solution())]
    for name, p in fixtures.small_puzzles().items():
        assert p.cells <= 25
        cases += [(name, p, sol) for sol in solve_brute_force(p)]
    seeds = 100
    rejections = []
    for name, p, sol in cases:
        prover = honest_prover(p, sol)
        for seed in range(seeds):
            verdict, _ = verify_shikaku(p, prover, ShuffleSource.seeded(seed))
            if not verdict.accepted:
                rejections.append((name, seed, verdict.describe()))
    elapsed = time.perf_counter() - start
    ok = not rejections and elapsed < 30
    report(1, "completeness", ok,
           f"{len(cases)} puzzle/solution pairs x {seeds} seeds, {len(rejections)} rejections, {elapsed:.1f}s < 30s")


def test_2_soundness():
    start = time.perf_counter()
    mismatches = []
    searched = fixtures.soundness_puzzles()
    for name, p in searched.items():
        got = enumerate_accepting_paths(p, exhaustive_inputs=True)
        want = partition_colorings(p, solve_brute_force(p))
        if got != want:
            mismatches.append(name)
    stairs = {lengths: staircase_attack(StaircaseShape(lengths)) for lengths in ((2, 4, 1, 3), (2, 2, 3))}
    accepted_stairs = [k for k, rep in stairs.items() if rep.accepted]
    elapsed = time.perf_counter() - start
    ok = not mismatches and not accepted_stairs and elapsed < 300
    phases = ", ".join(f"{k} rejected at {rep.failed_phase}" for k, rep in stairs.items())
    report(2, "soundness", ok,
           f"{len(searched)} puzzles with mn<=6, {len(mismatches)} coloring-set mismatches; {phases}; "
           f"{elapsed:.1f}s < 300s")


def test_3_zero_knowledge():
    p = fixtures.small_puzzles()["split22"]
    a, b = solve_brute_force(p)
    rep = zk_distribution_test(p, a, b, trials=2000, seed=0, alpha=0.01)
    one = fixtures.small_puzzles()["one"]
    counts = enumerated_position_counts(one, solve_brute_force(one)[0])
    exact_uniform = all(len(set(c.values())) == 1 and sorted(c) == list(range(9)) for c in counts)
    ok = rep.passed and exact_uniform
    report(3, "zero-knowledge", ok,
           f"canonical sequences equal={rep.exact_equal}, simulator equal={rep.simulator_equal}; "
           f"2000 trials, {len(rep.classes)} reveal classes, min uniformity p={rep.min_uniform_p:.4f}, "
           f"min two-sample p={rep.min_two_sample_p:.4f}, family alpha 0.01; "
           f"1x1 enumerated offsets exactly uniform={exact_uniform}")


def test_4_subprotocol_exactness():
    stock = fixtures.fig1()
    add_cases = add_bad = 0
    for r, s, x in itertools.product(range(3), range(3), range(3)):
        t = Table(stock)
        R = EncodedInt(t.place_secret(encoding_values(r, 3), "R"), 3)
        S = EncodedInt(t.place_secret(encoding_values(s, 3), "S"), 3)
        add_cases += 1
        add_bad += decode(add_mod3(t, R, S, ShuffleSource.scripted([x]))) != (r + s) % 3

    cut_cases = cut_bad = 0
    for q in range(1, 9):
        for i, x, y in itertools.product(range(q), range(q), range(q)):
            t = Table(stock)
            cards = t.place_secret([0] * q, "C")
            ids = [c.id for c in cards]
            h = chosen_cut(t, cards, secret_indicator(t, q, i, "sel"), ShuffleSource.scripted([x]))
            picked = h.selected.id
            restored = h.close(ShuffleSource.scripted([y]))
            cut_cases += 1
            cut_bad += picked != ids[i] or [c.id for c in restored] != ids

    neg_bad = 0
    for v in range(3):
        e = EncodedInt(Table(stock).place_secret(encoding_values(v, 3), "e"), 3)
        neg_bad += negate_mod3(negate_mod3(e)).cards != e.cards or decode(negate_mod3(e)) != (-v) % 3
    ok = add_cases == 27 and not add_bad and not cut_bad and not neg_bad
    report(4, "subprotocol exactness", ok,
           f"add_mod3 {add_cases - add_bad}/{add_cases}; chosen_cut {cut_cases - cut_bad}/{cut_cases} "
           f"(q<=8, all i, all offset pairs); negate_mod3 involution {3 - neg_bad}/3")


def test_5_card_count():
    rows = []
    ok = True
    for size in (2, 4, 8):
        p = fixtures.dominoes(size)
        total = inventory(p).total
        bound = CardInventory.bound(p)
        ok &= total <= bound
        rows.append(f"{size}x{size}: {total} <= {bound}")
    report(5, "card count", ok, "total <= 11mn + 26; " + ", ".join(rows))


def test_6_determinism():
    p, sol = fixtures.fig1(), fixtures.fig1_solution()

    def once(seed):
        _, t = verify_shikaku(p, honest_prover(p, sol), ShuffleSource.seeded(seed))
        return t.to_json().encode(), verifier_view(t).to_json().encode()

    same = once(5) == once(5)
    differs = once(5)[0] != once(6)[0]
    # and across separate interpreter processes
    code = ("from shikaku_zkp import fixtures as f; from shikaku_zkp.protocols import *; "
            "from shikaku_zkp.shuffle import ShuffleSource; import sys; "
            "p, s = f.fig1(), f.fig1_solution(); "
            "sys.stdout.write(verify_shikaku(p, honest_prover(p, s), ShuffleSource.seeded(5))[1].to_json())")
    outs = [subprocess.run([sys.executable, "-c", code], capture_output=True, check=True).stdout for _ in range(2)]
    cross = outs[0] == outs[1] == once(5)[0]
    ok = same and cross and differs
    report(6, "determinism", ok,
           f"same seed byte-identical in-process={same}, across processes={cross}; other seed differs={differs}")


if __name__ == "__main__":
    failed = 0
    for test in (test_1_completeness, test_2_soundness, test_3_zero_knowledge, test_4_subprotocol_exactness,
                 test_5_card_count, test_6_determinism):
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
