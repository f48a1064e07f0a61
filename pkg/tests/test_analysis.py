from __future__ import annotations

import random

from advicebench.analysis import (
    Diverges,
    Equal,
    Inconclusive,
    check_subword_bound,
    padding_check,
    prefix_equiv,
    subword_complexity,
)
from advicebench.errors import BudgetExceeded
from advicebench.ltl import parse_formula
from advicebench.mealy import MealyMachine, mealy_image_lasso
from advicebench.words import Alphabet, lasso, pi_word

AB = Alphabet.of("ab")


def random_total_mealy(rng, alphabet, max_states=5):
    n = rng.randint(1, max_states)
    states = list(range(n))
    return MealyMachine(
        states, 0, alphabet, alphabet,
        {(q, a): (rng.choice(alphabet.letters), rng.choice(states))
         for q in states for a in alphabet.letters},
    )


def test_complexity_of_periodic_word():
    profile = subword_complexity(lasso("", "01"), 3)
    assert profile.counts == {1: 2, 2: 2, 3: 2}
    assert all(profile.exact.values())


def test_complexity_of_constant_word():
    profile = subword_complexity(lasso("", "a"), 5)
    assert all(count == 1 for count in profile.counts.values())


def test_complexity_of_growing_blocks():
    profile = subword_complexity(pi_word(1), 2, window=4096)
    assert profile.counts[2] == 3  # 10, 01, 00; adjacent ones never occur
    assert profile.stable[2]
    assert not profile.exact[2]


def test_complexity_eventually_constant_for_lassos():
    for w in (lasso("", "ab"), lasso("ba", "aab"), lasso("", "aabab")):
        span = len(w.u) + len(w.v)
        profile = subword_complexity(w, span + 4)
        assert profile.counts[span] == profile.counts[span + 1]
        assert profile.counts[span + 1] == profile.counts[span + 2]


def test_bound_holds_for_identity():
    w = lasso("a", "ab")
    report = check_subword_bound(w, w, 1, k_max=6)
    assert report.holds and report.conclusive


def test_bound_violation_detected():
    rich = lasso("", "aabb")  # four factors of length 2
    poor = lasso("", "a")
    report = check_subword_bound(rich, poor, 2, k_max=2)
    assert not report.holds
    assert report.violations and report.violations[0][0] == 2


def test_bound_for_machine_images():
    rng = random.Random(71)
    for _ in range(5):
        machine = random_total_mealy(rng, AB)
        beta = lasso("a", "abb")
        alpha = mealy_image_lasso(machine, beta)
        report = check_subword_bound(alpha, beta, len(machine.states) ** 2, k_max=8)
        assert report.holds and report.conclusive


def test_prefix_equiv_verdicts():
    assert prefix_equiv(lasso("", "ab"), lasso("", "ab"), 100) == Equal(100)
    left = lasso("", "ab")
    right = lasso("ababababab", "ba")
    verdict = prefix_equiv(left, right, 100)
    assert verdict == Diverges(10, "a", "b")


def test_prefix_equiv_symmetric_and_transitive_when_equal():
    a, b, c = lasso("", "ab"), lasso("ab", "ab"), lasso("abab", "ab")
    n = 60
    assert prefix_equiv(a, b, n) == Equal(n) == prefix_equiv(b, a, n)
    assert prefix_equiv(b, c, n) == Equal(n)
    assert prefix_equiv(a, c, n) == Equal(n)


def test_prefix_equiv_stall():
    from advicebench.transducers import OneWayTransducer, run_1wft

    silent_after = OneWayTransducer(
        {"go", "stop"}, "go", AB, AB,
        {
            ("go", "a"): (("a",), "go"),
            ("go", "b"): ((), "stop"),
            ("stop", "a"): ((), "stop"),
            ("stop", "b"): ((), "stop"),
        },
    )
    outcome = run_1wft(silent_after, lasso("aaab", "a"), budget=100)
    verdict = prefix_equiv(outcome, lasso("", "a"), 10)
    assert isinstance(verdict, Inconclusive)
    assert verdict.index == 3
    assert isinstance(verdict.status, BudgetExceeded)


def test_padding_for_eventually():
    table = padding_check(parse_formula("F b"), lasso("aaab", "a"), n_range=8)
    # positions 0..3 see the b after 4..1 more letters; afterwards never
    assert table.entries[:4] == [4, 3, 2, 1]
    assert all(entry is None for entry in table.entries[4:])


def test_padding_for_top_is_zero():
    table = padding_check(parse_formula("T"), lasso("", "ab"), n_range=5)
    assert table.entries == [0] * 6


def test_padding_for_atom():
    table = padding_check(parse_formula("a"), lasso("", "ab"), n_range=6)
    for n, entry in enumerate(table.entries):
        if n % 2 == 0:
            assert entry == 1
        else:
            assert entry is None


def test_padding_threshold_matches_monotonicity():
    from advicebench.ltl import eliminate_g_subformulas, finite_prefix_eval, nnf
    from advicebench.words import FiniteWord

    advice = lasso("ab", "ba")
    phi = parse_formula("a U b")
    table = padding_check(phi, advice, n_range=10)
    rewritten = eliminate_g_subformulas(nnf(phi), advice).formula
    for n, entry in enumerate(table.entries):
        if entry is None or entry == "cap":
            continue
        for k in range(entry + 3):
            prefix = FiniteWord(tuple(advice.letter(n + i) for i in range(k)), advice.alphabet)
            assert finite_prefix_eval(rewritten, prefix, 0) == (k >= entry)
