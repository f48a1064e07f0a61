from __future__ import annotations

import random

import pytest

from advicebench.analysis import Equal, Inconclusive, prefix_equiv
from advicebench import corpus
from advicebench.errors import (
    BudgetExceeded,
    MovedLeftOfEndmarker,
    NonProductive,
    UndefinedTransition,
)
from advicebench.transducers import (
    ENDMARKER,
    LEFT,
    RIGHT,
    OneWayTransducer,
    TwoWayTransducer,
    analyze_on_constant,
    compose_1wft,
    mirror_blocks_2wft,
    mu_transducers,
    remove_endmarker,
    run_1wft,
    run_2wft,
    visit_bound_check,
    writer_2wft,
)
from advicebench.words import (
    Alphabet,
    ConstantWord,
    block_mirror,
    duplicate,
    lasso,
    word,
)

AB = Alphabet.of("ab")
BIN = Alphabet.of("01")


def letter_copier(alphabet):
    return OneWayTransducer({"q"}, "q", alphabet, alphabet,
                            {("q", a): ((a,), "q") for a in alphabet.letters})


def test_run_1wft_letter_per_step():
    got = run_1wft(letter_copier(AB), lasso("", "ab"))
    assert got.prefix_str(6) == "ababab"


def test_run_1wft_eraser_stalls():
    eraser = OneWayTransducer({"q"}, "q", AB, AB,
                              {("q", a): ((), "q") for a in AB.letters})
    outcome = run_1wft(eraser, lasso("", "ab"), budget=500)
    with pytest.raises(BudgetExceeded):
        outcome.letter(0)
    assert isinstance(outcome.try_letters(1)[1], BudgetExceeded)


def test_run_1wft_doubler_matches_duplicate():
    doubler = OneWayTransducer({"q"}, "q", BIN, BIN,
                               {("q", a): ((a, a), "q") for a in BIN.letters})
    w = lasso("", "01")
    got = run_1wft(doubler, w)
    assert prefix_equiv(got, duplicate(w, 2), 400) == Equal(400)


def test_compose_identity_neutral():
    doubler = OneWayTransducer({"q"}, "q", AB, AB,
                               {("q", a): ((a, a), "q") for a in AB.letters})
    composed = compose_1wft(letter_copier(AB), doubler)
    w = lasso("b", "ab")
    assert prefix_equiv(run_1wft(composed, w), run_1wft(doubler, w), 500) == Equal(500)


def test_compose_two_doublers_quadruples():
    doubler = OneWayTransducer({"q"}, "q", AB, AB,
                               {("q", a): ((a, a), "q") for a in AB.letters})
    composed = compose_1wft(doubler, doubler)
    w = lasso("", "a")
    got = run_1wft(composed, w)
    assert prefix_equiv(got, duplicate(duplicate(w, 2), 2), 200) == Equal(200)


def random_total_1wft(rng, alphabet, max_states=4):
    n = rng.randint(1, max_states)
    states = list(range(n))
    tr = {}
    for q in states:
        for a in alphabet.letters:
            out = tuple(rng.choice(alphabet.letters) for _ in range(rng.randrange(3)))
            tr[(q, a)] = (out, rng.choice(states))
    return OneWayTransducer(states, 0, alphabet, alphabet, tr)


def test_compose_coherent_with_pipeline():
    rng = random.Random(61)
    w = lasso("", "ab")
    for _ in range(15):
        inner = random_total_1wft(rng, AB)
        outer = random_total_1wft(rng, AB)
        composed = compose_1wft(outer, inner)
        pipeline = run_1wft(outer, run_1wft(inner, w, budget=2000).word, budget=2000)
        direct = run_1wft(composed, w, budget=2000)
        direct_letters, halt1 = direct.try_letters(200)
        pipe_letters, halt2 = pipeline.try_letters(200)
        n = min(len(direct_letters), len(pipe_letters))
        assert direct_letters[:n] == pipe_letters[:n]
        # both stall together or produce the full prefix together
        assert (halt1 is None) == (halt2 is None)


def test_run_2wft_mirror_matches_combinator():
    w = lasso("", "ab#baa#")
    machine = mirror_blocks_2wft(AB)
    got = run_2wft(machine, w)
    assert prefix_equiv(got, block_mirror(w), 500) == Equal(500)


def test_run_2wft_error_paths():
    tr = {
        ("p", ENDMARKER): ((), RIGHT, "q"),
        ("q", "a"): ((), LEFT, "r"),
        ("r", ENDMARKER): ((), LEFT, "r"),
    }
    machine = TwoWayTransducer({"p", "q", "r"}, "p", AB, AB, tr)
    outcome = run_2wft(machine, lasso("", "a"))
    with pytest.raises(MovedLeftOfEndmarker):
        outcome.letter(0)

    undefined = TwoWayTransducer({"p"}, "p", AB, AB, {("p", ENDMARKER): ((), RIGHT, "p")})
    outcome = run_2wft(undefined, lasso("", "ab"))
    with pytest.raises(UndefinedTransition) as err:
        outcome.letter(0)
    assert err.value.position == 1


def test_run_2wft_deterministic_replay():
    w = lasso("", "ab#")
    machine = mirror_blocks_2wft(AB)
    one = run_2wft(machine, w)
    two = run_2wft(machine, w)
    assert one.letters(120) == two.letters(120)
    assert one.trace[:200] == two.trace[:200]
    assert one.visit_counts == two.visit_counts


def test_writer_ignores_input():
    machine = writer_2wft(word("ab"), word("ba"), AB)
    for w in (lasso("", "a"), lasso("", "ab"), lasso("bb", "aab")):
        got = run_2wft(machine, w)
        expect = lasso("ab", "ba")
        assert prefix_equiv(got, expect, 300) == Equal(300)


def test_visit_bounds():
    w = lasso("", "ab")
    outcome = run_1wft(letter_copier(AB), w)
    outcome.letters(300)
    assert visit_bound_check(outcome, 200) == 1

    mirror = mirror_blocks_2wft(AB)
    outcome = run_2wft(mirror, lasso("", "ab#"))
    outcome.letters(300)
    assert visit_bound_check(outcome, 200) <= 3


def test_visit_bound_overflow_means_loop():
    machine = corpus.zigzag_2wft()
    outcome = run_2wft(machine, lasso("", "ab"), budget=10_000)
    letters = outcome.letters(40)
    assert visit_bound_check(outcome, 10) > len(machine.states)
    # the trace shows a configuration repeat and the output is periodic
    seen = set()
    repeat = False
    for state, pos, _ in outcome.trace:
        if (state, pos) in seen:
            repeat = True
            break
        seen.add((state, pos))
    assert repeat
    assert "".join(letters) == "ab" * 20


def test_analyze_forward_emitter():
    tr = {}
    for a in list(AB.letters) + [ENDMARKER]:
        tr[("q", a)] = (("a",), RIGHT, "q")
    machine = TwoWayTransducer({"q"}, "q", AB, AB, tr)
    found = analyze_on_constant(machine, "b")
    assert found.u.to_str() == "" and found.v.to_str() == "a"


def test_analyze_zigzag_exact_repeat():
    found = analyze_on_constant(corpus.zigzag_2wft(), "a")
    assert found.u.to_str() == "" and found.v.to_str() == "ab"


def test_analyze_drifter_matches_simulation():
    machine = corpus.drifter_2wft()
    found = analyze_on_constant(machine, "a")
    direct = run_2wft(machine, ConstantWord("a"))
    assert prefix_equiv(found, direct, 2000) == Equal(2000)


def test_analyze_nonproductive():
    tr = {}
    for a in list(AB.letters) + [ENDMARKER]:
        tr[("q", a)] = ((), RIGHT, "q")
    machine = TwoWayTransducer({"q"}, "q", AB, AB, tr)
    with pytest.raises(NonProductive):
        analyze_on_constant(machine, "a")


def test_analyze_budget():
    machine = corpus.drifter_2wft()
    with pytest.raises(BudgetExceeded):
        analyze_on_constant(machine, "a", budget=2)


def test_remove_endmarker_simple_prologue():
    # touches the marker only on its first step
    tr = {("p", ENDMARKER): (("x",), RIGHT, "q")}
    for a in AB.letters:
        tr[("q", a)] = ((a,), RIGHT, "q")
    machine = TwoWayTransducer({"p", "q"}, "p", AB, Alphabet.of("abx"), tr)
    w = lasso("", "ab")
    trimmed = remove_endmarker(machine, w)
    assert prefix_equiv(run_2wft(trimmed, w), run_2wft(machine, w), 500) == Equal(500)
    assert len(trimmed.states) == len(machine.states) + 1


def test_remove_endmarker_mirror():
    w = lasso("", "ab#")
    machine = mirror_blocks_2wft(AB)
    trimmed = remove_endmarker(machine, w)
    assert prefix_equiv(run_2wft(trimmed, w), run_2wft(machine, w), 500) == Equal(500)
    # the endmarker transition survives only as the boot step
    marker_uses = [q for (q, a) in trimmed.transitions if a is ENDMARKER]
    assert len(marker_uses) == 1


def test_remove_endmarker_rejects_bouncer():
    with pytest.raises(BudgetExceeded) as err:
        remove_endmarker(corpus.endmarker_bouncer_2wft(), lasso("", "ab"))
    assert err.value.loop is not None
    assert err.value.loop.v.to_str() == "a"


def test_mu_round_trip():
    for n in (2, 3):
        fwd, bwd = mu_transducers(n, AB)
        w = lasso("", "ab")
        expanded = run_1wft(fwd, w)
        assert prefix_equiv(expanded, duplicate(w, n), 600) == Equal(600)
        merged = run_1wft(bwd, duplicate(w, n))
        assert prefix_equiv(merged, w, 600) == Equal(600)


def test_mu_backward_rejects_malformed():
    _, bwd = mu_transducers(2, BIN)
    outcome = run_1wft(bwd, lasso("", "01"))
    with pytest.raises(UndefinedTransition) as err:
        outcome.letter(0)
    assert err.value.position == 1


def test_prefix_equiv_stall_is_inconclusive():
    eraser = OneWayTransducer({"q"}, "q", AB, AB,
                              {("q", "a"): (("a",), "q"), ("q", "b"): ((), "q")})
    # emits on a's only: the word abbb... yields one letter then stalls
    outcome = run_1wft(eraser, lasso("a", "b"), budget=200)
    verdict = prefix_equiv(outcome, lasso("a", "b"), 10)
    assert isinstance(verdict, Inconclusive)
    assert verdict.index == 1
    assert isinstance(verdict.status, BudgetExceeded)
