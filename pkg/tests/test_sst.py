from __future__ import annotations

import random

import pytest

from advicebench import corpus
from advicebench.analysis import Equal, prefix_equiv
from advicebench.errors import (
    AdviceNotLasso,
    BudgetExceeded,
    MalformedSimpleSst,
    NoOutputFunction,
)
from advicebench.sst import (
    Reg,
    SimpleSst,
    Sst,
    Substitution,
    compile_sst_to_2wftb,
    compose_substitutions,
    eliminate_lookbehind_lasso,
    ground,
    run_sst,
    simplify_to_simple_sst,
    validate_copyless,
)
from advicebench.transducers import run_2wft, run_2wft_b
from advicebench.words import PAD, Alphabet, block_mirror, lasso, pi_word

AB = Alphabet.of("ab")


def test_copyless_examples():
    ok = Substitution({"x": (Reg("z"),), "y": (Reg("y"), Reg("x")), "z": ()})
    assert validate_copyless(ok).ok
    bad = Substitution({"x": (Reg("x"),), "y": (Reg("x"),)})
    report = validate_copyless(bad)
    assert not report.ok and report.register == "x"
    identity = Substitution({"x": (Reg("x"),), "y": (Reg("y"),)})
    assert validate_copyless(identity).ok


def test_copyless_enforced_on_machines():
    with pytest.raises(MalformedSimpleSst):
        SimpleSst(
            {"q"}, "q", AB, AB, ("x", "out"),
            {("q", "a"): "q"},
            {("q", "a"): Substitution({"x": (Reg("x"), Reg("x")), "out": (Reg("out"),)})},
        )


def test_run_mirror_sst():
    source = lasso("", "ab#")
    got = run_sst(corpus.mirror_sst(), source)
    assert prefix_equiv(got, block_mirror(source), 500) == Equal(500)


def test_run_identity_sst():
    source = lasso("", "01")
    got = run_sst(corpus.identity_sst(), source)
    assert prefix_equiv(got, source, 300) == Equal(300)


def test_run_interleave_sst():
    source = lasso("", "abab#ba#")
    got = run_sst(corpus.interleave_sst(), source)
    # each block is regrouped: letters a first, then b, then the marker
    assert got.prefix_str(16) == "aabb#ab#aabb#ab#"


def test_simple_sst_that_never_grows_stalls():
    quiet = SimpleSst(
        {"q"}, "q", AB, AB, ("out",),
        {("q", a): "q" for a in AB.letters},
        {("q", a): Substitution({"out": (Reg("out"),)}) for a in AB.letters},
    )
    outcome = run_sst(quiet, lasso("", "ab"), budget=300)
    with pytest.raises(BudgetExceeded):
        outcome.letter(0)


def test_general_sst_needs_lasso():
    with pytest.raises(AdviceNotLasso):
        run_sst(corpus.two_phase_sst(), pi_word(1))


def test_general_sst_streams_frozen_head_then_tail():
    source = lasso("a", "bc")
    got = run_sst(corpus.two_phase_sst(), source)
    assert got.prefix_str(9) == "abcbcbcbc"


def test_general_sst_finite_limit_pads():
    source = lasso("a", "b")
    got = run_sst(corpus.finite_output_sst(), source)
    assert got.letters(5) == ["a", "b", PAD, PAD, PAD]


def test_general_sst_delayed_emission_is_not_finite():
    # the output register is fed through a helper, so the first cycle after
    # the transient emits nothing; the limit is still infinite
    full = Alphabet.of("ab")
    machine = Sst(
        {"t", "p"}, "t", full, full, ("x", "y"),
        {("t", "a"): "p", ("p", "b"): "p"},
        {
            ("t", "a"): Substitution({"x": (), "y": ()}),
            ("p", "b"): Substitution({"x": ("a",), "y": (Reg("y"), Reg("x"))}),
        },
        {frozenset({"p"}): ("y",)},
    )
    got = run_sst(machine, lasso("a", "b"))
    assert got.letters(4) == ["a", "a", "a", "a"]


def test_general_sst_flush_then_silent_pads():
    # support of the scratch register drops after one cycle; the limit is finite
    full = Alphabet.of("ab")
    machine = Sst(
        {"t", "p"}, "t", full, full, ("x", "y"),
        {("t", "a"): "p", ("p", "b"): "p"},
        {
            ("t", "a"): Substitution({"x": ("a", "b"), "y": ()}),
            ("p", "b"): Substitution({"x": (), "y": (Reg("y"), Reg("x"))}),
        },
        {frozenset({"p"}): ("y",)},
    )
    got = run_sst(machine, lasso("a", "b"))
    assert got.letters(5) == ["a", "b", PAD, PAD, PAD]


def test_general_sst_no_output_function():
    machine = corpus.two_phase_sst()
    bad_input = lasso("a", "b")  # recurring states differ from dom(F)? same P here
    # build an input whose recurring set is not in the output function
    other = Sst(
        machine.states, machine.initial, machine.input_alphabet, machine.output_alphabet,
        machine.registers, machine.transitions, machine.updates,
        {frozenset({"t"}): ("out",)},
    )
    with pytest.raises(NoOutputFunction):
        run_sst(other, lasso("a", "bc")).letter(0)


def test_substitution_composition_matches_stepwise_grounding():
    rng = random.Random(97)
    regs = ("x", "y", "z")

    def random_sub():
        mapping = {}
        budget = list(regs)
        rng.shuffle(budget)
        for name in regs:
            tokens = []
            for _ in range(rng.randrange(3)):
                if budget and rng.random() < 0.4:
                    tokens.append(Reg(budget.pop()))
                else:
                    tokens.append(rng.choice("ab"))
            mapping[name] = tuple(tokens)
        return Substitution(mapping)

    for _ in range(60):
        chain = [random_sub() for _ in range(rng.randint(1, 6))]
        # stepwise: ground through the chain one substitution at a time
        values = {name: [] for name in regs}
        for sub in chain:
            values = {name: ground(sub.rhs(name), values) for name in regs}
        # composed: fold substitutions together, then ground once
        composed = chain[0]
        for sub in chain[1:]:
            composed = compose_substitutions(composed, sub)
        empty = {name: [] for name in regs}
        for name in regs:
            assert ground(composed.rhs(name), empty) == values[name]


def test_copylessness_preserved_under_composition():
    rng = random.Random(101)
    regs = ("x", "y", "z")

    def random_copyless():
        mapping = {name: [] for name in regs}
        pool = [Reg(name) for name in regs] + [c for c in "ab"]
        rng.shuffle(pool)
        used = set()
        for tok in pool:
            if isinstance(tok, Reg):
                if tok.name in used or rng.random() < 0.3:
                    continue
                used.add(tok.name)
            elif rng.random() < 0.5:
                continue
            mapping[rng.choice(regs)].append(tok)
        return Substitution({k: tuple(v) for k, v in mapping.items()})

    for _ in range(200):
        one, two = random_copyless(), random_copyless()
        assert validate_copyless(one).ok and validate_copyless(two).ok
        assert validate_copyless(compose_substitutions(one, two)).ok


def test_streamed_output_is_append_only():
    source = lasso("", "ab#baa#")
    sst = corpus.mirror_sst()
    small = run_sst(sst, source).letters(40)
    large = run_sst(sst, source).letters(200)
    assert large[:40] == small


def test_simplify_already_simple():
    sst = corpus.identity_sst()
    source = lasso("0", "10")
    simple = simplify_to_simple_sst(sst, source)
    assert prefix_equiv(run_sst(simple, source), run_sst(sst, source), 500) == Equal(500)


def test_simplify_two_phase():
    machine = corpus.two_phase_sst()
    source = lasso("a", "bc")
    simple = simplify_to_simple_sst(machine, source)
    assert isinstance(simple, SimpleSst)
    assert prefix_equiv(run_sst(simple, source), run_sst(machine, source), 500) == Equal(500)
    boots = [q for q in simple.states if isinstance(q, tuple) and q[0] == "boot"]
    assert len(boots) == 1  # transient phase has one step


def test_simplify_requires_output_function():
    machine = corpus.two_phase_sst()
    stripped = Sst(
        machine.states, machine.initial, machine.input_alphabet, machine.output_alphabet,
        machine.registers, machine.transitions, machine.updates, {},
    )
    with pytest.raises(NoOutputFunction):
        simplify_to_simple_sst(stripped, lasso("a", "bc"))


@pytest.mark.parametrize("build,inputs", [
    (corpus.mirror_sst, ["ab#", "ab#baa#"]),
    (corpus.identity_sst, ["01", "0110"]),
    (corpus.interleave_sst, ["ab#", "abab#ba#"]),
])
def test_compile_matches_interpreter(build, inputs):
    sst = build()
    compiled = compile_sst_to_2wftb(sst)
    for period in inputs:
        source = lasso("", period)
        got = run_2wft_b(compiled, source)
        want = run_sst(sst, source)
        assert prefix_equiv(got, want, 500) == Equal(500)


def test_compiled_walk_back_positions():
    # a register chain spanning three cells forces the narrated excursion:
    # left, left, right, right over the window, emitting the nested values
    sst = corpus.nested_register_sst()
    compiled = compile_sst_to_2wftb(sst)
    source = lasso("", "c")
    outcome = run_2wft_b(compiled, source, visit_window=64)
    letters = outcome.letters(3)
    assert "".join(letters) == "baa"
    positions = [pos for (_state, pos, _out) in outcome.trace]
    flat = ",".join(map(str, positions))
    assert "3,2,1,2,1,0,1,2,3" in flat


def test_eliminate_lookbehind_on_compiled_machines():
    sst = corpus.mirror_sst()
    compiled = compile_sst_to_2wftb(sst)
    source = lasso("", "ab#")
    plain = eliminate_lookbehind_lasso(compiled, source)
    assert prefix_equiv(run_2wft(plain, source), run_2wft_b(compiled, source), 500) == Equal(500)


def test_eliminate_lookbehind_ignoring_machine():
    from advicebench.transducers import mirror_blocks_2wft

    wrapped = corpus.with_trivial_lookbehind(mirror_blocks_2wft(AB))
    source = lasso("", "ab#baa#")
    plain = eliminate_lookbehind_lasso(wrapped, source)
    assert prefix_equiv(run_2wft(plain, source), run_2wft_b(wrapped, source), 500) == Equal(500)


def test_eliminate_lookbehind_rejects_pinned_machine():
    with pytest.raises(BudgetExceeded) as err:
        eliminate_lookbehind_lasso(corpus.pinned_lookbehind_2wftb(), lasso("", "ab"))
    assert err.value.loop is not None


def test_eliminate_needs_lasso():
    compiled = compile_sst_to_2wftb(corpus.identity_sst(Alphabet.of("01")))
    with pytest.raises(AdviceNotLasso):
        eliminate_lookbehind_lasso(compiled, pi_word(1))


def test_lookbehind_run_reports_offending_triple():
    from advicebench.errors import UndefinedTransition

    partial = compile_sst_to_2wftb(corpus.identity_sst(Alphabet.of("01")))
    # remove one main transition so the run dies on the second letter
    key = next(k for k in partial.transitions if k[0] == ("main",) and k[1] == "1")
    broken = type(partial)(
        partial.states, partial.initial, partial.input_alphabet,
        partial.output_alphabet,
        {k: v for k, v in partial.transitions.items() if k != key},
        partial.oracle,
    )
    outcome = run_2wft_b(broken, lasso("", "01"))
    with pytest.raises(UndefinedTransition) as err:
        outcome.letters(5)
    assert err.value.detail is not None and len(err.value.detail) == 3
