"""Streaming string transducers over infinite words.

Registers hold finite output fragments and are updated by copyless
substitutions. A simple machine streams a distinguished register that only
ever grows at its end; the compiler below turns such a machine into a
two-way transducer that recomputes register values by walking back over
the input, consulting the machine's own run as a lookbehind oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

from .advice import Dfa
from .errors import (
    AdviceNotLasso,
    BudgetExceeded,
    MalformedSimpleSst,
    MovedLeftOfEndmarker,
    NoOutputFunction,
    UndefinedTransition,
    ValidationFailed,
)
from .transducers import (
    ENDMARKER,
    LEFT,
    RIGHT,
    DEFAULT_BUDGET,
    LookbehindTransducer,
    RunOutcome,
    TwoWayTransducer,
    run_2wft,
    run_2wft_b,
)
from .words import FiniteWord, InfiniteWord, LassoWord, PAD, canonical_lasso


@dataclass(frozen=True)
class Reg:
    name: str

    def __repr__(self):
        return self.name


class Substitution:
    """Total mapping from registers to strings over letters and registers."""

    def __init__(self, mapping):
        self.mapping = {name: tuple(tokens) for name, tokens in dict(mapping).items()}

    def rhs(self, name):
        return self.mapping[name]

    def registers(self):
        return set(self.mapping)

    def items(self):
        return self.mapping.items()

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.mapping == other.mapping

    def __repr__(self):
        def fmt(tokens):
            return " ".join(str(x) for x in tokens) or "ε"

        return "{" + ", ".join(f"{k}↦{fmt(v)}" for k, v in sorted(self.mapping.items())) + "}"


@dataclass
class CopylessReport:
    ok: bool
    register: str | None = None
    sites: tuple = ()


def _copyless_one(sub: Substitution) -> CopylessReport:
    seen = {}
    for target, tokens in sub.items():
        for i, tok in enumerate(tokens):
            if isinstance(tok, Reg):
                if tok.name in seen:
                    return CopylessReport(False, tok.name, (seen[tok.name], (target, i)))
                seen[tok.name] = (target, i)
    return CopylessReport(True)


def validate_copyless(obj) -> CopylessReport:
    """Check that each register occurs at most once across all right-hand sides."""
    if isinstance(obj, Substitution):
        return _copyless_one(obj)
    for key, sub in obj.updates.items():
        r = _copyless_one(sub)
        if not r.ok:
            return CopylessReport(False, r.register, (key,) + r.sites)
    return CopylessReport(True)


def compose_substitutions(outer: Substitution, inner: Substitution) -> Substitution:
    """Substitution equal to applying ``inner`` and grounding through ``outer``."""
    mapping = {}
    for name, tokens in inner.items():
        acc = []
        for tok in tokens:
            if isinstance(tok, Reg):
                acc.extend(outer.rhs(tok.name))
            else:
                acc.append(tok)
        mapping[name] = tuple(acc)
    return Substitution(mapping)


def ground(tokens, values) -> list:
    acc = []
    for tok in tokens:
        if isinstance(tok, Reg):
            acc.extend(values[tok.name])
        else:
            acc.append(tok)
    return acc


class Sst:
    def __init__(self, states, initial, input_alphabet, output_alphabet, registers,
                 transitions, updates, output_function):
        """transitions: (state, letter) -> state; updates: same keys -> Substitution;
        output_function: frozenset of states -> tuple of register names."""
        self.states = frozenset(states)
        if initial not in self.states:
            raise ValueError("initial state not in state set")
        self.initial = initial
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.registers = tuple(registers)
        self.transitions = dict(transitions)
        self.updates = dict(updates)
        if set(self.transitions) != set(self.updates):
            raise ValueError("transitions and register updates must share their domain")
        for key, sub in self.updates.items():
            if sub.registers() != set(self.registers):
                raise ValueError(f"update at {key} is not total on the registers")
        report = validate_copyless(self)
        if not report.ok:
            raise MalformedSimpleSst(f"register {report.register} copied at {report.sites}")
        self.output_function = {frozenset(k): tuple(v) for k, v in dict(output_function).items()}
        self._check_output_constraints()

    def _check_output_constraints(self):
        for pset, regs in self.output_function.items():
            if len(set(regs)) != len(regs):
                raise MalformedSimpleSst("output register string must be copyless")
            for (q, a), q2 in self.transitions.items():
                if q in pset and q2 in pset:
                    sub = self.updates[(q, a)]
                    for i, name in enumerate(regs):
                        rhs = sub.rhs(name)
                        if i < len(regs) - 1:
                            if rhs != (Reg(name),):
                                raise MalformedSimpleSst(
                                    f"register {name} must stay fixed on recurring states"
                                )
                        elif not rhs or rhs[0] != Reg(name):
                            raise MalformedSimpleSst(
                                f"register {name} must only be appended to on recurring states"
                            )


class SimpleSst(Sst):
    """Sst with a distinguished register ``out`` streamed as the output."""

    def __init__(self, states, initial, input_alphabet, output_alphabet, registers,
                 transitions, updates, out="out"):
        self.out = out
        super().__init__(states, initial, input_alphabet, output_alphabet, registers,
                         transitions, updates, {})
        if out not in self.registers:
            raise MalformedSimpleSst(f"distinguished register {out!r} missing")
        for key, sub in self.updates.items():
            rhs = sub.rhs(out)
            if not rhs or rhs[0] != Reg(out):
                raise MalformedSimpleSst(f"update of {out} at {key} is not of the form {out}·w")
            for name, tokens in sub.items():
                if name != out and Reg(out) in tokens:
                    raise MalformedSimpleSst(f"register {name} mentions {out}")


class _SimpleSstEngine:
    def __init__(self, s: SimpleSst, source: InfiniteWord):
        self.s = s
        self.source = source
        self.output_alphabet = s.output_alphabet
        self.state = s.initial
        self.pos = 0
        self.step_count = 0
        self.out: list = []
        self.values = {name: [] for name in s.registers if name != s.out}
        self.visits: dict = {}
        self.trace: list = []

    def step(self):
        a = self.source.letter(self.pos)
        key = (self.state, a)
        if key not in self.s.transitions:
            raise UndefinedTransition(self.pos, self.step_count, key)
        sub = self.s.updates[key]
        increment = ground(sub.rhs(self.s.out)[1:], self.values)
        self.values = {name: ground(sub.rhs(name), self.values) for name in self.values}
        self.out.extend(increment)
        self.state = self.s.transitions[key]
        self.pos += 1
        self.step_count += 1


class _GeneralSstEngine:
    """Streams the limit of the output registers for a lasso input.

    The non-final output registers freeze once the run stays on its
    recurring states; the final one grows at its end. Whether the limit is
    finite is decided exactly: per input cycle, the emptiness pattern of
    the registers follows a deterministic map on a finite set, so once a
    pattern repeats with no emission in between, nothing ever comes.
    """

    def __init__(self, s: Sst, source: LassoWord):
        self.s = s
        self.source = source
        self.output_alphabet = s.output_alphabet
        self.out: list = []
        self.step_count = 0
        self.visits: dict = {}
        self.trace: list = []
        self._pad = False

        seq, cycle_start, cycle_len = _lasso_run(s, source)
        recurring = frozenset(seq[cycle_start:])
        if recurring not in s.output_function:
            raise NoOutputFunction(recurring)
        regs = s.output_function[recurring]
        entry = cycle_start
        while entry > 0 and seq[entry - 1] in recurring:
            entry -= 1

        values = {name: [] for name in s.registers}
        state = s.initial
        for i in range(entry):
            sub = s.updates[(state, source.letter(i))]
            values = {name: ground(sub.rhs(name), values) for name in s.registers}
            state = s.transitions[(state, source.letter(i))]
        self._last = regs[-1] if regs else None
        for name in regs[:-1]:
            self.out.extend(values[name])
        if self._last is not None:
            self.out.extend(values[self._last])
        self.values = values
        self.state = state
        self.pos = entry

        if self._last is None or self._limit_is_finite(cycle_len):
            self._pad = True

    def _limit_is_finite(self, cycle_len: int) -> bool:
        # which registers are nonempty at a cycle start determines both the
        # next such pattern and whether the cycle emits anything
        seen: dict = {}
        emissions: list = []
        while True:
            support = frozenset(n for n in self.s.registers if self.values[n])
            if support in seen:
                return not any(emissions[seen[support]:])
            seen[support] = len(emissions)
            emitted = 0
            for _ in range(cycle_len):
                emitted += self._advance()
            emissions.append(emitted > 0)

    def _advance(self) -> int:
        sub = self.s.updates[(self.state, self.source.letter(self.pos))]
        old_len = len(self.values[self._last])
        self.values = {name: ground(sub.rhs(name), self.values) for name in self.s.registers}
        self.out.extend(self.values[self._last][old_len:])
        self.state = self.s.transitions[(self.state, self.source.letter(self.pos))]
        self.pos += 1
        return len(self.values[self._last]) - old_len

    def step(self):
        if self._pad:
            self.out.append(PAD)
        else:
            self._advance()
        self.step_count += 1


def _lasso_run(s: Sst, source: LassoWord):
    """State sequence of s on the lasso until a (state, period position) repeat."""
    pre, per = len(source.u), len(source.v)
    state = s.initial
    seen: dict = {}
    seq = [state]
    n = 0
    while True:
        if n >= pre:
            key = (state, (n - pre) % per)
            if key in seen:
                return seq, seen[key], n - seen[key]
            seen[key] = n
        k = (state, source.letter(n))
        if k not in s.transitions:
            raise UndefinedTransition(n, n, k)
        state = s.transitions[k]
        seq.append(state)
        n += 1


def run_sst(s: Sst, source: InfiniteWord, budget=DEFAULT_BUDGET) -> RunOutcome:
    """Run a register transducer; general (non-simple) machines need a lasso input."""
    if isinstance(s, SimpleSst):
        return RunOutcome(_SimpleSstEngine(s, source), budget)
    if not isinstance(source, LassoWord):
        raise AdviceNotLasso("a general register transducer needs an ultimately periodic input")
    return RunOutcome(_GeneralSstEngine(s, source), budget)


def simplify_to_simple_sst(s: Sst, source: LassoWord) -> SimpleSst:
    """Input-relative simple form.

    Freezes the register values at the entry into the recurring states,
    installs them with a prologue line of fresh states, then mimics the
    final output register through a new ``out`` register. The result only
    promises the same output on the given input.
    """
    if not isinstance(source, LassoWord):
        raise AdviceNotLasso("simplification is relative to an ultimately periodic input")
    seq, cycle_start, cycle_len = _lasso_run(s, source)
    recurring = frozenset(seq[cycle_start:])
    if isinstance(s, SimpleSst):
        regs = (s.out,)
    elif recurring in s.output_function:
        regs = s.output_function[recurring]
    else:
        raise NoOutputFunction(recurring)
    entry = cycle_start
    while entry > 0 and seq[entry - 1] in recurring:
        entry -= 1

    values = {name: [] for name in s.registers}
    state = s.initial
    for i in range(entry):
        sub = s.updates[(state, source.letter(i))]
        values = {name: ground(sub.rhs(name), values) for name in s.registers}
        state = s.transitions[(state, source.letter(i))]

    out_name = "out"
    while out_name in s.registers:
        out_name += "_"
    registers = tuple(s.registers) + (out_name,)
    identity = {name: (Reg(name),) for name in registers}
    last = regs[-1] if regs else None

    transitions: dict = {}
    updates: dict = {}
    for i in range(entry):
        key = (("boot", i), source.letter(i))
        transitions[key] = ("boot", i + 1) if i + 1 < entry else seq[entry]
        if i + 1 < entry:
            updates[key] = Substitution(identity)
        else:
            install = dict(identity)
            for name in s.registers:
                install[name] = tuple(values[name])
            head = []
            for name in regs:
                head.extend(values[name])
            install[out_name] = (Reg(out_name),) + tuple(head)
            updates[key] = Substitution(install)

    state = seq[entry]
    for i in range(entry, entry + (len(seq) - 1 - entry)):
        key = (state, source.letter(i))
        if key not in transitions:
            sub = s.updates[key]
            mapping = {name: sub.rhs(name) for name in s.registers}
            if last is not None:
                mapping[out_name] = (Reg(out_name),) + tuple(sub.rhs(last)[1:])
                mapping[last] = (Reg(last),)
            else:
                mapping[out_name] = (Reg(out_name),)
            transitions[key] = s.transitions[key]
            updates[key] = Substitution(mapping)
        state = s.transitions[key]

    initial = ("boot", 0) if entry > 0 else seq[0]
    states = set(transitions.values()) | {k[0] for k in transitions} | {initial}
    return SimpleSst(states, initial, s.input_alphabet, s.output_alphabet,
                     registers, transitions, updates, out=out_name)


def _scan(tokens):
    """Split a token string as (letter prefix, first register or None, rest)."""
    lits = []
    for i, tok in enumerate(tokens):
        if isinstance(tok, Reg):
            return tuple(lits), tok.name, tokens[i + 1:]
        lits.append(tok)
    return tuple(lits), None, ()


def compile_sst_to_2wftb(s: SimpleSst) -> LookbehindTransducer:
    """Register-free two-way machine streaming the same output.

    Control is a mode plus the register being produced; suffixes of update
    strings are consumed within single steps, between head moves.
    Descending loads a register's update one cell to the left; ascending
    finds the unique occurrence of the finished register in the consuming
    update (well defined by copylessness) and resumes after it; finishing
    the distinguished register's increment returns to the main loop.
    """
    out = s.out
    oracle_states = set(s.states)
    oracle_tr: dict = {}
    dead = ("oracle-dead",)
    for q in s.states:
        for a in s.input_alphabet.letters:
            q2 = s.transitions.get((q, a))
            if q2 is None:
                q2 = dead
                oracle_states.add(dead)
            oracle_tr[(q, a)] = q2
    if dead in oracle_states:
        for a in s.input_alphabet.letters:
            oracle_tr[(dead, a)] = dead
    oracle = Dfa(oracle_states, s.initial, frozenset(), s.input_alphabet, oracle_tr)

    MAIN = ("main",)

    def consume(tokens, done):
        """One transition: emit leading letters, then descend or finish."""
        lits, reg, _rest = _scan(tokens)
        if reg is not None:
            return lits, LEFT, ("load", reg)
        return lits + done[0], done[1], done[2]

    tr: dict = {}
    tr[(MAIN, ENDMARKER, s.initial)] = ((), RIGHT, MAIN)
    for name in s.registers:
        if name != out:
            tr[(("load", name), ENDMARKER, s.initial)] = ((), RIGHT, ("asc", name))
    for (z, a), sub in s.updates.items():
        tr[(MAIN, a, z)] = consume(sub.rhs(out)[1:], ((), RIGHT, MAIN))
        for name in s.registers:
            if name == out:
                continue
            tr[(("load", name), a, z)] = consume(sub.rhs(name), ((), RIGHT, ("asc", name)))
        for name in s.registers:
            if name == out:
                continue
            holder = None
            for target, tokens in sub.items():
                for i, tok in enumerate(tokens):
                    if tok == Reg(name) and not (target == out and i == 0):
                        holder = (target, tokens[i + 1:])
            if holder is None:
                continue
            target, rest = holder
            done = ((), RIGHT, MAIN) if target == out else ((), RIGHT, ("asc", target))
            tr[(("asc", name), a, z)] = consume(rest, done)

    states = {MAIN} | {key[0] for key in tr} | {v[2] for v in tr.values()}
    return LookbehindTransducer(
        states, MAIN, s.input_alphabet, s.output_alphabet, tr, oracle
    )


def eliminate_lookbehind_lasso(
    t: LookbehindTransducer, source: LassoWord, budget=DEFAULT_BUDGET, probe=500
) -> TwoWayTransducer:
    """Replace the lookbehind by a position counter modulo the oracle period.

    On a lasso input the oracle state sequence is ultimately periodic; once
    the head permanently stays beyond the preperiod, the oracle state is a
    function of the position residue. Everything before that is hardcoded,
    and a machine that keeps returning is rejected with the detected loop.
    """
    if not isinstance(source, LassoWord):
        raise AdviceNotLasso("lookbehind elimination is relative to a lasso input")
    pre, per = len(source.u), len(source.v)
    zstates = [t.oracle.initial]

    def zstate(n):
        while len(zstates) <= n:
            k = len(zstates) - 1
            zstates.append(t.oracle.transitions[(zstates[k], source.letter(k))])
        return zstates[n]

    seen: dict = {}
    n = 0
    while True:
        if n >= pre:
            key = (zstate(n), (n - pre) % per)
            if key in seen:
                ell, period = seen[key], n - seen[key]
                break
            seen[key] = n
        n += 1
    table = [zstate(ell + r) for r in range(period)]

    state, pos = t.initial, 0
    out: list = []
    low_cfgs: dict = {}
    handoff = None
    settle = ell + 2 + period + 2 * len(t.states)
    for step in range(budget):
        if pos <= ell:
            cfg = (state, pos)
            if cfg in low_cfgs:
                cut = low_cfgs[cfg]
                loop = None
                if len(out) > cut:
                    loop = canonical_lasso(
                        FiniteWord(tuple(out[:cut]), t.output_alphabet),
                        FiniteWord(tuple(out[cut:]), t.output_alphabet),
                    )
                raise BudgetExceeded(step, loop=loop,
                                     message="head keeps returning into the oracle preperiod")
            low_cfgs[cfg] = len(out)
        a = ENDMARKER if pos == 0 else source.letter(pos - 1)
        z = t.oracle.initial if pos == 0 else zstate(pos - 1)
        hit = t.transitions.get((state, a, z))
        if hit is None:
            raise UndefinedTransition(pos, step, (state, a, z))
        emitted, move, q2 = hit
        out.extend(emitted)
        was_low = pos <= ell
        pos += 1 if move == RIGHT else -1
        if pos < 0:
            raise MovedLeftOfEndmarker(step)
        if was_low:
            handoff = (q2, pos, len(out))
        state = q2
        if pos > settle:
            break
    if handoff is None or handoff[1] != ell + 1:
        raise BudgetExceeded(budget, message="head never settled beyond the oracle preperiod")
    q_target, target_pos, emitted_len = handoff

    tr: dict = {}
    for i in range(target_pos):
        src = ("walk", i)
        letter = ENDMARKER if i == 0 else source.letter(i - 1)
        dst = ("walk", i + 1) if i + 1 < target_pos else (q_target, 0)
        tr[(src, letter)] = (tuple(out[:emitted_len]) if i == 0 else (), RIGHT, dst)
    for (q, a, z), (emitted, move, q2) in t.transitions.items():
        if a is ENDMARKER:
            continue
        for m in range(period):
            if table[m] != z:
                continue
            m2 = (m + 1) % period if move == RIGHT else (m - 1) % period
            tr[((q, m), a)] = (emitted, move, (q2, m2))
    states = {src for (src, _a) in tr} | {v[2] for v in tr.values()}
    result = TwoWayTransducer(states, ("walk", 0), t.input_alphabet, t.output_alphabet, tr)

    got, _ = run_2wft(result, source).try_letters(probe)
    want, _ = run_2wft_b(t, source).try_letters(probe)
    for i, (x, y) in enumerate(zip(got, want)):
        if x != y:
            raise ValidationFailed(i, "lookbehind elimination changed the output")
    if len(got) < len(want):
        raise ValidationFailed(len(got), "lookbehind elimination lost output letters")
    return result
