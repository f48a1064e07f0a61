"""One-way and two-way finite transducers over infinite words.

Interpreters are demand driven: a RunOutcome produces output letters on
request, spending at most a step budget between consecutive letters, so a
machine that stalls (for instance by emitting nothing forever) surfaces a
status instead of hanging. Two-way machines read a tape holding the
endmarker followed by the input word.
"""
from __future__ import annotations

from .errors import (
    BudgetExceeded,
    AlphabetMismatch,
    MovedLeftOfEndmarker,
    NonProductive,
    UndefinedTransition,
)
from .words import (
    Alphabet,
    FiniteWord,
    InfiniteWord,
    LassoWord,
    canonical_lasso,
)

LEFT = "L"
RIGHT = "R"


class _EndMarker:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "⊢"


ENDMARKER = _EndMarker()

DEFAULT_BUDGET = 10 ** 5


class OneWayTransducer:
    def __init__(self, states, initial, input_alphabet: Alphabet, output_alphabet: Alphabet, transitions):
        """transitions: dict (state, letter) -> (output tuple, next state)."""
        self.states = frozenset(states)
        if initial not in self.states:
            raise ValueError("initial state not in state set")
        self.initial = initial
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.transitions = {}
        for (q, a), (out, q2) in dict(transitions).items():
            if q not in self.states or q2 not in self.states:
                raise ValueError("transition leaves the state set")
            self.transitions[(q, a)] = (tuple(out), q2)


class TwoWayTransducer:
    def __init__(self, states, initial, input_alphabet: Alphabet, output_alphabet: Alphabet, transitions):
        """transitions: dict (state, letter-or-ENDMARKER) -> (output tuple, move, next state)."""
        self.states = frozenset(states)
        if initial not in self.states:
            raise ValueError("initial state not in state set")
        self.initial = initial
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.transitions = {}
        for (q, a), (out, move, q2) in dict(transitions).items():
            if q not in self.states or q2 not in self.states:
                raise ValueError("transition leaves the state set")
            if move not in (LEFT, RIGHT):
                raise ValueError(f"bad move {move!r}")
            self.transitions[(q, a)] = (tuple(out), move, q2)


class LookbehindTransducer:
    """Two-way transducer whose transitions also see the state of a total
    deterministic automaton run over the input prefix left of the head."""

    def __init__(self, states, initial, input_alphabet, output_alphabet, transitions, oracle):
        self.states = frozenset(states)
        if initial not in self.states:
            raise ValueError("initial state not in state set")
        self.initial = initial
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet
        self.transitions = {}
        for (q, a, s), (out, move, q2) in dict(transitions).items():
            if move not in (LEFT, RIGHT):
                raise ValueError(f"bad move {move!r}")
            self.transitions[(q, a, s)] = (tuple(out), move, q2)
        self.oracle = oracle
        for s in oracle.states:
            for a in input_alphabet.letters:
                if (s, a) not in oracle.transitions:
                    raise ValueError("lookbehind oracle must be total on the input alphabet")


class RunOutcome:
    """Demand-driven output stream of a machine run, plus diagnostics."""

    def __init__(self, engine, budget=DEFAULT_BUDGET):
        self._engine = engine
        self.budget = budget
        self._halt = None  # permanent halt condition, if any

    @property
    def status(self):
        """'producing', or the exception describing why the stream stopped."""
        return self._halt if self._halt is not None else "producing"

    @property
    def trace(self):
        return self._engine.trace

    @property
    def visit_counts(self):
        return dict(self._engine.visits)

    def letter(self, n):
        return self.letters(n + 1)[n]

    def letters(self, n):
        """First n output letters; raises if the machine halts or stalls first."""
        out = self._engine.out
        while len(out) < n:
            if self._halt is not None:
                raise self._halt
            produced = len(out)
            spent = 0
            while len(out) == produced:
                if spent >= self.budget:
                    raise BudgetExceeded(self._engine.step_count)
                try:
                    self._engine.step()
                except (UndefinedTransition, MovedLeftOfEndmarker) as exc:
                    self._halt = exc
                    raise
                spent += 1
        return list(out[:n])

    def try_letters(self, n):
        """(letters produced, halt-or-None), never raising."""
        try:
            return self.letters(n), None
        except (UndefinedTransition, MovedLeftOfEndmarker, BudgetExceeded, NonProductive) as exc:
            return list(self._engine.out[:n]), exc

    def prefix_str(self, n):
        from .words import render_letter

        return "".join(render_letter(a) for a in self.letters(n))

    @property
    def word(self):
        return _OutcomeWord(self)


class _OutcomeWord(InfiniteWord):
    def __init__(self, outcome: RunOutcome):
        super().__init__(outcome._engine.output_alphabet)
        self.outcome = outcome

    def letter(self, n):
        return self.outcome.letter(n)

    def _compute(self, n):
        return self.outcome.letter(n)


class _OneWayEngine:
    def __init__(self, t: OneWayTransducer, source: InfiniteWord, visit_window=512, trace_limit=4096):
        self.t = t
        self.source = source
        self.output_alphabet = t.output_alphabet
        self.state = t.initial
        self.pos = 0
        self.step_count = 0
        self.out: list = []
        self.visits: dict = {}
        self.trace: list = []
        self._visit_window = visit_window
        self._trace_limit = trace_limit

    def step(self):
        a = self.source.letter(self.pos)
        hit = self.t.transitions.get((self.state, a))
        if hit is None:
            raise UndefinedTransition(self.pos, self.step_count, (self.state, a))
        out, q2 = hit
        if self.pos < self._visit_window:
            self.visits[self.pos] = self.visits.get(self.pos, 0) + 1
        if len(self.trace) < self._trace_limit:
            self.trace.append((self.state, self.pos, len(self.out)))
        self.out.extend(out)
        self.state = q2
        self.pos += 1
        self.step_count += 1


class _TwoWayEngine:
    """Tape is ENDMARKER followed by the input word; head starts on the marker."""

    def __init__(self, t, source: InfiniteWord, visit_window=512, trace_limit=4096, oracle=None):
        self.t = t
        self.source = source
        self.output_alphabet = t.output_alphabet
        self.state = t.initial
        self.pos = 0
        self.step_count = 0
        self.out: list = []
        self.visits: dict = {}
        self.trace: list = []
        self._visit_window = visit_window
        self._trace_limit = trace_limit
        self.oracle = oracle
        if oracle is not None:
            self._zstates = [oracle.initial]  # state after reading n input letters

    def _tape(self, pos):
        return ENDMARKER if pos == 0 else self.source.letter(pos - 1)

    def _lookbehind(self, pos):
        # at tape position p the oracle has read the input prefix of length p-1
        n = max(pos - 1, 0)
        zs = self._zstates
        while len(zs) <= n:
            k = len(zs) - 1
            zs.append(self.oracle.transitions[(zs[k], self.source.letter(k))])
        return zs[n]

    def step(self):
        a = self._tape(self.pos)
        if self.oracle is None:
            hit = self.t.transitions.get((self.state, a))
            detail = (self.state, a)
        else:
            s = self._lookbehind(self.pos)
            hit = self.t.transitions.get((self.state, a, s))
            detail = (self.state, a, s)
        if hit is None:
            raise UndefinedTransition(self.pos, self.step_count, detail)
        out, move, q2 = hit
        if self.pos < self._visit_window:
            self.visits[self.pos] = self.visits.get(self.pos, 0) + 1
        if len(self.trace) < self._trace_limit:
            self.trace.append((self.state, self.pos, len(self.out)))
        self.out.extend(out)
        self.state = q2
        self.step_count += 1
        if move == RIGHT:
            self.pos += 1
        else:
            if self.pos == 0:
                raise MovedLeftOfEndmarker(self.step_count - 1)
            self.pos -= 1


def run_1wft(t: OneWayTransducer, source: InfiniteWord, budget=DEFAULT_BUDGET) -> RunOutcome:
    return RunOutcome(_OneWayEngine(t, source), budget)


def run_2wft(t: TwoWayTransducer, source: InfiniteWord, budget=DEFAULT_BUDGET, visit_window=512) -> RunOutcome:
    return RunOutcome(_TwoWayEngine(t, source, visit_window=visit_window), budget)


def run_2wft_b(t: LookbehindTransducer, source: InfiniteWord, budget=DEFAULT_BUDGET, visit_window=512) -> RunOutcome:
    return RunOutcome(
        _TwoWayEngine(t, source, visit_window=visit_window, oracle=t.oracle), budget
    )


def compose_1wft(outer: OneWayTransducer, inner: OneWayTransducer) -> OneWayTransducer:
    """Product machine equal to running ``inner`` then ``outer`` on its output."""
    if not set(inner.output_alphabet.letters) <= set(outer.input_alphabet.letters):
        raise AlphabetMismatch("outer transducer cannot read the inner one's output")
    initial = (inner.initial, outer.initial)
    states = {initial}
    transitions = {}
    frontier = [initial]
    while frontier:
        qi, qo = frontier.pop()
        for a in inner.input_alphabet.letters:
            hit = inner.transitions.get((qi, a))
            if hit is None:
                continue
            chunk, qi2 = hit
            emitted = []
            qcur = hit2 = qo
            ok = True
            for c in chunk:
                step = outer.transitions.get((qcur, c))
                if step is None:
                    ok = False
                    break
                out, qcur = step
                emitted.extend(out)
            if not ok:
                continue
            nxt = (qi2, qcur)
            transitions[((qi, qo), a)] = (tuple(emitted), nxt)
            if nxt not in states:
                states.add(nxt)
                frontier.append(nxt)
    return OneWayTransducer(states, initial, inner.input_alphabet, outer.output_alphabet, transitions)


def mirror_blocks_2wft(gamma: Alphabet) -> TwoWayTransducer:
    """Three-state machine reversing every '#'-delimited block of its input."""
    if "#" in gamma:
        raise ValueError("'#' is the block marker, not a block letter")
    letters = list(gamma.letters) + ["#"]
    full = Alphabet(letters)
    scan, emit, skip = "scan", "emit", "skip"
    tr = {}
    tr[(scan, ENDMARKER)] = ((), RIGHT, scan)
    for a in gamma.letters:
        tr[(scan, a)] = ((), RIGHT, scan)
        tr[(emit, a)] = ((a,), LEFT, emit)
        tr[(skip, a)] = ((), RIGHT, skip)
    tr[(scan, "#")] = ((), LEFT, emit)
    tr[(emit, "#")] = (("#",), RIGHT, skip)
    tr[(emit, ENDMARKER)] = (("#",), RIGHT, skip)
    tr[(skip, "#")] = ((), RIGHT, scan)
    return TwoWayTransducer({scan, emit, skip}, scan, full, full, tr)


def mu_transducers(n: int, gamma: Alphabet):
    """(forward, backward): forward repeats each letter n times, backward undoes it.

    The backward machine is undefined on inputs that are not letter-wise
    n-fold repetitions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    fwd = OneWayTransducer(
        {"q"},
        "q",
        gamma,
        gamma,
        {(("q", a)): ((a,) * n, "q") for a in gamma.letters},
    )
    fresh = "fresh"
    states = {fresh} | {(a, j) for a in gamma.letters for j in range(1, n)}
    tr = {}
    for a in gamma.letters:
        if n == 1:
            tr[(fresh, a)] = ((a,), fresh)
        else:
            tr[(fresh, a)] = ((), (a, 1))
            for j in range(1, n):
                if j == n - 1:
                    tr[((a, j), a)] = ((a,), fresh)
                else:
                    tr[((a, j), a)] = ((), (a, j + 1))
    bwd = OneWayTransducer(states, fresh, gamma, gamma, tr)
    return fwd, bwd


def writer_2wft(u: FiniteWord, v: FiniteWord, delta: Alphabet) -> TwoWayTransducer:
    """Machine ignoring its input and writing u then v forever."""
    if len(v) == 0:
        raise ValueError("period must be nonempty")
    out_alpha = v.alphabet
    states = {("u", i) for i in range(len(u))} | {("v", i) for i in range(len(v))}
    initial = ("u", 0) if len(u) else ("v", 0)
    tr = {}
    letters = list(delta.letters) + [ENDMARKER]

    def arrow(state, emitted, nxt):
        for a in letters:
            tr[(state, a)] = ((emitted,), RIGHT, nxt)

    for i in range(len(u)):
        nxt = ("u", i + 1) if i + 1 < len(u) else ("v", 0)
        arrow(("u", i), u[i], nxt)
    for i in range(len(v)):
        arrow(("v", i), v[i], ("v", (i + 1) % len(v)))
    return TwoWayTransducer(states, initial, delta, out_alpha, tr)


def visit_bound_check(outcome: RunOutcome, window: int) -> int:
    """Maximum recorded head-visit count over tape positions below ``window``."""
    counts = [c for pos, c in outcome.visit_counts.items() if pos < window]
    return max(counts, default=0)


def analyze_on_constant(t: TwoWayTransducer, c, budget=DEFAULT_BUDGET) -> LassoWord:
    """Exact ultimately periodic output of t on the constant word c^ω.

    Detects either an exact configuration repeat, or two steps with equal
    states whose positions are never undercut in between (the tape right of
    the endmarker is uniform, so the move sequence then repeats shifted).
    """
    state = t.initial
    pos = 0
    out: list = []
    seen_cfg: dict = {}
    stack: list = []  # (pos, state, out_len), positions nondecreasing

    def finish(cut, upto):
        u = out[:cut]
        v = out[cut:upto]
        if not v:
            raise NonProductive(u)
        return canonical_lasso(
            FiniteWord(tuple(u), t.output_alphabet),
            FiniteWord(tuple(v), t.output_alphabet),
        )

    for step in range(budget):
        cfg = (state, pos)
        if cfg in seen_cfg:
            return finish(seen_cfg[cfg], len(out))
        seen_cfg[cfg] = len(out)
        if pos >= 1:
            while stack and stack[-1][0] > pos:
                stack.pop()
            for p0, q0, cut in stack:
                if q0 == state:
                    return finish(cut, len(out))
            stack.append((pos, state, len(out)))
        a = ENDMARKER if pos == 0 else c
        hit = t.transitions.get((state, a))
        if hit is None:
            raise UndefinedTransition(pos, step, (state, a))
        emitted, move, state = hit
        out.extend(emitted)
        if move == RIGHT:
            pos += 1
        else:
            if pos == 0:
                raise MovedLeftOfEndmarker(step)
            pos -= 1
    raise BudgetExceeded(budget, message="no configuration loop found within budget")


def _loop_lasso(t, out, cut):
    return canonical_lasso(
        FiniteWord(tuple(out[:cut]), t.output_alphabet),
        FiniteWord(tuple(out[cut:]), t.output_alphabet),
    )


def remove_endmarker(t: TwoWayTransducer, source: InfiniteWord, budget=DEFAULT_BUDGET, probe=500) -> TwoWayTransducer:
    """Fold everything up to the last endmarker visit into a one-step prologue.

    The run of t on the input must eventually stop visiting the endmarker;
    a machine bouncing on it forever is rejected with the detected loop.
    """
    state = t.initial
    pos = 0
    out: list = []
    zero_cfgs: dict = {}
    last_zero = None
    handoff = None
    for step in range(budget):
        if pos == 0:
            if state in zero_cfgs:
                cut = zero_cfgs[state]
                loop = _loop_lasso(t, out, cut) if len(out) > cut else None
                raise BudgetExceeded(
                    step,
                    loop=loop,
                    message="the endmarker is revisited forever",
                )
            zero_cfgs[state] = len(out)
            last_zero = step
        a = ENDMARKER if pos == 0 else source.letter(pos - 1)
        hit = t.transitions.get((state, a))
        if hit is None:
            raise UndefinedTransition(pos, step, (state, a))
        emitted, move, q2 = hit
        out.extend(emitted)
        if pos == 0:
            handoff = (q2, len(out))
        state = q2
        pos += 1 if move == RIGHT else -1
        if pos < 0:
            raise MovedLeftOfEndmarker(step)
    if last_zero is None or handoff is None:
        raise BudgetExceeded(budget, message="endmarker never read within budget")

    q_target, emitted_len = handoff
    prologue_out = tuple(out[:emitted_len])
    boot = ("boot", 0)
    while boot in t.states:
        boot = ("boot", boot[1] + 1)
    transitions = {
        (q, a): v for (q, a), v in t.transitions.items() if a is not ENDMARKER
    }
    transitions[(boot, ENDMARKER)] = (prologue_out, RIGHT, q_target)
    result = TwoWayTransducer(
        set(t.states) | {boot}, boot, t.input_alphabet, t.output_alphabet, transitions
    )

    got, _ = run_2wft(result, source).try_letters(probe)
    want, _ = run_2wft(t, source).try_letters(probe)
    for i, (x, y) in enumerate(zip(got, want)):
        if x != y:
            from .errors import ValidationFailed

            raise ValidationFailed(i, "endmarker removal changed the output")
    return result
