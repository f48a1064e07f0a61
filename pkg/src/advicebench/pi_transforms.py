"""Transducer constructions specific to words with unboundedly growing 0-gaps.

The key input here is the word 10100100010000… whose 0-blocks grow by one:
two-way machines on it can be reorganized so that the head only turns at the
1s, and a turn-free machine can then be replayed one way on a version of the
word whose blocks are written several times each. All constructions are
input-relative and are validated by letterwise output comparison against
the original machine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    InvariantViolation,
    NoWindowBound,
    UnstableClassification,
    ValidationFailed,
)
from .transducers import (
    ENDMARKER,
    LEFT,
    RIGHT,
    OneWayTransducer,
    TwoWayTransducer,
    compose_1wft,
    run_1wft,
    run_2wft,
)
from .words import BINARY, pi_word


def pi_k_expander_1wft(k: int, strict: bool = False) -> OneWayTransducer:
    """One-way machine mapping the block word to its k-fold block repetition.

    Reading block number m = k*n + j it emits one 0 per k zeros read and
    swallows the j leftovers, so each group of k consecutive input blocks
    becomes k copies of the same block. In strict mode the machine is
    undefined when the leftover count contradicts the expected structure.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    states = {("e", j, c) for j in range(k) for c in range(k)}
    tr = {}
    for j in range(k):
        for c in range(k):
            c2 = c + 1
            if c2 == k:
                tr[(("e", j, c), "0")] = (("0",), ("e", j, 0))
            else:
                tr[(("e", j, c), "0")] = ((), ("e", j, c2))
            if c == j or not strict:
                tr[(("e", j, c), "1")] = (("1",), ("e", (j + 1) % k, 0))
    return OneWayTransducer(states, ("e", 0, 0), BINARY, BINARY, tr)


def direction_partition(t: TwoWayTransducer):
    """Partition states into right-movers and left-movers, or None.

    A state's class must match every move entering it, and a state reading
    '0' must keep moving in its own class's direction.
    """
    cls: dict = {}
    for (_, _a), (_out, move, q2) in t.transitions.items():
        if cls.setdefault(q2, move) != move:
            return None
    for (q, a), (_out, move, _q2) in t.transitions.items():
        if a == "0" and cls.setdefault(q, move) != move:
            return None
    for q in t.states:
        if q not in cls:
            hit = t.transitions.get((q, "0"))
            cls[q] = hit[1] if hit else RIGHT
    for (q, a), (_out, move, q2) in t.transitions.items():
        if cls[q2] != move:
            return None
        if a == "0" and cls[q] != move:
            return None
    return cls


@dataclass
class _Return:
    exit_state: object
    output: tuple
    depth: int


@dataclass
class _Cross:
    states: list  # first-arrival state per cell, ramp then one period
    chunks: list  # output emitted between consecutive first arrivals
    ramp: int
    drift: int

    def cell_state(self, m):
        if m < self.ramp:
            return self.states[m]
        return self.states[self.ramp + (m - self.ramp) % self.drift]


class _Stuck:
    pass


def _classify_excursion(t: TwoWayTransducer, entry_state, side: str):
    """Behavior of an excursion into an all-0 block entered from one side.

    Returns _Return (comes back out the entry side), _Cross (drifts through:
    first-arrival states and output chunks per cell, eventually periodic),
    or _Stuck (parks inside forever).
    """
    inward = RIGHT if side == "L" else LEFT
    state = entry_state
    depth = 0
    out: list = []
    step = 0
    cfgs = set()
    stack: list = []  # (depth, state, step, outlen), depths nondecreasing
    arrivals = {0: (entry_state, 0)}
    maxdepth = 0
    pair = None
    while True:
        cfg = (state, depth)
        if cfg in cfgs:
            return _Stuck()
        cfgs.add(cfg)
        while stack and stack[-1][0] > depth:
            stack.pop()
        for d0, q0, s0, o0 in stack:
            if q0 == state:
                pair = (d0, o0, depth, len(out))
                break
        if pair:
            break
        stack.append((depth, state, step, len(out)))
        hit = t.transitions.get((state, "0"))
        if hit is None:
            return _Stuck()  # the original would die here; fold leaves it undefined
        emitted, move, state = hit
        out.extend(emitted)
        depth += 1 if move == inward else -1
        step += 1
        if depth == -1:
            return _Return(state, tuple(out), maxdepth)
        if depth > maxdepth:
            maxdepth = depth
            arrivals[depth] = (state, len(out))

    d0, _o0, d1, _o1 = pair
    drift = d1 - d0
    ramp = maxdepth + 1
    want = ramp + 2 * drift
    cap = step + (want + 4) * (len(t.states) + drift + 4) * 4 + 100
    while maxdepth < want:
        hit = t.transitions.get((state, "0"))
        if hit is None:
            return _Stuck()
        emitted, move, state = hit
        out.extend(emitted)
        depth += 1 if move == inward else -1
        step += 1
        if depth > maxdepth:
            maxdepth = depth
            arrivals[depth] = (state, len(out))
        if step > cap:
            raise UnstableClassification("drifting excursion failed to advance")
    states = []
    chunks = []
    for m in range(want):
        states.append(arrivals[m][0])
        chunks.append(tuple(out[arrivals[m][1]: arrivals[m + 1][1]]))
    for m in range(ramp, ramp + drift):
        if states[m + drift] != states[m] or chunks[m + drift] != chunks[m]:
            raise UnstableClassification("excursion pattern not stable across cells")
    return _Cross(states[: ramp + drift], chunks[: ramp + drift], ramp, drift)


def _simulate_two_way(t, source, max_steps, stop_pos=None):
    """Run t on the endmarked tape, recording per-step state/position/output."""
    states = [t.initial]
    positions = [0]
    outlens = [0]
    out: list = []
    state, pos = t.initial, 0
    for step in range(max_steps):
        a = ENDMARKER if pos == 0 else source.letter(pos - 1)
        hit = t.transitions.get((state, a))
        if hit is None:
            from .errors import UndefinedTransition

            raise UndefinedTransition(pos, step, (state, a))
        emitted, move, state = hit
        out.extend(emitted)
        pos += 1 if move == RIGHT else -1
        if pos < 0:
            from .errors import MovedLeftOfEndmarker

            raise MovedLeftOfEndmarker(step)
        states.append(state)
        positions.append(pos)
        outlens.append(len(out))
        if stop_pos is not None and pos >= stop_pos:
            break
    return states, positions, outlens, out


def normalize_directions_on_pi(t: TwoWayTransducer, probe_range: int = 300, sim_budget: int = 200_000) -> TwoWayTransducer:
    """Rebuild t so that its head changes direction only on 1s.

    Excursions into 0-blocks are classified once per entry state: bounded
    returns are folded into the transition at the bounding 1, and drifting
    crossings become cell-by-cell walks with one state per arrival phase.
    A hardcoded prologue replays everything the original run does before it
    permanently leaves the small-block region. The result is validated on
    ``probe_range`` output letters; callers must only use machines whose
    output on the block word is not ultimately periodic.
    """
    if direction_partition(t) is not None:
        return t
    pi = pi_word(1)
    n_states = len(t.states)
    m_bound = n_states + n_states * n_states + 1
    k_upper = m_bound + 1
    w_upper = k_upper * (k_upper + 1) // 2 + 1
    sim = _simulate_two_way(t, pi, sim_budget, stop_pos=w_upper + m_bound + 4)
    states_seq, pos_seq, outlen_seq, out = sim
    if max(pos_seq) < w_upper + m_bound + 4:
        raise UnstableClassification("head never leaves the small-block region")

    classifications: dict = {}

    def classify(q, side):
        key = (q, side)
        if key not in classifications:
            classifications[key] = _classify_excursion(t, q, side)
        return classifications[key]

    folds: dict = {}

    def fold(q):
        if q in folds:
            return folds[q]
        acc: list = []
        state = q
        seen = set()
        while True:
            if state in seen:
                raise UnstableClassification("machine bounces forever at a block end")
            seen.add(state)
            hit = t.transitions.get((state, "1"))
            if hit is None:
                folds[q] = None
                return None
            emitted, move, q2 = hit
            acc.extend(emitted)
            side = "L" if move == RIGHT else "R"
            cls = classify(q2, side)
            if isinstance(cls, _Return):
                acc.extend(cls.output)
                state = cls.exit_state
                continue
            if isinstance(cls, _Cross):
                folds[q] = (tuple(acc), move, (q2, side))
                return folds[q]
            raise UnstableClassification("machine parks inside a block")

    # the prologue cutoff depends on which bounded excursions end up used
    n_min = 1
    for _ in range(12):
        big_k = n_min
        w = big_k * (big_k + 1) // 2 + 1
        t_last = max(s for s in range(len(pos_seq)) if pos_seq[s] < w)
        if t_last + 1 >= len(pos_seq):
            raise UnstableClassification("simulation horizon too short")
        q_h = states_seq[t_last + 1]
        entry = classify(q_h, "L")
        if not isinstance(entry, _Cross):
            raise UnstableClassification("run does not cross after the prologue")
        families = {(q_h, "L")}
        frontier = [(q_h, "L")]
        while frontier:
            fam = frontier.pop()
            cls = classify(*fam)
            for s_m in cls.states:
                f = fold(s_m)
                if f is not None and f[2] not in families:
                    families.add(f[2])
                    frontier.append(f[2])
        depth_need = 1
        for key, cls in classifications.items():
            if isinstance(cls, _Return):
                depth_need = max(depth_need, cls.depth + 1)
        if depth_need <= n_min:
            break
        n_min = depth_need
    else:
        raise UnstableClassification("prologue cutoff failed to stabilize")

    prologue_out = tuple(out[: outlen_seq[t_last + 1]])
    tr: dict = {}
    for i in range(w):
        src = ("p", i)
        dst = ("p", i + 1) if i + 1 < w else ("x", q_h, "L", 0)
        letter = ENDMARKER if i == 0 else pi.letter(i - 1)
        tr[(src, letter)] = (prologue_out if i == 0 else (), RIGHT, dst)

    for fam in families:
        cls = classify(*fam)
        entry_state, side = fam
        move = RIGHT if side == "L" else LEFT
        width = cls.ramp + cls.drift
        for m in range(width):
            src = ("x", entry_state, side, m)
            nm = m + 1 if m + 1 < width else cls.ramp
            tr[(src, "0")] = (cls.chunks[m], move, ("x", entry_state, side, nm))
            f = fold(cls.cell_state(m))
            if f is not None:
                emitted, fmove, (q2, side2) = f
                tr[(src, "1")] = (emitted, fmove, ("x", q2, side2, 0))

    states = {src for (src, _a) in tr} | {q2 for (_o, _m, q2) in tr.values()}
    result = TwoWayTransducer(states, ("p", 0), t.input_alphabet, t.output_alphabet, tr)

    got, ghalt = run_2wft(result, pi).try_letters(probe_range)
    want, whalt = run_2wft(t, pi).try_letters(probe_range)
    if len(want) < probe_range:
        raise UnstableClassification("original output too short to validate")
    for i in range(probe_range):
        if i >= len(got) or got[i] != want[i]:
            raise ValidationFailed(i, "direction normalization changed the output")
    return result


@dataclass
class _Traversal:
    delta: int  # crossed block index minus the segment index
    entry: object
    arrival: object


@dataclass
class _Segment:
    sigma: object  # state at the final visit of the segment's left 1
    traversals: tuple


@dataclass
class PiOneWayResult:
    transducer: OneWayTransducer  # reads the block word directly
    over_copies: OneWayTransducer  # reads the k-fold repetition
    window: int
    copies: int


def one_way_simulation_on_pi(
    t: TwoWayTransducer,
    c_max: int = 4,
    probe_range: int = 300,
    sim_budget: int = 400_000,
) -> PiOneWayResult:
    """Replay a turn-free two-way run one way over repeated blocks.

    The run is cut into segments between last visits of consecutive 1s.
    Each segment's block traversals are mapped onto consecutive copies
    inside the repeated super-block, with the few extra cells of longer
    blocks simulated in finite control. The per-segment programs repeat
    with a bounded period, found by search and checked on every observed
    segment; composing with the block expander gives a one-way machine
    over the original word.
    """
    if direction_partition(t) is None:
        raise InvariantViolation("input machine must be direction-normalized first")
    pi = pi_word(1)
    n_states = len(t.states)
    states_seq, pos_seq, outlen_seq, out = _simulate_two_way(t, pi, sim_budget)
    steps = len(pos_seq)

    def onepos(j):
        return (j * j + 3 * j) // 2 + 1

    max_pos = max(pos_seq)
    ones = {}
    j = 0
    while onepos(j) <= max_pos:
        ones[onepos(j)] = j
        j += 1

    futmin = [0] * (steps + 1)
    futmin[steps] = max_pos + 1
    for s in range(steps - 1, -1, -1):
        futmin[s] = min(pos_seq[s], futmin[s + 1])
    lastvis: dict = {}
    for s, p in enumerate(pos_seq):
        if p in ones and futmin[s + 1] > p:
            lastvis[ones[p]] = s

    sealed = sorted(n for n in lastvis if n + 1 in lastvis and n >= 1)
    if len(sealed) < 4:
        raise UnstableClassification("too few sealed segments to detect a pattern")

    def segment(n) -> _Segment:
        s0, s1 = lastvis[n], lastvis[n + 1]
        anchors = [s0] + [s for s in range(s0 + 1, s1 + 1) if pos_seq[s] in ones]
        travs = []
        for a, b in zip(anchors, anchors[1:]):
            j1, j2 = ones[pos_seq[a]], ones[pos_seq[b]]
            if abs(j1 - j2) != 1:
                raise UnstableClassification("partial block traversal observed")
            crossed = max(j1, j2)
            delta = crossed - n
            if delta < 1:
                raise UnstableClassification("segment crosses into sealed territory")
            travs.append(_Traversal(delta, states_seq[a + 1], states_seq[b]))
        return _Segment(states_seq[s0], tuple(travs))

    segments = {n: segment(n) for n in sealed}
    c = max(tr.delta for seg in segments.values() for tr in seg.traversals)
    if c > c_max:
        raise NoWindowBound(f"segments need a window of {c} blocks, cap is {c_max}")

    zero_next = {q: t.transitions[(q, "0")][2] for q in t.states if (q, "0") in t.transitions}
    cycle_lengths = set()
    for q in zero_next:
        slow = fast = q
        seen = {}
        i = 0
        while slow in zero_next:
            if slow in seen:
                cycle_lengths.add(i - seen[slow])
                break
            seen[slow] = i
            slow = zero_next[slow]
            i += 1
    period_base = 1
    for length in cycle_lengths:
        period_base = period_base * length // math.gcd(period_base, length)

    found = None
    for n1 in sealed:
        if found:
            break
        for n2 in sealed:
            if n2 <= n1 or (n2 - n1) % period_base != 0:
                continue
            if segments[n1] != segments[n2]:
                continue
            period = n2 - n1
            tail = [n for n in sealed if n >= n1]
            if all(segments[n] == segments[n1 + (n - n1) % period] for n in tail):
                found = (n1, period)
                break
    if found is None:
        raise UnstableClassification("no repeating segment pattern within the horizon")
    n1, period = found
    programs = [segments[n1 + phi] for phi in range(period)]

    copies = c * n_states
    if any(len(p.traversals) > copies for p in programs):
        raise NoWindowBound("a segment has more traversals than available copies")

    pre_out = tuple(out[: outlen_seq[lastvis[n1] + 1]])
    pre_ones = n1 * copies

    def advance(q, times):
        emitted = []
        for _ in range(times):
            hit = t.transitions.get((q, "0"))
            if hit is None:
                return None
            chunk, _move, q = hit
            emitted.extend(chunk)
        return tuple(emitted), q

    tr: dict = {}
    start = ("pre", 0)
    for i in range(pre_ones):
        tr[(("pre", i), "0")] = ((), ("pre", i))
        nxt = ("run", 0, 0, None) if i + 1 == pre_ones else ("pre", i + 1)
        tr[(("pre", i), "1")] = (pre_out if i == 0 else (), nxt)

    # traversal-entry states are recomputed at build time from the machine
    def run_state(phi, i):
        return ("run", phi, i, programs[phi].traversals[i].entry)

    if pre_ones:
        src = ("pre", pre_ones - 1)
        emitted, _ = tr[(src, "1")]
        tr[(src, "1")] = (emitted, run_state(0, 0))

    frontier = [run_state(0, 0)]
    built = set(frontier)
    while frontier:
        st = frontier.pop()
        kind = st[0]
        targets = []
        if kind == "run":
            _, phi, i, q = st
            hit0 = t.transitions.get((q, "0"))
            if hit0 is not None:
                nxt = ("run", phi, i, hit0[2])
                tr[(st, "0")] = (hit0[0], nxt)
                targets.append(nxt)
            prog = programs[phi]
            extra = prog.traversals[i].delta
            adv = advance(q, extra)
            if adv is not None:
                virt, q_arr = adv
                hit1 = t.transitions.get((q_arr, "1"))
                if hit1 is not None:
                    emitted = virt + hit1[0]
                    q2 = hit1[2]
                    if i + 1 < len(prog.traversals):
                        nxt = ("run", phi, i + 1, q2)
                    else:
                        phi2 = (phi + 1) % period
                        skip = copies - len(prog.traversals)
                        if skip == 0:
                            nxt = ("run", phi2, 0, q2)
                        else:
                            nxt = ("skip", phi2, skip, q2)
                    tr[(st, "1")] = (emitted, nxt)
                    targets.append(nxt)
        else:  # skip
            _, phi, k, pending = st
            tr[(st, "0")] = ((), st)
            nxt = ("run", phi, 0, pending) if k == 1 else ("skip", phi, k - 1, pending)
            tr[(st, "1")] = ((), nxt)
            targets.append(nxt)
        for nxt in targets:
            if nxt not in built:
                built.add(nxt)
                frontier.append(nxt)

    states = {src for (src, _a) in tr} | {v[1] for v in tr.values()}
    sim_machine = OneWayTransducer(states, start, BINARY, t.output_alphabet, tr)
    expander = pi_k_expander_1wft(copies)
    composed = compose_1wft(sim_machine, expander)

    got, _ = run_1wft(composed, pi).try_letters(probe_range)
    want, _ = run_2wft(t, pi).try_letters(probe_range)
    if len(want) < probe_range:
        raise UnstableClassification("original output too short to validate")
    for i in range(probe_range):
        if i >= len(got) or got[i] != want[i]:
            raise ValidationFailed(i, "one-way replay changed the output")
    return PiOneWayResult(composed, sim_machine, c, copies)
