"""Word measurements and the validation oracles used across the package.

Subword complexity is exact for lasso words (one period plus context
exhausts the factor set) and a stability-flagged lower bound otherwise.
``prefix_equiv`` is the universal letterwise comparison between any two
letter sources, including machine runs that may stall.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CapTooSmall
from .ltl import GEliminationReport, eliminate_g_subformulas, eval_lasso, finite_prefix_eval, nnf, size
from .transducers import RunOutcome
from .words import FiniteWord, InfiniteWord, LassoWord


@dataclass
class ComplexityProfile:
    word: object
    counts: dict  # k -> number of distinct length-k factors
    exact: dict  # k -> bool
    stable: dict  # k -> bool (count unchanged when the window doubles)
    window: int


def subword_complexity(w: InfiniteWord, k_max: int, window: int = 2048) -> ComplexityProfile:
    """Distinct-factor counts for k = 1..k_max.

    Lasso words get exact counts from one preperiod-plus-period span;
    anything else gets a lower bound from a window, with a note on whether
    doubling the window changes it.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    counts: dict = {}
    exact: dict = {}
    stable: dict = {}
    if isinstance(w, LassoWord):
        span = len(w.u) + len(w.v)
        for k in range(1, k_max + 1):
            factors = {tuple(w.letter(i + j) for j in range(k)) for i in range(span)}
            counts[k] = len(factors)
            exact[k] = True
            stable[k] = True
        return ComplexityProfile(w, counts, exact, stable, span + k_max)
    letters = [w.letter(i) for i in range(2 * window)]
    for k in range(1, k_max + 1):
        small = {tuple(letters[i: i + k]) for i in range(max(window - k + 1, 0))}
        big = {tuple(letters[i: i + k]) for i in range(max(2 * window - k + 1, 0))}
        counts[k] = len(big)
        exact[k] = False
        stable[k] = len(small) == len(big)
    return ComplexityProfile(w, counts, exact, stable, 2 * window)


@dataclass
class BoundReport:
    factor: int
    holds: bool
    conclusive: bool
    violations: list  # (k, left count, allowed)


def check_subword_bound(alpha: InfiniteWord, beta: InfiniteWord, factor: int,
                        k_max: int = 8, window: int = 2048) -> BoundReport:
    """Verify count_alpha(k) <= factor * count_beta(k) for k up to k_max.

    A violation is only conclusive when beta's profile is exact (so the
    right-hand side is not an undercount).
    """
    if factor < 1:
        raise ValueError("factor must be >= 1")
    pa = subword_complexity(alpha, k_max, window)
    pb = subword_complexity(beta, k_max, window)
    violations = []
    conclusive = True
    for k in range(1, k_max + 1):
        if pa.counts[k] > factor * pb.counts[k]:
            violations.append((k, pa.counts[k], factor * pb.counts[k]))
            if not pb.exact[k]:
                conclusive = False
        elif not pa.exact[k]:
            conclusive = False
    return BoundReport(factor, not violations, conclusive, violations)


@dataclass(frozen=True)
class Equal:
    length: int


@dataclass(frozen=True)
class Diverges:
    index: int
    left: object
    right: object


@dataclass(frozen=True)
class Inconclusive:
    index: int
    status: object


def _pull(source, n):
    """(letters, halt): up to n letters from a word or a run outcome."""
    if isinstance(source, RunOutcome):
        return source.try_letters(n)
    if isinstance(source, FiniteWord):
        return list(source.letters[:n]), None if len(source) >= n else "ended"
    letters = [source.letter(i) for i in range(n)]
    return letters, None


def prefix_equiv(a, b, n: int):
    """Compare two letter sources over n positions.

    Returns Equal(n), the first Diverges(i, left, right), or
    Inconclusive(i, status) if a source stops producing at i.
    """
    if n < 1:
        raise ValueError("comparison length must be >= 1")
    la, ha = _pull(a, n)
    lb, hb = _pull(b, n)
    for i in range(min(len(la), len(lb))):
        if la[i] != lb[i]:
            return Diverges(i, la[i], lb[i])
    if len(la) < n or len(lb) < n:
        i = min(len(la), len(lb))
        return Inconclusive(i, ha if len(la) <= len(lb) else hb)
    return Equal(n)


#: Table entry marking positions where the predicate is false.
NO_ENTRY = None


@dataclass
class PaddingTable:
    entries: list  # per position: padding length, NO_ENTRY, or "cap"
    cap: int
    stabilization: int


def padding_check(phi, advice: LassoWord, n_range: int = 30, n_cap: int | None = None) -> PaddingTable:
    """For each position, the least prefix length of the suffix witnessing
    the formula, where the formula holds; gaps elsewhere.

    The witness search uses the Globally-free rewriting of the formula on
    the fixed advice word.
    """
    normal = nnf(phi)
    report: GEliminationReport = eliminate_g_subformulas(normal, advice)
    if n_cap is None:
        n_cap = 3 * (len(advice.u) + len(advice.v)) + size(phi)
    entries = []
    for n in range(n_range + 1):
        if not eval_lasso(phi, advice, n):
            entries.append(NO_ENTRY)
            continue
        witness = None
        for k in range(n_cap + 1):
            prefix = FiniteWord(tuple(advice.letter(n + i) for i in range(k)), advice.alphabet)
            if finite_prefix_eval(report.formula, prefix, 0):
                witness = k
                break
        if witness is None:
            if n >= report.stabilization:
                raise CapTooSmall(n, n_cap)
            entries.append("cap")
        else:
            entries.append(witness)
    return PaddingTable(entries, n_cap, report.stabilization)
