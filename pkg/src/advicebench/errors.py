"""Exception types shared across the package.

Halting conditions of machine runs double as status values on RunOutcome:
an instance describes *why* a stream stopped producing letters.
"""
from __future__ import annotations


class AdviceBenchError(Exception):
    pass


class AlphabetMismatch(AdviceBenchError):
    pass


class EmptyPeriod(AdviceBenchError):
    pass


class BlockBudgetExceeded(AdviceBenchError):
    def __init__(self, position, budget):
        super().__init__(f"no block marker within {budget} letters from position {position}")
        self.position = position
        self.budget = budget


class AdviceNotLasso(AdviceBenchError):
    pass


class NotProductAlphabet(AdviceBenchError):
    pass


class NotDeterministic(AdviceBenchError):
    pass


class ExtractionFailed(AdviceBenchError):
    def __init__(self, position, message=""):
        super().__init__(message or f"no transition applies at position {position}")
        self.position = position


class UndefinedTransition(AdviceBenchError):
    """A partial machine had no transition for the situation it reached."""

    def __init__(self, position, step=None, detail=None):
        bits = f"position {position}"
        if step is not None:
            bits += f", step {step}"
        if detail is not None:
            bits += f", on {detail!r}"
        super().__init__(f"undefined transition at {bits}")
        self.position = position
        self.step = step
        self.detail = detail


class BudgetExceeded(AdviceBenchError):
    def __init__(self, step, loop=None, message=""):
        super().__init__(message or f"step budget exhausted at step {step}")
        self.step = step
        self.loop = loop  # optional LassoWord describing a detected loop


class MovedLeftOfEndmarker(AdviceBenchError):
    def __init__(self, step):
        super().__init__(f"head moved left of the endmarker at step {step}")
        self.step = step


class NonProductive(AdviceBenchError):
    """The run loops without emitting: the whole output is the finite prefix."""

    def __init__(self, prefix):
        super().__init__(f"loop emits nothing; total output is {len(prefix)} letters")
        self.prefix = prefix


class NoOutputFunction(AdviceBenchError):
    def __init__(self, state_set):
        super().__init__(f"output function undefined on recurring states {sorted(map(str, state_set))}")
        self.state_set = state_set


class MalformedSimpleSst(AdviceBenchError):
    pass


class UnstableClassification(AdviceBenchError):
    pass


class ValidationFailed(AdviceBenchError):
    def __init__(self, position, message=""):
        super().__init__(message or f"outputs diverge at position {position}")
        self.position = position


class NoWindowBound(AdviceBenchError):
    pass


class CapTooSmall(AdviceBenchError):
    def __init__(self, position, cap):
        super().__init__(f"no witness prefix of length <= {cap} at position {position}")
        self.position = position
        self.cap = cap


class NotInNnf(AdviceBenchError):
    pass


class NotGFree(AdviceBenchError):
    pass


class ParseError(AdviceBenchError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnresolvedReference(AdviceBenchError):
    def __init__(self, name):
        super().__init__(f"unresolved reference {name!r}")
        self.name = name


class InvariantViolation(AdviceBenchError):
    pass
