"""Acceptance gate: one test per headline criterion, each printing a
pass/fail line per item. Run with -s to see every line."""
from __future__ import annotations

import pytest

from advicebench.checks import run_suite

CRITERIA = [
    ("1 mirror triple agreement", "mirror-triple"),
    ("2 register-machine compiler contract", "sst-compile"),
    ("3 lookbehind elimination", "lookbehind"),
    ("4 prefix-automaton extraction round trip", "mealy-roundtrip"),
    ("5 block-word constructions", "pi-constructions"),
    ("6 constant-input loop analyzer", "constant-analyzer"),
    ("7 finite-prefix truth on suffixes", "ltl-prefix"),
    ("8 factor-count bound for machine images", "subword-bound"),
    ("9 duplication round trip and delay chain", "mu-delay"),
    ("10 endmarker removal", "endmarker"),
]


@pytest.mark.parametrize("label,suite", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_acceptance(label, suite):
    results = run_suite(suite)
    for result in results:
        print(f"criterion {label}: {result.line()}")
    failed = [r for r in results if not r.passed]
    assert not failed, f"criterion {label}: {[r.name for r in failed]}"
