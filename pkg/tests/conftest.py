"""Shared fixtures and reporting for the test suite.

The ``--run-extended`` flag enables cross-checks that take minutes (full
2^n scans of larger codes).  After the run, one summary line is printed per
acceptance criterion, derived from the outcomes of the ``test_c<N>_*`` tests
in ``test_acceptance.py``.
"""

from __future__ import annotations

import re
from collections import Counter

import pytest

from codescout import build_repetition, parse_code_spec, profile_direct

# ---------------------------------------------------------------------------
# Options and markers

def pytest_addoption(parser):
    parser.addoption(
        "--run-extended",
        action="store_true",
        default=False,
        help="also run long cross-checks (full scans of 2^31-2^32 words; minutes)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-extended"):
        return
    skip_extended = pytest.mark.skip(reason="long cross-check; enable with --run-extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip_extended)


# ---------------------------------------------------------------------------
# Session fixtures: small codes and their exhaustive profiles

@pytest.fixture(scope="session")
def hamming74():
    return parse_code_spec("hamming:3")


@pytest.fixture(scope="session")
def hamming1511():
    return parse_code_spec("hamming:4")


@pytest.fixture(scope="session")
def bch157():
    return parse_code_spec("bch:15,7")


@pytest.fixture(scope="session")
def rep31():
    return build_repetition(3)


@pytest.fixture(scope="session")
def hamming74_profile(hamming74):
    return profile_direct(hamming74)


@pytest.fixture(scope="session")
def hamming1511_profile(hamming1511):
    return profile_direct(hamming1511)


@pytest.fixture(scope="session")
def bch157_profile(bch157):
    return profile_direct(bch157)


# ---------------------------------------------------------------------------
# Acceptance summary: one line per criterion

CRITERIA = {
    1: "reference sample sizes within 1%",
    2: "reference fixed-sample and sequential operating points, Hamming(15,11)",
    3: "detection-curve and ROC shape properties, Hamming(7,4)",
    4: "direct-scan and dual-transform profiles exactly equal",
    5: "distance pmfs match 2^n brute-force enumeration",
    6: "Monte Carlo calibration of analytic predictions",
    7: "cross-code invariant suite",
}

# One-line explanations for criteria that are not met as stated; the details
# live in the docstrings of the corresponding expected-failure tests.
FAIL_NOTES = {
    2: "reference values hold at crossover 0.07, not at 0.05",
    6: "sequential mean word count under the traffic hypothesis exceeds the "
       "boundary-crossing approximation by >10%; every other check passes",
}

_ACCEPTANCE_TEST = re.compile(r"test_acceptance\.py::test_c(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[int, Counter] = {}
    for category in ("passed", "failed", "error", "skipped", "xfailed", "xpassed"):
        for report in terminalreporter.stats.get(category, []):
            match = _ACCEPTANCE_TEST.search(getattr(report, "nodeid", ""))
            if match is None:
                continue
            outcomes.setdefault(int(match.group(1)), Counter())[category] += 1
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        counts = outcomes.get(number)
        if counts is None:
            continue
        parts = [f"{count} {name}" for name, count in sorted(counts.items()) if count]
        if counts["failed"] or counts["error"] or counts["xpassed"]:
            status = "FAIL"
        elif counts["xfailed"]:
            note = FAIL_NOTES.get(number, "expected failure documented in the test")
            status = f"FAIL as stated ({note})"
        elif counts["passed"]:
            status = "PASS"
        else:
            status = "SKIP"
        terminalreporter.write_line(
            f"ACCEPTANCE C{number} — {CRITERIA[number]}: {status} [{', '.join(parts)}]"
        )
