"""Shared fixtures: the M/M/1+M instance (0.9, 1, 0.5) and the M/M/1 queue (1, 2, c=n)."""
from __future__ import annotations

import re

import pytest
from helpers import INSTANCE, MP

from bdpoisson import TruncationPolicy, build_tables, mm1, mm1m, passage_tables


@pytest.fixture(scope="session")
def instance():
    return mm1m(*INSTANCE)


@pytest.fixture(scope="session")
def inst_tables(instance):
    return build_tables(instance, TruncationPolicy(min_states=42))


@pytest.fixture(scope="session")
def inst_passage(inst_tables):
    return passage_tables(inst_tables)


@pytest.fixture(scope="session")
def inst_mp(instance):
    return build_tables(instance, TruncationPolicy(min_states=42), arith=MP)


@pytest.fixture(scope="session")
def inst_mp_passage(inst_mp):
    return passage_tables(inst_mp)


@pytest.fixture(scope="session")
def queue():
    return mm1(1.0, 2.0)


@pytest.fixture(scope="session")
def queue_tables(queue):
    return build_tables(queue, TruncationPolicy(min_states=60))


@pytest.fixture(scope="session")
def queue_mp(queue):
    return build_tables(queue, TruncationPolicy(min_states=60), arith=MP)


# one line per acceptance criterion in the terminal summary
_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if m:
        key = f"criterion {int(m.group(1)):2d} ({m.group(2).replace('_', ' ')})"
        _CRITERIA[key] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        terminalreporter.write_line(f"{_CRITERIA[key]}  {key}")
