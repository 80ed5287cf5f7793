import itertools

import pytest

from dgp1opt import instance


def brute_force_signs(y, eps=0.0):
    """Every sign vector whose signed sum of ``y`` closes within ``eps``.

    Independent of the package code paths: plain itertools enumeration.
    """
    out = set()
    for signs in itertools.product((-1, 1), repeat=len(y)):
        total = 0.0
        for s, d in zip(signs, y):
            total = total + s * d
        if abs(total) <= eps:
            out.add(signs)
    return out


def binary_rows(n):
    """Rows of the sign matrix by counting in binary, least significant bit first."""
    rows = []
    for count in range(2 ** n):
        bits = format(count, f"0{n}b")[::-1]
        rows.append(tuple(1 if b == "1" else -1 for b in bits))
    return rows


@pytest.fixture
def appendix_a():
    return instance.ParadoxicalInstance(4, (4.0, 2.0, 3.0), 1.0, "appendix-a")


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
