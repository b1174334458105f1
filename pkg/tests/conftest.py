import numpy as np
import pytest

from monfg import games, load_game
from monfg.utility import linear_utility, parse_utility

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    label = mark.args[0]
    failed = _criteria.setdefault(label, [])
    if rep.failed and rep.when in ("setup", "call"):
        failed.append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: (int("".join(c for c in s if c.isdigit())), s)):
        failed = _criteria[label]
        line = f"criterion {label}: {'FAIL' if failed else 'PASS'}"
        if failed:
            line += f" ({', '.join(failed)})"
        terminalreporter.write_line(line)


def bundled(name):
    return load_game(games.path(name))


@pytest.fixture(scope="session")
def gym():
    return bundled("gym")


@pytest.fixture(scope="session")
def counter():
    return bundled("esr_ser_disjoint")


@pytest.fixture(scope="session")
def qconv():
    return bundled("no_equilibrium")


@pytest.fixture(scope="session")
def pd():
    return bundled("prisoners_dilemma")


# quasiconvex utility family used by the property suites
QUASICONVEX_FAMILY = [
    linear_utility([1.0, 0.5]),
    linear_utility([0.5, 1.5]),
    linear_utility([-1.0, 2.0]),
    parse_utility("(max (+ p1 p2) (- p1 p2))"),
    parse_utility("(max p1 p2)"),
    parse_utility("(+ (pow p1 2) (pow p2 2))"),
]


def random_monfg(rng, n_max=3, m_max=3, d=2, lo=-5, hi=5):
    from monfg import Monfg
    n = int(rng.integers(2, n_max + 1))
    counts = tuple(int(rng.integers(1, m_max + 1)) for _ in range(n))
    return Monfg(rng.integers(lo, hi + 1, size=(n, *counts, d)).astype(float))
