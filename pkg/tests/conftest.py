import warnings

import numpy as np
import pytest

from qstar.algebra import UnitNormWarning
from qstar.norms import gram, lp

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        ACCEPTANCE[n] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, verdict = ACCEPTANCE[n]
        terminalreporter.write_line(f"{verdict} criterion {n:2d}: {title}")


@pytest.fixture(autouse=True)
def _quiet_unit_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnitNormWarning)
        yield


def random_norm(rng, n, kinds=("l1", "l2", "linf", "gram")):
    k = kinds[int(rng.integers(len(kinds)))]
    if k == "l1":
        return lp(1, n)
    if k == "l2":
        return lp(2, n)
    if k == "linf":
        return lp(np.inf, n)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return gram(A.conj().T @ A + np.eye(n))


def cvec(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
