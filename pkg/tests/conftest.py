import random
from fractions import Fraction as F

import pytest
from hypothesis import settings

from loopinv import Loop, closure

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIB = Loop([[1, 1, 0], [1, 0, 0], [0, 0, -1]], [1, 0, -1])

NILPOTENT_LOOP = Loop(
    [[F(x, 14) for x in row] for row in [
        [42, 0, -7, -42, 21, 28],
        [-50, 10, 0, 2, -2, -20],
        [-26, -20, 28, 52, -10, -30],
        [-4, -2, 0, -6, 6, 4],
        [14, 0, -14, -28, 28, 14],
        [-38, -12, 14, 48, -20, -18],
    ]],
    [F(x, 16) for x in (0, 8, 14, -5, 0, 0)],
)

CYCLOTOMIC_LOOP = Loop(
    [[0, 0, 0, 0, 0, -1],
     [1, 0, 0, 0, 0, -2],
     [0, 1, 0, 0, 0, -4],
     [0, 0, 1, 0, 0, -4],
     [0, 0, 0, 1, 0, -4],
     [0, 0, 0, 0, 1, -2]],
    [2, -1, 1, 1, 0, -1],
)

QUADRATIC_LOOP = Loop(
    [[0, 0, 0, 0, 0, 30],
     [1, 0, 0, 0, 0, 0],
     [0, 1, 0, 0, 0, -31],
     [0, 0, 1, 0, 0, 0],
     [0, 0, 0, 1, 0, 10],
     [0, 0, 0, 0, 1, 0]],
    [6, 0, F(-62, 15), 0, F(2, 3), 0],
)


def random_loop(rng: random.Random, max_dim: int = 4, lo: int = -2, hi: int = 2) -> Loop:
    d = rng.randint(1, max_dim)
    M = [[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)]
    a = [rng.randint(lo, hi) for _ in range(d)]
    return Loop(M, a)


def corpus(n: int, seed: int = 2024, max_dim: int = 4) -> list[Loop]:
    rng = random.Random(seed)
    return [random_loop(rng, max_dim) for _ in range(n)]


CORPUS = corpus(30)


@pytest.fixture(scope="session")
def corpus_closures():
    return [(loop, closure(loop, rationalize=True)) for loop in CORPUS]


@pytest.fixture(scope="session")
def fib_closure():
    return closure(FIB, rationalize=True)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    from test_acceptance import RESULTS
    number, title = marker.args
    if report.when == "call" or report.failed:
        RESULTS[number] = (report.passed, title)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, title = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
