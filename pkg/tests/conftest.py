import math

import numpy as np
import pytest

from twistforge import curves
from twistforge.curves import NonResidueTable
from twistforge.fp_arith import FpContext


class Lab:
    """Everything the tests repeatedly need for one prime, computed once."""

    def __init__(self, p: int):
        self.ctx = FpContext(p)
        self.p = p
        self.nr = NonResidueTable.for_prime(self.ctx)
        self.classes = curves.enumerate_classes(self.ctx)
        self.curves = [curves.get_weierstrass_pair(self.ctx, c, self.nr)
                       for c in self.classes]
        self.A = np.array([E.A for E in self.curves], dtype=np.int64)
        self.B = np.array([E.B for E in self.curves], dtype=np.int64)
        self.cards = curves.count_points_batch(self.ctx, self.A, self.B)

    def valid_sigmas(self):
        s2 = math.isqrt(4 * self.p)
        return [self.p + 1 + t for t in range(-s2, s2 + 1) if t != 0]

    def marked_truth(self, sigma: int) -> np.ndarray:
        return np.asarray(self.cards == sigma)


_LABS: dict[int, Lab] = {}


def get_lab(p: int) -> Lab:
    if p not in _LABS:
        _LABS[p] = Lab(p)
    return _LABS[p]


@pytest.fixture(scope="session")
def lab101():
    return get_lab(101)


@pytest.fixture(scope="session")
def lab499():
    return get_lab(499)


@pytest.fixture(scope="session")
def lab1009():
    return get_lab(1009)


# --- acceptance criterion reporting -----------------------------------------
# Each acceptance test records exactly one PASS/FAIL line; the lines are
# printed in the terminal summary so they survive output capture.

CRITERION_LINES: list[str] = []


def record_criterion(num: int, title: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    CRITERION_LINES.append(f"criterion {num:2d} [{status}] {title}{suffix}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERION_LINES):
        terminalreporter.write_line(line)
