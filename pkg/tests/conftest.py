from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import strategies as st

from arplab import make_instance

ACCEPTANCE_LINES: list[str] = []


def direct_total(pairs, order):
    """Objective straight from its definition: each v over the summed c of
    itself and everything after it.  Shares no code with arplab."""
    total = Fraction(0)
    for i, pid in enumerate(order):
        v = Fraction(pairs[pid - 1][0])
        total += v / sum(Fraction(pairs[q - 1][1]) for q in order[i:])
    return total


def direct_stable_set(pairs):
    """Orders where no neighbour exchange strictly improves the total."""
    n = len(pairs)
    out = []
    for order in permutations(range(1, n + 1)):
        base = direct_total(pairs, order)
        ok = True
        for k in range(n - 1):
            sw = order[:k] + (order[k + 1], order[k]) + order[k + 2:]
            if direct_total(pairs, sw) > base:
                ok = False
                break
        if ok:
            out.append(order)
    return out


positive_rationals = st.builds(Fraction, st.integers(1, 60), st.integers(1, 6))


@st.composite
def instances(draw, min_n=1, max_n=6, kind="arp"):
    n = draw(st.integers(min_n, max_n))
    pairs = draw(st.lists(st.tuples(positive_rationals, positive_rationals),
                          min_size=n, max_size=n))
    return make_instance(kind, pairs)


@st.composite
def instance_and_perm(draw, min_n=1, max_n=7, kind="arp"):
    inst = draw(instances(min_n, max_n, kind))
    perm = tuple(draw(st.permutations(list(range(1, inst.n + 1)))))
    return inst, perm


@pytest.fixture
def three():
    return make_instance("arp", [(6, 2), (1, 1), (2, 1)])


@pytest.fixture
def two():
    return make_instance("arp", [(6, 2), (1, 1)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
