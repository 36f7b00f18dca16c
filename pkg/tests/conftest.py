from __future__ import annotations

import random
import sys
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from laumon.geometry import EquivParams
from laumon.series import TruncatedSeries
from laumon.verify import random_params

settings.register_profile("exact", max_examples=25, deadline=None)
settings.load_profile("exact")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def series(draw, n: int = 2, bound: int = 3, unit: bool = False):
    """Sparse series with a handful of terms; ``unit`` forces constant term 1."""
    terms = {}
    for _ in range(draw(st.integers(0, 5))):
        e = tuple(draw(st.integers(0, bound)) for _ in range(n))
        if sum(e) <= bound:
            terms[e] = draw(small_fractions)
    if unit:
        terms[(0,) * n] = Fraction(1)
    return TruncatedSeries(n, bound, terms)


def draws(n: int, count: int, m=None, seed: int = 0) -> list[EquivParams]:
    rng = random.Random(1000 * n + seed)
    return [random_params(rng, n, m) for _ in range(count)]


@pytest.fixture
def params_n2() -> EquivParams:
    return EquivParams(2, [Fraction(1, 3), Fraction(-2, 5)], Fraction(3, 7), Fraction(2))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, text = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {key}: {text}")
