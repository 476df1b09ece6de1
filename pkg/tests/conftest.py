from __future__ import annotations

import sys

from hypothesis import HealthCheck, settings, strategies as st

from lyubeznik.combinatorics import SimplicialComplex, SquareFreeIdeal

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def complexes(draw, n_min: int = 1, n_max: int = 6, void: bool = False) -> SimplicialComplex:
    n = draw(st.integers(n_min, n_max))
    facets = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=0 if void else 1, max_size=6))
    return SimplicialComplex(n, tuple(facets))


@st.composite
def ideals(draw, n_min: int = 1, n_max: int = 5, max_gens: int = 4, n: int | None = None) -> SquareFreeIdeal:
    if n is None:
        n = draw(st.integers(n_min, n_max))
    gens = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=max_gens)) if n else []
    return SquareFreeIdeal(n, tuple(gens))


@st.composite
def ideal_pairs(draw, n_max: int = 5, max_gens: int = 3):
    n = draw(st.integers(1, n_max))
    return draw(ideals(n=n, max_gens=max_gens)), draw(ideals(n=n, max_gens=max_gens))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
