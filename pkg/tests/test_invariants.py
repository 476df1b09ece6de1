from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from conftest import complexes, ideal_pairs, ideals
from lyubeznik.combinatorics import (
    SimplicialComplex,
    SizeCapError,
    SquareFreeIdeal,
    krull_dim,
    stanley_reisner_ideal,
)
from lyubeznik.invariants import (
    GLNQuery,
    MAX_IE_GENERATORS,
    chi_engine,
    chi_faces,
    chi_inclusion_exclusion,
    generalized_lyubeznik,
    lyubeznik_numbers,
    lyubeznik_table,
    minimal_prime_bound,
    property_suite,
)
from lyubeznik.linalg import GF2, Q

TWO_POINTS = SquareFreeIdeal.from_generators(2, [[1, 2]])
EXAMPLE = SimplicialComplex.from_facets(5, [[1, 2], [1, 5], [3, 4, 5]])
TWO_PRIMES = SquareFreeIdeal.from_generators(5, [[1], [2], [5]]) & SquareFreeIdeal.from_generators(5, [[3], [4], [5]])


def test_generalized_lyubeznik_examples():
    for fld in (Q, GF2):
        assert generalized_lyubeznik(GLNQuery((TWO_POINTS,), (1,), fld)) == 1 + 1 + 1
    for n in range(1, 6):
        for P in range(1, 1 << n):
            prime = SquareFreeIdeal.prime(n, P)
            assert generalized_lyubeznik(GLNQuery((prime,), (krull_dim(prime),))) == 1


def test_query_validation():
    with pytest.raises(ValueError):
        GLNQuery((TWO_POINTS,), (1, 2))
    with pytest.raises(ValueError):
        GLNQuery((TWO_POINTS, SquareFreeIdeal.maximal(3)), (1, 0))
    # first index above n means a negative cohomological degree
    assert generalized_lyubeznik(GLNQuery((TWO_POINTS,), (5,))) == 0


@given(ideals(n_max=6, max_gens=4))
def test_vanishing_above_dimension(ideal):
    lam = lyubeznik_numbers(ideal)
    d = krull_dim(ideal)
    assert all(v == 0 for i, v in lam.items() if i > d)
    assert lam[d] >= 1


def test_table_two_points():
    t = lyubeznik_table(TWO_POINTS)
    assert t.d == 1
    # the only nonzero entry is the top corner; the (0, 0) entry vanishes (see decisions log)
    assert t.nonzero() == {(1, 1): 1}


def test_table_of_prime_quotient():
    for n in range(1, 5):
        for P in range(0, 1 << n):
            prime = SquareFreeIdeal.prime(n, P)
            t = lyubeznik_table(prime)
            assert t.nonzero() == {(t.d, t.d): 1}


@given(ideals(n_max=5), st.sampled_from([Q, GF2]))
def test_table_shape_and_corner(ideal, fld):
    t = lyubeznik_table(ideal, fld)
    assert t.d == krull_dim(ideal)
    assert len(t.entries) == t.d + 1
    assert t[t.d, t.d] >= 1
    # the spectral sequence abuts to a single copy of H^n_m(S)
    assert sum((-1) ** (i - j) * v for (i, j), v in t.nonzero().items()) == 1


def test_chi_examples():
    assert chi_engine(TWO_POINTS) == -3
    assert chi_inclusion_exclusion(TWO_POINTS) == -3
    for n in range(1, 7):
        assert chi_engine(SquareFreeIdeal.maximal(n)) == 1
    for j in range(0, 7):
        simplex = SimplicialComplex.simplex(j)
        assert chi_faces(simplex) == (-1) ** j
        assert chi_engine(stanley_reisner_ideal(simplex)) == (-1) ** j
    assert chi_faces(SimplicialComplex(3, (0,))) == 1


def test_chi_example_complex_is_three():
    ideal = stanley_reisner_ideal(EXAMPLE)
    assert chi_faces(EXAMPLE) == 1 - 2 * 5 + 4 * 5 - 8 * 1 == 3
    assert chi_inclusion_exclusion(ideal) == 3
    for fld in (Q, GF2):
        assert chi_engine(ideal, fld) == 3
    assert lyubeznik_numbers(ideal) == {0: 0, 1: 0, 2: 4, 3: 1, 4: 0, 5: 0}


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_regular_sequence_magnitude(degrees):
    n = sum(degrees)
    gens, start = [], 1
    for d in degrees:
        gens.append(list(range(start, start + d)))
        start += d
    ideal = SquareFreeIdeal.from_generators(n, gens)
    expected = 1
    for d in degrees:
        expected *= 2**d - 1
    assert abs(chi_inclusion_exclusion(ideal)) == expected
    assert chi_engine(ideal) == chi_inclusion_exclusion(ideal)


def test_inclusion_exclusion_cap_and_grouping():
    cx = SimplicialComplex(7, tuple(1 << v for v in range(7)))
    ideal = stanley_reisner_ideal(cx)
    assert len(ideal.gens) == 21 > MAX_IE_GENERATORS
    with pytest.raises(SizeCapError):
        chi_inclusion_exclusion(ideal)
    assert chi_inclusion_exclusion(ideal, "auto") == chi_faces(cx) == chi_engine(ideal)
    with pytest.raises(ValueError):
        chi_inclusion_exclusion(SquareFreeIdeal(2, (0,)))


@given(ideals(n_max=7, max_gens=6))
def test_grouped_matches_literal(ideal):
    assert chi_inclusion_exclusion(ideal, "grouped") == chi_inclusion_exclusion(ideal, "literal")


@given(complexes(n_max=6), st.sampled_from([Q, GF2]))
def test_three_way_chi(cx, fld):
    ideal = stanley_reisner_ideal(cx)
    assert chi_engine(ideal, fld) == chi_faces(cx) == chi_inclusion_exclusion(ideal, "auto")


@given(ideal_pairs(n_max=5))
def test_chi_mayer_vietoris(pair):
    a, b = pair
    assert chi_engine(a) + chi_engine(b) == chi_engine(a + b) + chi_engine(a & b)


def test_bound_examples():
    for n in range(1, 6):
        for P in range(1, 1 << n):
            prime = SquareFreeIdeal.prime(n, P)
            h = prime.n - krull_dim(prime)
            assert [minimal_prime_bound(prime, j) for j in range(n + 1)] == [int(j == n - h) for j in range(n + 1)]
    lam = lyubeznik_numbers(TWO_PRIMES)
    assert TWO_PRIMES.generator_lists() == [[5], [1, 3], [2, 3], [1, 4], [2, 4]]
    assert (minimal_prime_bound(TWO_PRIMES, 2), minimal_prime_bound(TWO_PRIMES, 1)) == (2, 1)
    assert (lam[2], lam[1]) == (2, 1)


@given(ideals(n_max=6, max_gens=4))
def test_bound_dominates_engine(ideal):
    for j, v in lyubeznik_numbers(ideal, Q).items():
        assert v <= minimal_prime_bound(ideal, j)


def test_isolated_vertices_curve_formula():
    for ell in range(1, 7):
        cx = SimplicialComplex(ell, tuple(1 << v for v in range(ell)))
        assert lyubeznik_numbers(stanley_reisner_ideal(cx))[1] == 2 * ell - 1


def test_property_suite_default_passes():
    report = property_suite(seed=1, trials=50, n_max=5)
    assert report.ok, "\n".join(report.lines())
    assert all(c.trials == 50 for c in report.checks)
    assert report.to_dict()["ok"] is True


def test_property_suite_is_deterministic():
    a = property_suite(seed=9, trials=5, n_max=4).to_dict()
    b = property_suite(seed=9, trials=5, n_max=4).to_dict()
    assert a == b


def test_property_suite_rejects_large_n():
    with pytest.raises(SizeCapError):
        property_suite(n_max=9)


def test_property_suite_reports_violations(monkeypatch):
    import lyubeznik.invariants as inv

    monkeypatch.setattr(inv, "chi_faces", lambda cx: 10**6)
    report = property_suite(seed=2, trials=3, n_max=3)
    failing = [c for c in report.checks if not c.ok]
    assert [c.name for c in failing] == ["chi agreement: engine, faces, inclusion-exclusion"]
    assert "complex=" in failing[0].violations[0]
    assert any(line.startswith("FAIL") for line in report.lines())


def test_random_inputs_reproducible():
    from lyubeznik.combinatorics import random_complex

    assert random_complex(random.Random(5), 6) == random_complex(random.Random(5), 6)
