from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from lyubeznik.linalg import (
    GF2,
    ExactMatrix,
    FieldSpec,
    NotAChainMapError,
    NotAComplexError,
    Q,
    block_matrix,
    cohomology_data,
    column_basis,
    induced_map,
    kernel_basis,
    left_inverse,
    rank,
    rref,
)

RP2_FACETS = [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6), (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6)]

int_matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)
fields = st.sampled_from([Q, GF2, FieldSpec(3), FieldSpec(7)])


def boundary_matrix(facets, k):
    """Oriented boundary from k-faces to (k-1)-faces of the complex generated by ``facets``."""
    faces = {j: sorted({s for f in facets for s in combinations(f, j + 1)}) for j in (k - 1, k)}
    index = {s: i for i, s in enumerate(faces[k - 1])}
    rows = [[0] * len(faces[k]) for _ in faces[k - 1]]
    for c, s in enumerate(faces[k]):
        for drop in range(len(s)):
            rows[index[s[:drop] + s[drop + 1:]]][c] = (-1) ** drop
    return rows


def smith_diagonal(rows):
    """Nonzero invariant factors of an integer matrix by brute-force row/column reduction."""
    a = [list(r) for r in rows]
    m, n = len(a), len(a[0]) if a else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                for r in a:
                    r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if not done:
                _, pi, pj = min((abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                                if a[i][j] and (i == t or j == t))
                a[t], a[pi] = a[pi], a[t]
                for r in a:
                    r[t], r[pj] = r[pj], r[t]
                continue
            # enforce divisibility of the rest by the pivot
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]]
            if bad:
                i, _ = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                done = False
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def bareiss_rank(rows):
    """Fraction-free integer elimination."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    prev, r = 1, 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r


def random_complex(rng, fld, dims):
    """Three-term complex with random maps: returns (d0, d1)."""
    a, b, c = dims
    d0 = ExactMatrix(fld, b, a, [[rng.randint(-2, 2) for _ in range(a)] for _ in range(b)])
    left = kernel_basis(d0.transpose()).transpose()
    mix = ExactMatrix(fld, c, left.rows, [[rng.randint(-2, 2) for _ in range(left.rows)] for _ in range(c)])
    return d0, mix @ left


def test_canonical_entries():
    m = ExactMatrix(FieldSpec(5), 1, 3, [[7, -1, Fraction(1, 2)]])
    assert m.tolist() == [[2, 4, 3]]
    assert ExactMatrix(Q, 1, 1, [[Fraction(4, 6)]])[0, 0] == Fraction(2, 3)
    with pytest.raises(ValueError):
        FieldSpec(4)
    assert FieldSpec.parse("fp:7") == FieldSpec(7) and FieldSpec.parse("q") == Q


def test_rank_examples():
    assert rank(ExactMatrix.zeros(Q, 3, 3)) == 0
    for k in range(6):
        assert rank(ExactMatrix.identity(GF2, k)) == k


def test_rp2_boundary_rank_depends_on_field():
    d2 = boundary_matrix(RP2_FACETS, 2)
    assert (len(d2), len(d2[0])) == (15, 10)
    diag = smith_diagonal(d2)
    torsion = sum(1 for x in diag if x % 2 == 0)
    assert diag.count(1) == 9 and diag.count(2) == 1
    q_rank = rank(ExactMatrix(Q, 15, 10, d2))
    f2_rank = rank(ExactMatrix(GF2, 15, 10, d2))
    assert q_rank == len(diag) == 10
    assert q_rank - f2_rank == torsion == 1


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(Q, 4)).cols == 0
    k = kernel_basis(ExactMatrix.zeros(Q, 2, 3))
    assert k.cols == 3 and rank(k) == 3


@given(int_matrices, fields)
def test_rank_nullity_and_kernel(rows, fld):
    a = ExactMatrix.from_rows(fld, rows)
    k = kernel_basis(a)
    assert rank(a) + k.cols == a.cols
    assert (a @ k).is_zero()
    assert rank(k) == k.cols


@given(int_matrices)
def test_rational_rank_matches_fraction_free(rows):
    assert rank(ExactMatrix.from_rows(Q, rows)) == bareiss_rank(rows)


@given(int_matrices, st.sampled_from([2, 3, 5]))
def test_prime_rank_bounded_by_rational(rows, p):
    assert rank(ExactMatrix.from_rows(FieldSpec(p), rows)) <= rank(ExactMatrix.from_rows(Q, rows))


@given(int_matrices, fields, st.randoms(use_true_random=False))
def test_rank_permutation_invariant(rows, fld, rng):
    a = ExactMatrix.from_rows(fld, rows)
    ri = list(range(a.rows))
    ci = list(range(a.cols))
    rng.shuffle(ri)
    rng.shuffle(ci)
    assert rank(a.select_rows(ri).select_columns(ci)) == rank(a)


@given(int_matrices, fields)
def test_rref_and_column_basis(rows, fld):
    a = ExactMatrix.from_rows(fld, rows)
    red, piv = rref(a)
    assert len(piv) == rank(a) == column_basis(a).cols
    for r, c in enumerate(piv):
        assert red[r, c] == 1


@given(int_matrices, fields)
def test_left_inverse(rows, fld):
    a = ExactMatrix.from_rows(fld, rows)
    c = column_basis(a)
    assert left_inverse(c) @ c == ExactMatrix.identity(fld, c.cols)


def test_cohomology_examples():
    zero_in, zero_out = ExactMatrix.zeros(Q, 3, 0), ExactMatrix.zeros(Q, 0, 3)
    assert cohomology_data(zero_in, zero_out).dim == 3
    one = ExactMatrix.identity(Q, 2)
    exact = cohomology_data(one, ExactMatrix.zeros(Q, 0, 2))
    assert exact.dim == 0
    with pytest.raises(NotAComplexError):
        cohomology_data(one, one)


def test_circle_cohomology():
    # reduced cochains of the triangle boundary: C^-1 -> C^0 -> C^1
    coboundary_0 = ExactMatrix(Q, 3, 1, [[1], [1], [1]])
    vertices = boundary_matrix([(1, 2), (1, 3), (2, 3)], 1)
    coboundary_1 = ExactMatrix(Q, 3, 3, vertices).transpose()
    for fld in (Q, GF2):
        c0 = ExactMatrix(fld, 3, 1, coboundary_0.tolist())
        c1 = ExactMatrix(fld, 3, 3, coboundary_1.tolist())
        assert cohomology_data(c0, c1).dim == 0
        assert cohomology_data(c1, ExactMatrix.zeros(fld, 0, 3)).dim == 1


@given(st.randoms(use_true_random=False), fields, st.tuples(*[st.integers(0, 4)] * 3))
def test_cohomology_postconditions(rng, fld, dims):
    d0, d1 = random_complex(rng, fld, dims)
    cd = cohomology_data(d0, d1)
    assert cd.dim == dims[1] - rank(d1) - rank(d0)
    assert cd.projector @ cd.reps == ExactMatrix.identity(fld, cd.dim)
    assert (d1 @ cd.reps).is_zero()
    assert (cd.projector @ d0).is_zero()


def _homotopic_map(rng, fld, d0, d1, scalar):
    """``scalar * id + h d + d h`` on the middle term: a chain self-map inducing ``scalar``."""
    b = d0.rows
    h1 = ExactMatrix(fld, d0.cols, b, [[rng.randint(-2, 2) for _ in range(b)] for _ in range(d0.cols)])
    h2 = ExactMatrix(fld, b, d1.rows, [[rng.randint(-2, 2) for _ in range(d1.rows)] for _ in range(b)])
    return ExactMatrix.identity(fld, b).scale(scalar) + d0 @ h1 + h2 @ d1


@given(st.randoms(use_true_random=False), fields, st.tuples(*[st.integers(0, 4)] * 3))
def test_induced_map_identity_zero_and_homotopy(rng, fld, dims):
    d0, d1 = random_complex(rng, fld, dims)
    cd = cohomology_data(d0, d1)
    ident = ExactMatrix.identity(fld, cd.dim)
    assert induced_map(ExactMatrix.identity(fld, dims[1]), cd, cd) == ident
    assert induced_map(ExactMatrix.zeros(fld, dims[1], dims[1]), cd, cd).is_zero()
    assert induced_map(_homotopic_map(rng, fld, d0, d1, 3), cd, cd) == ident.scale(3)


@given(st.randoms(use_true_random=False), fields, st.tuples(*[st.integers(0, 3)] * 3))
def test_induced_map_composition(rng, fld, dims):
    d0, d1 = random_complex(rng, fld, dims)
    # doubled complex A + A, with chain maps mixing the two copies
    D0 = block_matrix(fld, [d0.rows] * 2, [d0.cols] * 2, {(0, 0): d0, (1, 1): d0})
    D1 = block_matrix(fld, [d1.rows] * 2, [d1.cols] * 2, {(0, 0): d1, (1, 1): d1})
    cd = cohomology_data(D0, D1)
    b = dims[1]

    def mixing():
        coeffs = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
        blocks = {(i, j): ExactMatrix.identity(fld, b).scale(coeffs[i][j]) for i in range(2) for j in range(2)}
        return block_matrix(fld, [b, b], [b, b], blocks) + _homotopic_map(rng, fld, D0, D1, 0)

    f, g = mixing(), mixing()
    assert induced_map(g @ f, cd, cd) == induced_map(g, cd, cd) @ induced_map(f, cd, cd)


@given(st.randoms(use_true_random=False), fields, st.tuples(*[st.integers(1, 4)] * 3))
def test_induced_map_ignores_representative_choice(rng, fld, dims):
    d0, d1 = random_complex(rng, fld, dims)
    cd = cohomology_data(d0, d1)
    shift = ExactMatrix(fld, d0.cols, cd.dim, [[rng.randint(-3, 3) for _ in range(cd.dim)] for _ in range(d0.cols)])
    moved = replace(cd, reps=cd.reps + d0 @ shift)
    f = _homotopic_map(rng, fld, d0, d1, 2)
    assert induced_map(f, moved, cd) == induced_map(f, cd, cd)


def test_induced_map_rejects_non_chain_map():
    # source 0 -> k -> 0 has a cocycle; target 0 -> k --id--> k does not
    src = cohomology_data(ExactMatrix.zeros(Q, 1, 0), ExactMatrix.zeros(Q, 0, 1))
    tgt = cohomology_data(ExactMatrix.zeros(Q, 1, 0), ExactMatrix.identity(Q, 1))
    with pytest.raises(NotAChainMapError):
        induced_map(ExactMatrix.identity(Q, 1), src, tgt)
    # boundaries must go to boundaries: k --id--> k -> 0 into 0 -> k -> 0
    src = cohomology_data(ExactMatrix.identity(Q, 1), ExactMatrix.zeros(Q, 0, 1))
    tgt = cohomology_data(ExactMatrix.zeros(Q, 1, 0), ExactMatrix.zeros(Q, 0, 1))
    assert src.dim == 0
    with pytest.raises(NotAChainMapError):
        induced_map(ExactMatrix.identity(Q, 1), replace(src, dim=1, reps=ExactMatrix.identity(Q, 1)), tgt)


def test_deterministic_outputs():
    rng = random.Random(7)
    rows = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(5)]
    a = ExactMatrix(Q, 5, 6, rows)
    assert kernel_basis(a) == kernel_basis(ExactMatrix(Q, 5, 6, rows))
