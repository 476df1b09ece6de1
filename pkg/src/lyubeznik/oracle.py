"""Brute-force Z^n-graded local cohomology on an explicit window of degrees.

Nothing here uses skeletons.  Every degree ``b`` in ``[-B, B]^n`` gets its own
literal Cech complex of monomial basis vectors, and multiplication by ``x_i``
is carried explicitly between neighbouring degrees.  The results are then
compared against the skeleton engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator

from .combinatorics import SizeCapError, SquareFreeIdeal, to_vertices
from .linalg import (
    CohomologyData,
    ExactMatrix,
    FieldSpec,
    cohomology_data,
    induced_map,
    rank,
)

MAX_ORACLE_VARS = 6
MAX_WINDOW = 3

Degree = tuple[int, ...]


def _check_caps(n: int, bound: int) -> None:
    if n > MAX_ORACLE_VARS or bound > MAX_WINDOW or bound < 1:
        raise SizeCapError(f"oracle needs n <= {MAX_ORACLE_VARS} and 1 <= B <= {MAX_WINDOW}")


def window(n: int, bound: int) -> Iterator[Degree]:
    return product(range(-bound, bound + 1), repeat=n)


def negative_part(beta: Degree) -> frozenset[int]:
    """0-based coordinates with a negative entry."""
    return frozenset(i for i, b in enumerate(beta) if b < 0)


def _bump(beta: Degree, i: int, by: int = 1) -> Degree:
    return beta[:i] + (beta[i] + by,) + beta[i + 1 :]


@dataclass
class WindowModule:
    """Explicit graded pieces on the window plus multiplication maps.

    ``mult[(beta, i)]`` is multiplication by ``x_i`` from ``beta`` to
    ``beta + e_i``; it exists whenever both degrees lie in the window.
    """

    n: int
    bound: int
    field: FieldSpec
    dims: dict[Degree, int]
    mult: dict[tuple[Degree, int], ExactMatrix] = field(default_factory=dict)

    def mult_path(self, beta: Degree, target: Degree) -> ExactMatrix:
        """Multiply up from ``beta`` to the coordinatewise larger ``target``."""
        m = ExactMatrix.identity(self.field, self.dims[beta])
        cur = beta
        for i in range(self.n):
            while cur[i] < target[i]:
                m = self.mult[(cur, i)] @ m
                cur = _bump(cur, i)
        return m


def window_length(dims: dict[Degree, int], n: int) -> int:
    """Sum of the dims at the degrees ``-F`` for ``F`` a subset of ``[n]``."""
    return sum(dims[tuple(-((F >> i) & 1) for i in range(n))] for F in range(1 << n))


def _sign(T: tuple[int, ...], g: int) -> int:
    return -1 if sum(1 for t in T if t < g) % 2 else 1


def _gen_sets(ideal: SquareFreeIdeal) -> list[frozenset[int]]:
    return [frozenset(v - 1 for v in to_vertices(g)) for g in ideal.gens]


def _cech_of_ring(gens: list[frozenset[int]], beta: Degree) -> dict[int, list[tuple[int, ...]]]:
    """Basis of the Cech complex of ``S`` in degree ``beta``: one vector per live summand.

    ``S`` localized at ``x^G`` has the monomial ``x^beta`` exactly when every
    negative coordinate of ``beta`` lies in ``G``.
    """
    neg = negative_part(beta)
    out: dict[int, list[tuple[int, ...]]] = {}
    for t in range(len(gens) + 1):
        live = []
        for T in combinations(range(len(gens)), t):
            support = frozenset().union(*(gens[k] for k in T))
            if neg <= support:
                live.append(T)
        out[t] = live
    return out


def _ring_differential(fld: FieldSpec, ngens: int, src: list, tgt: list) -> ExactMatrix:
    index = {T: k for k, T in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for a, T in enumerate(src):
        for g in range(ngens):
            if g in T:
                continue
            b = index.get(tuple(sorted(T + (g,))))
            if b is not None:
                rows[b][a] = _sign(T, g)
    return ExactMatrix(fld, len(tgt), len(src), rows)


def window_local_cohomology(ideal: SquareFreeIdeal, j: int, bound: int, fld: FieldSpec) -> WindowModule:
    """``H^j_I(S)`` on the window, with multiplication maps between neighbours."""
    n = ideal.n
    _check_caps(n, bound)
    gens = _gen_sets(ideal)
    data: dict[Degree, tuple[CohomologyData, list]] = {}
    for beta in window(n, bound):
        basis = _cech_of_ring(gens, beta)
        cur = basis.get(j, [])
        d_in = _ring_differential(fld, len(gens), basis.get(j - 1, []), cur)
        d_out = _ring_differential(fld, len(gens), cur, basis.get(j + 1, []))
        data[beta] = (cohomology_data(d_in, d_out), cur)
    mod = WindowModule(n, bound, fld, {b: cd.dim for b, (cd, _) in data.items()})
    for beta, (cd, basis) in data.items():
        for i in range(n):
            if beta[i] == bound:
                continue
            tcd, tbasis = data[_bump(beta, i)]
            # x_i sends the basis monomial of each live summand to the same summand
            index = {T: k for k, T in enumerate(tbasis)}
            rows = [[0] * len(basis) for _ in tbasis]
            for a, T in enumerate(basis):
                rows[index[T]][a] = 1
            chain = ExactMatrix(fld, len(tbasis), len(basis), rows)
            mod.mult[(beta, i)] = induced_map(chain, cd, tcd)
    return mod


def _localized_degree(beta: Degree, G: frozenset[int], bound: int) -> Degree:
    return tuple(bound if i in G else b for i, b in enumerate(beta))


def window_cech_of_module(mod: WindowModule, ideal: SquareFreeIdeal, j: int) -> WindowModule:
    """``H^j_J(N)`` for a window module ``N``.

    ``N`` localized at ``x^G`` is read in degree ``beta`` from the piece of ``N``
    whose ``G`` coordinates are pushed to the top of the window.
    """
    n, bound, fld = mod.n, mod.bound, mod.field
    gens = [frozenset(v - 1 for v in to_vertices(g)) for g in ideal.gens]
    subsets_by_t = {t: list(combinations(range(len(gens)), t)) for t in range(len(gens) + 1)}

    def support(T) -> frozenset[int]:
        return frozenset().union(*(gens[k] for k in T)) if T else frozenset()

    def blocks(beta: Degree, t: int) -> list[tuple[tuple[int, ...], Degree, int]]:
        out = []
        for T in subsets_by_t.get(t, []):
            lb = _localized_degree(beta, support(T), bound)
            d = mod.dims[lb]
            if d:
                out.append((T, lb, d))
        return out

    def differential(beta: Degree, t: int) -> ExactMatrix:
        src, tgt = blocks(beta, t), blocks(beta, t + 1)
        rs = sum(d for *_, d in tgt)
        cs = sum(d for *_, d in src)
        rows = [[0] * cs for _ in range(rs)]
        r_off = {}
        acc = 0
        for T, lb, d in tgt:
            r_off[T] = (acc, lb, d)
            acc += d
        c = 0
        for T, lb, d in src:
            for g in range(len(gens)):
                if g in T:
                    continue
                U = tuple(sorted(T + (g,)))
                if U not in r_off:
                    continue
                r0, ulb, ud = r_off[U]
                m = mod.mult_path(lb, ulb)
                s = _sign(T, g)
                for a in range(ud):
                    for b in range(d):
                        x = m[a, b]
                        if x:
                            rows[r0 + a][c + b] = s * x
            c += d
        return ExactMatrix(fld, rs, cs, rows)

    data: dict[Degree, CohomologyData] = {}
    layout: dict[Degree, list] = {}
    for beta in window(n, bound):
        data[beta] = cohomology_data(differential(beta, j - 1), differential(beta, j))
        layout[beta] = blocks(beta, j)
    out = WindowModule(n, bound, fld, {b: cd.dim for b, cd in data.items()})
    for beta, cd in data.items():
        for i in range(n):
            if beta[i] == bound:
                continue
            up = _bump(beta, i)
            src, tgt = layout[beta], layout[up]
            rs = sum(d for *_, d in tgt)
            cs = sum(d for *_, d in src)
            rows = [[0] * cs for _ in range(rs)]
            r_off = {}
            acc = 0
            for T, lb, d in tgt:
                r_off[T] = (acc, lb)
                acc += d
            c = 0
            for T, lb, d in src:
                if T in r_off:
                    r0, ulb = r_off[T]
                    # x_i acts inside the localization; at the top of the window it is already inverted
                    m = mod.mult_path(lb, ulb)
                    for a in range(m.rows):
                        for b in range(m.cols):
                            if m[a, b]:
                                rows[r0 + a][c + b] = m[a, b]
                c += d
            out.mult[(beta, i)] = induced_map(ExactMatrix(fld, rs, cs, rows), cd, data[up])
    return out


def window_cohomology_all(ideal: SquareFreeIdeal, bound: int, fld: FieldSpec) -> dict[int, dict[Degree, int]]:
    """``{j: {beta: dim H^j_I(S)_beta}}`` for every slot, one rank pass per degree."""
    _check_caps(ideal.n, bound)
    gens = _gen_sets(ideal)
    out: dict[int, dict[Degree, int]] = {j: {} for j in range(len(gens) + 1)}
    for beta in window(ideal.n, bound):
        basis = _cech_of_ring(gens, beta)
        ranks = [rank(_ring_differential(fld, len(gens), basis[t], basis[t + 1])) for t in range(len(gens))]
        ranks.append(0)
        for t in range(len(gens) + 1):
            out[t][beta] = len(basis[t]) - ranks[t] - (ranks[t - 1] if t else 0)
    return out


def window_cohomology_dims(ideal: SquareFreeIdeal, j: int, bound: int, fld: FieldSpec) -> dict[Degree, int]:
    """Dimension of ``H^j_I(S)`` in every window degree, from literal Cech complexes."""
    all_dims = window_cohomology_all(ideal, bound, fld)
    if j in all_dims:
        return all_dims[j]
    return {beta: 0 for beta in window(ideal.n, bound)}


@dataclass(frozen=True)
class OracleResult:
    ok: bool
    message: str = ""
    degrees: tuple[Degree, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def compare_with_skeleton(mod: WindowModule, skeleton) -> OracleResult:
    """Check 1-determinedness of ``mod`` and agreement with a skeleton.

    Dimensions must depend only on the negative part of the degree, must match
    ``skeleton.dim(F)``, and multiplication across the ``-1 -> 0`` step must have
    the same rank as the skeleton's drop map.  Every other multiplication map
    inside the window must be bijective.
    """
    seen: dict[frozenset[int], tuple[Degree, int]] = {}
    for beta, d in mod.dims.items():
        neg = negative_part(beta)
        if neg in seen and seen[neg][1] != d:
            return OracleResult(False, f"dims differ at {seen[neg][0]} and {beta}", (seen[neg][0], beta))
        seen.setdefault(neg, (beta, d))
        F = sum(1 << i for i in neg)
        if skeleton.dim(F) != d:
            return OracleResult(False, f"window dim {d} at {beta}, skeleton has {skeleton.dim(F)}", (beta,))
    for (beta, i), m in mod.mult.items():
        src, tgt = mod.dims[beta], mod.dims[_bump(beta, i)]
        r = rank(m) if src and tgt else 0
        if beta[i] == -1:
            F = sum(1 << k for k in negative_part(beta))
            expect = rank(skeleton.drop(F, i)) if src and tgt else 0
            if r != expect:
                return OracleResult(False, f"x_{i + 1} at {beta} has rank {r}, skeleton drop has rank {expect}", (beta,))
        elif not (src == tgt == r):
            return OracleResult(False, f"x_{i + 1} at {beta} is not bijective", (beta, _bump(beta, i)))
    return OracleResult(True)


def one_determined_check(ideal: SquareFreeIdeal, j: int, bound: int, fld: FieldSpec, skeleton=None) -> OracleResult:
    """Compare ``H^j_I(S)`` on the window against the engine (or against ``skeleton``)."""
    from .sqmod import local_cohomology, unit_module

    if skeleton is None:
        skeleton = local_cohomology(unit_module(ideal.n, fld), ideal, j)
    return compare_with_skeleton(window_local_cohomology(ideal, j, bound, fld), skeleton)


def window_iterated(
    inner: SquareFreeIdeal, j: int, outer: SquareFreeIdeal, i: int, bound: int, fld: FieldSpec
) -> WindowModule:
    """``H^i_J H^j_I(S)`` computed entirely on the window."""
    return window_cech_of_module(window_local_cohomology(inner, j, bound, fld), outer, i)


def iterated_check(
    inner: SquareFreeIdeal, j: int, outer: SquareFreeIdeal, i: int, bound: int, fld: FieldSpec
) -> OracleResult:
    """Compare ``H^i_J H^j_I(S)`` on the window against the engine."""
    from .sqmod import local_cohomology, unit_module

    second = window_iterated(inner, j, outer, i, bound, fld)
    sk = local_cohomology(local_cohomology(unit_module(inner.n, fld), inner, j), outer, i)
    return compare_with_skeleton(second, sk)


@dataclass
class SweepReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _small_ideals(n: int, max_gens: int) -> Iterator[SquareFreeIdeal]:
    from .combinatorics import antichains

    for gens in antichains(n):
        if len(gens) <= max_gens and 0 not in gens:
            yield SquareFreeIdeal(n, gens)


def oracle_sweep(
    n_max: int = 4,
    max_gens: int = 4,
    j_max: int = 4,
    bound: int = 2,
    fields: tuple[FieldSpec, ...] = (),
    iterated_n_max: int = 3,
) -> SweepReport:
    """Exhaustive engine-versus-window comparison over every small monomial ideal.

    Single stages ``H^j_I(S)`` run for ``n <= n_max``; iterated stages
    ``H^i_m H^j_I(S)`` run for ``n <= iterated_n_max``.
    """
    from .combinatorics import SquareFreeIdeal as _I
    from .linalg import GF2, Q

    fields = fields or (Q, GF2)
    rep = SweepReport()
    for fld in fields:
        for n in range(n_max + 1):
            for ideal in _small_ideals(n, max_gens):
                for j in range(j_max + 1):
                    rep.checked += 1
                    r = one_determined_check(ideal, j, bound, fld)
                    if not r:
                        rep.failures.append(f"H^{j} of {ideal.generator_lists()} (n={n}, {fld}): {r.message}")
        for n in range(1, iterated_n_max + 1):
            m = _I.maximal(n)
            for ideal in _small_ideals(n, max_gens):
                for j in range(n + 1):
                    for i in range(n + 1):
                        rep.checked += 1
                        r = iterated_check(ideal, j, m, i, bound, fld)
                        if not r:
                            rep.failures.append(
                                f"H^{i}_m H^{j} of {ideal.generator_lists()} (n={n}, {fld}): {r.message}"
                            )
    return rep
