"""Generalized Lyubeznik numbers, Lyubeznik tables and the Lyubeznik characteristic.

The engine values come from :mod:`lyubeznik.sqmod`; the closed formulas
(face counts, inclusion-exclusion over generators, the minimal-prime bound)
are computed independently so that they can be cross-checked.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .combinatorics import (
    SimplicialComplex,
    SizeCapError,
    SquareFreeIdeal,
    f_vector,
    from_vertices,
    krull_dim,
    minimal_primes,
    popcount,
    random_complex,
    random_ideal,
    stanley_reisner_ideal,
)
from .linalg import FieldSpec, Q
from .sqmod import (
    CohomologySpec,
    cohomology_lengths,
    graded_dims,
    iterated_cohomology,
    length,
    unit_module,
)

MAX_IE_GENERATORS = 20


@dataclass(frozen=True)
class GLNQuery:
    """Ideals ``I_1, ..., I_s`` (innermost first) with indices ``i_1, ..., i_s``."""

    ideals: tuple[SquareFreeIdeal, ...]
    indices: tuple[int, ...]
    field: FieldSpec = Q

    def __post_init__(self) -> None:
        if len(self.ideals) != len(self.indices) or not self.ideals:
            raise ValueError("need one index per ideal and at least one ideal")
        if len({i.n for i in self.ideals}) != 1:
            raise ValueError("all ideals must share n")

    def spec(self) -> CohomologySpec:
        return CohomologySpec(tuple(zip(self.ideals, self.indices)))


@dataclass(frozen=True)
class LyubeznikTable:
    """``entries[i][j]`` is the classical Lyubeznik number for ``0 <= i, j <= d``."""

    d: int
    entries: tuple[tuple[int, ...], ...]
    field: FieldSpec

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for i, row in enumerate(self.entries) for j, v in enumerate(row) if v}


def generalized_lyubeznik(q: GLNQuery, method: str = "auto") -> int:
    spec = q.spec()
    if spec.cohomological_degrees()[0] < 0:
        return 0
    return length(iterated_cohomology(spec, q.field, method=method, final_maps=False))


def lyubeznik_numbers(ideal: SquareFreeIdeal, field: FieldSpec = Q, method: str = "auto") -> dict[int, int]:
    """``{i: lambda^i_0(S/I)}`` for ``0 <= i <= n``, read off one cohomology computation."""
    lengths = cohomology_lengths(unit_module(ideal.n, field), ideal, method)
    return {i: lengths.get(ideal.n - i, 0) for i in range(ideal.n + 1)}


def lyubeznik_table(ideal: SquareFreeIdeal, field: FieldSpec = Q, method: str = "auto") -> LyubeznikTable:
    """Classical table: ``lambda_{i,j} = length H^i_m H^{n-j}_I(S)``, trimmed to ``d = dim S/I``."""
    if not ideal.is_proper:
        raise ValueError("the unit ideal has no Lyubeznik table")
    n = ideal.n
    d = krull_dim(ideal)
    m = SquareFreeIdeal.maximal(n)
    rows = [[0] * (d + 1) for _ in range(d + 1)]
    for j in range(d + 1):
        inner = iterated_cohomology(CohomologySpec(((ideal, j),)), field, method=method)
        if not inner.support:
            continue
        for i, val in cohomology_lengths(inner, m, method).items():
            if i <= d:
                rows[i][j] = val
    return LyubeznikTable(d, tuple(tuple(r) for r in rows), field)


def chi_engine(ideal: SquareFreeIdeal, field: FieldSpec = Q, method: str = "auto") -> int:
    """Alternating sum of the engine's ``lambda^i_0`` values."""
    if not ideal.is_proper:
        raise ValueError("the unit ideal has no Lyubeznik characteristic")
    return sum((-1) ** i * v for i, v in lyubeznik_numbers(ideal, field, method).items())


def chi_faces(cx: SimplicialComplex) -> int:
    if cx.is_void:
        raise ValueError("the void complex has no Stanley-Reisner ring")
    return sum((-2) ** k * c for k, c in enumerate(f_vector(cx)))


def chi_inclusion_exclusion(ideal: SquareFreeIdeal, method: str = "literal") -> int:
    """Signed sum of ``2^|support of lcm|`` over all subsets of generators.

    ``literal`` walks all ``2^l`` subsets and refuses more than
    ``MAX_IE_GENERATORS`` generators.  ``grouped`` evaluates the same sum by
    collecting subsets with equal lcm support, one generator at a time, and
    has no cap.  ``auto`` uses ``literal`` whenever it is allowed.
    """
    if not ideal.is_proper:
        raise ValueError("the unit ideal has no Lyubeznik characteristic")
    gens = ideal.gens
    if method == "auto":
        method = "literal" if len(gens) <= MAX_IE_GENERATORS else "grouped"
    if method == "literal":
        if len(gens) > MAX_IE_GENERATORS:
            raise SizeCapError(f"{len(gens)} generators exceed the cap of {MAX_IE_GENERATORS}")
        lcm_of = [0] * (1 << len(gens))
        for mask in range(1, 1 << len(gens)):
            low = mask & -mask
            lcm_of[mask] = lcm_of[mask ^ low] | gens[low.bit_length() - 1]
        total = sum((-1) ** popcount(mask) * (1 << popcount(lcm)) for mask, lcm in enumerate(lcm_of))
    elif method == "grouped":
        # signed number of generator subsets per lcm support
        weight: dict[int, int] = {0: 1}
        for g in gens:
            nxt = dict(weight)
            for u, w in weight.items():
                nxt[u | g] = nxt.get(u | g, 0) - w
            weight = {u: w for u, w in nxt.items() if w}
        total = sum(w << popcount(u) for u, w in weight.items())
    else:
        raise ValueError(f"unknown method {method!r}")
    return (-1) ** ideal.n * total


def minimal_prime_bound(ideal: SquareFreeIdeal, j: int) -> int:
    """Count nonempty sets of minimal primes whose sum has height ``n - j + (size - 1)``."""
    primes = minimal_primes(ideal)
    n = ideal.n
    count = 0
    for size in range(1, len(primes) + 1):
        for combo in combinations(primes, size):
            union = 0
            for p in combo:
                union |= p
            if popcount(union) == n - j + size - 1:
                count += 1
    return count


# --- property suite ---------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class PropertyReport:
    seed: int
    trials: int
    n_max: int
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.ok else "FAIL"
            out.append(f"{status} {c.name} ({c.trials} trials)")
            out.extend(f"  {v}" for v in c.violations)
        return out

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "n_max": self.n_max,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "trials": c.trials, "ok": c.ok, "violations": c.violations} for c in self.checks
            ],
        }


def _repro(**kw) -> str:
    parts = []
    for k, v in kw.items():
        if isinstance(v, SquareFreeIdeal):
            v = {"n": v.n, "generators": v.generator_lists()}
        elif isinstance(v, SimplicialComplex):
            v = {"n": v.n, "facets": v.facet_lists()}
        parts.append(f"{k}={v}")
    return ", ".join(parts)


def _chain_pair(rng: random.Random, n: int) -> tuple[SquareFreeIdeal, SquareFreeIdeal]:
    """Random ``I_1 <= I_2``, both proper."""
    i1 = random_ideal(rng, n, 3)
    i2 = i1 + random_ideal(rng, n, 3)
    return i1, i2


def check_chi_additivity(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    a = random_ideal(rng, n, 3)
    b = random_ideal(rng, n, 3)
    lhs = chi_engine(a, fld) + chi_engine(b, fld)
    rhs = chi_engine(a + b, fld) + chi_engine(a & b, fld)
    res.trials += 1
    if lhs != rhs:
        res.violations.append(f"{lhs} != {rhs}: " + _repro(I=a, J=b, field=str(fld)))


def check_chi_agreement(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    cx = random_complex(rng, n)
    ideal = stanley_reisner_ideal(cx)
    vals = (chi_engine(ideal, fld), chi_faces(cx), chi_inclusion_exclusion(ideal, "auto"))
    res.trials += 1
    if len(set(vals)) != 1:
        res.violations.append(f"engine/faces/ie = {vals}: " + _repro(complex=cx, field=str(fld)))


def check_curve_formula(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    # a one-dimensional ring: the complex is a set of isolated vertices
    verts = [v for v in range(n) if rng.random() < 0.6] or [rng.randrange(n)]
    cx = SimplicialComplex(n, tuple(1 << v for v in verts))
    ideal = stanley_reisner_ideal(cx)
    lam = lyubeznik_numbers(ideal, fld)[1]
    parts = [lyubeznik_numbers(SquareFreeIdeal.prime(n, p), fld)[1] for p in minimal_primes(ideal)]
    res.trials += 1
    if lam != sum(parts) + len(parts) - 1:
        res.violations.append(f"lambda^1_0={lam}, components {parts}: " + _repro(complex=cx, field=str(fld)))


def check_hypersurface(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    ell = rng.randint(1, n)
    ideal = SquareFreeIdeal(n, (from_vertices(range(1, ell + 1)),))
    lam = lyubeznik_numbers(ideal, fld)[n - 1]
    res.trials += 1
    if lam != 2**ell - 1 or lam < 2 * ell - 1:
        res.violations.append(f"lambda^(n-1)_0={lam}, ell={ell}: " + _repro(I=ideal, field=str(fld)))


def check_vanishing(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    """The vanishing and nonvanishing statements for a chain ``I_1 <= I_2``."""
    i1, i2 = _chain_pair(rng, n)
    d1, d2 = krull_dim(i1), krull_dim(i2)

    def lam2(a: int, b: int) -> int:
        return generalized_lyubeznik(GLNQuery((i1, i2), (a, b), fld))

    res.trials += 1
    bad = []
    for a in range(n + 1):
        lam1 = generalized_lyubeznik(GLNQuery((i1,), (a,), fld))
        if a > d1 and lam1:
            bad.append(f"(i) lambda^{a}_I1={lam1} with dim R/I1={d1}")
        for b in range(n + 1):
            v = lam2(a, b)
            if a > d1 and v:
                bad.append(f"(i) lambda^({b},{a})={v}")
            if b > d1 and v:
                bad.append(f"(ii) lambda^({b},{a})={v} with dim R/I1={d1}")
            if b > a and v:
                bad.append(f"(iii) lambda^({b},{a})={v}")
    if not generalized_lyubeznik(GLNQuery((i1,), (d1,), fld)):
        bad.append(f"(iv) lambda^{d1}_I1 vanishes")
    if not lam2(d1, d1 - d2):
        bad.append(f"(v) lambda^({d1 - d2},{d1}) vanishes")
    if bad:
        res.violations.append("; ".join(bad) + ": " + _repro(I1=i1, I2=i2, field=str(fld)))


def check_torsion_substitution(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    """``H_J`` and ``H_{I+J}`` agree on the ``I``-torsion module ``H^k_I(S)``."""
    i1 = random_ideal(rng, n, 3)
    j = random_ideal(rng, n, 3)
    a = rng.randint(0, n)
    b = rng.randint(0, n)
    left = iterated_cohomology(CohomologySpec(((i1, a), (j, b))), fld)
    right = iterated_cohomology(CohomologySpec(((i1, a), (i1 + j, b))), fld)
    res.trials += 1
    if graded_dims(left) != graded_dims(right):
        res.violations.append(f"H^{b}_J vs H^{b}_(I+J) on H^{n - a}_I(S): " + _repro(I=i1, J=j, field=str(fld)))


def check_prime_bound(rng: random.Random, n: int, fld: FieldSpec, res: CheckResult) -> None:
    ideal = random_ideal(rng, n, 4)
    lam = lyubeznik_numbers(ideal, Q)
    res.trials += 1
    for j, v in lam.items():
        bound = minimal_prime_bound(ideal, j)
        if v > bound:
            res.violations.append(f"lambda^{j}_0={v} > bound {bound}: " + _repro(I=ideal))


SUITE: list[tuple[str, Callable]] = [
    ("chi additivity under sum and intersection", check_chi_additivity),
    ("chi agreement: engine, faces, inclusion-exclusion", check_chi_agreement),
    ("curve formula for zero-dimensional complexes", check_curve_formula),
    ("monomial hypersurface count", check_hypersurface),
    ("vanishing and nonvanishing on ideal chains", check_vanishing),
    ("torsion substitution H_J = H_(I+J)", check_torsion_substitution),
    ("minimal-prime upper bound (rationals)", check_prime_bound),
]


def property_suite(
    seed: int = 1,
    trials: int = 50,
    n_max: int = 5,
    fields: Sequence[FieldSpec] = (Q, FieldSpec(2)),
) -> PropertyReport:
    """Run every check ``trials`` times on random inputs with ``1 <= n <= n_max``."""
    if not 1 <= n_max <= 8:
        raise SizeCapError("n_max must lie in 1..8")
    checks = []
    for k, (name, fn) in enumerate(SUITE):
        res = CheckResult(name)
        rng = random.Random(f"{seed}:{k}")
        for t in range(trials):
            n = rng.randint(1, n_max)
            fld = fields[t % len(fields)]
            fn(rng, n, fld, res)
        checks.append(res)
    return PropertyReport(seed, trials, n_max, checks)
