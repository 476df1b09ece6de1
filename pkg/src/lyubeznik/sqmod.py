"""Skeletons of straight modules and their local cohomology.

A skeleton records a Z^n-graded module that is determined by its pieces in
the degrees ``-F`` for ``F`` a subset of ``[n]``: ``dim_F`` is the dimension
of the piece in degree ``-F`` and ``drop(F, i)`` is multiplication by ``x_i``
from degree ``-F`` to ``-F + e_i``.  The piece in an arbitrary degree ``b``
is the one at ``F = {i : b_i < 0}``.  The base object is the polynomial ring
itself, concentrated at ``F = {}``.

Local cohomology is computed along one of two exact routes:

``cech``
    the Cech complex on the generators of ``I``, degree by degree.  At each
    ``F`` the generators whose restriction to ``F`` contains the restriction
    of an earlier generator are quotiented away; the discarded summands form
    an acyclic subcomplex, and the discarded set only grows as ``F`` shrinks,
    so multiplication maps descend to the reduced complexes.
``injective``
    ``I``-torsion of the Koszul injective coresolution of the skeleton.  Its
    terms are the indecomposable injectives ``E_X`` (nonzero at ``F`` iff
    ``X`` is a subset of ``F``), and ``E_X`` is ``I``-torsion exactly when ``X``
    meets every generator.  Size depends on ``n``, not on the number of
    generators, and multiplication maps are coordinate projections.

``auto`` picks whichever complex is smaller.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .combinatorics import (
    MAX_VARS,
    SizeCapError,
    SquareFreeIdeal,
    elements,
    is_subset,
    popcount,
    subsets,
    to_vertices,
)
from .linalg import (
    CohomologyData,
    ExactMatrix,
    FieldSpec,
    block_matrix,
    cohomology_data,
    induced_map,
    rank,
)

METHODS = ("auto", "cech", "injective")

# hard limits on the work one local cohomology call may attempt
MAX_SCAN = 1 << 24
MAX_BLOCKS = 4_000_000


class ModuleSkeleton:
    """Finite presentation of a straight module: pieces at ``-F`` plus drop maps.

    ``dims`` lists only nonzero pieces; ``drops`` is keyed by ``(F, i)`` with
    ``i`` a 0-based variable index in ``F``.  Missing drops are zero.
    """

    __slots__ = ("n", "field", "_dims", "_drops", "_paths")

    def __init__(
        self,
        n: int,
        field: FieldSpec,
        dims: Mapping[int, int],
        drops: Mapping[tuple[int, int], ExactMatrix] | None = None,
    ):
        if not 0 <= n <= MAX_VARS:
            raise SizeCapError(f"n={n} outside 0..{MAX_VARS}")
        self.n = n
        self.field = field
        self._dims = {F: d for F, d in dims.items() if d}
        self._drops: dict[tuple[int, int], ExactMatrix] = {}
        for (F, i), m in (drops or {}).items():
            src, tgt = self.dim(F), self.dim(F & ~(1 << i))
            if not (F >> i) & 1:
                raise ValueError(f"variable {i + 1} not in degree {to_vertices(F)}")
            if m.shape != (tgt, src):
                raise ValueError(f"drop({to_vertices(F)}, {i + 1}) has shape {m.shape}, expected {(tgt, src)}")
            if src and tgt:
                self._drops[(F, i)] = m
        self._paths: dict[tuple[int, int], ExactMatrix] = {}

    def dim(self, F: int) -> int:
        return self._dims.get(F, 0)

    @property
    def support(self) -> list[int]:
        return sorted(self._dims)

    def drop(self, F: int, i: int) -> ExactMatrix:
        m = self._drops.get((F, i))
        if m is None:
            return ExactMatrix.zeros(self.field, self.dim(F & ~(1 << i)), self.dim(F))
        return m

    def drop_path(self, F: int, G: int) -> ExactMatrix:
        """Multiplication by ``x^(F - G)`` from degree ``-F`` to ``-G``, for ``G`` inside ``F``."""
        key = (F, G)
        hit = self._paths.get(key)
        if hit is not None:
            return hit
        if not is_subset(G, F):
            raise ValueError("drop_path needs G inside F")
        if F == G:
            out = ExactMatrix.identity(self.field, self.dim(F))
        else:
            i = elements(F & ~G)[0]
            out = self.drop_path(F & ~(1 << i), G) @ self.drop(F, i)
        self._paths[key] = out
        return out

    @property
    def drops(self) -> dict[tuple[int, int], ExactMatrix]:
        return dict(self._drops)

    def __repr__(self) -> str:
        body = ", ".join(f"{to_vertices(F)}: {d}" for F, d in sorted(self._dims.items()))
        return f"ModuleSkeleton(n={self.n}, {self.field}, {{{body}}})"


@dataclass(frozen=True)
class Validation:
    ok: bool
    violation: tuple[int, int, int] | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def unit_module(n: int, field: FieldSpec) -> ModuleSkeleton:
    """Skeleton of the polynomial ring ``S = K[x_1..x_n]``."""
    return ModuleSkeleton(n, field, {0: 1})


def zero_module(n: int, field: FieldSpec) -> ModuleSkeleton:
    return ModuleSkeleton(n, field, {})


def graded_dims(m: ModuleSkeleton) -> dict[int, int]:
    """``dim_F`` for every subset ``F`` of ``[n]``, zeros included."""
    return {F: m.dim(F) for F in range(1 << m.n)}


def length(m: ModuleSkeleton) -> int:
    return sum(m.dim(F) for F in m.support)


def validate(m: ModuleSkeleton) -> Validation:
    """Check that drop maps commute: drop(F-i, j) drop(F, i) == drop(F-j, i) drop(F, j)."""
    for F in m.support:
        for i, j in combinations(elements(F), 2):
            a = m.drop(F & ~(1 << i), j) @ m.drop(F, i)
            b = m.drop(F & ~(1 << j), i) @ m.drop(F, j)
            if a != b:
                return Validation(False, (F, i, j), f"drops {i + 1}, {j + 1} do not commute at {to_vertices(F)}")
    return Validation(True)


def localize(m: ModuleSkeleton, G: int) -> ModuleSkeleton:
    """Skeleton of ``M`` with the variables in ``G`` inverted."""
    dims: dict[int, int] = {}
    drops: dict[tuple[int, int], ExactMatrix] = {}
    for X in m.support:
        if X & G:
            continue
        for H in subsets(G):
            dims[X | H] = m.dim(X)
    for F in dims:
        base = F & ~G
        for i in elements(F):
            if (G >> i) & 1:
                drops[(F, i)] = ExactMatrix.identity(m.field, dims[F])
            elif m.dim(base & ~(1 << i)):
                drops[(F, i)] = m.drop(base, i)
    return ModuleSkeleton(m.n, m.field, dims, drops)


# --- per-degree complexes ---------------------------------------------------


class _LocalComplex:
    """The complex computing ``H^*_I(M)`` in degree ``-F``, one list of blocks per slot."""

    def __init__(self, field: FieldSpec, blocks: dict[int, list[tuple[object, int]]]):
        self.field = field
        self.blocks = blocks
        self.index = {t: {key: k for k, (key, _) in enumerate(bl)} for t, bl in blocks.items()}

    def size(self, t: int) -> int:
        return sum(d for _, d in self.blocks.get(t, ()))

    def sizes(self, t: int) -> list[int]:
        return [d for _, d in self.blocks.get(t, ())]

    def differential(self, t: int) -> ExactMatrix:
        src = self.blocks.get(t, [])
        tgt_index = self.index.get(t + 1, {})
        parts = {}
        for a, (key, _) in enumerate(src):
            for tkey, mat in self._arrows(key):
                b = tgt_index.get(tkey)
                if b is not None:
                    parts[(b, a)] = mat
        return block_matrix(self.field, self.sizes(t + 1), self.sizes(t), parts)

    def max_slot(self) -> int:
        return max(self.blocks) if self.blocks else -1

    def _arrows(self, key):
        raise NotImplementedError


class _CechComplex(_LocalComplex):
    def __init__(self, m: ModuleSkeleton, gens: Sequence[int], F: int, kept: Sequence[int]):
        self.m = m
        self.gens = gens
        self.F = F
        self.kept = tuple(kept)
        self.restr = {k: gens[k] & F for k in kept}
        blocks: dict[int, list] = {}
        for t in range(len(kept) + 1):
            row = []
            for T in combinations(self.kept, t):
                d = m.dim(F & ~self.hull(T))
                if d:
                    row.append((T, d))
            if row:
                blocks[t] = row
        super().__init__(m.field, blocks)

    def hull(self, T: Iterable[int]) -> int:
        h = 0
        for k in T:
            h |= self.restr[k]
        return h

    def _arrows(self, T):
        src = self.F & ~self.hull(T)
        for g in self.kept:
            if g in T:
                continue
            U = tuple(sorted(T + (g,)))
            tgt = src & ~self.restr[g]
            if not self.m.dim(tgt):
                continue
            sign = -1 if sum(1 for k in T if k < g) % 2 else 1
            mat = self.m.drop_path(src, tgt)
            yield U, (mat if sign > 0 else -mat)

    def chain_map(self, t: int, other: "_CechComplex", i: int) -> ExactMatrix:
        """Multiplication by ``x_i`` into the complex at ``F - {i}``."""
        parts = {}
        tgt_index = other.index.get(t, {})
        for a, (T, _) in enumerate(self.blocks.get(t, [])):
            b = tgt_index.get(T)
            if b is None:
                continue
            src = self.F & ~self.hull(T)
            if (src >> i) & 1:
                parts[(b, a)] = self.m.drop(src, i)
            else:
                parts[(b, a)] = ExactMatrix.identity(self.field, self.m.dim(src))
        return block_matrix(self.field, other.sizes(t), self.sizes(t), parts)


class _InjectiveComplex(_LocalComplex):
    def __init__(self, m: ModuleSkeleton, covers: Sequence[int], F: int):
        self.m = m
        self.F = F
        blocks: dict[int, list] = {}
        for X in covers:
            if not is_subset(X, F):
                continue
            for W in subsets(X):
                d = m.dim(W)
                if d:
                    blocks.setdefault(popcount(X & ~W), []).append(((X, W), d))
        for t in blocks:
            blocks[t].sort(key=lambda e: e[0])
        super().__init__(m.field, blocks)

    def _arrows(self, key):
        X, W = key
        free = X & ~W
        for u in elements(self.F & ~X):
            sign = -1 if popcount(free & ((1 << u) - 1)) % 2 else 1
            mat = ExactMatrix.identity(self.field, self.m.dim(W))
            yield (X | (1 << u), W), (mat if sign > 0 else -mat)
        for w in elements(W):
            tgt = W & ~(1 << w)
            if not self.m.dim(tgt):
                continue
            sign = 1 if popcount(free & ((1 << w) - 1)) % 2 else -1
            mat = self.m.drop(W, w)
            yield (X, tgt), (mat if sign > 0 else -mat)

    def chain_map(self, t: int, other: "_InjectiveComplex", i: int) -> ExactMatrix:
        parts = {}
        tgt_index = other.index.get(t, {})
        for a, (key, d) in enumerate(self.blocks.get(t, [])):
            b = tgt_index.get(key)
            if b is not None:
                parts[(b, a)] = ExactMatrix.identity(self.field, d)
        return block_matrix(self.field, other.sizes(t), self.sizes(t), parts)


def _covers(ideal: SquareFreeIdeal) -> list[int]:
    """Sets of variables meeting every generator (the primes containing ``I``)."""
    return [X for X in range(1 << ideal.n) if all(X & g for g in ideal.gens)]


def _kept(gens: Sequence[int], F: int) -> list[int]:
    restr = [g & F for g in gens]
    return [k for k in range(len(gens)) if not any(is_subset(restr[j], restr[k]) for j in range(k))]


class _Engine:
    """Builds and caches the per-degree complexes for one ``(M, I)`` pair."""

    def __init__(
        self, m: ModuleSkeleton, ideal: SquareFreeIdeal, method: str, generators: Sequence[int] | None = None
    ):
        if method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if ideal.n != m.n:
            raise ValueError("ideal and module live over different polynomial rings")
        if not ideal.is_proper:
            raise ValueError("local cohomology needs a proper ideal")
        self.m = m
        self.ideal = ideal
        self.gens = list(ideal.gens if generators is None else generators)
        if (len(self.gens) + len(m.support)) << m.n > MAX_SCAN:
            raise SizeCapError(f"n={m.n} with {len(self.gens)} generators is beyond the engine's scan limit")
        self.covers = _covers(ideal)
        self.degrees = self._relevant_degrees()
        choice = self._choose()
        self.method = choice if method == "auto" else method
        self._cache: dict[int, _LocalComplex] = {}

    def _relevant_degrees(self) -> list[int]:
        # H^*_I(M) lives on F covering every generator and containing part of supp(M)
        cover_set = set(self.covers)
        out = []
        for F in range(1 << self.m.n):
            if F in cover_set and any(is_subset(W, F) for W in self.m.support):
                out.append(F)
        return out

    def _choose(self) -> str:
        n = self.m.n
        cech = 0
        for F in self.degrees:
            cech += 1 << len(_kept(self.gens, F))
        # number of (X, W) blocks summed over F: each X sits in 2^(n-|X|) degrees
        inj = 0
        support = self.m.support
        for X in self.covers:
            c = sum(1 for W in support if is_subset(W, X))
            inj += c << (n - popcount(X))
        if min(cech, inj) > MAX_BLOCKS:
            raise SizeCapError(f"complexes would need about {min(cech, inj)} blocks (limit {MAX_BLOCKS})")
        return "cech" if cech <= inj else "injective"

    def complex_at(self, F: int) -> _LocalComplex:
        cx = self._cache.get(F)
        if cx is None:
            if self.method == "cech":
                cx = _CechComplex(self.m, self.gens, F, _kept(self.gens, F))
            else:
                cx = _InjectiveComplex(self.m, self.covers, F)
            self._cache[F] = cx
        return cx

    def release(self, F: int) -> None:
        self._cache.pop(F, None)


def _check_method_inputs(m: ModuleSkeleton, ideal: SquareFreeIdeal) -> None:
    if ideal.n != m.n:
        raise ValueError("ideal and module live over different polynomial rings")
    if not ideal.is_proper:
        raise ValueError("local cohomology needs a proper ideal")


def local_cohomology(
    m: ModuleSkeleton,
    ideal: SquareFreeIdeal,
    j: int,
    method: str = "auto",
    with_maps: bool = True,
    generators: Sequence[int] | None = None,
) -> ModuleSkeleton:
    """Skeleton of ``H^j_I(M)``.

    With ``with_maps=False`` only the graded dimensions are computed and the
    returned skeleton has no drop maps.  ``generators`` replaces the minimal
    generators on the Cech route by any other generating set of ``I``.
    """
    _check_method_inputs(m, ideal)
    if j < 0:
        return zero_module(m.n, m.field)
    if ideal.is_zero:
        return m if j == 0 else zero_module(m.n, m.field)
    if generators is not None:
        generators = list(generators)
        if SquareFreeIdeal(ideal.n, tuple(generators)) != ideal:
            raise ValueError("generators do not generate the ideal")
    eng = _Engine(m, ideal, method, generators)
    data: dict[int, CohomologyData] = {}
    dims: dict[int, int] = {}
    for F in eng.degrees:
        cx = eng.complex_at(F)
        if not cx.size(j):
            if not with_maps:
                eng.release(F)
            continue
        if with_maps:
            cd = cohomology_data(cx.differential(j - 1), cx.differential(j))
            if cd.dim:
                data[F] = cd
                dims[F] = cd.dim
        else:
            d = cx.size(j) - rank(cx.differential(j)) - rank(cx.differential(j - 1))
            if d:
                dims[F] = d
            eng.release(F)
    drops: dict[tuple[int, int], ExactMatrix] = {}
    if with_maps:
        for F in sorted(data):
            for i in elements(F):
                G = F & ~(1 << i)
                if G not in data:
                    continue
                chain = eng.complex_at(F).chain_map(j, eng.complex_at(G), i)
                drops[(F, i)] = induced_map(chain, data[F], data[G])
    return ModuleSkeleton(m.n, m.field, dims, drops)


def cech_cohomology(
    m: ModuleSkeleton, ideal: SquareFreeIdeal, j: int, generators: Sequence[int] | None = None
) -> ModuleSkeleton:
    """``H^j_I(M)`` from the Cech complex on the generators of ``I`` (or on ``generators``)."""
    return local_cohomology(m, ideal, j, method="cech", generators=generators)


def local_cohomology_dims(
    m: ModuleSkeleton, ideal: SquareFreeIdeal, method: str = "auto"
) -> dict[int, dict[int, int]]:
    """Nonzero graded dimensions of ``H^j_I(M)`` for every ``j``: ``{j: {F: dim}}``."""
    _check_method_inputs(m, ideal)
    if ideal.is_zero:
        return {0: {F: m.dim(F) for F in m.support}} if m.support else {}
    eng = _Engine(m, ideal, method)
    out: dict[int, dict[int, int]] = {}
    for F in eng.degrees:
        cx = eng.complex_at(F)
        top = cx.max_slot()
        ranks = {t: rank(cx.differential(t)) for t in range(top + 1)}
        for t in range(top + 1):
            d = cx.size(t) - ranks[t] - ranks.get(t - 1, 0)
            if d:
                out.setdefault(t, {})[F] = d
        eng.release(F)
    return out


def cohomology_lengths(m: ModuleSkeleton, ideal: SquareFreeIdeal, method: str = "auto") -> dict[int, int]:
    """``{j: length H^j_I(M)}`` over the nonzero slots."""
    return {j: sum(d.values()) for j, d in sorted(local_cohomology_dims(m, ideal, method).items())}


@dataclass(frozen=True)
class CohomologySpec:
    """Stages ``(ideal, degree)``, innermost first.

    The first degree is the index ``i_1`` of a generalized Lyubeznik number
    and is applied as cohomological degree ``n - i_1``; later degrees are
    used as given.
    """

    stages: tuple[tuple[SquareFreeIdeal, int], ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("at least one stage is required")
        n = self.stages[0][0].n
        for ideal, deg in self.stages:
            if ideal.n != n:
                raise ValueError("all ideals must share n")
            if deg < 0:
                raise ValueError("degrees must be natural numbers")

    @property
    def n(self) -> int:
        return self.stages[0][0].n

    def cohomological_degrees(self) -> list[int]:
        first = self.n - self.stages[0][1]
        return [first] + [d for _, d in self.stages[1:]]


def iterated_cohomology(
    spec: CohomologySpec, field: FieldSpec, method: str = "auto", final_maps: bool = True
) -> ModuleSkeleton:
    """``H^{i_s}_{I_s} ... H^{n - i_1}_{I_1}(S)`` as a skeleton."""
    m = unit_module(spec.n, field)
    degs = spec.cohomological_degrees()
    last = len(degs) - 1
    for k, ((ideal, _), j) in enumerate(zip(spec.stages, degs)):
        m = local_cohomology(m, ideal, j, method=method, with_maps=final_maps or k < last)
        if not m.support:
            break
    return m
