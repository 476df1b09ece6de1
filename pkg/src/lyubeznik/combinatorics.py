"""Subsets of [n], simplicial complexes and square-free monomial ideals.

Subsets of ``[n] = {1, ..., n}`` are encoded as integers: vertex ``i`` is
bit ``i - 1``.  Every routine here is a pure function of its inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_VARS = 24


class SizeCapError(ValueError):
    """Raised when an input exceeds a hard size cap."""


def popcount(s: int) -> int:
    return bin(s).count("1")


def full_set(n: int) -> int:
    return (1 << n) - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def elements(s: int) -> list[int]:
    """0-based bit positions of ``s`` in increasing order."""
    out = []
    i = 0
    while s:
        if s & 1:
            out.append(i)
        s >>= 1
        i += 1
    return out


def subsets(s: int) -> Iterator[int]:
    """All subsets of ``s``, in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == s:
            return
        sub = (sub - s) & s


def from_vertices(vertices: Iterable[int]) -> int:
    """Encode 1-based vertex indices."""
    s = 0
    for v in vertices:
        s |= 1 << (v - 1)
    return s


def to_vertices(s: int) -> list[int]:
    return [i + 1 for i in elements(s)]


def set_key(s: int) -> tuple[int, int]:
    """Canonical order: by cardinality, then numeric encoding."""
    return (popcount(s), s)


def minimize(sets: Iterable[int]) -> list[int]:
    """Drop every set containing another; sort canonically."""
    out: list[int] = []
    for s in sorted(set(sets), key=set_key):
        if not any(is_subset(t, s) for t in out):
            out.append(s)
    return out


def maximize(sets: Iterable[int]) -> list[int]:
    """Drop every set contained in another; sort canonically."""
    ordered = sorted(set(sets), key=lambda s: (-popcount(s), s))
    out: list[int] = []
    for s in ordered:
        if not any(is_subset(s, t) for t in out):
            out.append(s)
    return sorted(out, key=set_key)


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_VARS:
        raise SizeCapError(f"n={n} outside 0..{MAX_VARS}")


def _check_sets(n: int, sets: Iterable[int]) -> None:
    bound = full_set(n)
    for s in sets:
        if s < 0 or s & ~bound:
            raise ValueError(f"subset {s:#b} not contained in [{n}]")


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex on ``[n]`` given by its facets.

    ``facets=()`` is the void complex (no faces at all); ``facets=(0,)`` is
    the complex ``{emptyset}`` whose only face is the empty set.
    """

    n: int
    facets: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        _check_sets(self.n, self.facets)
        canon = tuple(maximize(self.facets))
        if canon != tuple(self.facets):
            object.__setattr__(self, "facets", canon)

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(n, tuple(from_vertices(f) for f in facets))

    @classmethod
    def simplex(cls, n: int, vertices: Iterable[int] | None = None) -> "SimplicialComplex":
        face = full_set(n) if vertices is None else from_vertices(vertices)
        return cls(n, (face,))

    @property
    def is_void(self) -> bool:
        return not self.facets

    def contains(self, face: int) -> bool:
        return any(is_subset(face, f) for f in self.facets)

    def faces(self) -> list[int]:
        seen: set[int] = set()
        for f in self.facets:
            seen.update(subsets(f))
        return sorted(seen, key=set_key)

    @property
    def dim(self) -> int | None:
        """Dimension, or ``None`` for the void complex."""
        if self.is_void:
            return None
        return max(popcount(f) for f in self.facets) - 1

    def facet_lists(self) -> list[list[int]]:
        return [to_vertices(f) for f in self.facets]

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        _same_n(self.n, other.n)
        return SimplicialComplex(self.n, self.facets + other.facets)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        _same_n(self.n, other.n)
        return SimplicialComplex(
            self.n, tuple(a & b for a in self.facets for b in other.facets)
        )


@dataclass(frozen=True)
class SquareFreeIdeal:
    """A square-free monomial ideal, stored by the supports of its minimal generators.

    ``gens=()`` is the zero ideal; a generator with empty support is the unit ideal.
    """

    n: int
    gens: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        _check_sets(self.n, self.gens)
        canon = tuple(minimize(self.gens))
        if canon != tuple(self.gens):
            object.__setattr__(self, "gens", canon)

    @classmethod
    def from_generators(cls, n: int, gens: Iterable[Iterable[int]]) -> "SquareFreeIdeal":
        return cls(n, tuple(from_vertices(g) for g in gens))

    @classmethod
    def maximal(cls, n: int) -> "SquareFreeIdeal":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def prime(cls, n: int, variables: int) -> "SquareFreeIdeal":
        """The prime generated by the variables in ``variables`` (a bitmask)."""
        return cls(n, tuple(1 << i for i in elements(variables)))

    @property
    def is_proper(self) -> bool:
        return 0 not in self.gens

    @property
    def is_zero(self) -> bool:
        return not self.gens

    def contains_monomial(self, support: int) -> bool:
        return any(is_subset(g, support) for g in self.gens)

    def generator_lists(self) -> list[list[int]]:
        return [to_vertices(g) for g in self.gens]

    def __add__(self, other: "SquareFreeIdeal") -> "SquareFreeIdeal":
        return ideal_sum(self, other)

    def __and__(self, other: "SquareFreeIdeal") -> "SquareFreeIdeal":
        return ideal_intersection(self, other)


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"vertex counts differ: {a} != {b}")


def _require_proper(ideal: SquareFreeIdeal) -> None:
    if not ideal.is_proper:
        raise ValueError("the unit ideal is not proper")


def f_vector(cx: SimplicialComplex) -> list[int]:
    """Face counts ``[f_-1, f_0, ..., f_dim]``; empty for the void complex."""
    if cx.is_void:
        return []
    counts = [0] * (cx.dim + 2)
    for face in cx.faces():
        counts[popcount(face)] += 1
    return counts


def stanley_reisner_ideal(cx: SimplicialComplex) -> SquareFreeIdeal:
    """Minimal non-faces of ``cx``.  The void complex gives the unit ideal."""
    if cx.is_void:
        return SquareFreeIdeal(cx.n, (0,))
    # a minimal non-face is a non-face all of whose codimension-one subsets are faces
    nonfaces = []
    for s in range(1 << cx.n):
        if cx.contains(s):
            continue
        if all(cx.contains(s & ~(1 << i)) for i in elements(s)):
            nonfaces.append(s)
    return SquareFreeIdeal(cx.n, tuple(nonfaces))


def complex_of_ideal(ideal: SquareFreeIdeal) -> SimplicialComplex:
    _require_proper(ideal)
    faces = [s for s in range(1 << ideal.n) if not ideal.contains_monomial(s)]
    return SimplicialComplex(ideal.n, tuple(faces))


def minimal_primes(ideal: SquareFreeIdeal) -> list[int]:
    """Variable sets of the minimal primes: complements of the facets."""
    cx = complex_of_ideal(ideal)
    full = full_set(ideal.n)
    return sorted((full & ~f for f in cx.facets), key=set_key)


def height(ideal: SquareFreeIdeal) -> int:
    return min(popcount(p) for p in minimal_primes(ideal))


def krull_dim(ideal: SquareFreeIdeal) -> int:
    """Krull dimension of S/I."""
    return ideal.n - height(ideal)


def ideal_sum(a: SquareFreeIdeal, b: SquareFreeIdeal) -> SquareFreeIdeal:
    _same_n(a.n, b.n)
    return SquareFreeIdeal(a.n, a.gens + b.gens)


def ideal_intersection(a: SquareFreeIdeal, b: SquareFreeIdeal) -> SquareFreeIdeal:
    _same_n(a.n, b.n)
    return SquareFreeIdeal(a.n, tuple(g | h for g in a.gens for h in b.gens))


def intersect_primes(n: int, primes: Sequence[int]) -> SquareFreeIdeal:
    """Intersection of coordinate primes given by variable sets."""
    out = SquareFreeIdeal(n, (0,))
    for p in primes:
        out = ideal_intersection(out, SquareFreeIdeal.prime(n, p))
    return out


def antichains(n: int) -> Iterator[tuple[int, ...]]:
    """Every antichain of subsets of [n] (facet lists of all complexes, void included)."""
    universe = sorted(range(1 << n), key=set_key)

    def extend(start: int, chosen: list[int]) -> Iterator[tuple[int, ...]]:
        yield tuple(chosen)
        for k in range(start, len(universe)):
            s = universe[k]
            if any(is_subset(c, s) or is_subset(s, c) for c in chosen):
                continue
            chosen.append(s)
            yield from extend(k + 1, chosen)
            chosen.pop()

    yield from extend(0, [])


def all_complexes(n: int) -> Iterator[SimplicialComplex]:
    """Every non-void simplicial complex on [n]."""
    for facets in antichains(n):
        if facets:
            yield SimplicialComplex(n, facets)


def random_complex(
    rng: random.Random, n: int, max_facets: int = 5, max_gens: int | None = None
) -> SimplicialComplex:
    """Sample a non-void complex on ``[n]``.

    Draws ``k`` facets uniformly from the subsets of ``[n]`` and rejects the
    draw unless they form an antichain.  With ``max_gens`` set, complexes whose
    Stanley-Reisner ideal needs more generators are rejected too.
    """
    while True:
        k = rng.randint(1, max_facets)
        draw = [rng.getrandbits(n) if n else 0 for _ in range(k)]
        if len(set(draw)) != k:
            continue
        if any(is_subset(a, b) for a, b in combinations(draw, 2)) or any(
            is_subset(b, a) for a, b in combinations(draw, 2)
        ):
            continue
        cx = SimplicialComplex(n, tuple(draw))
        if max_gens is not None and len(stanley_reisner_ideal(cx).gens) > max_gens:
            continue
        return cx


def random_ideal(
    rng: random.Random, n: int, max_gens: int = 4, max_support: int | None = None
) -> SquareFreeIdeal:
    """A random proper square-free monomial ideal (possibly zero)."""
    k = rng.randint(0, max_gens)
    gens = []
    for _ in range(k):
        s = 0
        while s == 0:
            s = rng.getrandbits(n) if n else 0
            if n == 0:
                break
            if max_support is not None and popcount(s) > max_support:
                s = 0
        if s:
            gens.append(s)
    return SquareFreeIdeal(n, tuple(gens))
