"""Exact dense linear algebra over the rationals and prime fields.

Elimination always pivots on the first nonzero entry in column order, so
every basis returned here is a deterministic function of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, isqrt(p) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``FieldSpec()`` is Q, ``FieldSpec(p)`` is GF(p)."""

    p: int = 0

    def __post_init__(self) -> None:
        if self.p:
            if not 2 <= self.p < 2**31 or not _is_prime(self.p):
                raise ValueError(f"characteristic must be a prime below 2**31, got {self.p}")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> int | Fraction:
        """Canonical representative of ``x`` in this field."""
        if self.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``q`` or ``fp:<p>``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return cls()
        if t.startswith("fp:"):
            return cls(int(t[3:]))
        raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")

    def __str__(self) -> str:
        return f"fp:{self.p}" if self.p else "q"


Q = FieldSpec()
GF2 = FieldSpec(2)


class ExactMatrix:
    """Immutable ``rows x cols`` matrix with entries in a :class:`FieldSpec`."""

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data: Iterable[Iterable] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            zero = field(0)
            self._data = tuple((zero,) * cols for _ in range(rows))
        else:
            self._data = tuple(tuple(field(x) for x in row) for row in data)
            if len(self._data) != rows or any(len(r) != cols for r in self._data):
                raise ValueError("data does not match the declared shape")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def _trusted(cls, field: FieldSpec, rows: int, cols: int, data: tuple) -> "ExactMatrix":
        m = object.__new__(cls)
        m.field, m.rows, m.cols, m._data = field, rows, cols, data
        return m

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: FieldSpec, k: int) -> "ExactMatrix":
        one, zero = field(1), field(0)
        return cls._trusted(
            field, k, k, tuple(tuple(one if i == j else zero for j in range(k)) for i in range(k))
        )

    @classmethod
    def from_columns(cls, field: FieldSpec, rows: int, columns: Sequence[Sequence]) -> "ExactMatrix":
        return cls(field, rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def columns(self) -> list[list]:
        return [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._trusted(self.field, self.cols, self.rows, tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.field, self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field}, {self.rows}x{self.cols}, {self.tolist()!r})"

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.p
        cols_b = list(zip(*other._data)) if other.rows else [() for _ in range(other.cols)]
        zero = self.field(0)
        out = []
        for r in self._data:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for c in cols_b:
                s = zero
                for k, x in nz:
                    y = c[k]
                    if y:
                        s += x * y
                row.append(s % p if p else s)
            out.append(tuple(row))
        return ExactMatrix._trusted(self.field, self.rows, other.cols, tuple(out))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        p = self.field.p
        data = tuple(
            tuple(((a + b) % p if p else a + b) for a, b in zip(r, s))
            for r, s in zip(self._data, other._data)
        )
        return ExactMatrix._trusted(self.field, self.rows, self.cols, data)

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        p = self.field.p
        data = tuple(tuple(((c * a) % p if p else c * a) for a in r) for r in self._data)
        return ExactMatrix._trusted(self.field, self.rows, self.cols, data)

    def select_rows(self, idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._trusted(self.field, len(idx), self.cols, tuple(self._data[i] for i in idx))

    def select_columns(self, idx: Sequence[int]) -> "ExactMatrix":
        data = tuple(tuple(r[j] for j in idx) for r in self._data)
        return ExactMatrix._trusted(self.field, self.rows, len(idx), data)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        data = tuple(a + b for a, b in zip(self._data, other._data))
        return ExactMatrix._trusted(self.field, self.rows, self.cols + other.cols, data)


def block_matrix(field: FieldSpec, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> ExactMatrix:
    """Assemble a matrix from ``{(block_row, block_col): ExactMatrix}``; missing blocks are zero."""
    zero = field(0)
    r_off = [0]
    for s in row_sizes:
        r_off.append(r_off[-1] + s)
    c_off = [0]
    for s in col_sizes:
        c_off.append(c_off[-1] + s)
    data = [[zero] * c_off[-1] for _ in range(r_off[-1])]
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {blk.shape}")
        r0, c0 = r_off[bi], c_off[bj]
        for i in range(blk.rows):
            row = data[r0 + i]
            for j, x in enumerate(blk.row(i)):
                if x:
                    row[c0 + j] = x
    return ExactMatrix._trusted(field, r_off[-1], c_off[-1], tuple(tuple(r) for r in data))


def _echelon(a: ExactMatrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    f = a.field
    p = f.p
    rows = [list(r) for r in a._data]
    pivots: list[int] = []
    rank = 0
    nrows = len(rows)
    for col in range(a.cols):
        piv = next((i for i in range(rank, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = f.inv(prow[col])
        if inv != 1:
            prow = [(x * inv) % p if p else x * inv for x in prow]
            rows[rank] = prow
        nz = [(j, x) for j, x in enumerate(prow) if x and j >= col]
        for i in range(nrows):
            if i == rank:
                continue
            c = rows[i][col]
            if not c:
                continue
            r = rows[i]
            for j, x in nz:
                v = r[j] - c * x
                r[j] = v % p if p else v
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rows[:rank], pivots


def rank(a: ExactMatrix) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    # eliminate along the shorter side
    if a.cols > a.rows:
        a = a.transpose()
    return len(_echelon(a)[1])


def rref(a: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    rows, piv = _echelon(a)
    return ExactMatrix._trusted(a.field, len(rows), a.cols, tuple(tuple(r) for r in rows)), piv


def kernel_basis(a: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the null space of ``a``."""
    f = a.field
    p = f.p
    rows, piv = _echelon(a)
    free = [j for j in range(a.cols) if j not in set(piv)]
    one, zero = f(1), f(0)
    cols = []
    for fj in free:
        v = [zero] * a.cols
        v[fj] = one
        for r, pc in zip(rows, piv):
            x = r[fj]
            if x:
                v[pc] = (-x) % p if p else -x
        cols.append(v)
    return ExactMatrix.from_columns(f, a.cols, cols) if cols else ExactMatrix.zeros(f, a.cols, 0)


def column_basis(a: ExactMatrix) -> ExactMatrix:
    """A basis of the column space, chosen among the columns of ``a``."""
    _, piv = _echelon(a)
    return a.select_columns(piv)


def left_inverse(c: ExactMatrix) -> ExactMatrix:
    """``L`` with ``L @ c == I`` for ``c`` of full column rank."""
    k = c.cols
    if k == 0:
        return ExactMatrix.zeros(c.field, 0, c.rows)
    # pick k independent rows of c, invert that square block
    _, rows_idx = _echelon(c.transpose())
    if len(rows_idx) != k:
        raise ValueError("matrix does not have full column rank")
    sq = c.select_rows(rows_idx)
    aug = sq.hstack(ExactMatrix.identity(c.field, k))
    red, _ = _echelon(aug)
    inv_rows = [r[k:] for r in red]
    zero = c.field(0)
    data = []
    for i in range(k):
        row = [zero] * c.rows
        for t, ri in enumerate(rows_idx):
            row[ri] = inv_rows[i][t]
        data.append(tuple(row))
    return ExactMatrix._trusted(c.field, k, c.rows, tuple(data))


class NotAComplexError(ValueError):
    """The composite of consecutive differentials is nonzero."""


class NotAChainMapError(ValueError):
    """A map does not send cycles to cycles or boundaries to boundaries."""


@dataclass(frozen=True)
class CohomologyData:
    """Cohomology of ``C_in --d_in--> C --d_out--> C_out`` at the middle term.

    ``reps`` holds cocycles lifting a basis of ker/im as columns; ``projector``
    sends a cocycle to its coordinates in that basis modulo boundaries.
    """

    dim: int
    reps: ExactMatrix
    projector: ExactMatrix
    d_in: ExactMatrix
    d_out: ExactMatrix

    @property
    def ambient(self) -> int:
        return self.reps.rows


def cohomology_data(d_in: ExactMatrix, d_out: ExactMatrix) -> CohomologyData:
    if d_in.rows != d_out.cols:
        raise ValueError(f"incompatible shapes {d_in.shape} and {d_out.shape}")
    if d_in.cols and d_out.rows and not (d_out @ d_in).is_zero():
        raise NotAComplexError("d_out @ d_in != 0")
    f = d_in.field
    n = d_in.rows
    z = kernel_basis(d_out)
    b = column_basis(d_in)
    # extend the boundary basis to a basis of the cycles; pivots past b are reps
    both = b.hstack(z)
    _, piv = _echelon(both)
    extra = [j - b.cols for j in piv if j >= b.cols]
    reps = z.select_columns(extra)
    basis = b.hstack(reps)
    linv = left_inverse(basis) if basis.cols else ExactMatrix.zeros(f, 0, n)
    projector = linv.select_rows(list(range(b.cols, basis.cols)))
    return CohomologyData(reps.cols, reps, projector, d_in, d_out)


def induced_map(chain: ExactMatrix, source: CohomologyData, target: CohomologyData) -> ExactMatrix:
    """Matrix of the map on cohomology induced by ``chain`` in the representative bases."""
    if chain.shape != (target.ambient, source.ambient):
        raise ValueError(f"chain map shape {chain.shape} does not match {target.ambient}x{source.ambient}")
    f = chain.field
    if source.dim == 0:
        return ExactMatrix.zeros(f, target.dim, 0)
    image = chain @ source.reps
    if target.d_out.rows and not (target.d_out @ image).is_zero():
        raise NotAChainMapError("image of a cocycle is not a cocycle")
    if target.dim == 0:
        return ExactMatrix.zeros(f, 0, source.dim)
    if source.d_in.cols:
        bd = chain @ source.d_in
        if (target.d_out.rows and not (target.d_out @ bd).is_zero()) or not (target.projector @ bd).is_zero():
            raise NotAChainMapError("image of a boundary is not a boundary")
    return target.projector @ image
