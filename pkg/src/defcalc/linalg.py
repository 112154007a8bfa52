"""Exact sparse linear algebra over the rationals.

Matrices are stored as row dictionaries ``{row: {col: Fraction}}`` with no
stored zeros.  Elimination is Gauss-Jordan with a Markowitz pivot rule; ties
are broken by lowest row index and then lowest column index, so every result
(rank profile, kernel basis, particular solution) is reproducible bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

Vector = dict  # sparse vector: index -> Fraction


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def fraction_str(value: Fraction) -> str:
    value = to_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def vec_add(target: dict, source: Mapping, scale=1) -> dict:
    """In-place ``target += scale * source`` dropping zeros."""
    for key, val in source.items():
        new = target.get(key, 0) + scale * val
        if new:
            target[key] = new
        else:
            target.pop(key, None)
    return target


def vec_scale(vec: Mapping, scale) -> dict:
    if not scale:
        return {}
    return {k: scale * v for k, v in vec.items()}


def dense(vec: Mapping[int, Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for k, v in vec.items():
        out[k] = v
    return out


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    data: Mapping[int, Mapping[int, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for r, row in self.data.items():
            if not 0 <= r < self.rows:
                raise IndexError(f"row index {r} out of range for {self.rows} rows")
            kept = {}
            for c, v in row.items():
                if not 0 <= c < self.cols:
                    raise IndexError(f"column index {c} out of range for {self.cols} columns")
                v = to_fraction(v)
                if v:
                    kept[c] = v
            if kept:
                clean[r] = kept
        object.__setattr__(self, "data", clean)

    # construction helpers
    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, object]]):
        data: dict[int, dict[int, Fraction]] = {}
        for r, c, v in entries:
            row = data.setdefault(r, {})
            row[c] = row.get(c, 0) + to_fraction(v)
        return cls(rows, cols, data)

    @classmethod
    def from_dense(cls, rows: list[list]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(rows)})

    @classmethod
    def from_columns(cls, rows: int, columns: list[Mapping[int, Fraction]]) -> "SparseMatrix":
        data: dict[int, dict[int, Fraction]] = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    data.setdefault(r, {})[c] = v
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    def entries(self) -> list[tuple[int, int, Fraction]]:
        return sorted((r, c, v) for r, row in self.data.items() for c, v in row.items())

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.data.values())

    def to_dense(self) -> list[list[Fraction]]:
        return [dense(self.data.get(r, {}), self.cols) for r in range(self.rows)]

    def column(self, c: int) -> dict[int, Fraction]:
        return {r: row[c] for r, row in self.data.items() if c in row}

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for r, row in self.data.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def transpose(self) -> "SparseMatrix":
        data: dict[int, dict[int, Fraction]] = {}
        for r, row in self.data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseMatrix(self.cols, self.rows, data)

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for r, row in self.data.items():
            s = sum((v * vec[c] for c, v in row.items() if c in vec), Fraction(0))
            if s:
                out[r] = s
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        data: dict[int, dict[int, Fraction]] = {}
        for r, row in self.data.items():
            acc: dict[int, Fraction] = {}
            for k, v in row.items():
                orow = other.data.get(k)
                if orow:
                    vec_add(acc, orow, v)
            if acc:
                data[r] = acc
        return SparseMatrix(self.rows, other.cols, data)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            vec_add(data.setdefault(r, {}), row)
        return SparseMatrix(self.rows, self.cols, data)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(-1)

    def scale(self, s) -> "SparseMatrix":
        s = to_fraction(s)
        return SparseMatrix(self.rows, self.cols, {r: vec_scale(row, s) for r, row in self.data.items()})

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries())))

    # serialization
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[r, c, fraction_str(v)] for r, c, v in self.entries()],
        }

    @classmethod
    def from_json(cls, obj) -> "SparseMatrix":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_entries(obj["rows"], obj["cols"], ((r, c, Fraction(v)) for r, c, v in obj["entries"]))


def _markowitz_pivot(rows: dict[int, dict[int, Fraction]], col_count: dict[int, int],
                     active: set[int], pivot_limit: int):
    best = None
    for r in sorted(active):
        row = rows[r]
        rc = len(row) - 1
        for c in row:
            if c >= pivot_limit:
                continue
            cost = rc * (col_count[c] - 1)
            key = (cost, r, c)
            if best is None or key < best:
                best = key
                if cost == 0:
                    break
        if best is not None and best[0] == 0 and best[1] == r:
            break
    return best


def gauss_jordan(M: SparseMatrix, pivot_limit: int | None = None):
    """Reduce ``M`` to reduced echelon form.

    Returns ``(pivots, rows, leftover)`` where ``pivots`` maps pivot column to the
    index of its normalised row in ``rows``; columns ``>= pivot_limit`` are never
    used as pivots (used to carry right-hand sides).  ``leftover`` are the ids of
    rows that ended with no pivot.
    """
    limit = M.cols if pivot_limit is None else pivot_limit
    rows = {r: dict(row) for r, row in M.data.items()}
    col_rows: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    active = {r for r, row in rows.items() if any(c < limit for c in row)}
    pivots: dict[int, int] = {}
    while active:
        col_count = {c: len(rs) for c, rs in col_rows.items()}
        choice = _markowitz_pivot(rows, col_count, active, limit)
        if choice is None:
            break
        _, pr, pc = choice
        prow = rows[pr]
        inv = 1 / prow[pc]
        if inv != 1:
            for c in prow:
                prow[c] *= inv
        for r in list(col_rows.get(pc, ())):
            if r == pr:
                continue
            row = rows[r]
            factor = row[pc]
            for c, v in prow.items():
                new = row.get(c, 0) - factor * v
                if new:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(r)
                    row[c] = new
                elif c in row:
                    del row[c]
                    col_rows[c].discard(r)
            if not any(c < limit for c in row):
                active.discard(r)
        pivots[pc] = pr
        active.discard(pr)
    leftover = [r for r in rows if r not in pivots.values()]
    return pivots, rows, leftover


def rank(M: SparseMatrix) -> int:
    """Exact rank over Q."""
    pivots, _, _ = gauss_jordan(M)
    return len(pivots)


def kernel_basis(M: SparseMatrix) -> list[dict[int, Fraction]]:
    """Basis of the right null space.  Vector ``j`` has a 1 in the ``j``-th free
    column and 0 in every other free column, so coordinates of any kernel
    vector in this basis are its values at the free columns."""
    pivots, rows, _ = gauss_jordan(M)
    free = [c for c in range(M.cols) if c not in pivots]
    free_set = set(free)
    # column -> list of (pivot column, coefficient) for free columns
    by_free: dict[int, list[tuple[int, Fraction]]] = {f: [] for f in free}
    for pc, r in pivots.items():
        for c, v in rows[r].items():
            if c in free_set:
                by_free[c].append((pc, v))
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for pc, v in by_free[f]:
            vec[pc] = -v
        basis.append(vec)
    return basis


def free_columns(M: SparseMatrix) -> list[int]:
    pivots, _, _ = gauss_jordan(M)
    return [c for c in range(M.cols) if c not in pivots]


def solve(M: SparseMatrix, b: Mapping[int, Fraction] | list) -> dict[int, Fraction] | None:
    """Some exact ``x`` with ``M x = b`` or ``None`` if ``b`` is not in the image.

    Free variables are set to zero, so the returned solution is determined by
    the pivot order.
    """
    if isinstance(b, list):
        if len(b) != M.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {M.rows}")
        b = {i: to_fraction(v) for i, v in enumerate(b) if v}
    n = M.cols
    data = {r: dict(row) for r, row in M.data.items()}
    for r, v in b.items():
        if not 0 <= r < M.rows:
            raise IndexError(r)
        if v:
            data.setdefault(r, {})[n] = to_fraction(v)
    aug = SparseMatrix(M.rows, n + 1, data)
    pivots, rows, leftover = gauss_jordan(aug, pivot_limit=n)
    for r in leftover:
        if rows[r].get(n):
            return None
    return {pc: rows[r][n] for pc, r in pivots.items() if rows[r].get(n)}


def image_basis(columns: list[Mapping[int, Fraction]], nrows: int) -> list[dict[int, Fraction]]:
    """Independent subset (by pivot order) spanning the given columns."""
    M = SparseMatrix.from_columns(nrows, list(columns))
    pivots, _, _ = gauss_jordan(M.transpose())
    # pivots of the transposed matrix index rows of M^T, i.e. original columns
    chosen = sorted(pivots.values())
    return [dict(columns[i]) for i in chosen]


class LinearReducer:
    """Incremental echelon basis of a subspace; reduces vectors modulo it."""

    def __init__(self):
        self.pivot_rows: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        v = dict(vec)
        changed = True
        while changed:
            changed = False
            for p in sorted(set(v) & set(self.pivot_rows)):
                if p in v:
                    vec_add(v, self.pivot_rows[p], -v[p])
                    changed = True
        return v

    def add(self, vec: Mapping[int, Fraction]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for q, row in self.pivot_rows.items():
            if p in row:
                vec_add(row, v, -row[p])
        self.pivot_rows[p] = v
        return True

    @property
    def dim(self) -> int:
        return len(self.pivot_rows)
