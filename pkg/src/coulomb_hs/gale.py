"""Gale duality for hypertoric data.

A torus embedding is specified by an n x d integer matrix U whose columns
u_1..u_d span rank n.  The dual configuration is the integer kernel of U,
i.e. the lattice of linear dependency relations among the columns, with
its d coordinate functionals as the distinguished dual vectors.  The swap
n <-> d - n exchanges the isometry-torus rank with the number of
deformation parameters of the associated hypertoric space, whose real
dimensions are 4n and 4(d - n).

All linear algebra is exact big-integer arithmetic; kernels are returned
in row Hermite normal form (positive pivots, entries above a pivot
reduced into [0, pivot)), which fixes the basis ambiguity and makes
outputs deterministic and the duality an involution on row lattices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class GaleError(ValueError):
    pass


class RankDeficientError(GaleError):
    pass


class DimensionMismatchError(GaleError):
    pass


Matrix = tuple  # tuple of row tuples


def _row_hnf(rows: Iterable[Sequence[int]], width: int) -> Matrix:
    """Canonical row Hermite normal form; zero rows dropped."""
    mat = [list(r) for r in rows]
    if any(len(r) != width for r in mat):
        raise GaleError("ragged matrix")
    pivot_row = 0
    for col in range(width):
        pr = None
        for r in range(pivot_row, len(mat)):
            if mat[r][col]:
                pr = r
                break
        if pr is None:
            continue
        mat[pivot_row], mat[pr] = mat[pr], mat[pivot_row]
        # Euclidean elimination below the pivot.
        for r in range(pivot_row + 1, len(mat)):
            while mat[r][col]:
                q = mat[pivot_row][col] // mat[r][col]
                mat[pivot_row] = [a - q * b for a, b in zip(mat[pivot_row], mat[r])]
                mat[pivot_row], mat[r] = mat[r], mat[pivot_row]
        if mat[pivot_row][col] < 0:
            mat[pivot_row] = [-a for a in mat[pivot_row]]
        piv = mat[pivot_row][col]
        for r in range(pivot_row):
            q = mat[r][col] // piv
            if q:
                mat[r] = [a - q * b for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
    return tuple(tuple(r) for r in mat[:pivot_row])


def _kernel_basis(rows: Matrix, width: int) -> Matrix:
    """Basis of the integer (right) kernel of the matrix, via a unimodular
    row reduction of its transpose."""
    d = width
    a = [[row[j] for row in rows] for j in range(d)]  # transpose, d rows
    w = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    n = len(rows)
    pivot_row = 0
    for col in range(n):
        pr = None
        for r in range(pivot_row, d):
            if a[r][col]:
                pr = r
                break
        if pr is None:
            continue
        a[pivot_row], a[pr] = a[pr], a[pivot_row]
        w[pivot_row], w[pr] = w[pr], w[pivot_row]
        for r in range(pivot_row + 1, d):
            while a[r][col]:
                q = a[pivot_row][col] // a[r][col]
                a[pivot_row] = [x - q * y for x, y in zip(a[pivot_row], a[r])]
                w[pivot_row] = [x - q * y for x, y in zip(w[pivot_row], w[r])]
                a[pivot_row], a[r] = a[r], a[pivot_row]
                w[pivot_row], w[r] = w[r], w[pivot_row]
        pivot_row += 1
    kernel = [w[r] for r in range(pivot_row, d)]
    return _row_hnf(kernel, d)


@dataclass(frozen=True)
class ToricConfig:
    """Integer vector configuration: an n x d matrix (stored by rows) whose
    d columns are the defining vectors.  n = 0 (empty configuration in an
    ambient Z^d) is allowed."""

    rows: Matrix
    d: int

    def __init__(self, rows: Iterable[Sequence[int]], d: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise GaleError("ragged matrix")
            if d is not None and d != width:
                raise GaleError(f"declared d={d} but rows have width {width}")
            d = width
        elif d is None:
            d = 0
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "d", d)
        if self.n > self.d:
            raise RankDeficientError(f"need n <= d, got n={self.n}, d={self.d}")
        if rows and len(_row_hnf(rows, self.d)) != len(rows):
            raise RankDeficientError("columns do not span full rank")

    @property
    def n(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_columns(columns: Iterable[Sequence[int]], n: int | None = None,
                     d: int | None = None) -> "ToricConfig":
        cols = [tuple(int(x) for x in c) for c in columns]
        if d is not None and len(cols) != d:
            raise GaleError(f"expected {d} columns, got {len(cols)}")
        if not cols:
            return ToricConfig((), d=d or 0)
        height = len(cols[0])
        if n is not None and height != n:
            raise GaleError(f"expected columns of height {n}, got {height}")
        if any(len(c) != height for c in cols):
            raise GaleError("ragged columns")
        if height == 0:
            return ToricConfig((), d=len(cols))
        return ToricConfig(tuple(tuple(c[i] for c in cols) for i in range(height)))

    @property
    def columns(self) -> Matrix:
        return tuple(tuple(r[j] for r in self.rows) for j in range(self.d))


def hnf_rows(rows: Iterable[Sequence[int]], width: int) -> Matrix:
    """Canonical Hermite normal form of a row lattice (public helper for
    comparing lattices)."""
    return _row_hnf(rows, width)


def kernel_lattice(c: ToricConfig) -> Matrix:
    """Hermite-normal-form basis of the integer kernel of the configuration
    matrix: the lattice of dependency relations among the columns."""
    if not c.rows:
        # 0 x d matrix: the kernel is all of Z^d.
        return tuple(tuple(1 if i == j else 0 for j in range(c.d))
                     for i in range(c.d))
    return _kernel_basis(c.rows, c.d)


def gale_dual(c: ToricConfig) -> ToricConfig:
    """Configuration on the dependency lattice; n and d - n swap roles."""
    return ToricConfig(kernel_lattice(c), d=c.d)


def is_gale_dual_pair(a: ToricConfig, b: ToricConfig) -> bool:
    """True when b's row lattice is exactly the integer kernel of a."""
    if a.d != b.d:
        raise DimensionMismatchError(f"configurations have d={a.d} and d={b.d}")
    if a.n + b.n != a.d:
        return False
    return _row_hnf(b.rows, b.d) == kernel_lattice(a)


@dataclass(frozen=True)
class DualityReport:
    n: int
    d: int
    dim_primal: int
    dim_dual: int
    fi_primal: int
    fi_dual: int
    isometry_rank_primal: int
    isometry_rank_dual: int
    has_torsion: bool


def duality_report(c: ToricConfig) -> DualityReport:
    """Dimension and parameter bookkeeping for a configuration and its
    dual: 4n vs 4(d-n) dimensions, with deformation-parameter counts and
    isometry ranks exchanged.  Non-primitive data (the column lattice is a
    proper finite-index sublattice of Z^n) is flagged as torsion."""
    n, d = c.n, c.d
    index = 1
    if n:
        h = _row_hnf([list(col) for col in c.columns], n)
        for row in h:
            for x in row:
                if x:
                    index *= x
                    break
    return DualityReport(
        n=n, d=d,
        dim_primal=4 * n, dim_dual=4 * (d - n),
        fi_primal=d - n, fi_dual=n,
        isometry_rank_primal=n, isometry_rank_dual=d - n,
        has_torsion=(index != 1),
    )


# ---------------------------------------------------------------------------
# JSON wire format: {"n": ..., "d": ..., "columns": [[...], ...]}


def config_to_json(c: ToricConfig) -> dict:
    return {"n": c.n, "d": c.d, "columns": [list(col) for col in c.columns]}


def config_from_json(obj: dict) -> ToricConfig:
    if not isinstance(obj, dict) or "columns" not in obj:
        raise GaleError("matrix JSON must be an object with 'columns'")
    return ToricConfig.from_columns(obj["columns"], obj.get("n"), obj.get("d"))


def load_config(path: str) -> ToricConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GaleError(f"{path}: invalid JSON: {exc}") from None
    return config_from_json(obj)
