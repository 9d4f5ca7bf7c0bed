"""Exact linear algebra over the package's coefficient rings.

Everything here is fraction-free (Bareiss) or plain field elimination; no
floating point.  Entries may be Python ints, Scalars, or Polys, as long as
they support ring operators; division is dispatched per entry type so that
integer and polynomial matrices stay inside their ring.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .poly import Poly
from .scalar import Scalar


class LinAlgError(ValueError):
    pass


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _div_exact(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise LinAlgError("inexact integer division in fraction-free elimination")
        return q
    if isinstance(a, Poly):
        return a.exact_div(b)
    return a / b


def _normalize_int_row(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def _normalize_scalar_row(row: list) -> list:
    """Divide a row of rational/quadratic Scalars by its rational content."""
    g = 0
    l = 1
    for c in row:
        parts = (c.a,) if c.b is None else (c.a, c.b)
        for x in parts:
            if x:
                g = gcd(g, x.numerator)
                l = l * x.denominator // gcd(l, x.denominator)
    if g == 0:
        return row
    scale = Fraction(l, g)
    if scale == 1:
        return row
    return [c * scale for c in row]


def bareiss_jordan(rows: list[list]) -> tuple[list[list], list[int]]:
    """Fraction-free Gauss-Jordan elimination.

    Returns (reduced rows, pivot columns).  In the reduced matrix every pivot
    column contains a single nonzero entry, and all pivot entries are equal,
    so kernel vectors can be read off directly.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    prev = None
    r = 0
    for c in range(ncols):
        piv_row = None
        for i in range(r, len(m)):
            if not _is_zero(m[i][c]):
                piv_row = i
                break
        if piv_row is None:
            continue
        if piv_row != r:
            m[r], m[piv_row] = m[piv_row], m[r]
        p = m[r][c]
        for j in range(len(m)):
            if j == r:
                continue
            f = m[j][c]
            row_j, row_r = m[j], m[r]
            if prev is None:
                m[j] = [x * p - y * f for x, y in zip(row_j, row_r)]
            else:
                m[j] = [_div_exact(x * p - y * f, prev) for x, y in zip(row_j, row_r)]
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: list[list]) -> int:
    reducer = RowReducer(len(rows[0])) if rows else RowReducer(0)
    for row in rows:
        reducer.add(row)
    return reducer.rank


def kernel_basis(rows: list[list]) -> list[list]:
    """Basis of the right kernel, fraction-free (entries stay in the ring)."""
    if not rows:
        return []
    ncols = len(rows[0])
    m, pivots = bareiss_jordan(rows)
    piv_of_col = {c: i for i, c in enumerate(pivots)}
    free_cols = [c for c in range(ncols) if c not in piv_of_col]
    if not pivots:
        d = 1
    else:
        d = m[len(pivots) - 1][pivots[-1]]
    basis = []
    int_rows = isinstance(rows[0][0], int)
    for f in free_cols:
        v: list = [0] * ncols
        v[f] = d
        for c, i in piv_of_col.items():
            v[c] = -m[i][f]
        if int_rows:
            v = _normalize_int_row(v)
        basis.append(v)
    return basis


def left_kernel_basis(rows: list[list]) -> list[list]:
    ncols = len(rows[0]) if rows else 0
    t = [[rows[i][c] for i in range(len(rows))] for c in range(ncols)]
    return kernel_basis(t) if t else [
        [1 if i == j else 0 for j in range(len(rows))] for i in range(len(rows))]


class RowReducer:
    """Incremental rank computation on exact rows with per-row normalization."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, list] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def _leading(self, row) -> int | None:
        for c, x in enumerate(row):
            if not _is_zero(x):
                return c
        return None

    @staticmethod
    def _renormalize(row: list) -> list:
        sample = next((x for x in row if not _is_zero(x)), None)
        if isinstance(sample, int):
            return _normalize_int_row(row)
        if isinstance(sample, Scalar) and sample.ctx.kind != "Fp":
            return _normalize_scalar_row(row)
        return row

    def reduce(self, row: list) -> list:
        row = list(row)
        while True:
            c = self._leading(row)
            if c is None or c not in self.pivot_rows:
                return row
            piv = self.pivot_rows[c]
            a, b = piv[c], row[c]
            row = [x * a - y * b for x, y in zip(row, piv)]
            row = self._renormalize(row)

    def add(self, row: list) -> bool:
        """Reduce a row against the current basis; returns True if rank grew."""
        row = self.reduce(row)
        c = self._leading(row)
        if c is None:
            return False
        if isinstance(row[c], int) and row[c] < 0:
            row = [-x for x in row]
        self.pivot_rows[c] = row
        return True

    def contains(self, row: list) -> bool:
        return self._leading(self.reduce(row)) is None

    def basis(self) -> list[list]:
        return [self.pivot_rows[c] for c in sorted(self.pivot_rows)]


try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int


class BareissReducer:
    """Incremental fraction-free rank computation with the Bareiss pivot chain.

    New rows are eliminated against stored pivot rows in insertion order with
    exact division by the previous pivot, so intermediate entries are minors
    of the stacked matrix (polynomial bit growth, never floats or fractions).
    Integer rows are carried as gmpy2 integers when available.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.cols: list[int] = []
        self.rows: list[list] = []
        self.ds: list = []
        self._int_mode: bool | None = None

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _prepare(self, row: list) -> list:
        if self._int_mode is None:
            sample = next((x for x in row if not _is_zero(x)), None)
            self._int_mode = isinstance(sample, int) or sample is None
        if self._int_mode:
            row = _normalize_int_row([int(x) for x in row])
            return [_mpz(x) for x in row]
        return list(row)

    def reduce(self, row: list) -> list:
        row = self._prepare(row)
        prev = None
        for c, piv, d in zip(self.cols, self.rows, self.ds):
            f = row[c]
            if prev is None:
                row = [d * x - f * y for x, y in zip(row, piv)]
            elif self._int_mode:
                row = [(d * x - f * y) // prev for x, y in zip(row, piv)]
            else:
                row = [_div_exact(d * x - f * y, prev) for x, y in zip(row, piv)]
            prev = d
        return row

    def add(self, row: list) -> bool:
        row = self.reduce(row)
        for c, x in enumerate(row):
            if not _is_zero(x):
                self.cols.append(c)
                self.rows.append(row)
                self.ds.append(x)
                return True
        return False


def span_dim(basis: list[list]) -> int:
    if not basis:
        return 0
    return rank(basis)


def sum_basis(basis_a: list[list], basis_b: list[list]) -> list[list]:
    ncols = len((basis_a or basis_b)[0])
    red = RowReducer(ncols)
    for row in list(basis_a) + list(basis_b):
        red.add(row)
    return red.basis()


def intersect_basis(basis_a: list[list], basis_b: list[list]) -> list[list]:
    """Basis of the intersection of two row spans over a common ring."""
    if not basis_a or not basis_b:
        return []
    stacked = list(basis_a) + list(basis_b)
    out = []
    na = len(basis_a)
    red = RowReducer(len(basis_a[0]))
    for w in left_kernel_basis(stacked):
        vec = None
        for i in range(na):
            if _is_zero(w[i]):
                continue
            part = [w[i] * x for x in basis_a[i]]
            vec = part if vec is None else [u + v for u, v in zip(vec, part)]
        if vec is not None and red.add(vec):
            out.append(vec)
    return out


def subspace_ops(basis_a: list[list], basis_b: list[list], op: str):
    """span_dim / intersect / sum on row-span subspaces, exactly."""
    if op == "span_dim":
        return span_dim(basis_a)
    if op == "sum":
        return sum_basis(basis_a, basis_b)
    if op == "intersect":
        return intersect_basis(basis_a, basis_b)
    raise LinAlgError(f"unknown subspace op {op!r}")


def det(rows: list[list]):
    """Determinant by cofactor expansion; fine for the 4x4/5x5 sizes used here."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise LinAlgError("determinant of a non-square matrix")
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        a = rows[0][j]
        if _is_zero(a):
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = a * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        z = rows[0][0]
        return 0 if isinstance(z, int) else z - z
    return total


class Matrix:
    """Rectangular matrix of Scalars or Polys sharing one field context."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: list[list]):
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise LinAlgError("matrix rows have unequal lengths")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in col_idx] for i in row_idx])

    def det(self):
        return det(self.rows)


def minor4(m: Matrix, quadruple: tuple[int, int, int, int]):
    """Determinant of the 4 rows selected by a 1-based quadruple of row indices."""
    if m.ncols != 4 or m.nrows != 8:
        raise LinAlgError("minor4 expects an 8x4 matrix")
    rows = [m.rows[i - 1] for i in quadruple]
    return det(rows)
