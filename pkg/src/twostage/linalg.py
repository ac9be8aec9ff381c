"""Exact integer matrices, Smith normal form, and lattice utilities.

Everything downstream (abelian group normal forms, cohomology, moduli
reports) reduces to linear algebra over Z.  Entries are Python ints, so
intermediate values grow as needed and nothing here ever touches floating
point.  All matrices are immutable once constructed; algorithms work on
private list-of-list copies and freeze their results.

Conventions:

* ``smith_normal_form(m)`` returns ``(s, u, v)`` with ``u @ m @ v == s``,
  ``u`` and ``v`` unimodular, ``s`` diagonal with non-negative entries in a
  divisibility chain ``d1 | d2 | ...`` and zeros trailing.
* ``integer_kernel(m)`` returns a matrix whose columns are a lattice basis
  of ``{x : m @ x = 0}``, in column Hermite form, so equal kernels produce
  byte-identical bases.
"""

from __future__ import annotations

from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SnfDecomposition",
    "smith_normal_form",
    "integer_kernel",
    "row_hermite",
    "column_hermite",
    "determinant",
    "kronecker",
    "block_diag",
    "solve",
]


def _as_int(x) -> int:
    # bools are ints in Python; normalize them, refuse anything else inexact.
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    raise TypeError(f"matrix entries must be exact integers, got {type(x).__name__}: {x!r}")


class IntMatrix:
    """An immutable rows x cols matrix over Z, stored row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        entries = [_as_int(x) for x in entries]
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(entries[i * cols : (i + 1) * cols]) for i in range(rows))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows_list: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows_list = [list(r) for r in rows_list]
        if rows_list:
            width = len(rows_list[0])
            if any(len(r) != width for r in rows_list):
                raise ValueError("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and rows_list and width != cols:
            raise ValueError(f"rows have width {width}, expected {cols}")
        flat = [x for r in rows_list for x in r]
        return cls(len(rows_list), width, flat)

    @classmethod
    def from_columns(cls, cols_list: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        cols_list = [list(c) for c in cols_list]
        if cols_list:
            height = len(cols_list[0])
            if any(len(c) != height for c in cols_list):
                raise ValueError("ragged columns")
        else:
            height = 0 if rows is None else rows
        if rows is not None and cols_list and height != rows:
            raise ValueError(f"columns have height {height}, expected {rows}")
        flat = [cols_list[j][i] for i in range(height) for j in range(len(cols_list))]
        return cls(height, len(cols_list), flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    # -- basic queries -----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_rows(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"IntMatrix({self.rows}x{self.cols}: [{body}])"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, [a + b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, [a - b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [-x for r in self.data for x in r])

    def scale(self, c: int) -> "IntMatrix":
        c = _as_int(c)
        return IntMatrix(self.rows, self.cols, [c * x for r in self.data for x in r])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ot = other.transpose().data
        flat = []
        for ra in self.data:
            for cb in ot:
                flat.append(sum(a * b for a, b in zip(ra, cb)))
        return IntMatrix(self.rows, other.cols, flat)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product over Z."""
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} does not match {self.shape}")
        return tuple(sum(a * x for a, x in zip(r, vec)) for r in self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [self.data[i][j] for j in range(self.cols) for i in range(self.rows)])

    def _check_same_shape(self, other: "IntMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")


def hstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.rows != b.rows:
        raise ValueError(f"row count mismatch: {a.shape} vs {b.shape}")
    return IntMatrix.from_rows([list(ra) + list(rb) for ra, rb in zip(a.data, b.data)], cols=a.cols + b.cols)


def vstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.cols != b.cols:
        raise ValueError(f"column count mismatch: {a.shape} vs {b.shape}")
    return IntMatrix.from_rows(a.to_rows() + b.to_rows(), cols=a.cols)


def kronecker(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Kronecker product, blocks a[i][j] * b."""
    flat = []
    for i in range(a.rows):
        for k in range(b.rows):
            for j in range(a.cols):
                flat.extend(a.data[i][j] * x for x in b.data[k])
    return IntMatrix(a.rows * b.rows, a.cols * b.cols, flat)


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0 : c0 + b.cols] = list(b.data[i])
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(out, cols=cols)


class SnfDecomposition:
    """Smith normal form ``u @ m @ v == s`` with tracked inverses.

    ``u_inv`` and ``v_inv`` are maintained during the reduction (each
    elementary operation is inverted on the fly), so callers that need to
    move between original and diagonal coordinates never invert a matrix.
    """

    __slots__ = ("s", "u", "v", "u_inv", "v_inv", "rank", "diagonal")

    def __init__(self, s: IntMatrix, u: IntMatrix, v: IntMatrix, u_inv: IntMatrix, v_inv: IntMatrix):
        self.s = s
        self.u = u
        self.v = v
        self.u_inv = u_inv
        self.v_inv = v_inv
        diag = [s.data[i][i] for i in range(min(s.rows, s.cols))]
        self.diagonal = tuple(diag)
        self.rank = sum(1 for d in diag if d != 0)

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """One integer solution x of m @ x = b, or None if there is none."""
        if len(b) != self.s.rows:
            raise ValueError(f"rhs length {len(b)} does not match {self.s.rows} rows")
        w = self.u.apply(b)
        z = [0] * self.s.cols
        for i, wi in enumerate(w):
            d = self.diagonal[i] if i < len(self.diagonal) else 0
            if d == 0:
                if wi != 0:
                    return None
            else:
                q, r = divmod(wi, d)
                if r != 0:
                    return None
                z[i] = q
        return self.v.apply(z)


def smith_normal_form(m: IntMatrix) -> SnfDecomposition:
    """Diagonalize ``m`` over Z by unimodular row and column operations.

    Pivot selection is the nonzero entry of smallest absolute value in the
    remaining submatrix, ties broken by lowest (row, column), which makes
    the output reproducible run to run.  Before a pivot is accepted, every
    entry of the remaining submatrix is forced to be divisible by it (by
    folding an offending row into the pivot row), so the diagonal comes out
    in a divisibility chain without a separate fix-up pass.
    """
    fast = _snf_of_diagonal(m)
    if fast is not None:
        return fast

    rows, cols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    u_inv = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()
    v_inv = IntMatrix.identity(cols).to_rows()

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in u_inv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def row_addmul(i, j, q):
        # row i += q * row j; inverse transform tracked on u_inv columns.
        if q == 0:
            return
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]
        for r in u_inv:
            r[j] -= q * r[i]

    def col_addmul(j, k, q):
        # col j += q * col k; inverse transform tracked on v_inv rows.
        if q == 0:
            return
        for r in a:
            r[j] += q * r[k]
        for r in v:
            r[j] += q * r[k]
        v_inv[k] = [x - q * y for x, y in zip(v_inv[k], v_inv[j])]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in u_inv:
            r[i] = -r[i]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # Deterministic pivot: minimal |entry|, ties by lowest (row, col).
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])

        while True:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    row_addmul(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    col_addmul(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j] != 0:
                        dirty = True
            if dirty:
                # Some remainder survived; it is smaller than the pivot, so
                # re-picking the pivot strictly shrinks |pivot| and terminates.
                best = None
                for i in range(t, rows):
                    for j in range(t, cols):
                        x = a[i][j]
                        if x != 0 and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                            best = (i, j)
                if best[0] != t:
                    row_swap(t, best[0])
                if best[1] != t:
                    col_swap(t, best[1])
                continue
            # Column and row at t are clear; force pivot | submatrix.
            p = a[t][t]
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(t, offender, 1)
        t += 1

    for i in range(limit):
        if a[i][i] < 0:
            row_negate(i)

    return SnfDecomposition(
        IntMatrix.from_rows(a, cols=cols),
        IntMatrix.from_rows(u, cols=rows),
        IntMatrix.from_rows(v, cols=cols),
        IntMatrix.from_rows(u_inv, cols=rows),
        IntMatrix.from_rows(v_inv, cols=cols),
    )


def _snf_of_diagonal(m: IntMatrix) -> SnfDecomposition | None:
    """Fast path: a non-negative diagonal matrix whose entries can be put
    into a divisibility chain by permutation alone.  Covers the block
    presentations of cochain groups, which would otherwise pay a full
    cubic reduction for an answer that is a row/column shuffle.
    """
    rows, cols = m.rows, m.cols
    limit = min(rows, cols)
    diag = []
    for i in range(rows):
        for j in range(cols):
            x = m.data[i][j]
            if i == j and i < limit:
                if x < 0:
                    return None
                diag.append(x)
            elif x != 0:
                return None
    order = sorted(range(limit), key=lambda i: (diag[i] == 0, diag[i]))
    chain = [diag[i] for i in order]
    for a, b in zip(chain, chain[1:]):
        if a == 0:
            if b != 0:
                return None
        elif b % a != 0:
            return None
    perm_rows = list(order) + [i for i in range(rows) if i >= limit]
    perm_cols = list(order) + [j for j in range(cols) if j >= limit]
    u = IntMatrix.from_rows(
        [[1 if j == perm_rows[i] else 0 for j in range(rows)] for i in range(rows)], cols=rows
    )
    v = IntMatrix.from_rows(
        [[1 if perm_cols[j] == i else 0 for j in range(cols)] for i in range(cols)], cols=cols
    )
    s_rows = [[0] * cols for _ in range(rows)]
    for k, d in enumerate(chain):
        s_rows[k][k] = d
    return SnfDecomposition(
        IntMatrix.from_rows(s_rows, cols=cols), u, v, u.transpose(), v.transpose()
    )


def solve(m: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution of m @ x = b, or None.  One-shot convenience."""
    return smith_normal_form(m).solve(b)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with x*a + y*b == g == gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def row_hermite(m: IntMatrix) -> IntMatrix:
    """Canonical basis of the row lattice of ``m`` (Hermite normal form).

    Nonzero rows only, pivots positive with strictly increasing pivot
    columns, and entries above each pivot reduced into [0, pivot).  Two
    generating sets of the same row lattice produce the same output.
    """
    work = m.to_rows()
    nrows = len(work)
    ncols = m.cols
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        for i in range(r + 1, nrows):
            if work[i][c] == 0:
                continue
            g, x, y = _xgcd(work[r][c], work[i][c])
            p, q = work[r][c] // g, work[i][c] // g
            new_r = [x * rv + y * iv for rv, iv in zip(work[r], work[i])]
            new_i = [-q * rv + p * iv for rv, iv in zip(work[r], work[i])]
            work[r], work[i] = new_r, new_i
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q != 0:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == nrows:
            break
    return IntMatrix.from_rows(work[:r], cols=ncols)


def column_hermite(m: IntMatrix) -> IntMatrix:
    """Canonical basis of the column lattice of ``m``, as columns."""
    return row_hermite(m.transpose()).transpose()


def integer_kernel(m: IntMatrix) -> IntMatrix:
    """Lattice basis of {x : m @ x = 0}, columns in Hermite form.

    The kernel of m is spanned by the columns of v beyond the rank in any
    Smith decomposition u m v = s; Hermite reduction then makes the basis
    canonical, so equal kernels compare equal entrywise.
    """
    dec = smith_normal_form(m)
    cols = [dec.v.column(j) for j in range(dec.rank, m.cols)]
    basis = IntMatrix.from_columns(cols, rows=m.cols)
    return column_hermite(basis)


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if a[i][t] != 0), None)
            if swap is None:
                return 0
            a[t], a[swap] = a[swap], a[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[n - 1][n - 1]
