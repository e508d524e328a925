"""Exact integer and rational matrix arithmetic.

Everything here runs on arbitrary-precision Python integers and
``fractions.Fraction`` entries; there is no floating point. The module
provides the small set of primitives the rest of the package is built on:
products, determinants, kernels, and Hermite / Smith normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

Vector = tuple[Fraction, ...]


def _as_int(x) -> int:
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"entry {x} is not an integer")
        return x.numerator
    return int(x)


class IntMatrix:
    """Immutable dense matrix with arbitrary-precision integer entries.

    Entries are stored row-major in a flat tuple.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        data = tuple(_as_int(e) for e in entries)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(r, c, (x for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return (self.row(i) for i in range(self.rows))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (-x for x in self.data))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, (a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, (a - b for a, b in zip(self.data, other.data)))

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            orow = out
            base = i * m
            for t, av in enumerate(arow):
                if av:
                    brow = b[t * m : (t + 1) * m]
                    for j in range(m):
                        orow[base + j] += av * brow[j]
        return IntMatrix(n, m, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows, (self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows))
        )

    def trace(self) -> int:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum(self.data[i * self.cols + i] for i in range(self.rows))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            pivot = a[k][k]
            for i in range(k + 1, n):
                aik = a[i][k]
                rowi = a[i]
                rowk = a[k]
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * pivot - aik * rowk[j]) // prev
                rowi[k] = 0
            prev = pivot
        return sign * a[n - 1][n - 1]

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, (Fraction(x) for x in self.data))

    def content(self) -> int:
        """Gcd of all entries (0 for the zero matrix)."""
        g = 0
        for x in self.data:
            if x:
                g = gcd(g, x)
        return g


class RatMatrix:
    """Immutable dense matrix with exact rational entries.

    ``Fraction`` keeps every entry in canonical reduced form (positive
    denominator, gcd(numerator, denominator) = 1).
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        data = tuple(Fraction(e) for e in entries)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(r, c, (x for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (Fraction(1 if i == j else 0) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"RatMatrix({[[str(x) for x in row] for row in self.to_rows()]!r})"

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, (-x for x in self.data))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, (a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, (a - b for a, b in zip(self.data, other.data)))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        zero = Fraction(0)
        out = [zero] * (n * m)
        for i in range(n):
            base = i * m
            for t in range(k):
                av = a[i * k + t]
                if av:
                    brow = b[t * m : (t + 1) * m]
                    for j in range(m):
                        if brow[j]:
                            out[base + j] += av * brow[j]
        return RatMatrix(n, m, out)

    def scale(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix(self.rows, self.cols, (c * x for x in self.data))

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows, (self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows))
        )

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.data)

    def to_int(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, self.data)

    def kron(self, other: "RatMatrix") -> "RatMatrix":
        """Kronecker product self ⊗ other."""
        r1, c1, r2, c2 = self.rows, self.cols, other.rows, other.cols
        out = []
        for i1 in range(r1):
            for i2 in range(r2):
                for j1 in range(c1):
                    a = self[i1, j1]
                    row2 = other.row(i2)
                    out.extend(a * b for b in row2[:c2])
        return RatMatrix(r1 * r2, c1 * c2, out)

    def inverse(self) -> "RatMatrix":
        """Exact inverse by Gauss-Jordan elimination."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        inv = RatMatrix.identity(n).to_rows()
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = a[col][col]
            if p != 1:
                a[col] = [x / p for x in a[col]]
                inv[col] = [x / p for x in inv[col]]
            for i in range(n):
                if i != col and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                    inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
        return RatMatrix.from_rows(inv)

    def det(self) -> Fraction:
        """Exact determinant via the integer Bareiss routine on a cleared matrix."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if self.rows == 0:
            return Fraction(1)
        scaled_rows = []
        denom = Fraction(1)
        for i in range(self.rows):
            row = self.row(i)
            m = 1
            for x in row:
                m = m * x.denominator // gcd(m, x.denominator)
            denom *= m
            scaled_rows.append([int(x * m) for x in row])
        return Fraction(IntMatrix.from_rows(scaled_rows).det(), 1) / denom

    def integral_rescale(self) -> tuple[IntMatrix, Fraction]:
        """Smallest positive multiple of self with integer entries.

        Returns ``(m, c)`` with ``self == m.to_rat().scale(c)`` and ``c`` the
        reciprocal of the lcm of the entry denominators.  Unlike
        :meth:`primitive_integer` this never divides out a common integer
        content, so an already-integral matrix is returned unchanged.
        """
        lcm_den = 1
        for x in self.data:
            lcm_den = lcm_den * x.denominator // gcd(lcm_den, x.denominator)
        return IntMatrix(self.rows, self.cols, (x * lcm_den for x in self.data)), Fraction(1, lcm_den)

    def primitive_integer(self) -> tuple[IntMatrix, Fraction]:
        """Smallest positive multiple of self with integer entries of content 1.

        Returns ``(m, c)`` with ``self == m.to_rat().scale(c)``.  Raises on the
        zero matrix, which has no primitive form.
        """
        lcm_den = 1
        for x in self.data:
            lcm_den = lcm_den * x.denominator // gcd(lcm_den, x.denominator)
        ints = [int(x * lcm_den) for x in self.data]
        g = 0
        for v in ints:
            if v:
                g = gcd(g, v)
        if g == 0:
            raise ValueError("zero matrix has no primitive rescaling")
        return IntMatrix(self.rows, self.cols, (v // g for v in ints)), Fraction(g, lcm_den)


@dataclass(frozen=True)
class SmithForm:
    """Smith decomposition ``left @ m @ right == diag`` with unimodular transforms.

    ``diag`` holds the nonnegative invariant factors d1 | d2 | ... | dr followed
    by zeros, with length min(rows, cols) of the input.
    """

    diag: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        return IntMatrix(
            rows, cols, (self.diag[i] if i == j and i < len(self.diag) else 0 for i in range(rows) for j in range(cols))
        )

    @property
    def torsion_factors(self) -> tuple[int, ...]:
        """Invariant factors greater than 1."""
        return tuple(d for d in self.diag if d > 1)

    @property
    def kernel_rank(self) -> int:
        return sum(1 for d in self.diag if d == 0)


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular left/right transforms.

    Standard pivoting elimination: repeatedly move a smallest-magnitude entry
    to the pivot position, clear its row and column by exact division steps,
    and restore the divisibility chain by row merges whenever a remaining
    entry is not divisible by the pivot.
    """
    nrows, ncols = m.rows, m.cols
    a = m.to_rows()
    left = IntMatrix.identity(nrows).to_rows()
    right = IntMatrix.identity(ncols).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] -= q * row[src]
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x - q * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in right:
            row[dst] -= q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        # Locate a smallest-magnitude nonzero pivot in the trailing block.
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j]
                if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            # Clear column t below the pivot.
            restart = False
            for i in range(t + 1, nrows):
                v = a[i][t]
                if v:
                    q = v // a[t][t]
                    add_row(t, i, q)
                    if a[i][t]:
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            # Clear row t right of the pivot.
            for j in range(t + 1, ncols):
                v = a[t][j]
                if v:
                    q = v // a[t][t]
                    add_col(t, j, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            # Pivot isolated; enforce divisibility of the trailing block.
            pivot = a[t][t]
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, -1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diag = tuple(a[i][i] if i < ncols else 0 for i in range(limit))
    return SmithForm(diag=diag, left=IntMatrix.from_rows(left), right=IntMatrix.from_rows(right))


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, left)`` with ``left @ m == h``, ``left`` unimodular, ``h`` in
    row echelon form with positive pivots and entries above each pivot reduced
    to the range ``[0, pivot)``.  Zero rows sink to the bottom, so the nonzero
    rows of ``h`` are a canonical basis of the row lattice of ``m``.
    """
    nrows, ncols = m.rows, m.cols
    a = m.to_rows()
    left = IntMatrix.identity(nrows).to_rows()

    def combine(i, j, u, v, s, t):
        # (row_i, row_j) <- (u*row_i + v*row_j, s*row_i + t*row_j)
        ai, aj = a[i], a[j]
        a[i] = [u * x + v * y for x, y in zip(ai, aj)]
        a[j] = [s * x + t * y for x, y in zip(ai, aj)]
        li, lj = left[i], left[j]
        left[i] = [u * x + v * y for x, y in zip(li, lj)]
        left[j] = [s * x + t * y for x, y in zip(li, lj)]

    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        left[r], left[piv] = left[piv], left[r]
        for i in range(r + 1, nrows):
            while a[i][c]:
                p, v = a[r][c], a[i][c]
                g = gcd(p, v)
                # Extended gcd gives a unimodular 2x2 transform.
                u0, v0 = _bezout(p, v)
                combine(r, i, u0, v0, -(v // g), p // g)
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            left[r] = [-x for x in left[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                left[i] = [x - q * y for x, y in zip(left[i], left[r])]
        r += 1
    return IntMatrix.from_rows(a), IntMatrix.from_rows(left)


def _bezout(p: int, v: int) -> tuple[int, int]:
    """Coefficients (u, w) with u*p + w*v == gcd(p, v)."""
    old_r, r = p, v
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def _int_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form with per-row content reduction.

    Returns the nonzero echelon rows and their pivot columns.  Row content is
    divided out after every elimination step, which keeps entries small for
    the sparse reflection-representation systems this package produces.
    """
    work = [row[:] for row in rows if any(row)]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        piv = None
        best = None
        for i in range(rank, len(work)):
            v = work[i][c]
            if v and (best is None or abs(v) < best):
                piv, best = i, abs(v)
                if best == 1:
                    break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        p = work[rank][c]
        prow = work[rank]
        for i in range(rank + 1, len(work)):
            v = work[i][c]
            if v:
                g = gcd(p, v)
                pm, vm = p // g, v // g
                new = [pm * x - vm * y for x, y in zip(work[i], prow)]
                cg = 0
                for x in new:
                    if x:
                        cg = gcd(cg, x)
                        if cg == 1:
                            break
                if cg > 1:
                    new = [x // cg for x in new]
                work[i] = new
        pivots.append(c)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


def _rat_rows_to_int(m: RatMatrix) -> list[list[int]]:
    out = []
    for i in range(m.rows):
        row = m.row(i)
        mlt = 1
        for x in row:
            d = x.denominator
            if d != 1:
                mlt = mlt * d // gcd(mlt, d)
        if mlt == 1:
            out.append([x.numerator for x in row])
        else:
            out.append([int(x * mlt) for x in row])
    return out


def rational_rank(m: RatMatrix) -> int:
    """Exact rank over the rationals."""
    _, pivots = _int_echelon(_rat_rows_to_int(m))
    return len(pivots)


def integer_rank(m: IntMatrix) -> int:
    """Exact rank of an integer matrix over the rationals."""
    _, pivots = _int_echelon(m.to_rows())
    return len(pivots)


def _kernel_from_echelon(echelon: list[list[int]], pivots: list[int], ncols: int) -> list[Vector]:
    """Canonical kernel basis from an integer echelon form.

    One basis vector per free column, carrying 1 there and 0 at the other
    free columns; pivot coordinates are produced by exact back-substitution.
    This is the reduced-echelon normalization, so any two computations of the
    same kernel agree entry for entry.
    """
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis: list[Vector] = []
    for f in free_cols:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            p = pivots[r]
            row = echelon[r]
            s = Fraction(0)
            for c in range(p + 1, ncols):
                if row[c] and v[c]:
                    s += row[c] * v[c]
            if s:
                v[p] = -s / row[p]
        basis.append(tuple(v))
    return basis


def rational_kernel(m: RatMatrix) -> list[Vector]:
    """Basis of the right kernel { v : m @ v = 0 }, echelon-normalized."""
    if m.rows == 0:
        return [
            tuple(Fraction(1 if i == j else 0) for i in range(m.cols))
            for j in range(m.cols)
        ]
    echelon, pivots = _int_echelon(_rat_rows_to_int(m))
    return _kernel_from_echelon(echelon, pivots, m.cols)


def stack_and_common_kernel(ms: Sequence[RatMatrix]) -> list[Vector]:
    """Basis of the intersection of the kernels, via the vertical stack."""
    if not ms:
        raise ValueError("need at least one matrix")
    ncols = ms[0].cols
    for m in ms:
        if m.cols != ncols:
            raise ValueError("matrices must share the same column count")
    rows: list[list[int]] = []
    for m in ms:
        rows.extend(_rat_rows_to_int(m))
    echelon, pivots = _int_echelon(rows)
    return _kernel_from_echelon(echelon, pivots, ncols)


def apply_to_vector(m: RatMatrix, v: Sequence) -> Vector:
    """Matrix-vector product over the rationals."""
    if len(v) != m.cols:
        raise ValueError("vector length mismatch")
    vf = [Fraction(x) for x in v]
    return tuple(sum((a * b for a, b in zip(m.row(i), vf)), Fraction(0)) for i in range(m.rows))
