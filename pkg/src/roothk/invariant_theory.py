"""Tensor constructions of the reflection representation and exact invariant
dimensions.

The key quantity everywhere is the dimension of the subspace fixed by the
whole group.  Because the simple reflections generate, that subspace is the
common kernel of (image - identity) over the generators alone, so no group
enumeration is ever required; Reynolds averaging over an exhaustive group is
kept as an independent cross-check for small groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import FormSpaceError, NotExhaustiveError
from .exact_linalg import (
    IntMatrix,
    RatMatrix,
    integer_rank,
    stack_and_common_kernel,
)
from .root_data import RootDatum, simple_reflections
from .weyl import WeylGroup

_REYNOLDS_CHUNK = 50_000


@lru_cache(maxsize=None)
def pairs_strict(n: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (i, j) with i < j, lexicographic."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def pairs_weak(n: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (i, j) with i <= j, lexicographic."""
    return tuple((i, j) for i in range(n) for j in range(i, n))


@dataclass(frozen=True)
class Representation:
    """A finite-dimensional rational representation given on the generators.

    ``chain`` records how the representation was built from the defining
    (reflection) representation, e.g. ("wedge2", ("double", ("defining",))).
    Explicitly supplied generator images get the chain ("explicit",); they
    support generator-only operations but not element-wise group averaging.
    """

    dim: int
    generator_images: tuple[RatMatrix, ...]
    label: str
    chain: tuple

    def __post_init__(self):
        for g in self.generator_images:
            if g.rows != self.dim or g.cols != self.dim:
                raise ValueError("generator image has wrong dimensions")


def rep_reflection(datum: RootDatum) -> Representation:
    """The rank-dimensional reflection representation over the rationals."""
    return Representation(
        dim=datum.rank,
        generator_images=tuple(s.to_rat() for s in simple_reflections(datum)),
        label=f"V({datum.label})",
        chain=("defining",),
    )


def rep_explicit(generator_images: tuple[RatMatrix, ...], label: str) -> Representation:
    dim = generator_images[0].rows if generator_images else 0
    return Representation(dim=dim, generator_images=tuple(generator_images), label=label, chain=("explicit",))


def rep_trivial(n_generators: int, dim: int = 1) -> Representation:
    """Trivial action: every element acts as the identity."""
    ident = RatMatrix.identity(dim)
    return Representation(
        dim=dim,
        generator_images=(ident,) * n_generators,
        label=f"triv^{dim}",
        chain=("trivial", dim),
    )


def _double_matrix(m: RatMatrix) -> RatMatrix:
    n = m.rows
    zero = Fraction(0)
    entries = []
    for i in range(2 * n):
        for j in range(2 * n):
            if (i < n) == (j < n):
                entries.append(m[i % n, j % n])
            else:
                entries.append(zero)
    return RatMatrix(2 * n, 2 * n, entries)


def _entry_rows(m: RatMatrix):
    """Rows as plain ints when the matrix is integral (the common case for
    Weyl matrices in the root basis), else as Fractions."""
    if m.is_integral():
        return [[x.numerator for x in m.row(i)] for i in range(m.rows)]
    return m.to_rows()


def _sym2_matrix(m: RatMatrix) -> RatMatrix:
    """Induced action on degree-two monomials, basis x_i x_j with i <= j."""
    n = m.rows
    pw = pairs_weak(n)
    a = _entry_rows(m)
    entries = []
    for k, l in pw:
        ak, al = a[k], a[l]
        for i, j in pw:
            if k == l:
                entries.append(ak[i] * ak[j])
            else:
                entries.append(ak[i] * al[j] + al[i] * ak[j])
    d = len(pw)
    return RatMatrix(d, d, entries)


def _wedge2_matrix(m: RatMatrix) -> RatMatrix:
    """Induced action on elementary alternating tensors, basis e_i ^ e_j, i < j."""
    n = m.rows
    ps = pairs_strict(n)
    a = _entry_rows(m)
    entries = []
    for k, l in ps:
        ak, al = a[k], a[l]
        for i, j in ps:
            entries.append(ak[i] * al[j] - al[i] * ak[j])
    d = len(ps)
    return RatMatrix(d, d, entries)


def rep_double(rep: Representation) -> Representation:
    """Block-diagonal doubling: two copies of the input side by side."""
    return Representation(
        dim=2 * rep.dim,
        generator_images=tuple(_double_matrix(g) for g in rep.generator_images),
        label=f"({rep.label})^2",
        chain=("double", rep.chain),
    )


def rep_sym2(rep: Representation) -> Representation:
    """Symmetric square, dimension n(n+1)/2."""
    return Representation(
        dim=rep.dim * (rep.dim + 1) // 2,
        generator_images=tuple(_sym2_matrix(g) for g in rep.generator_images),
        label=f"Sym2({rep.label})",
        chain=("sym2", rep.chain),
    )


def rep_wedge2(rep: Representation) -> Representation:
    """Alternating square, dimension n(n-1)/2."""
    return Representation(
        dim=rep.dim * (rep.dim - 1) // 2,
        generator_images=tuple(_wedge2_matrix(g) for g in rep.generator_images),
        label=f"Wedge2({rep.label})",
        chain=("wedge2", rep.chain),
    )


def invariant_dim(rep: Representation) -> int:
    """Dimension of the subspace fixed by every group element.

    Computed as the common kernel of (image - identity) over the generators,
    which equals the full invariant subspace because the generators generate.
    """
    if rep.dim == 0:
        return 0
    if not rep.generator_images:
        return rep.dim
    if all(g.is_integral() for g in rep.generator_images):
        # Same stacked-kernel computation, with the conversion to integer rows
        # done up front.
        from .exact_linalg import _int_echelon

        rows = []
        for g in rep.generator_images:
            for r in range(rep.dim):
                row = [x.numerator for x in g.row(r)]
                row[r] -= 1
                rows.append(row)
        _, pivots = _int_echelon(rows)
        return rep.dim - len(pivots)
    ident = RatMatrix.identity(rep.dim)
    return len(stack_and_common_kernel([g - ident for g in rep.generator_images]))


def invariant_subspace(rep: Representation) -> list[tuple[Fraction, ...]]:
    """Echelon-normalized basis of the invariant subspace."""
    if rep.dim == 0:
        return []
    ident = RatMatrix.identity(rep.dim)
    return stack_and_common_kernel([g - ident for g in rep.generator_images])


# --- batch images over numpy element arrays (exact bounded integers) ---------


def _batch_double(images: np.ndarray) -> np.ndarray:
    m, n, _ = images.shape
    out = np.zeros((m, 2 * n, 2 * n), dtype=np.int64)
    out[:, :n, :n] = images
    out[:, n:, n:] = images
    return out


def _batch_images(chain: tuple, elements: np.ndarray) -> np.ndarray:
    """Images of defining-representation elements under a construction chain."""
    if chain == ("defining",):
        return elements.astype(np.int64)
    if chain[0] == "trivial":
        dim = chain[1]
        out = np.zeros((elements.shape[0], dim, dim), dtype=np.int64)
        out[:, range(dim), range(dim)] = 1
        return out
    if chain[0] == "double":
        return _batch_double(_batch_images(chain[1], elements))
    if chain[0] in ("sym2", "wedge2"):
        inner = _batch_images(chain[1], elements)
        n = inner.shape[1]
        if chain[0] == "wedge2":
            idx = pairs_strict(n)
            rows_k = np.array([p[0] for p in idx])
            rows_l = np.array([p[1] for p in idx])
            cols_i = np.array([p[0] for p in idx])
            cols_j = np.array([p[1] for p in idx])
            term1 = inner[:, rows_k[:, None], cols_i[None, :]] * inner[:, rows_l[:, None], cols_j[None, :]]
            term2 = inner[:, rows_l[:, None], cols_i[None, :]] * inner[:, rows_k[:, None], cols_j[None, :]]
            return term1 - term2
        idx = pairs_weak(n)
        rows_k = np.array([p[0] for p in idx])
        rows_l = np.array([p[1] for p in idx])
        cols_i = np.array([p[0] for p in idx])
        cols_j = np.array([p[1] for p in idx])
        term1 = inner[:, rows_k[:, None], cols_i[None, :]] * inner[:, rows_l[:, None], cols_j[None, :]]
        term2 = inner[:, rows_l[:, None], cols_i[None, :]] * inner[:, rows_k[:, None], cols_j[None, :]]
        diag = (rows_k == rows_l)[:, None]
        return np.where(diag, term1, term1 + term2)
    raise ValueError(f"chain {chain!r} does not support element-wise images")


def batch_images(rep: Representation, elements: np.ndarray) -> np.ndarray:
    """Exact integer images of the given defining-representation elements."""
    return _batch_images(rep.chain, elements)


# --- Reynolds averaging -------------------------------------------------------


def _sum_from_pair_matrix(chain: tuple, group: WeylGroup) -> np.ndarray | None:
    """Assemble the summed images over the whole group from cached pair sums.

    Covers the construction chains whose entries are linear or quadratic in
    the defining matrix entries; returns None for chains that need the generic
    per-element path.
    """
    n0 = group.rank

    def position_map(chain_part):
        # Maps an entry position (a, b) of the inner image to a flat index of
        # the defining matrix, or None for a structural zero.
        if chain_part == ("defining",):
            return n0, lambda a, b: a * n0 + b
        if chain_part == ("double", ("defining",)):
            def pos(a, b):
                if (a < n0) == (b < n0):
                    return (a % n0) * n0 + (b % n0)
                return None

            return 2 * n0, pos
        return None

    if chain == ("defining",):
        s1, _ = group.pair_sums()
        return s1.astype(np.int64)
    if chain[0] == "trivial":
        dim = chain[1]
        return group.order * np.eye(dim, dtype=np.int64)
    if chain[0] == "double":
        inner = _sum_from_pair_matrix(chain[1], group)
        if inner is None:
            return None
        d = inner.shape[0]
        out = np.zeros((2 * d, 2 * d), dtype=np.int64)
        out[:d, :d] = inner
        out[d:, d:] = inner
        return out
    if chain[0] in ("sym2", "wedge2"):
        base = position_map(chain[1])
        if base is None:
            return None
        dim_in, pos = base
        _, s4 = group.pair_sums()

        def pair_sum(a, b, c, d):
            # sum over group of inner[a, b] * inner[c, d]
            p, q = pos(a, b), pos(c, d)
            if p is None or q is None:
                return 0
            return int(s4[p, q])

        if chain[0] == "wedge2":
            idx = pairs_strict(dim_in)
            out = np.empty((len(idx), len(idx)), dtype=np.int64)
            for r, (k, l) in enumerate(idx):
                for c, (i, j) in enumerate(idx):
                    out[r, c] = pair_sum(k, i, l, j) - pair_sum(l, i, k, j)
            return out
        idx = pairs_weak(dim_in)
        out = np.empty((len(idx), len(idx)), dtype=np.int64)
        for r, (k, l) in enumerate(idx):
            for c, (i, j) in enumerate(idx):
                if k == l:
                    out[r, c] = pair_sum(k, i, k, j)
                else:
                    out[r, c] = pair_sum(k, i, l, j) + pair_sum(l, i, k, j)
        return out
    return None


def reynolds_sum(rep: Representation, group: WeylGroup) -> IntMatrix:
    """Sum of the images of all group elements, as an exact integer matrix.

    The averaged projector is this sum divided by the group order; rank and
    fixed space are unchanged by the scaling, so the sum is returned.
    """
    if group.elements is None:
        raise NotExhaustiveError(f"{group.label} was not exhaustively generated")
    fast = _sum_from_pair_matrix(rep.chain, group)
    if fast is not None:
        total = fast
    else:
        if rep.chain == ("explicit",):
            raise ValueError("explicit representations carry no element-wise images")
        total = np.zeros((rep.dim, rep.dim), dtype=np.int64)
        for lo in range(0, group.order, _REYNOLDS_CHUNK):
            chunk = group.elements[lo : lo + _REYNOLDS_CHUNK]
            total += batch_images(rep, chunk).sum(axis=0)
    return IntMatrix(rep.dim, rep.dim, (int(x) for x in total.reshape(-1)))


def invariant_dim_reynolds(rep: Representation, group: WeylGroup) -> int:
    """Rank of the group-averaged projector (1/|W|) * sum of images.

    Independent oracle for :func:`invariant_dim`; needs an exhaustive group.
    """
    if rep.dim == 0:
        return 0
    return integer_rank(reynolds_sum(rep, group))


# --- structural checks --------------------------------------------------------


def decomposition_check(datum: RootDatum) -> bool:
    """Check the two-copy alternating-square decomposition numerically.

    The alternating square of a doubled space splits into three copies of the
    alternating square plus one symmetric square; both the plain dimensions
    and the invariant dimensions must match.
    """
    v = rep_reflection(datum)
    s2 = rep_sym2(v)
    w2 = rep_wedge2(v)
    w2d = rep_wedge2(rep_double(v))
    dims_ok = w2d.dim == 3 * w2.dim + s2.dim
    inv_ok = invariant_dim(w2d) == 3 * invariant_dim(w2) + invariant_dim(s2)
    return dims_ok and inv_ok


@dataclass(frozen=True)
class InvariantReport:
    """Invariant dimensions of the three tensor constructions plus
    irreducibility of the underlying reflection representation."""

    label: str
    dim_sym2_inv: int
    dim_wedge2_inv: int
    dim_wedge2_doubled_inv: int
    irreducible: bool
    decomposition_consistent: bool

    @property
    def passed(self) -> bool:
        return (
            self.irreducible
            and self.dim_sym2_inv == 1
            and self.dim_wedge2_inv == 0
            and self.dim_wedge2_doubled_inv == 1
            and self.decomposition_consistent
        )


def invariant_report(datum: RootDatum) -> InvariantReport:
    """Run the full set of generator-only invariant checks for one datum."""
    v = rep_reflection(datum)
    return InvariantReport(
        label=datum.label,
        dim_sym2_inv=invariant_dim(rep_sym2(v)),
        dim_wedge2_inv=invariant_dim(rep_wedge2(v)),
        dim_wedge2_doubled_inv=invariant_dim(rep_wedge2(rep_double(v))),
        irreducible=irreducibility_check(v),
        decomposition_consistent=decomposition_check(datum),
    )


def commutant_dimension(rep: Representation) -> int:
    """Dimension of { X : X commutes with every generator image }."""
    n = rep.dim
    if n == 0:
        return 0
    ident = RatMatrix.identity(n)
    # vec(gX - Xg) = (I (x) g - g^T (x) I) vec(X)
    systems = [ident.kron(g) - g.transpose().kron(ident) for g in rep.generator_images]
    return len(stack_and_common_kernel(systems))


def irreducibility_check(rep: Representation) -> bool:
    """True iff the commutant is one-dimensional.

    Over the rationals a one-dimensional commutant certifies absolute
    irreducibility.
    """
    return commutant_dimension(rep) == 1


def invariant_bilinear_form(rep: Representation) -> RatMatrix:
    """The group-invariant bilinear form, as a primitive integer matrix.

    Solves g^T B g = B over all generators; the solution space must be
    one-dimensional (:class:`FormSpaceError` otherwise).  The representative
    is normalized to integer entries of content 1 with positive leading
    entry, and is checked to be symmetric and positive definite.
    """
    n = rep.dim
    if n == 0:
        raise FormSpaceError(0)
    ident = RatMatrix.identity(n * n)
    # vec(g^T B g) = (g^T (x) g^T) vec(B)
    systems = [g.transpose().kron(g.transpose()) - ident for g in rep.generator_images]
    basis = stack_and_common_kernel(systems)
    if len(basis) != 1:
        raise FormSpaceError(len(basis))
    vec = basis[0]
    form = RatMatrix(n, n, vec)
    prim, _ = form.primitive_integer()
    lead = next(x for x in prim.data if x)
    if lead < 0:
        prim = -prim
    if not prim.is_symmetric():
        raise AssertionError("invariant form is not symmetric")
    for k in range(1, n + 1):
        minor = IntMatrix(k, k, (prim[i, j] for i in range(k) for j in range(k)))
        if minor.det() <= 0:
            raise AssertionError("invariant form is not positive definite")
    return prim.to_rat()
