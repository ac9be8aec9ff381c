"""Finitely generated abelian groups presented by integer relation matrices.

A group is ``Z^m`` modulo the lattice spanned by the columns of an ``m x r``
relation matrix.  Elements are integer coordinate vectors of length ``m``;
two vectors represent the same element when their difference lies in the
relation lattice.  The Smith normal form of the presentation gives the
invariant-factor normal form, canonical coordinates for elements, and an
explicit change of basis in both directions, which is what makes quotient
constructions (homology, cohomology classes) exact rather than heuristic.

Hom and Ext are computed honestly from presentations: Hom(A, B) is the
kernel of the induced map B^m -> B^r evaluated on A's relations, and Ext
uses the invariant-factor decomposition, Ext(Z/d, B) = B/dB.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Sequence

from .errors import SizeBoundError, ValidationError, Violation
from .linalg import (
    IntMatrix,
    block_diag,
    column_hermite,
    hstack,
    integer_kernel,
    kronecker,
    smith_normal_form,
)

__all__ = [
    "FgAbGroup",
    "AbHom",
    "Subquotient",
    "HomGroup",
    "CochainComplex",
    "hom_group",
    "ext_group",
    "homology_at",
    "kernel_subgroup",
    "direct_sum",
]


class FgAbGroup:
    """A finitely generated abelian group, fixed presentation, cached SNF."""

    __slots__ = (
        "presentation",
        "ngens",
        "_snf",
        "_diag",
        "_coord_slots",
        "invariant_factors",
        "free_rank",
        "_u_rows",
        "_uinv_rows",
    )

    def __init__(self, presentation: IntMatrix):
        self.presentation = presentation
        self.ngens = presentation.rows
        dec = smith_normal_form(presentation)
        self._snf = dec
        diag = list(dec.diagonal) + [0] * (self.ngens - len(dec.diagonal))
        self._diag = tuple(diag)
        # Coordinate slots: positions whose diagonal entry is not 1 survive
        # into the normal form, torsion slots first (SNF orders them).
        self._coord_slots = tuple(i for i, d in enumerate(diag) if d != 1)
        self.invariant_factors = tuple(d for d in diag if d >= 2)
        self.free_rank = sum(1 for d in diag if d == 0)
        self._u_rows = _sparse_rows(dec.u)
        self._uinv_rows = _sparse_rows(dec.u_inv)

    # -- constructors --------------------------------------------------

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(IntMatrix.zeros(rank, 0))

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(IntMatrix.zeros(0, 0))

    @classmethod
    def cyclic(cls, d: int) -> "FgAbGroup":
        if d < 1:
            raise ValueError("cyclic order must be positive")
        return cls(IntMatrix.from_rows([[d]]))

    @classmethod
    def from_cyclic_factors(cls, factors: Sequence[int]) -> "FgAbGroup":
        """Direct sum of cyclic groups; a factor of 0 means a copy of Z."""
        for d in factors:
            if d < 0:
                raise ValueError(f"cyclic factor must be >= 0, got {d}")
        blocks = [IntMatrix.from_rows([[d]]) if d > 0 else IntMatrix.zeros(1, 0) for d in factors]
        return cls(block_diag(blocks)) if blocks else cls.trivial()

    # -- normal form -----------------------------------------------------

    @property
    def normal_form(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.invariant_factors)

    def is_isomorphic_to(self, other: "FgAbGroup") -> bool:
        return self.normal_form == other.normal_form

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if not self.is_finite:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def symbol(self) -> str:
        """Readable isomorphism type, e.g. ``Z^2 x C2 x C4`` or ``0``."""
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"C{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FgAbGroup({self.symbol()}, {self.ngens} gens)"

    def same_presentation(self, other: "FgAbGroup") -> bool:
        return self.presentation == other.presentation

    # -- elements ----------------------------------------------------------

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of an element; equal vectors mod relations
        reduce identically.  Torsion coordinates land in [0, d)."""
        if len(vec) != self.ngens:
            raise ValueError(f"element of length {len(vec)}, group has {self.ngens} generators")
        out = []
        for i in self._coord_slots:
            w = sum(c * vec[j] for j, c in self._u_rows[i])
            d = self._diag[i]
            out.append(w % d if d else w)
        return tuple(out)

    def is_zero(self, vec: Sequence[int]) -> bool:
        return all(c == 0 for c in self.reduce(vec))

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        """A generator-coordinate representative of canonical coordinates."""
        if len(coords) != len(self._coord_slots):
            raise ValueError(f"expected {len(self._coord_slots)} coordinates, got {len(coords)}")
        w = [0] * self.ngens
        for slot, c in zip(self._coord_slots, coords):
            w[slot] = c
        return tuple(sum(c * w[j] for j, c in self._uinv_rows[i]) for i in range(self.ngens))

    def coordinate_moduli(self) -> tuple[int, ...]:
        """Modulus of each canonical coordinate; 0 marks a free coordinate."""
        return tuple(self._diag[i] for i in self._coord_slots)

    def element_coords(self, limit: int | None = None) -> list[tuple[int, ...]]:
        """All canonical coordinate tuples, mixed-radix order (finite only)."""
        if not self.is_finite:
            raise SizeBoundError("cannot enumerate an infinite group")
        n = self.order
        if limit is not None and n > limit:
            raise SizeBoundError("group too large to enumerate", requested=n, bound=limit)
        ranges = [range(d) for d in self.invariant_factors]
        return [tuple(c) for c in itertools.product(*ranges)]

    def elements(self, limit: int | None = None) -> list[tuple[int, ...]]:
        """Generator-coordinate representatives, aligned with element_coords."""
        return [self.lift(c) for c in self.element_coords(limit)]

    def modulo(self, d: int) -> "FgAbGroup":
        """The quotient G/dG on the same generator set."""
        if d < 1:
            raise ValueError("modulus must be positive")
        return FgAbGroup(hstack(self.presentation, IntMatrix.identity(self.ngens).scale(d)))


def _sparse_rows(m: IntMatrix) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(tuple((j, x) for j, x in enumerate(row) if x != 0) for row in m.data)


def direct_sum(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    """Direct sum; generator blocks appear in argument order."""
    if not groups:
        return FgAbGroup.trivial()
    return FgAbGroup(block_diag([g.presentation for g in groups]))


class AbHom:
    """A homomorphism of presented groups, given on generators by a matrix.

    ``matrix`` has shape (target generators) x (source generators); the
    constructor verifies that every source relation maps into the target
    relation lattice, so the map is well defined on the quotients.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match map "
                f"{source.ngens} gens -> {target.ngens} gens"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        for j in range(source.presentation.cols):
            rel = source.presentation.column(j)
            if not target.is_zero(_apply_sparse(matrix, rel)):
                raise ValidationError(
                    Violation(
                        "hom.matrix",
                        "matrix does not send source relations into target relations",
                        {"relation_column": j, "relation": rel},
                    )
                )

    @classmethod
    def identity(cls, group: FgAbGroup) -> "AbHom":
        return cls(group, group, IntMatrix.identity(group.ngens))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "AbHom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(vec)

    def __matmul__(self, other: "AbHom") -> "AbHom":
        """Composition: (f @ g)(x) = f(g(x))."""
        if not other.target.same_presentation(self.source):
            raise ValueError("composition mismatch: inner target differs from outer source")
        return AbHom(other.source, self.target, self.matrix @ other.matrix)

    def equals(self, other: "AbHom") -> bool:
        if not (
            self.source.same_presentation(other.source)
            and self.target.same_presentation(other.target)
        ):
            return False
        diff = self.matrix - other.matrix
        return all(self.target.is_zero(diff.column(j)) for j in range(diff.cols))

    def is_zero_map(self) -> bool:
        return all(self.target.is_zero(self.matrix.column(j)) for j in range(self.matrix.cols))

    def canonical_key(self) -> tuple:
        """Hashable form: canonical coordinates of every generator image."""
        return tuple(self.target.reduce(self.matrix.column(j)) for j in range(self.matrix.cols))

    def cokernel(self) -> FgAbGroup:
        return FgAbGroup(hstack(self.target.presentation, self.matrix))

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial

    def is_injective(self) -> bool:
        return kernel_subgroup(self).group.is_trivial

    def is_bijective(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def inverse(self) -> "AbHom":
        """The two-sided inverse of an isomorphism.

        Solves f(x_j) = e_j for each target generator over the lattice
        spanned by the matrix columns and the target relations; a right
        inverse of an injective map is automatically two-sided.
        """
        if not self.is_bijective():
            raise ValueError("homomorphism is not invertible")
        dec = smith_normal_form(hstack(self.matrix, self.target.presentation))
        cols = []
        for j in range(self.target.ngens):
            e = [0] * self.target.ngens
            e[j] = 1
            sol = dec.solve(e)
            if sol is None:
                raise ValueError("homomorphism is not invertible")
            cols.append(sol[: self.source.ngens])
        return AbHom(self.target, self.source, IntMatrix.from_columns(cols, rows=self.source.ngens))

    def __repr__(self):
        return f"AbHom({self.source.symbol()} -> {self.target.symbol()})"


def _apply_sparse(m: IntMatrix, vec: Sequence[int]) -> list[int]:
    """m @ vec exploiting zero entries of vec (relation columns are sparse)."""
    out = [0] * m.rows
    for j, x in enumerate(vec):
        if x == 0:
            continue
        for i in range(m.rows):
            mij = m.data[i][j]
            if mij:
                out[i] += mij * x
    return out


class Subquotient:
    """A subquotient L/K of an ambient Z^m, with exact coordinates both ways.

    ``basis`` holds a Hermite basis of the numerator lattice L as columns;
    ``group`` presents L/K on those basis columns.  ``class_coords`` sends
    any ambient vector lying in L to canonical coordinates of its class,
    and ``representative`` lifts canonical coordinates back to an ambient
    vector.  Together these are the sections that make cohomology classes
    and k-invariant transport concrete.
    """

    __slots__ = ("ambient_rank", "basis", "group", "_basis_snf")

    def __init__(self, ambient_rank: int, numerator: IntMatrix, denominator: IntMatrix):
        if numerator.rows != ambient_rank or denominator.rows != ambient_rank:
            raise ValueError("numerator and denominator must live in the ambient space")
        self.ambient_rank = ambient_rank
        self.basis = column_hermite(numerator)
        self._basis_snf = smith_normal_form(self.basis)
        rel_cols = []
        for j in range(denominator.cols):
            c = self._basis_snf.solve(denominator.column(j))
            if c is None:
                raise ValueError("denominator lattice is not contained in the numerator lattice")
            rel_cols.append(c)
        self.group = FgAbGroup(IntMatrix.from_columns(rel_cols, rows=self.basis.cols))

    def contains(self, vec: Sequence[int]) -> bool:
        return self._basis_snf.solve(vec) is not None

    def class_coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        c = self._basis_snf.solve(vec)
        if c is None:
            raise ValueError("vector does not lie in the numerator lattice")
        return self.group.reduce(c)

    def representative(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.basis.apply(self.group.lift(coords))


def kernel_subgroup(f: AbHom) -> Subquotient:
    """ker(f) as a subquotient of the source's generator space.

    The numerator is the preimage of the target relation lattice under the
    matrix of f, computed as the projection of an integer kernel; the
    denominator is the source relation lattice.
    """
    stacked = hstack(f.matrix, -f.target.presentation)
    full = integer_kernel(stacked)
    proj = IntMatrix.from_rows(full.to_rows()[: f.source.ngens], cols=full.cols)
    return Subquotient(f.source.ngens, proj, f.source.presentation)


class HomGroup:
    """Hom(A, B) in normal form together with generating homomorphisms."""

    __slots__ = ("source", "target", "group", "generators", "_sub")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, group: FgAbGroup,
                 generators: tuple[AbHom, ...], sub: Subquotient | None):
        self.source = source
        self.target = target
        self.group = group
        self.generators = generators
        self._sub = sub

    def hom_at(self, coords: Sequence[int]) -> AbHom:
        """The homomorphism with the given canonical coordinates."""
        if self._sub is None:
            if any(coords):
                raise ValueError("nonzero coordinates in a trivial Hom group")
            return AbHom.zero(self.source, self.target)
        flat = self._sub.representative(coords)
        return AbHom(self.source, self.target, _unflatten(flat, self.target.ngens, self.source.ngens))

    def all_homs(self, limit: int | None = None) -> list[AbHom]:
        return [self.hom_at(c) for c in self.group.element_coords(limit)]


def _unflatten(flat: Sequence[int], rows: int, ncols: int) -> IntMatrix:
    # Column-stacked layout: entry (i, j) of the matrix sits at j*rows + i.
    return IntMatrix(rows, ncols, [flat[j * rows + i] for i in range(rows) for j in range(ncols)])


def hom_group(a: FgAbGroup, b: FgAbGroup) -> HomGroup:
    """Hom_Z(A, B) computed from presentations.

    Generator images live in B^m (m = generators of A); requiring A's
    relations to die is the kernel of the evaluation map B^m -> B^r given
    by the Kronecker matrix of the relation block.  The kernel subquotient
    machinery then yields the normal form and honest generating maps.
    """
    m = a.ngens
    if m == 0:
        return HomGroup(a, b, FgAbGroup.trivial(), (), None)
    bm = direct_sum([b] * m)
    rels = a.presentation
    br = direct_sum([b] * rels.cols)
    eval_matrix = kronecker(rels.transpose(), IntMatrix.identity(b.ngens))
    f = AbHom(bm, br, eval_matrix)
    sub = kernel_subgroup(f)
    gens = []
    width = len(sub.group.coordinate_moduli())
    for idx in range(width):
        coords = [0] * width
        coords[idx] = 1
        flat = sub.representative(coords)
        gens.append(AbHom(a, b, _unflatten(flat, b.ngens, m)))
    return HomGroup(a, b, sub.group, tuple(gens), sub)


def ext_group(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    """Ext_Z(A, B) via the invariant-factor decomposition of A.

    Free summands contribute nothing; each torsion factor Z/d contributes
    B/dB.  Always finite for finitely generated inputs.
    """
    pieces = [b.modulo(d) for d in a.invariant_factors]
    return direct_sum(pieces)


class CochainComplex:
    """A finite sequence of groups and maps with d(k+1) after d(k) zero."""

    __slots__ = ("groups", "maps")

    def __init__(self, groups: Sequence[FgAbGroup], maps: Sequence[AbHom]):
        groups = tuple(groups)
        maps = tuple(maps)
        if len(maps) != max(len(groups) - 1, 0):
            raise ValueError(f"{len(groups)} groups need {max(len(groups) - 1, 0)} maps, got {len(maps)}")
        for k, f in enumerate(maps):
            if not f.source.same_presentation(groups[k]) or not f.target.same_presentation(groups[k + 1]):
                raise ValueError(f"map {k} does not connect group {k} to group {k + 1}")
        for k in range(len(maps) - 1):
            composite = maps[k + 1].matrix @ maps[k].matrix
            for j in range(composite.cols):
                if not groups[k + 2].is_zero(composite.column(j)):
                    raise ValidationError(
                        Violation(
                            "complex.maps",
                            f"d{k + 1} after d{k} is nonzero",
                            {"position": k, "generator": j},
                        )
                    )
        self.groups = groups
        self.maps = maps

    def __len__(self):
        return len(self.groups)


def homology_at(complex_: CochainComplex, k: int) -> Subquotient:
    """ker(d_k) / im(d_{k-1}) with class coordinates and representatives.

    The numerator is the lattice of vectors that d_k sends into the
    relation lattice one step up (all of Z^m at the top end); the
    denominator adjoins the image of d_{k-1} to the relation lattice of
    the slot itself.
    """
    if not 0 <= k < len(complex_.groups):
        raise ValueError(f"slot {k} outside complex of length {len(complex_.groups)}")
    g = complex_.groups[k]
    if k < len(complex_.maps):
        f = complex_.maps[k]
        stacked = hstack(f.matrix, -f.target.presentation)
        full = integer_kernel(stacked)
        numerator = IntMatrix.from_rows(full.to_rows()[: g.ngens], cols=full.cols)
    else:
        numerator = IntMatrix.identity(g.ngens)
    denominator = g.presentation
    if k > 0:
        denominator = hstack(denominator, complex_.maps[k - 1].matrix)
    return Subquotient(g.ngens, numerator, denominator)
