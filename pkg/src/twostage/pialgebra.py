"""Two-stage homotopy-type data and its automorphisms.

Two input shapes are supported.  The first concentrates a group in
dimension 1 and a module over it in dimension n >= 2; its homotopy types
are glued by a class in H^{n+1} of the group with module coefficients.
The second concentrates two abelian groups in adjacent dimensions n and
n+1 (n >= 2), glued by the map q induced by precomposition with the Hopf
map: a homomorphism out of A_n/2A_n in the stable range n >= 3, and a
quadratic function on elements when n = 2.

``pi_aut`` computes the group of compatible automorphism pairs, and
``act_on_kinvariants`` transports cohomology classes along a pair, which
is the action whose orbits count homotopy types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .abelian import AbHom, FgAbGroup, hom_group
from .cohomology import Cocycle, CohomologyGroup
from .errors import (
    InternalConsistencyError,
    SizeBoundError,
    ValidationError,
    Violation,
)
from .groups import DEFAULT_MAX_AUT_ORDER, FiniteGroup, GModule, automorphism_group
from .linalg import IntMatrix

__all__ = [
    "TwoStageDim1N",
    "TwoStageDimNN1",
    "QuadraticMap",
    "AutPairA",
    "AutPairB",
    "PiAut",
    "SymbolicAut",
    "abelian_automorphisms",
    "pi_aut",
    "act_on_kinvariants",
]

DEFAULT_MAX_ENDOS = 4096
DEFAULT_MAX_QUADRATIC_ORDER = 64


class TwoStageDim1N:
    """Stages in dimensions 1 and n: a finite group and a module over it."""

    __slots__ = ("n", "a1", "an")

    def __init__(self, n: int, an: GModule):
        if n < 2:
            raise ValidationError(Violation("n", f"dimension must be at least 2, got {n}"))
        self.n = n
        self.a1 = an.group
        self.an = an

    def __repr__(self):
        return f"TwoStageDim1N(n={self.n}, |A1|={self.a1.order}, An={self.an.base.symbol()})"


class QuadraticMap:
    """A function q: A -> B with bilinear cross-effect, given on elements.

    Values are stored per element of A in canonical-coordinate order.
    Bilinearity of b(x, y) = q(x+y) - q(x) - q(y) is checked exhaustively,
    which is why the source must be finite and small.
    """

    __slots__ = ("source", "target", "values", "_strides")

    def __init__(
        self,
        source: FgAbGroup,
        target: FgAbGroup,
        values: Sequence[Sequence[int]],
        max_order: int = DEFAULT_MAX_QUADRATIC_ORDER,
    ):
        if not source.is_finite:
            raise ValidationError(
                Violation("q.source", "quadratic maps require a finite source group")
            )
        if source.order > max_order:
            raise SizeBoundError(
                "source too large for exhaustive quadratic validation",
                requested=source.order,
                bound=max_order,
            )
        coords_list = source.element_coords()
        if len(values) != len(coords_list):
            raise ValidationError(
                Violation(
                    "q.values",
                    f"need one value per element: {len(coords_list)} expected, {len(values)} given",
                )
            )
        vals = []
        for v in values:
            v = tuple(int(x) for x in v)
            if len(v) != target.ngens:
                raise ValidationError(
                    Violation("q.values", f"value length {len(v)} does not match {target.ngens} generators")
                )
            vals.append(v)
        self.source = source
        self.target = target
        self.values = tuple(vals)
        moduli = source.coordinate_moduli()
        strides = [0] * len(moduli)
        acc = 1
        for i in range(len(moduli) - 1, -1, -1):
            strides[i] = acc
            acc *= moduli[i]
        self._strides = tuple(strides)
        self._check_cross_effect()

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup, max_order: int = DEFAULT_MAX_QUADRATIC_ORDER) -> "QuadraticMap":
        if not source.is_finite:
            raise ValidationError(
                Violation("q.source", "quadratic maps require a finite source group")
            )
        count = source.order
        if count > max_order:
            raise SizeBoundError(
                "source too large for exhaustive quadratic validation",
                requested=count,
                bound=max_order,
            )
        return cls(source, target, [(0,) * target.ngens] * count, max_order=max_order)

    def _index(self, coords: Sequence[int]) -> int:
        return sum(c * s for c, s in zip(coords, self._strides))

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        """q(x) in target generator coordinates; x in source generator coordinates."""
        return self.values[self._index(self.source.reduce(vec))]

    def cross_effect(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        s = [a + b for a, b in zip(x, y)]
        return tuple(a - b - c for a, b, c in zip(self(s), self(x), self(y)))

    def _check_cross_effect(self):
        els = self.source.elements()
        for x1 in els:
            for x2 in els:
                x12 = [a + b for a, b in zip(x1, x2)]
                for y in els:
                    lhs = self.cross_effect(x12, y)
                    rhs = [a + b for a, b in zip(self.cross_effect(x1, y), self.cross_effect(x2, y))]
                    diff = [a - b for a, b in zip(lhs, rhs)]
                    if not self.target.is_zero(diff):
                        raise ValidationError(
                            Violation(
                                "q.values",
                                "cross-effect b(x, y) = q(x+y) - q(x) - q(y) is not bilinear",
                                {"x1": tuple(x1), "x2": tuple(x2), "y": tuple(y)},
                            )
                        )

    def is_zero_map(self) -> bool:
        return all(self.target.is_zero(v) for v in self.values)

    def transport(self, psi_n: AbHom, psi_n1: AbHom) -> "QuadraticMap":
        """The conjugate psi_n1 . q . psi_n^{-1}, for automorphisms of the
        source and target."""
        inv = psi_n.inverse()
        coords_list = self.source.element_coords()
        values = [psi_n1(self(inv(self.source.lift(c)))) for c in coords_list]
        return QuadraticMap(self.source, self.target, values, max_order=self.source.order)

    def __repr__(self):
        return f"QuadraticMap({self.source.symbol()} -> {self.target.symbol()})"


class TwoStageDimNN1:
    """Stages in adjacent dimensions n and n+1, glued by the Hopf map q.

    For n >= 3, q is a homomorphism A_n/2A_n -> A_{n+1} (pass None for the
    zero map).  For n = 2, q is a QuadraticMap and A_n must be finite.
    """

    __slots__ = ("n", "an", "an1", "q")

    def __init__(self, n: int, an: FgAbGroup, an1: FgAbGroup, q=None):
        if n < 2:
            raise ValidationError(Violation("n", f"dimension must be at least 2, got {n}"))
        if n == 2:
            if not an.is_finite:
                raise ValidationError(
                    Violation("an", "quadratic gluing in dimension 2 requires a finite group")
                )
            if q is None:
                q = QuadraticMap.zero(an, an1)
            if not isinstance(q, QuadraticMap):
                raise ValidationError(
                    Violation("q", "dimension 2 needs q as an element table (QuadraticMap)")
                )
            if not (q.source.same_presentation(an) and q.target.same_presentation(an1)):
                raise ValidationError(Violation("q", "q must map A_n to A_{n+1}"))
        else:
            mod2 = an.modulo(2)
            if q is None:
                q = AbHom.zero(mod2, an1)
            if not isinstance(q, AbHom):
                raise ValidationError(
                    Violation("q", "dimensions >= 3 need q as a homomorphism out of A_n/2A_n")
                )
            if not (q.source.same_presentation(mod2) and q.target.same_presentation(an1)):
                raise ValidationError(
                    Violation("q", "q must be defined on A_n/2A_n with values in A_{n+1}")
                )
        self.n = n
        self.an = an
        self.an1 = an1
        self.q = q

    def q_is_zero(self) -> bool:
        return self.q.is_zero_map()

    def __repr__(self):
        return f"TwoStageDimNN1(n={self.n}, {self.an.symbol()}, {self.an1.symbol()})"


# -- automorphism pairs ------------------------------------------------------


class AutPairA:
    """(phi, psi): a group automorphism and a compatible coefficient
    automorphism, psi(g.m) = phi(g).psi(m)."""

    __slots__ = ("phi", "psi")

    def __init__(self, phi: tuple[int, ...], psi: AbHom):
        self.phi = tuple(phi)
        self.psi = psi

    def key(self):
        return (self.phi, self.psi.canonical_key())

    def compose(self, other: "AutPairA") -> "AutPairA":
        phi = tuple(self.phi[g] for g in other.phi)
        return AutPairA(phi, self.psi @ other.psi)

    def __repr__(self):
        return f"AutPairA(phi={self.phi}, psi={self.psi.canonical_key()})"


class AutPairB:
    """(psi_n, psi_n1): automorphisms of the two stages commuting with q."""

    __slots__ = ("psi_n", "psi_n1")

    def __init__(self, psi_n: AbHom, psi_n1: AbHom):
        self.psi_n = psi_n
        self.psi_n1 = psi_n1

    def key(self):
        return (self.psi_n.canonical_key(), self.psi_n1.canonical_key())

    def compose(self, other: "AutPairB") -> "AutPairB":
        return AutPairB(self.psi_n @ other.psi_n, self.psi_n1 @ other.psi_n1)

    def __repr__(self):
        return f"AutPairB({self.psi_n.canonical_key()}, {self.psi_n1.canonical_key()})"


@dataclass(frozen=True)
class SymbolicAut:
    """Stands in for an automorphism group that cannot be enumerated
    (infinite stage groups); carries a description only."""

    description: str


class PiAut:
    """The finite group of compatible automorphism pairs, with its
    composition table; identity at a known index."""

    __slots__ = ("case", "elements", "table", "identity_index", "_index")

    def __init__(self, case: str, elements: Sequence):
        elements = sorted(elements, key=lambda p: p.key())
        index = {p.key(): i for i, p in enumerate(elements)}
        if len(index) != len(elements):
            raise InternalConsistencyError("duplicate automorphism pairs")
        table = []
        for p in elements:
            row = []
            for s in elements:
                k = p.compose(s).key()
                if k not in index:
                    raise InternalConsistencyError("automorphism pairs are not closed under composition")
                row.append(index[k])
            table.append(tuple(row))
        self.case = case
        self.elements = tuple(elements)
        self.table = tuple(table)
        self._index = index
        ident = None
        n = len(elements)
        for i in range(n):
            if all(self.table[i][j] == j and self.table[j][i] == j for j in range(n)):
                ident = i
                break
        if ident is None:
            raise InternalConsistencyError("no identity among the automorphism pairs")
        self.identity_index = ident

    @property
    def order(self) -> int:
        return len(self.elements)

    def compose(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        for j in range(len(self.elements)):
            if self.table[i][j] == self.identity_index:
                return j
        raise InternalConsistencyError("element without inverse in automorphism group")

    def index_of(self, pair) -> int:
        return self._index[pair.key()]

    def __repr__(self):
        return f"PiAut(case {self.case}, order {self.order})"


def abelian_automorphisms(group: FgAbGroup, max_endos: int = DEFAULT_MAX_ENDOS) -> list[AbHom]:
    """All automorphisms of a finite abelian group, sorted canonically."""
    if not group.is_finite:
        raise SizeBoundError("cannot enumerate automorphisms of an infinite group")
    endos = hom_group(group, group).all_homs(max_endos)
    autos = [f for f in endos if f.is_bijective()]
    autos.sort(key=lambda f: f.canonical_key())
    return autos


def pi_aut(
    algebra,
    max_group_aut: int = DEFAULT_MAX_AUT_ORDER,
    max_endos: int = DEFAULT_MAX_ENDOS,
):
    """Aut of the two-stage data: compatible automorphism pairs.

    Returns a PiAut, or a SymbolicAut marker when a stage group is
    infinite (second shape only) and enumeration is impossible.
    """
    if isinstance(algebra, TwoStageDim1N):
        return _pi_aut_case_a(algebra, max_group_aut, max_endos)
    if isinstance(algebra, TwoStageDimNN1):
        return _pi_aut_case_b(algebra, max_endos)
    raise TypeError(f"not a two-stage algebra: {algebra!r}")


def _pi_aut_case_a(algebra: TwoStageDim1N, max_group_aut: int, max_endos: int) -> PiAut:
    group = algebra.a1
    module = algebra.an
    base = module.base
    group_autos = automorphism_group(group, max_order=max_group_aut)
    base_autos = abelian_automorphisms(base, max_endos=max_endos)
    action = [AbHom(base, base, m) for m in module.action]
    pairs = []
    for phi in group_autos:
        for psi in base_autos:
            if all((psi @ action[g]).equals(action[phi[g]] @ psi) for g in range(group.order)):
                pairs.append(AutPairA(phi, psi))
    return PiAut("A", pairs)


def _pi_aut_case_b(algebra: TwoStageDimNN1, max_endos: int) -> PiAut | SymbolicAut:
    an, an1, q = algebra.an, algebra.an1, algebra.q
    if not (an.is_finite and an1.is_finite):
        return SymbolicAut(_symbolic_description(algebra))
    autos_n = abelian_automorphisms(an, max_endos=max_endos)
    autos_n1 = abelian_automorphisms(an1, max_endos=max_endos)
    pairs = []
    if algebra.n == 2:
        els = an.elements()
        for f in autos_n:
            images = [f(x) for x in els]
            for g in autos_n1:
                if all(
                    an1.reduce(g(q(x))) == an1.reduce(q(fx))
                    for x, fx in zip(els, images)
                ):
                    pairs.append(AutPairB(f, g))
    else:
        mod2 = q.source
        for f in autos_n:
            f_bar = AbHom(mod2, mod2, f.matrix)
            lhs = q @ f_bar
            for g in autos_n1:
                if (g @ q).equals(lhs):
                    pairs.append(AutPairB(f, g))
    return PiAut("B", pairs)


def _aut_symbol(group: FgAbGroup) -> str:
    if group.free_rank > 0 and not group.invariant_factors:
        return f"GL_{group.free_rank}(Z)"
    return f"Aut({group.symbol()})"


def _symbolic_description(algebra: TwoStageDimNN1) -> str:
    left = _aut_symbol(algebra.an)
    right = _aut_symbol(algebra.an1)
    if algebra.q_is_zero():
        return f"{left} x {right}"
    return f"stabilizer of q in {left} x {right}"


# -- transporting k-invariants ----------------------------------------------


def act_on_kinvariants(
    algebra: TwoStageDim1N, pair: AutPairA, coh: CohomologyGroup
) -> tuple[int, ...]:
    """The permutation a compatible pair induces on the classes of
    H^{n+1}(A_1; A_n), as images indexed by ``coh.classes()`` order.

    A class [z] goes to [psi . z . phi^{-1}-coordinatewise]; the
    transported representative must again be a cocycle, anything else is
    a consistency failure, not an input error.
    """
    if coh.module is not algebra.an:
        raise ValueError("cohomology group does not belong to this algebra's module")
    group = algebra.a1
    n = group.order
    phi = pair.phi
    phi_inv = [0] * n
    for g, image in enumerate(phi):
        phi_inv[image] = g
    psi_matrix = pair.psi.matrix
    classes = coh.classes()
    position = {c: i for i, c in enumerate(classes)}
    degree = coh.degree
    images = []
    for c in classes:
        z = coh.cocycle_at(c)
        moved = _transport_cocycle(z, phi_inv, psi_matrix, n, degree)
        if not coh.is_cocycle(moved):
            raise InternalConsistencyError(
                "transported representative is not a cocycle; transport is broken"
            )
        images.append(position[coh.class_of(moved)])
    perm = tuple(images)
    if sorted(perm) != list(range(len(classes))):
        raise InternalConsistencyError("transport did not permute the classes")
    return perm


def _transport_cocycle(
    z: Cocycle, phi_inv: Sequence[int], psi_matrix: IntMatrix, n: int, degree: int
) -> Cocycle:
    out = []
    for t in itertools.product(range(1, n), repeat=degree):
        source = tuple(phi_inv[g] for g in t)
        out.extend(psi_matrix.apply(z.value(source)))
    return Cocycle(z.module, degree, out)
