"""Moduli of realizations: assemble the homotopy groups of the space of
realizations of two-stage data into a report.

For data in dimensions (1, n) the components of the moduli space are the
orbits of Aut(A) on H^{n+1}(A_1; A_n); at each basepoint pi_1 is an
extension of the stabilizer of the k-invariant by H^n, pi_n is the group
of derivations, pi_i = H^{n+1-i} for 2 <= i < n, and everything above n
vanishes.

For data in dimensions (n, n+1) the moduli space is connected with a
unique realizing homotopy type: pi_2 = Hom(A_n, A_{n+1}) and, in the
pointed variant, pi_1 = Ext(A_n, A_{n+1}); forgetting the identification
of homotopy groups extends pi_1 by the full automorphism group, all of
which is realizable.

Reports carry every number with a provenance string, and the orbit
bookkeeping is cross-checked internally (orbit-stabilizer and Burnside)
before a report is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import FgAbGroup, ext_group, hom_group
from .cohomology import cohomology_range, derivations
from .errors import InternalConsistencyError
from .groups import DEFAULT_MAX_AUT_ORDER
from .pialgebra import (
    DEFAULT_MAX_ENDOS,
    PiAut,
    SymbolicAut,
    TwoStageDim1N,
    TwoStageDimNN1,
    act_on_kinvariants,
    pi_aut,
)

__all__ = [
    "Orbit",
    "OrbitDecomposition",
    "Pi1Extension",
    "PiRow",
    "BasepointBlock",
    "ModuliReport",
    "moduli_case_a",
    "moduli_case_b",
]

DEGREE_SHIFT_NOTE = (
    "degree shifts: pi_n <-> Der (1-cocycles, not H^1); "
    "pi_i <-> H^(n+1-i) for 2 <= i < n; pi_1 kernel <-> H^n; "
    "pi_0 <-> H^(n+1) / Aut(A)"
)


@dataclass(frozen=True)
class Orbit:
    """One component: an orbit of Aut(A) on the k-invariant classes."""

    representative: tuple[int, ...]
    size: int
    stabilizer_indices: tuple[int, ...]

    @property
    def stabilizer_order(self) -> int:
        return len(self.stabilizer_indices)


@dataclass(frozen=True)
class OrbitDecomposition:
    classes: tuple[tuple[int, ...], ...]
    permutations: tuple[tuple[int, ...], ...]
    orbits: tuple[Orbit, ...]


@dataclass(frozen=True)
class Pi1Extension:
    """pi_1 known as kernel and quotient; the gluing class is not computed."""

    kernel: FgAbGroup
    kernel_provenance: str
    quotient_description: str
    quotient_order: int | None
    order: int | None
    extension_class: str = "unknown"


@dataclass(frozen=True)
class PiRow:
    """One homotopy group of the moduli space, with its origin."""

    index: int
    description: str
    provenance: str
    group: FgAbGroup | None = None


@dataclass(frozen=True)
class BasepointBlock:
    label: str
    pi1: Pi1Extension
    orbit: Orbit | None = None


@dataclass(frozen=True)
class ModuliReport:
    case: str
    n: int
    input_description: str
    pi0: int
    pi0_provenance: str
    pi_rows: tuple[PiRow, ...]
    basepoints: tuple[BasepointBlock, ...]
    aut_order: int | None
    aut_description: str
    cohomology_table: tuple[tuple[int, str], ...] = ()
    orbit_decomposition: OrbitDecomposition | None = None
    tree: str | None = None
    notes: tuple[str, ...] = ()


def _require(condition: bool, message: str):
    if not condition:
        raise InternalConsistencyError(message)


def moduli_case_a(
    algebra: TwoStageDim1N,
    max_rank: int = 20_000,
    max_group_aut: int = DEFAULT_MAX_AUT_ORDER,
    max_endos: int = DEFAULT_MAX_ENDOS,
) -> ModuliReport:
    """The full report for data in dimensions 1 and n.

    Computes the cohomology ladder, the derivation group, Aut(A), its
    action on the k-invariant classes, and the per-orbit pi_1 extensions;
    verifies the orbit-stabilizer identity and Burnside's count before
    returning.
    """
    n = algebra.n
    module = algebra.an
    ladder = cohomology_range(module, n + 1, max_rank=max_rank)
    der = derivations(module, max_rank=max_rank)
    aut = pi_aut(algebra, max_group_aut=max_group_aut, max_endos=max_endos)

    top = ladder[n + 1]
    classes = top.classes()
    perms = tuple(act_on_kinvariants(algebra, pair, top) for pair in aut.elements)
    _check_action_laws(aut, perms, len(classes))

    orbits = _orbits(classes, perms)
    _require(sum(o.size for o in orbits) == len(classes), "orbit sizes do not sum to |H^(n+1)|")
    for o in orbits:
        _require(
            o.size * o.stabilizer_order == aut.order,
            "orbit-stabilizer identity failed",
        )
    fixed_total = sum(sum(1 for i, img in enumerate(p) if i == img) for p in perms)
    _require(fixed_total == len(orbits) * aut.order, "Burnside count disagrees with orbit count")
    _require(orbits[0].representative == classes[0], "zero class is not the first orbit representative")
    _require(all(p[0] == 0 for p in perms), "zero class is not fixed by the automorphism action")

    h_n = ladder[n].group
    pi_rows = [
        PiRow(
            index=n,
            description=der.group.symbol(),
            provenance="Der(A_1, A_n): crossed homomorphisms A_1 -> A_n",
            group=der.group,
        )
    ]
    for i in range(n - 1, 1, -1):
        g = ladder[n + 1 - i].group
        pi_rows.append(
            PiRow(
                index=i,
                description=g.symbol(),
                provenance=f"H^{n + 1 - i}(A_1; A_n)",
                group=g,
            )
        )

    blocks = []
    for pos, orbit in enumerate(orbits):
        split = orbit.representative == classes[0]
        label = f"k-invariant {_class_label(orbit.representative)}" + (" (split)" if split else "")
        pi1 = Pi1Extension(
            kernel=h_n,
            kernel_provenance=f"H^{n}(A_1; A_n)",
            quotient_description=(
                "Stab(k) <= Aut(A), the automorphisms realizable at this basepoint"
            ),
            quotient_order=orbit.stabilizer_order,
            order=(h_n.order * orbit.stabilizer_order) if h_n.is_finite else None,
            extension_class="unknown",
        )
        blocks.append(BasepointBlock(label=label, pi1=pi1, orbit=orbit))

    table = tuple((k, ladder[k].group.symbol()) for k in range(n + 2))
    tree = _realization_tree(n, orbits, classes)
    notes = (
        DEGREE_SHIFT_NOTE,
        f"H^1(A_1; A_n) = {ladder[1].group.symbol()} (context only; pi_n uses Der, not H^1)",
        f"pi_i = 0 for i > {n}",
    )
    return ModuliReport(
        case="A",
        n=n,
        input_description=(
            f"A_1: order {algebra.a1.order}; A_n = {module.base.symbol()}"
            + (" (trivial action)" if module.is_trivial_action() else " (nontrivial action)")
        ),
        pi0=len(orbits),
        pi0_provenance="orbits of Aut(A) on H^(n+1)(A_1; A_n)",
        pi_rows=tuple(pi_rows),
        basepoints=tuple(blocks),
        aut_order=aut.order,
        aut_description=f"compatible automorphism pairs (phi, psi), order {aut.order}",
        cohomology_table=table,
        orbit_decomposition=OrbitDecomposition(tuple(classes), perms, orbits),
        tree=tree,
        notes=notes,
    )


def moduli_case_b(
    algebra: TwoStageDimNN1,
    max_endos: int = DEFAULT_MAX_ENDOS,
) -> ModuliReport:
    """The report for data in dimensions n and n+1.

    Always connected with a unique realizing homotopy type; pi_2 = Hom,
    pointed pi_1 = Ext, and the unpointed pi_1 extends Aut(A) by Ext.
    When a stage group is infinite the automorphism side degrades to a
    symbolic description instead of failing.
    """
    an, an1 = algebra.an, algebra.an1
    hom = hom_group(an, an1).group
    ext = ext_group(an, an1)
    _require(ext.is_finite, "Ext of finitely generated groups must be finite")
    aut = pi_aut(algebra, max_endos=max_endos)
    symbolic = isinstance(aut, SymbolicAut)
    aut_order = None if symbolic else aut.order
    aut_desc = aut.description if symbolic else f"compatible automorphism pairs (psi_n, psi_n+1), order {aut.order}"

    pi_rows = (
        PiRow(
            index=2,
            description=hom.symbol(),
            provenance="Hom(A_n, A_n+1)",
            group=hom,
        ),
    )
    pointed_pi1 = Pi1Extension(
        kernel=ext,
        kernel_provenance="Ext(A_n, A_n+1)",
        quotient_description="trivial (pointed variant: identifications fixed)",
        quotient_order=1,
        order=ext.order,
        extension_class="unknown",
    )
    unpointed_pi1 = Pi1Extension(
        kernel=ext,
        kernel_provenance="Ext(A_n, A_n+1)",
        quotient_description=f"Aut(A) = {aut_desc}" if symbolic else "Aut(A): all automorphisms are realizable",
        quotient_order=aut_order,
        order=(ext.order * aut_order) if (aut_order is not None and ext.is_finite) else None,
        extension_class="unknown",
    )
    blocks = (
        BasepointBlock(label="pointed moduli (identifications fixed)", pi1=pointed_pi1),
        BasepointBlock(label="full moduli", pi1=unpointed_pi1),
    )
    report = ModuliReport(
        case="B",
        n=algebra.n,
        input_description=(
            f"A_n = {an.symbol()}; A_n+1 = {an1.symbol()}; q "
            + ("= 0" if algebra.q_is_zero() else "nonzero")
        ),
        pi0=1,
        pi0_provenance="connected: a unique homotopy type realizes the data",
        pi_rows=pi_rows,
        basepoints=blocks,
        aut_order=aut_order,
        aut_description=aut_desc,
        notes=(
            "pi_i = 0 for i >= 3",
            "every automorphism of A is realizable: pi_1 of the full moduli "
            "space surjects onto Aut(A)",
            "the realization is unique up to weak equivalence",
        ),
    )
    _require(report.pi0 == 1, "dimension (n, n+1) reports must be connected")
    return report


def _check_action_laws(aut: PiAut, perms: tuple[tuple[int, ...], ...], width: int):
    ident = tuple(range(width))
    _require(perms[aut.identity_index] == ident, "identity automorphism does not act trivially")
    m = len(perms)
    for i in range(m):
        for j in range(m):
            composed = tuple(perms[i][perms[j][x]] for x in range(width))
            _require(
                composed == perms[aut.compose(i, j)],
                "automorphism action is not compatible with composition",
            )


def _orbits(classes, perms) -> tuple[Orbit, ...]:
    count = len(classes)
    seen = [False] * count
    orbits = []
    for start in range(count):
        if seen[start]:
            continue
        frontier = [start]
        seen[start] = True
        members = [start]
        while frontier:
            x = frontier.pop()
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    members.append(y)
                    frontier.append(y)
        stab = tuple(i for i, p in enumerate(perms) if p[start] == start)
        orbits.append(Orbit(representative=classes[start], size=len(members), stabilizer_indices=stab))
    return tuple(orbits)


def _class_label(coords: tuple[int, ...]) -> str:
    if not coords or all(c == 0 for c in coords):
        return "0"
    return "(" + ", ".join(str(c) for c in coords) + ")"


def _realization_tree(n: int, orbits, classes) -> str:
    chain = " -- ".join(f"stage {i}" for i in range(max(n - 1, 1)))
    lines = [
        f"realization tree: single branching at stage {n - 2}",
        f"    {chain}",
        "        |",
    ]
    for idx, orbit in enumerate(orbits, start=1):
        split = orbit.representative == classes[0]
        tag = " (split)" if split else ""
        lines.append(
            f"        +-- type {idx}: k = {_class_label(orbit.representative)}{tag}"
        )
    return "\n".join(lines)
