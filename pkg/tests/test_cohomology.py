"""Group cohomology: classical values, pointwise cocycle identities, and
agreement between the matrix route and the enumeration oracle."""

import random

import pytest

from twostage.abelian import FgAbGroup, hom_group
from twostage.cohomology import (
    Cocycle,
    bar_complex,
    cohomology,
    derivations,
    oracle_cohomology,
)
from twostage.errors import SizeBoundError
from twostage.groups import FiniteGroup, GModule
from twostage.linalg import IntMatrix


def cyclic_module(group, size, multiplier):
    """Z/size with a chosen generator of the group acting by multiplication.

    The action list is built by powering the multiplier along element
    indices, which is valid for cyclic groups with their standard table.
    """
    mats = [IntMatrix.from_rows([[pow(multiplier, g, size)]]) for g in range(group.order)]
    return GModule(group, FgAbGroup.cyclic(size), mats)


def s3():
    return FiniteGroup.from_permutations([(1, 0, 2), (0, 2, 1)])


def relabel_module(module, perm):
    group = module.group.relabel(perm)
    action = [None] * group.order
    for g in range(group.order):
        action[perm[g]] = module.action[g]
    return GModule(group, module.base, action)


# -- frozen classical values --------------------------------------------


def test_z2_with_z2_coefficients_all_degrees():
    m = GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(2))
    for k in range(6):
        assert cohomology(m, k).group.invariant_factors == (2,)


def test_z3_with_z3_coefficients():
    m = GModule.trivial(FiniteGroup.cyclic(3), FgAbGroup.cyclic(3))
    for k in range(4):
        assert cohomology(m, k).group.invariant_factors == (3,)


def test_coprime_coefficients_vanish_above_degree_zero():
    m = GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(3))
    assert cohomology(m, 0).group.invariant_factors == (3,)
    for k in range(1, 5):
        assert cohomology(m, k).group.is_trivial


def test_sign_action_kills_cohomology_but_not_derivations():
    m = cyclic_module(FiniteGroup.cyclic(2), 3, -1)
    for k in range(3):
        assert cohomology(m, k).group.is_trivial
    der = derivations(m)
    assert der.group.invariant_factors == (3,)


def test_twisted_z4_coefficients():
    # multiplication by 3 is the sign action on Z/4
    m = cyclic_module(FiniteGroup.cyclic(2), 4, 3)
    for k in range(3):
        assert cohomology(m, k).group.invariant_factors == (2,)


def test_degree_zero_is_fixed_submodule():
    cases = [
        GModule.trivial(FiniteGroup.cyclic(4), FgAbGroup.cyclic(2)),
        cyclic_module(FiniteGroup.cyclic(2), 4, 3),
        cyclic_module(FiniteGroup.cyclic(3), 7, 2),
        GModule(
            FiniteGroup.from_cyclic_factors([2, 2]),
            FgAbGroup.from_cyclic_factors([2, 2]),
            [
                IntMatrix.identity(2),
                IntMatrix.from_rows([[0, 1], [1, 0]]),
                IntMatrix.from_rows([[0, 1], [1, 0]]),
                IntMatrix.identity(2),
            ],
        ),
    ]
    for m in cases:
        fixed = 0
        for vec in m.base.elements():
            if all(m.base.reduce(m.act(g, vec)) == m.base.reduce(vec) for g in range(m.group.order)):
                fixed += 1
        assert cohomology(m, 0).group.order == fixed


# -- complex structure ----------------------------------------------------


def test_bar_complex_group_sizes():
    m = GModule.trivial(FiniteGroup.cyclic(3), FgAbGroup.cyclic(2))
    complex_ = bar_complex(m, 2)
    assert [g.order for g in complex_.groups] == [2, 4, 16]


def test_bar_complex_trivial_group():
    m = GModule.trivial(FiniteGroup.trivial(), FgAbGroup.cyclic(5))
    complex_ = bar_complex(m, 3)
    assert complex_.groups[0].order == 5
    assert all(g.is_trivial for g in complex_.groups[1:])
    for k in range(4):
        assert cohomology(m, k).group.order == (5 if k == 0 else 1)


def test_differentials_compose_to_zero_on_random_modules():
    rng = random.Random(20260814)
    groups = [
        FiniteGroup.cyclic(2),
        FiniteGroup.cyclic(3),
        FiniteGroup.cyclic(4),
        FiniteGroup.from_cyclic_factors([2, 2]),
        s3(),
    ]
    bases = [FgAbGroup.cyclic(2), FgAbGroup.cyclic(4), FgAbGroup.from_cyclic_factors([2, 2])]
    for _ in range(25):
        group = rng.choice(groups)
        base = rng.choice(bases)
        m = GModule.trivial(group, base)
        complex_ = bar_complex(m, 3)
        for k in range(len(complex_.maps) - 1):
            composite = complex_.maps[k + 1].matrix @ complex_.maps[k].matrix
            for j in range(composite.cols):
                assert complex_.groups[k + 2].is_zero(composite.column(j))


def test_bar_complex_size_bound():
    m = GModule.trivial(FiniteGroup.cyclic(5), FgAbGroup.cyclic(2))
    with pytest.raises(SizeBoundError):
        bar_complex(m, 6, max_rank=100)


# -- representatives are honest cocycles ----------------------------------


def pointwise_two_cocycle_holds(module, z):
    group, base = module.group, module.base
    n = group.order
    for g in range(n):
        for h in range(n):
            for k in range(n):
                lhs = list(module.act(g, z.value((h, k))))
                gh, hk = group.table[g][h], group.table[h][k]
                total = [
                    a - b + c - d
                    for a, b, c, d in zip(
                        lhs, z.value((gh, k)), z.value((g, hk)), z.value((g, h))
                    )
                ]
                if not base.is_zero(total):
                    return False
    return True


def test_degree_two_representatives_satisfy_cocycle_identity():
    cases = [
        GModule.trivial(FiniteGroup.cyclic(4), FgAbGroup.cyclic(2)),
        GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(2)),
        cyclic_module(FiniteGroup.cyclic(2), 4, 3),
        GModule.trivial(s3(), FgAbGroup.cyclic(6)),
    ]
    for m in cases:
        H = cohomology(m, 2)
        for rep in H.representatives:
            assert H.is_cocycle(rep)
            assert pointwise_two_cocycle_holds(m, rep)


def test_derivation_representatives_satisfy_crossed_homomorphism_law():
    cases = [
        cyclic_module(FiniteGroup.cyclic(2), 3, -1),
        GModule.trivial(FiniteGroup.cyclic(4), FgAbGroup.cyclic(2)),
        cyclic_module(FiniteGroup.cyclic(3), 7, 2),
    ]
    for m in cases:
        der = derivations(m)
        for d in der.representatives:
            for g in range(m.group.order):
                for h in range(m.group.order):
                    gh = m.group.table[g][h]
                    rhs = [a + b for a, b in zip(m.act(g, d.value((h,))), d.value((g,)))]
                    diff = [a - b for a, b in zip(d.value((gh,)), rhs)]
                    assert m.base.is_zero(diff)


def test_trivial_action_derivations_are_homs_from_group():
    m = GModule.trivial(FiniteGroup.cyclic(4), FgAbGroup.cyclic(2))
    der = derivations(m)
    homs = hom_group(FgAbGroup.cyclic(4), FgAbGroup.cyclic(2))
    assert der.group.normal_form == homs.group.normal_form


# -- class arithmetic ------------------------------------------------------


def test_class_of_inverts_representatives():
    m = GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(4))
    H = cohomology(m, 2)
    for coords in H.classes():
        assert H.class_of(H.cocycle_at(coords)) == coords


def test_class_of_is_additive_and_kills_scaled_classes():
    m = GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(2))
    H = cohomology(m, 2)
    rep = H.representatives[0]
    assert H.class_of(rep) == (1,)
    assert H.class_of(rep + rep) == (0,)


def test_class_of_rejects_non_cocycles():
    m = GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(4))
    H = cohomology(m, 1)
    bad = Cocycle(m, 1, [1])
    assert not H.is_cocycle(bad)
    with pytest.raises(ValueError):
        H.class_of(bad)


def test_cocycle_value_normalization_and_validation():
    m = GModule.trivial(FiniteGroup.cyclic(3), FgAbGroup.cyclic(5))
    z = Cocycle(m, 2, [1, 2, 3, 4])
    assert z.value((0, 1)) == (0,)
    assert z.value((1, 0)) == (0,)
    assert z.value((1, 2)) == (2,)
    assert len(z.as_dict()) == 4
    with pytest.raises(ValueError):
        z.value((1,))
    with pytest.raises(ValueError):
        z.value((1, 3))
    with pytest.raises(ValueError):
        Cocycle(m, 2, [1, 2, 3])


def test_h1_with_trivial_action_is_homs_from_abelianization():
    pairs = [
        (s3(), FgAbGroup.cyclic(6)),
        (s3(), FgAbGroup.cyclic(3)),
        (FiniteGroup.from_cyclic_factors([2, 2]), FgAbGroup.cyclic(2)),
        (FiniteGroup.cyclic(6), FgAbGroup.cyclic(4)),
    ]
    for group, base in pairs:
        H = cohomology(GModule.trivial(group, base), 1)
        expected = hom_group(group.abelianization(), base)
        assert H.group.normal_form == expected.group.normal_form


# -- oracle agreement ------------------------------------------------------


def oracle_pool():
    v4_swap = GModule(
        FiniteGroup.from_cyclic_factors([2, 2]),
        FgAbGroup.from_cyclic_factors([2, 2]),
        [
            IntMatrix.identity(2),
            IntMatrix.from_rows([[0, 1], [1, 0]]),
            IntMatrix.from_rows([[0, 1], [1, 0]]),
            IntMatrix.identity(2),
        ],
    )
    c3_on_klein = GModule(
        FiniteGroup.cyclic(3),
        FgAbGroup.from_cyclic_factors([2, 2]),
        [
            IntMatrix.identity(2),
            IntMatrix.from_rows([[0, 1], [1, 1]]),
            IntMatrix.from_rows([[1, 1], [1, 0]]),
        ],
    )
    return [
        (GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(2)), 3),
        (GModule.trivial(FiniteGroup.cyclic(3), FgAbGroup.cyclic(3)), 2),
        (GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(3)), 2),
        (cyclic_module(FiniteGroup.cyclic(2), 3, -1), 2),
        (cyclic_module(FiniteGroup.cyclic(2), 4, 3), 2),
        (cyclic_module(FiniteGroup.cyclic(3), 4, 1), 2),
        (GModule.trivial(FiniteGroup.cyclic(4), FgAbGroup.cyclic(2)), 2),
        (v4_swap, 1),
        (c3_on_klein, 2),
    ]


def test_matrix_route_matches_enumeration_oracle():
    for module, kmax in oracle_pool():
        for k in range(kmax + 1):
            got = cohomology(module, k).group
            want = oracle_cohomology(module, k)
            assert got.free_rank == 0
            assert got.invariant_factors == want, (module, k)


def test_oracle_normalized_and_unnormalized_agree():
    m2 = GModule.trivial(FiniteGroup.cyclic(2), FgAbGroup.cyclic(2))
    neg = cyclic_module(FiniteGroup.cyclic(2), 3, -1)
    for module in (m2, neg):
        for k in range(3):
            assert oracle_cohomology(module, k, normalized=True) == oracle_cohomology(
                module, k, normalized=False
            )


def test_oracle_size_bound():
    m = GModule.trivial(FiniteGroup.cyclic(4), FgAbGroup.cyclic(4))
    with pytest.raises(SizeBoundError):
        oracle_cohomology(m, 3, max_enumeration=1000)


# -- invariance ------------------------------------------------------------


def test_cohomology_invariant_under_relabeling():
    c4 = FiniteGroup.cyclic(4)
    m = GModule.trivial(c4, FgAbGroup.cyclic(2))
    perm = (0, 3, 2, 1)
    m_rel = relabel_module(m, perm)
    for k in range(4):
        assert cohomology(m, k).group.normal_form == cohomology(m_rel, k).group.normal_form

    tw = cyclic_module(FiniteGroup.cyclic(3), 7, 2)
    tw_rel = relabel_module(tw, (0, 2, 1))
    for k in range(3):
        assert cohomology(tw, k).group.normal_form == cohomology(tw_rel, k).group.normal_form
