import itertools
import random
from math import gcd

import pytest

from twostage.abelian import (
    AbHom,
    CochainComplex,
    FgAbGroup,
    direct_sum,
    ext_group,
    hom_group,
    homology_at,
    kernel_subgroup,
)
from twostage.errors import SizeBoundError, ValidationError
from twostage.linalg import IntMatrix, smith_normal_form

from helpers import enumerate_homs_bruteforce, homology_bruteforce


def test_snf_permutation_fast_path():
    m = IntMatrix.from_rows([[4, 0, 0], [0, 2, 0], [0, 0, 4]])
    dec = smith_normal_form(m)
    assert dec.diagonal == (2, 4, 4)
    assert dec.u @ m @ dec.v == dec.s
    assert dec.u @ dec.u_inv == IntMatrix.identity(3)
    assert dec.v @ dec.v_inv == IntMatrix.identity(3)


class TestNormalForm:
    def test_cyclic(self):
        g = FgAbGroup.cyclic(4)
        assert g.normal_form == (0, (4,))
        assert g.order == 4
        assert g.symbol() == "C4"

    def test_factors_merge(self):
        # C2 + C3 is cyclic of order 6
        g = FgAbGroup.from_cyclic_factors([2, 3])
        assert g.normal_form == (0, (6,))
        assert g.symbol() == "C6"

    def test_free_and_mixed(self):
        assert FgAbGroup.free(2).normal_form == (2, ())
        g = FgAbGroup.from_cyclic_factors([0, 2])
        assert g.normal_form == (1, (2,))
        assert g.symbol() == "Z x C2"
        assert g.order is None
        assert not g.is_finite

    def test_trivial(self):
        assert FgAbGroup.trivial().is_trivial
        assert FgAbGroup.cyclic(1).normal_form == (0, ())
        assert FgAbGroup.trivial().symbol() == "0"

    def test_presentation_invariance(self):
        # same quotient of Z^2, redundant and shuffled relations
        g1 = FgAbGroup(IntMatrix.from_columns([[2, 0], [0, 4]], rows=2))
        g2 = FgAbGroup(IntMatrix.from_columns([[0, 4], [2, 0], [2, 4]], rows=2))
        assert g1.normal_form == g2.normal_form == (0, (2, 4))
        assert g1.is_isomorphic_to(g2)

    def test_divisibility_chain(self):
        rng = random.Random(19)
        for _ in range(120):
            m = rng.randint(0, 3)
            r = rng.randint(0, 4)
            pres = IntMatrix(m, r, [rng.randint(-6, 6) for _ in range(m * r)])
            g = FgAbGroup(pres)
            for a, b in zip(g.invariant_factors, g.invariant_factors[1:]):
                assert b % a == 0
            assert all(d >= 2 for d in g.invariant_factors)


class TestElements:
    def test_enumeration_count_and_distinctness(self):
        g = FgAbGroup.from_cyclic_factors([2, 4])
        elems = g.elements()
        assert len(elems) == 8 == g.order
        assert len({g.reduce(e) for e in elems}) == 8

    def test_reduce_lift_roundtrip(self):
        g = FgAbGroup(IntMatrix.from_columns([[2, 2], [0, 4]], rows=2))
        for coords in g.element_coords():
            assert g.reduce(g.lift(coords)) == coords

    def test_reduce_is_additive(self):
        g = FgAbGroup.from_cyclic_factors([6])
        a, b = (4,), (5,)
        s = g.reduce([a[0] + b[0]])
        assert s == g.reduce([int(g.reduce(a)[0]) + int(g.reduce(b)[0])])

    def test_infinite_enumeration_refused(self):
        with pytest.raises(SizeBoundError):
            FgAbGroup.free(1).elements()

    def test_limit_enforced(self):
        with pytest.raises(SizeBoundError):
            FgAbGroup.cyclic(100).elements(limit=10)

    def test_trivial_group_has_one_element(self):
        assert FgAbGroup.trivial().elements() == [()]


class TestAbHom:
    def test_rejects_ill_defined(self):
        # Z/2 -> Z/3 sending the generator to a generator kills nothing
        with pytest.raises(ValidationError):
            AbHom(FgAbGroup.cyclic(2), FgAbGroup.cyclic(3), IntMatrix.from_rows([[1]]))

    def test_composition_and_equality(self):
        g4 = FgAbGroup.cyclic(4)
        doubling = AbHom(g4, g4, IntMatrix.from_rows([[2]]))
        sq = doubling @ doubling
        assert sq.is_zero_map()
        assert not doubling.is_zero_map()
        five = AbHom(g4, g4, IntMatrix.from_rows([[5]]))
        assert five.equals(AbHom.identity(g4))

    def test_bijectivity(self):
        g = FgAbGroup.from_cyclic_factors([2, 2])
        swap = AbHom(g, g, IntMatrix.from_rows([[0, 1], [1, 0]]))
        assert swap.is_bijective()
        proj = AbHom(g, g, IntMatrix.from_rows([[1, 0], [0, 0]]))
        assert not proj.is_injective()
        assert not proj.is_surjective()

    def test_kernel_of_doubling_on_z4(self):
        g4 = FgAbGroup.cyclic(4)
        doubling = AbHom(g4, g4, IntMatrix.from_rows([[2]]))
        ker = kernel_subgroup(doubling)
        assert ker.group.normal_form == (0, (2,))
        # the representative of the nonzero kernel class is killed by f
        rep = ker.representative((1,))
        assert g4.is_zero(doubling(rep))


class TestHomGroup:
    def test_hom_z4_z2(self):
        h = hom_group(FgAbGroup.cyclic(4), FgAbGroup.cyclic(2))
        assert h.group.normal_form == (0, (2,))
        homs = h.all_homs()
        assert len(homs) == 2
        keys = {f.canonical_key() for f in homs}
        assert keys == enumerate_homs_bruteforce(h.source, h.target)

    def test_hom_from_free(self):
        assert hom_group(FgAbGroup.free(1), FgAbGroup.cyclic(3)).group.normal_form == (0, (3,))
        assert hom_group(FgAbGroup.free(2), FgAbGroup.free(1)).group.normal_form == (2, ())

    def test_hom_into_free_from_torsion(self):
        assert hom_group(FgAbGroup.cyclic(3), FgAbGroup.free(1)).group.is_trivial

    def test_hom_from_trivial(self):
        h = hom_group(FgAbGroup.trivial(), FgAbGroup.cyclic(5))
        assert h.group.is_trivial
        assert h.hom_at(()).is_zero_map()

    def test_matches_bruteforce_on_small_pairs(self):
        pool = [
            FgAbGroup.cyclic(2),
            FgAbGroup.cyclic(4),
            FgAbGroup.from_cyclic_factors([2, 2]),
            FgAbGroup.from_cyclic_factors([2, 4]),
            FgAbGroup.cyclic(3),
            FgAbGroup(IntMatrix.from_columns([[2, 2], [0, 2]], rows=2)),
        ]
        for a, b in itertools.product(pool, repeat=2):
            h = hom_group(a, b)
            expected = enumerate_homs_bruteforce(a, b)
            got = {f.canonical_key() for f in h.all_homs()}
            assert got == expected, (a.symbol(), b.symbol())

    def test_generators_generate(self):
        a = FgAbGroup.from_cyclic_factors([2, 4])
        b = FgAbGroup.from_cyclic_factors([4])
        h = hom_group(a, b)
        moduli = h.group.coordinate_moduli()
        for coords in h.group.element_coords():
            f = h.hom_at(coords)
            acc = IntMatrix.zeros(b.ngens, a.ngens)
            for c, gen in zip(coords, h.generators):
                acc = acc + gen.matrix.scale(c)
            assert f.equals(AbHom(a, b, acc))
        assert len(moduli) == len(h.generators)


class TestExtGroup:
    def test_ext_z2_z4(self):
        assert ext_group(FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)).normal_form == (0, (2,))

    def test_free_source_vanishes(self):
        assert ext_group(FgAbGroup.free(3), FgAbGroup.cyclic(8)).is_trivial

    def test_mixed(self):
        a = FgAbGroup.from_cyclic_factors([2, 4])
        assert ext_group(a, FgAbGroup.cyclic(2)).normal_form == (0, (2, 2))
        assert ext_group(a, FgAbGroup.free(1)).normal_form == (0, (2, 4))

    def test_gcd_identity_spot_checks(self):
        for a, b in [(2, 2), (4, 6), (9, 12), (5, 7)]:
            h = hom_group(FgAbGroup.cyclic(a), FgAbGroup.cyclic(b)).group
            e = ext_group(FgAbGroup.cyclic(a), FgAbGroup.cyclic(b))
            assert h.order == gcd(a, b)
            assert e.order == gcd(a, b)


class TestModulo:
    def test_c6_mod_2(self):
        assert FgAbGroup.cyclic(6).modulo(2).normal_form == (0, (2,))

    def test_coprime_collapses(self):
        assert FgAbGroup.cyclic(3).modulo(2).is_trivial

    def test_free_mod(self):
        assert FgAbGroup.free(2).modulo(3).normal_form == (0, (3, 3))


class TestCochainComplex:
    def test_rejects_nonzero_composite(self):
        z = FgAbGroup.free(1)
        ident = AbHom.identity(z)
        with pytest.raises(ValidationError):
            CochainComplex([z, z, z], [ident, ident])

    def test_multiplication_by_two(self):
        z = FgAbGroup.free(1)
        doubling = AbHom(z, z, IntMatrix.from_rows([[2]]))
        c = CochainComplex([z, z], [doubling])
        assert homology_at(c, 1).group.normal_form == (0, (2,))
        assert homology_at(c, 0).group.is_trivial

    def test_section_properties(self):
        g8 = FgAbGroup.cyclic(8)
        doubling = AbHom(g8, g8, IntMatrix.from_rows([[2]]))
        quadrupling = AbHom(g8, g8, IntMatrix.from_rows([[4]]))
        c = CochainComplex([g8, g8, g8], [quadrupling, doubling])
        h = homology_at(c, 1)
        # ker(x2) = {0, 4}, im(x4) = {0, 4}: middle homology vanishes
        assert h.group.is_trivial
        c2 = CochainComplex([g8, g8, g8], [doubling, quadrupling])
        h2 = homology_at(c2, 1)
        # ker(x4) = {0, 2, 4, 6}, im(x2) = {0, 2, 4, 6}
        assert h2.group.is_trivial

    def test_class_coords_and_representatives(self):
        z = FgAbGroup.free(1)
        g4 = FgAbGroup.cyclic(4)
        to_g4 = AbHom(z, g4, IntMatrix.from_rows([[2]]))
        c = CochainComplex([z, g4], [to_g4])
        h = homology_at(c, 1)
        assert h.group.normal_form == (0, (2,))
        for coords in h.group.element_coords():
            rep = h.representative(coords)
            assert h.class_coords(rep) == coords
        # additivity of the section
        reps = [h.representative(c_) for c_ in h.group.element_coords()]
        for r1 in reps:
            for r2 in reps:
                s = [x + y for x, y in zip(r1, r2)]
                lhs = h.class_coords(s)
                expected = h.group.reduce(
                    [a + b for a, b in zip(h.group.lift(h.class_coords(r1)), h.group.lift(h.class_coords(r2)))]
                )
                assert lhs == expected

    def test_matches_bruteforce_on_random_finite_complexes(self):
        rng = random.Random(23)
        pool = [
            FgAbGroup.cyclic(2),
            FgAbGroup.cyclic(4),
            FgAbGroup.from_cyclic_factors([2, 2]),
            FgAbGroup.cyclic(3),
            FgAbGroup.cyclic(6),
        ]
        built = 0
        while built < 40:
            g0, g1, g2 = rng.choice(pool), rng.choice(pool), rng.choice(pool)
            h01 = hom_group(g0, g1)
            h12 = hom_group(g1, g2)
            d0 = h01.hom_at(rng.choice(h01.group.element_coords()))
            candidates = [f for f in h12.all_homs() if (f @ d0).is_zero_map()]
            d1 = rng.choice(candidates)
            c = CochainComplex([g0, g1, g2], [d0, d1])
            for k in range(3):
                fast = homology_at(c, k).group
                assert fast.invariant_factors == homology_bruteforce(c, k), (
                    k,
                    g0.symbol(),
                    g1.symbol(),
                    g2.symbol(),
                )
                assert fast.free_rank == 0
            built += 1


class TestDirectSum:
    def test_block_layout(self):
        g = direct_sum([FgAbGroup.cyclic(2), FgAbGroup.cyclic(3)])
        assert g.normal_form == (0, (6,))
        assert g.ngens == 2

    def test_empty(self):
        assert direct_sum([]).is_trivial


class TestInverse:
    def test_self_inverse_on_z4(self):
        z4 = FgAbGroup.cyclic(4)
        f = AbHom(z4, z4, IntMatrix.from_rows([[3]]))
        assert f.inverse().equals(f)

    def test_multiplicative_inverse_mod_five(self):
        z5 = FgAbGroup.cyclic(5)
        f = AbHom(z5, z5, IntMatrix.from_rows([[2]]))
        g = f.inverse()
        assert z5.reduce(g.matrix.column(0)) == (3,)
        assert (g @ f).equals(AbHom.identity(z5))

    def test_swap_on_klein_four(self):
        v = FgAbGroup.from_cyclic_factors([2, 2])
        swap = AbHom(v, v, IntMatrix.from_rows([[0, 1], [1, 0]]))
        assert swap.inverse().equals(swap)

    def test_negation_on_free_group(self):
        z = FgAbGroup.free(1)
        f = AbHom(z, z, IntMatrix.from_rows([[-1]]))
        assert f.inverse().equals(f)

    def test_non_invertible_rejected(self):
        z4 = FgAbGroup.cyclic(4)
        f = AbHom(z4, z4, IntMatrix.from_rows([[2]]))
        with pytest.raises(ValueError):
            f.inverse()
