import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ef_ring, exterior, homogeneous, random_form, sum_ef
from extkoszul import (GF, QQ, CoordinateChange, Element, FieldSpec, Mode, RingSpec, basis_monomials,
                       elem_add, elem_mul, merge_sign, scalar_mul, substitute)
from extkoszul.algebra import mono_mul


def brute_sign(a, b):
    seq = [i for i in range(64) if a >> i & 1] + [i for i in range(64) if b >> i & 1]
    swaps = 0
    for end in range(len(seq) - 1, 0, -1):
        for k in range(end):
            if seq[k] > seq[k + 1]:
                seq[k], seq[k + 1] = seq[k + 1], seq[k]
                swaps += 1
    return -1 if swaps % 2 else 1


class TestFields:
    def test_rational_and_prime(self):
        assert QQ.is_rational and QQ.name == "QQ"
        assert GF(7).name == "F7" and GF(7).characteristic == 7

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            GF(6)
        with pytest.raises(ValueError):
            FieldSpec.parse("F9")

    def test_canonical_residues(self):
        f = GF(5)
        assert f(-1) == 4 and f(12) == 2
        assert f.inv(2) == 3

    def test_rational_exact(self):
        assert QQ.inv(QQ(3)) * 3 == 1
        assert QQ.to_fraction(QQ.inv(QQ(-4))).denominator == 4


class TestMonomials:
    def test_single_transposition(self):
        assert mono_mul(0b01, 0b10) == (1, 0b11)
        assert mono_mul(0b10, 0b01) == (-1, 0b11)

    def test_square_vanishes(self):
        assert mono_mul(0b1, 0b1) is None

    def test_two_swaps(self):
        R = exterior(["e1", "e2", "f1", "f2"])
        e2f2 = 0b1010
        e1 = 0b0001
        assert mono_mul(e2f2, e1) == (1, 0b1011)
        assert R.sign(e2f2, e1) == 1

    def test_square_zero_mode_has_no_signs(self):
        assert mono_mul(0b10, 0b01, Mode.SQUAREZERO) == (1, 0b11)

    @given(st.integers(0, 2**10 - 1), st.integers(0, 2**10 - 1))
    def test_sign_matches_bubble_sort(self, a, b):
        if a & b:
            assert mono_mul(a, b) is None
        else:
            assert merge_sign(a, b) == brute_sign(a, b)

    @pytest.mark.parametrize("n,d,count", [(4, 2, 6), (4, 5, 0), (6, 3, 20), (3, 0, 1)])
    def test_basis_monomials(self, n, d, count):
        ms = basis_monomials(n, d)
        assert len(ms) == count and ms == sorted(ms)
        assert all(m.bit_count() == d for m in ms)


class TestElements:
    def test_top_monomial_kills_hyperbolic_form(self, E4):
        e1, e2, f1, f2 = E4.gens()
        assert elem_mul(e1 * e2, sum_ef(E4, 2)).is_zero()

    def test_unit(self, E4):
        h = sum_ef(E4, 2)
        assert elem_mul(E4.one, h) == h

    def test_h_squared(self, E4):
        h = sum_ef(E4, 2)
        sq = h * h
        assert sq.terms == {0b1111: -2}
        # directly: e1f1e2f2 + e2f2e1f1, each equal to -e1e2f1f2
        e1, e2, f1, f2 = E4.gens()
        assert sq == e1 * f1 * e2 * f2 + e2 * f2 * e1 * f1

    def test_addition(self, E4):
        e1 = E4.var("e1")
        h = sum_ef(E4, 2)
        assert (h + scalar_mul(-1, h)).is_zero()
        assert elem_add(e1, e1) == e1.scale(2)
        F2 = ef_ring(2, GF(2))
        assert elem_add(F2.var(0), F2.var(0)).is_zero()

    def test_ring_mismatch(self, E4):
        other = ef_ring(2, GF(3))
        with pytest.raises(ValueError):
            elem_add(E4.var(0), other.var(0))
        with pytest.raises(ValueError):
            elem_mul(E4.var(0), other.var(0))

    def test_no_zero_coefficients_stored(self, E4):
        e1 = E4.var(0)
        assert (e1 - e1).terms == {}
        assert all(c for c in (e1 * 3 + E4.var(1)).terms.values())

    def test_duplicate_variable_names(self):
        with pytest.raises(ValueError):
            exterior(["x", "x"])

    def test_printing(self, E4):
        assert str(sum_ef(E4, 2)) == "e1*f1 + e2*f2"

    def test_anticommutativity_many_pairs(self):
        rng = random.Random(11)
        checked = 0
        for _ in range(1000):
            n = rng.randrange(1, 9)
            mode = rng.choice(["exterior", "squarezero"])
            R = RingSpec(mode, tuple(f"x{i}" for i in range(n)), rng.choice([QQ, GF(5), GF(2)]))
            a = random_form(R, rng.randrange(n + 1), rng, 0.4)
            b = random_form(R, rng.randrange(n + 1), rng, 0.4)
            sign = (-1) ** ((a.degree or 0) * (b.degree or 0)) if mode == "exterior" else 1
            assert a * b == (b * a).scale(sign)
            checked += 1
        assert checked == 1000

    @given(st.data())
    def test_odd_squares_vanish(self, data):
        R = exterior([f"x{i}" for i in range(7)])
        a = data.draw(homogeneous(R))
        if a and a.degree % 2:
            assert (a * a).is_zero()

    @pytest.mark.parametrize("mode", ["exterior", "squarezero"])
    @given(data=st.data())
    def test_associativity(self, mode, data):
        R = RingSpec(mode, tuple(f"x{i}" for i in range(6)), GF(7))
        a, b, c = (data.draw(homogeneous(R, 3)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def random_change(R, rng):
    p = R.field.characteristic or 5
    while True:
        M = [[rng.randrange(p) for _ in range(R.n)] for _ in range(R.n)]
        try:
            return CoordinateChange(R, M)
        except ValueError:
            continue


class TestSubstitution:
    def test_identity(self, E4):
        e1, e2 = E4.var(0), E4.var(1)
        assert substitute(e1 * e2, CoordinateChange.identity(E4)) == e1 * e2

    def test_swap(self, E4):
        e1, e2 = E4.var(0), E4.var(1)
        swap = CoordinateChange.permutation(E4, [1, 0, 2, 3])
        assert substitute(e1 * e2, swap) == -(e1 * e2)

    def test_singular_rejected(self, E4):
        with pytest.raises(ValueError):
            CoordinateChange(E4, [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])

    def test_images_are_columns(self, E4):
        U = CoordinateChange(E4, [[1, 0, 0, 0], [2, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        # v1 -> U11 v1 + U21 v2
        assert substitute(E4.var(0), U) == E4.var(0) + E4.var(1).scale(2)

    @given(st.integers(0, 10**6))
    def test_ring_map(self, seed):
        rng = random.Random(seed)
        R = exterior([f"x{i}" for i in range(5)], GF(5))
        f = random_form(R, rng.randrange(3), rng, 0.6)
        g = random_form(R, rng.randrange(3), rng, 0.6)
        U, V = random_change(R, rng), random_change(R, rng)
        assert substitute(f * g, U) == substitute(f, U) * substitute(g, U)
        assert substitute(f, U @ V) == substitute(substitute(f, V), U)
        assert substitute(substitute(f, U), U.inverse()) == f

    def test_degree_preserved(self):
        rng = random.Random(3)
        R = exterior([f"x{i}" for i in range(6)], GF(5))
        for _ in range(20):
            f = random_form(R, 3, rng, 0.5)
            g = substitute(f, random_change(R, rng))
            assert not f or g.degree == 3
