import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ef_ring, exterior, random_form, sum_ef
from extkoszul import (GF, QQ, AlternatingMatrix, CoordinateChange, RingSpec, factor_reducible, is_reducible,
                       matrix_to_qform, qform_to_matrix, rank_alternating, standard_form, substitute,
                       symplectic_normal_form)
from test_algebra import random_change


def rand_ring(n, p=5):
    return exterior([f"v{i}" for i in range(1, n + 1)], GF(p))


class TestMatrix:
    def test_e1e2(self):
        R = exterior(["e1", "e2"])
        assert qform_to_matrix(R.var(0) * R.var(1)).rows == ((0, 1), (-1, 0))

    def test_zero(self, E4):
        assert all(x == 0 for row in qform_to_matrix(E4.zero).rows for x in row)

    def test_hyperbolic(self):
        R = exterior(["e1", "e2", "f1", "f2"])
        A = qform_to_matrix(sum_ef(R, 2))
        nonzero = {(i, j): A[i, j] for i in range(4) for j in range(4) if A[i, j]}
        assert nonzero == {(0, 2): 1, (2, 0): -1, (1, 3): 1, (3, 1): -1}

    def test_round_trip(self):
        rng = random.Random(1)
        R = rand_ring(6)
        for _ in range(30):
            h = random_form(R, 2, rng, 0.5)
            assert matrix_to_qform(qform_to_matrix(h)) == h

    def test_rejects_bad_input(self, E4):
        with pytest.raises(ValueError):
            qform_to_matrix(E4.var(0))
        S = RingSpec("squarezero", ("x", "y"))
        with pytest.raises(ValueError):
            qform_to_matrix(S.var(0) * S.var(1))
        with pytest.raises(ValueError):
            AlternatingMatrix(exterior(["a", "b"]), [[1, 0], [0, 0]])
        with pytest.raises(ValueError):
            AlternatingMatrix(exterior(["a", "b"]), [[0, 1], [1, 0]])

    def test_char2_alternating(self):
        R = exterior(["a", "b"], GF(2))
        A = AlternatingMatrix(R, [[0, 1], [1, 0]])
        assert rank_alternating(A) == 2


class TestRank:
    def test_small(self):
        R = ef_ring(3)
        assert rank_alternating(qform_to_matrix(R.var(0) * R.var(1))) == 2
        assert rank_alternating(qform_to_matrix(sum_ef(R, 3))) == 6
        assert rank_alternating(qform_to_matrix(R.zero)) == 0

    @pytest.mark.parametrize("p", [2, 3, 5])
    @given(seed=st.integers(0, 10**6))
    def test_even_and_invariant(self, p, seed):
        rng = random.Random(seed)
        R = rand_ring(rng.randrange(2, 7), p)
        h = random_form(R, 2, rng, 0.6)
        r = rank_alternating(qform_to_matrix(h))
        assert r % 2 == 0
        h2 = substitute(h, random_change(R, rng))
        assert rank_alternating(qform_to_matrix(h2)) == r
        assert is_reducible(h) != (r >= 4)


class TestNormalForm:
    def test_hyperbolic(self, E4):
        nf = symplectic_normal_form(sum_ef(E4, 2))
        assert nf.r == 2
        assert nf.normal_form == E4.var(0) * E4.var(1) + E4.var(2) * E4.var(3)

    def test_already_normal(self, E4):
        h = E4.var(0) * E4.var(1)
        nf = symplectic_normal_form(h)
        assert nf.r == 1 and nf.change == CoordinateChange.identity(E4)

    def test_permutation(self, E4):
        h = E4.var(2) * E4.var(3)
        nf = symplectic_normal_form(h)
        assert all(sorted(row) == [0, 0, 0, 1] for row in nf.change.matrix)
        assert substitute(h, nf.change) == E4.var(0) * E4.var(1)

    def test_zero(self, E4):
        nf = symplectic_normal_form(E4.zero)
        assert nf.rank == 0 and nf.normal_form.is_zero()

    @pytest.mark.parametrize("p", [2, 5])
    def test_round_trip_random(self, p):
        rng = random.Random(p)
        R = rand_ring(6, p)
        for _ in range(50):
            h = random_form(R, 2, rng, 0.5)
            nf = symplectic_normal_form(h)
            assert substitute(h, nf.change) == nf.normal_form == standard_form(R, nf.r)
            ys = nf.new_coordinates()
            rebuilt = R.zero
            for k in range(nf.r):
                rebuilt = rebuilt + ys[2 * k] * ys[2 * k + 1]
            assert rebuilt == h

    def test_rational(self):
        rng = random.Random(3)
        R = exterior([f"v{i}" for i in range(5)])
        for _ in range(10):
            h = random_form(R, 2, rng, 0.5)
            nf = symplectic_normal_form(h)
            assert substitute(h, nf.change) == nf.normal_form


class TestFactor:
    def test_monomial(self, E4):
        l1, l2 = factor_reducible(E4.var(0) * E4.var(1))
        assert l1 * l2 == E4.var(0) * E4.var(1)

    def test_common_factor(self):
        R = exterior(["e1", "e2", "e3"])
        e1, e2, e3 = R.gens()
        h = e1 * e2 + e1 * e3
        l1, l2 = factor_reducible(h)
        assert l1 * l2 == h
        # the factors span the same plane as e1 and e2+e3
        assert (l1 * l2 * e1).is_zero() and (l1 * (e2 + e3) * l2).is_zero()

    def test_irreducible(self, E4):
        assert factor_reducible(sum_ef(E4, 2)) is None
        assert factor_reducible(E4.zero) is None

    def test_expanded_product(self):
        R = exterior(["e1", "e2", "e3", "e4"])
        e1, e2, e3, e4 = R.gens()
        h = (e1 + e2) * (e3 - e4)
        assert is_reducible(h)
        l1, l2 = factor_reducible(h)
        assert l1 * l2 == h

    @given(seed=st.integers(0, 10**6))
    def test_soundness(self, seed):
        rng = random.Random(seed)
        R = rand_ring(rng.randrange(2, 7))
        a, b = random_form(R, 1, rng), random_form(R, 1, rng)
        h = a * b if rng.random() < 0.7 else random_form(R, 2, rng)
        fac = factor_reducible(h)
        if fac is not None:
            assert fac[0] * fac[1] == h
        else:
            assert h.is_zero() or not is_reducible(h)
