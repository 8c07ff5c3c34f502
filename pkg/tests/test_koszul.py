import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ef_ring, exterior, random_form, sum_ef
from extkoszul import (GF, QQ, CoordinateChange, Element, Filtration, FrobergNegative, Ideal, KoszulVerdict,
                       NonlinearBetti, Prediction, RingSpec, TermOrder, VerdictKind, betti_of_k, buchberger,
                       check_filtration, classify_hypersurface, cross_validate, find_koszul_filtration,
                       hilbert_series, koszul_check, series_invert, substitute, verify_filtration)
from test_algebra import random_change


def gb(R, gens):
    return buchberger(Ideal(R, gens))


def pair_pool(R):
    pool = list(R.gens())
    for a, b in combinations(R.gens(), 2):
        pool += [a + b, a - b]
    return pool


class TestFiltration:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_monomial_hypersurface(self, n):
        R = exterior([f"e{i}" for i in range(1, n + 1)])
        G = gb(R, [R.var(0) * R.var(1)])
        res = find_koszul_filtration(G)
        assert res and verify_filtration(G, res.filtration)

    def test_exterior_contains_coordinate_flag(self):
        R = exterior(["a", "b", "c"])
        G = gb(R, [])
        res = find_koszul_filtration(G)
        assert res
        F = res.filtration
        assert len(F) == 8
        keys = {buchberger(Ideal(R, gens)).key() for gens in F.ideals}
        a, b, c = R.gens()
        for flag in ([], [a], [a, b], [a, b, c]):
            assert buchberger(Ideal(R, flag)).key() in keys

    def test_none_for_hyperbolic(self, E4):
        res = find_koszul_filtration(gb(E4, [sum_ef(E4, 2)]))
        assert not res and not res.budget_exceeded

    def test_budget_flag(self, E4):
        res = find_koszul_filtration(gb(E4, []), max_ideals=3)
        assert not res and res.budget_exceeded

    def test_missing_zero_ideal(self):
        R = exterior(["e1", "e2"])
        e1, e2 = R.gens()
        G = gb(R, [e1 * e2])
        F = find_koszul_filtration(G).filtration
        k = next(i for i, w in enumerate(F.witnesses) if w is None)
        assert not F.ideals[k]
        broken = Filtration(F.ideals[:k] + F.ideals[k + 1:], F.witnesses[:k] + F.witnesses[k + 1:])
        problems = check_filtration(G, broken)
        assert any("zero ideal" in p for p in problems)

    def test_wrong_colon_detected(self):
        R = exterior(["e1", "e2"])
        e1, e2 = R.gens()
        G = gb(R, [e1 * e2])
        F = Filtration(((), (e1,), (e1, e2)), (None, (0, e1, 0), (1, e2, 2)))
        problems = check_filtration(G, F)
        assert problems and "ideal 1" in problems[0]
        good = Filtration(((), (e1,), (e1, e2)), (None, (0, e1, 2), (1, e2, 2)))
        assert verify_filtration(G, good)

    def test_non_proper_witness(self):
        R = exterior(["e1", "e2"])
        e1, e2 = R.gens()
        G = gb(R, [e1 * e2])
        F = Filtration(((), (e1,), (e1, e2)), (None, (1, e1, 2), (1, e2, 2)))
        assert any("proper" in p for p in check_filtration(G, F))

    def test_two_quadric_ideal_needs_pair_pool(self):
        R = ef_ring(2)
        e1, e2, f1, f2 = (R.var(v) for v in ("e1", "e2", "f1", "f2"))
        G = gb(R, [e1 * e2 - f1 * f2, e1 * f1 - e2 * f2])
        assert not find_koszul_filtration(G)
        res = find_koszul_filtration(G, pair_pool(R))
        assert res and verify_filtration(G, res.filtration)

    def test_json_shape(self):
        R = exterior(["e1", "e2"])
        F = find_koszul_filtration(gb(R, [R.var(0) * R.var(1)])).filtration
        d = F.to_json()
        assert len(d["ideals"]) == len(d["witnesses"]) == len(F)


class TestVerdict:
    def test_froberg_certificate(self, E4):
        G = gb(E4, [sum_ef(E4, 2)])
        v = koszul_check(G)
        assert v.is_non_koszul and v.exit_code == 10
        assert v.certificate == FrobergNegative(6, -29)
        c = series_invert(hilbert_series(G).at_minus_t(), v.certificate.index)
        assert c[v.certificate.index] < 0

    def test_nonlinear_certificate(self):
        R = ef_ring(3)
        G = gb(R, [sum_ef(R, 3)])
        v = koszul_check(G)
        assert v.is_non_koszul and v.certificate.i == 3 and v.certificate.j == 5
        for kind in ("deglex", "degrevlex"):
            names = list(reversed(R.vars))
            B = betti_of_k(buchberger(Ideal(R, [sum_ef(R, 3)]), TermOrder.for_ring(R, kind, names)), i_max=3)
            assert B[3, 5] == v.certificate.value == 14

    def test_positive(self, E4):
        v = koszul_check(gb(E4, [E4.var(0) * E4.var(1)]))
        assert v.is_koszul and v.exit_code == 0
        assert verify_filtration(gb(E4, [E4.var(0) * E4.var(1)]), v.certificate)
        assert v.linear_through == 6

    def test_inconclusive(self, E4):
        e1, e2, f1, f2 = E4.gens()
        G = gb(E4, [e1 * e2 - f1 * f2, e1 * f1 - e2 * f2])
        v = koszul_check(G, i_max=3)
        assert v.kind is VerdictKind.INCONCLUSIVE and v.exit_code == 20
        assert v.linear_through == 3

    def test_reducible_generators_not_koszul(self):
        R = exterior([f"e{i}" for i in range(1, 6)])
        e = R.gens()
        v = koszul_check(gb(R, [e[0] * e[1], e[2] * e[3], (e[0] + e[2]) * e[4]]), i_max=4)
        assert v.is_non_koszul
        assert v.certificate == NonlinearBetti(3, 4, 1)

    def test_square_zero_reducible_not_koszul(self):
        S = RingSpec("squarezero", ("x", "y", "z", "t"))
        x, y, z, t = S.gens()
        v = koszul_check(gb(S, [x * (y + z + t)]), i_max=4)
        assert v.is_non_koszul

    def test_one_variable(self):
        R = exterior(["e1"])
        assert koszul_check(gb(R, [])).is_koszul

    def test_json(self, E4):
        d = koszul_check(gb(E4, [sum_ef(E4, 2)])).to_json()
        assert d["verdict"] == "CertifiedNonKoszul"
        assert d["certificate"] == {"type": "FrobergNegative", "index": 6, "coefficient": "-29"}
        assert d["window"]["depth"] == 8


class TestClassifier:
    def test_examples(self):
        R = ef_ring(2)
        e1, e2, f1, f2 = (R.var(v) for v in ("e1", "e2", "f1", "f2"))
        assert classify_hypersurface(R, e1 * e2) is Prediction.KOSZUL
        assert classify_hypersurface(R, sum_ef(R, 2)) is Prediction.NOT_KOSZUL
        h = ((e1 + f2) * (e2 + f1))
        assert classify_hypersurface(R, h) is Prediction.KOSZUL
        assert classify_hypersurface(R, R.zero) is Prediction.KOSZUL

    def test_rejects_non_quadratic(self, E4):
        with pytest.raises(ValueError):
            classify_hypersurface(E4, E4.var(0))
        with pytest.raises(ValueError):
            classify_hypersurface(RingSpec("squarezero", ("x", "y")), RingSpec("squarezero", ("x", "y")).zero)

    @given(seed=st.integers(0, 10**6))
    def test_invariance(self, seed):
        rng = random.Random(seed)
        R = exterior([f"v{i}" for i in range(rng.randrange(2, 7))], GF(5))
        h = random_form(R, 2, rng, 0.5)
        assert classify_hypersurface(R, h) is classify_hypersurface(R, substitute(h, random_change(R, rng)))


class TestCrossValidation:
    def test_zero_form(self, E4):
        r = cross_validate(E4, E4.zero)
        assert r.agrees and r.verdict.is_koszul

    def test_reducible_expanded(self):
        R = ef_ring(2)
        e1, e2, f1, f2 = (R.var(v) for v in ("e1", "e2", "f1", "f2"))
        r = cross_validate(R, (e1 + f2) * (e2 + f1))
        assert r.agrees and r.verdict.is_koszul

    def test_all_rank4_forms_char2(self):
        R = exterior(["v1", "v2", "v3", "v4"], GF(2))
        pairs = [(1 << i) | (1 << j) for i, j in combinations(range(4), 2)]
        rank4 = 0
        for bitsel in range(64):
            h = Element(R, {m: 1 for k, m in enumerate(pairs) if bitsel >> k & 1})
            if classify_hypersurface(R, h) is Prediction.KOSZUL:
                continue
            rank4 += 1
            r = cross_validate(R, h)
            assert r.rank == 4 and r.agrees and r.verdict.certificate is not None
        # alternating 4x4 matrices over F2 with nonzero Pfaffian
        assert rank4 == 28

    def test_random_small_sample(self):
        rng = random.Random(42)
        R = exterior(["v1", "v2", "v3", "v4"], GF(5))
        for _ in range(10):
            h = random_form(R, 2, rng, 0.7)
            assert cross_validate(R, h).agrees
