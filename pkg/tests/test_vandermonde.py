import random
from itertools import combinations

import pytest

from nodalhilb.errors import RangeError
from nodalhilb.vandermonde import (
    ThetaComponent,
    cycle_ring,
    find_sign_assignment,
    g1_transfer_identity,
    mixed_vdm,
    order_table,
    random_cycle_poly,
    signed_dets,
    transfer_exponent,
    vanishing_order,
    verify_discriminant_pullback,
    verify_order_additivity,
    verify_syzygies,
)

from oracles import brute_rewrite, sympy_det, sympy_t_order, to_sympy


class TestCycleRing:
    def test_rewriting(self):
        cr = cycle_ring(2)
        r = cr.ring
        assert cr.normal_form(r.parse("x1*x2*y1*y2")) == r.parse("t^2")
        assert cr.normal_form(cr.sigma_x(2) * cr.sigma_y(2)) == r.parse("t^2")
        assert cr.sigma_x(0) == r.one and cr.sigma_y(0) == r.one

    @pytest.mark.parametrize("m", range(1, 6))
    def test_confluence(self, m):
        cr = cycle_ring(m)
        rng = random.Random(m)
        gb = cr.groebner_basis()
        for _ in range(100):
            p = random_cycle_poly(cr, rng)
            nf = cr.normal_form(p)
            assert nf.terms == brute_rewrite(p, m)
            if m <= 3:
                assert gb.normal_form(p) == nf


class TestMixedVdM:
    def test_examples(self):
        r2 = cycle_ring(2).ring
        assert mixed_vdm(2, 1).det == r2.parse("x2 - x1")
        assert mixed_vdm(2, 2).det == r2.parse("y2 - y1")
        r3 = cycle_ring(3).ring
        assert mixed_vdm(3, 2).det == r3.parse("x2*y3 - x3*y2 - x1*y3 + x3*y1 + x1*y2 - x2*y1")

    @pytest.mark.parametrize("m", range(1, 5))
    def test_det_matches_sympy(self, m):
        for i in range(1, m + 1):
            v = mixed_vdm(m, i)
            assert len(v.matrix) == m
            assert to_sympy(v.det) == sympy_det(v.matrix)

    def test_range(self):
        with pytest.raises(RangeError):
            mixed_vdm(3, 4)


class TestSigns:
    @pytest.mark.parametrize("m,signs", [
        (2, (1, -1)), (3, (1, 1, -1)), (4, (1, -1, -1, 1)), (5, (1, 1, -1, -1, 1)),
    ])
    def test_found(self, m, signs):
        assert find_sign_assignment(m) == signs

    def test_m2_cone(self):
        cr = cycle_ring(2)
        G1, G2 = signed_dets(2, (1, -1))
        s2x, s2y, t = cr.sigma_x(2), cr.sigma_y(2), cr.t
        assert cr.congruent(s2y * G1, t * G2)
        assert cr.congruent(s2x * G2, t * G1)
        assert cr.congruent(s2x * s2y, t ** 2)


class TestSyzygies:
    def test_m2(self):
        rep = verify_syzygies(2)
        assert rep["signs"] == [1, -1]
        assert all(rep["cone_equations"].values())

    def test_quadratic_exponents(self):
        assert verify_syzygies(3)["quadratic_exponents"] == {"1,3": 1}
        assert verify_syzygies(4)["quadratic_exponents"] == {"1,3": 1, "1,4": 2, "2,4": 1}

    @pytest.mark.parametrize("m", range(2, 6))
    def test_all_hold(self, m):
        rep = verify_syzygies(m)
        assert rep["linear_checked"] == 2 * (m - 1) * (m + 1)
        for key, e in rep["quadratic_exponents"].items():
            i, j = map(int, key.split(","))
            assert e == j - i - 1


class TestTransfer:
    def test_m2_by_hand(self):
        cr = cycle_ring(2)
        r = cr.ring
        assert cr.congruent(r.parse("t*(y2 - y1)"), r.parse("-y1*y2*(x2 - x1)"))
        assert g1_transfer_identity(2, 2)["exponent"] == 1

    @pytest.mark.parametrize("m", range(2, 6))
    def test_exponents(self, m):
        for i in range(2, m + 1):
            rep = g1_transfer_identity(m, i)
            assert rep["exponent"] == transfer_exponent(m, i) == (i - 1) * (2 * m - i) // 2
            assert rep["sign"] in (1, -1)

    def test_range(self):
        with pytest.raises(RangeError):
            g1_transfer_identity(3, 1)


def _theta_subs(m, subset):
    subs = {}
    for j in range(1, m + 1):
        if j in subset:
            subs[f"x{j}"] = f"t/y{j}"
        else:
            subs[f"y{j}"] = f"t/x{j}"
    return subs


class TestVanishingOrder:
    def test_examples(self):
        assert vanishing_order(2, 1, {1}) == 0
        assert vanishing_order(2, 1, {1, 2}) == 1
        assert vanishing_order(3, 1, {1, 2, 3}) == 3

    @pytest.mark.parametrize("m", range(1, 4))
    def test_matches_sympy(self, m):
        for i in range(1, m + 1):
            det = mixed_vdm(m, i).det
            for k in range(m + 1):
                for subset in combinations(range(1, m + 1), k):
                    expected = sympy_t_order(det, _theta_subs(m, set(subset)))
                    assert vanishing_order(m, i, set(subset)) == expected

    @pytest.mark.parametrize("m", range(2, 6))
    def test_pullback(self, m):
        rep = verify_discriminant_pullback(m)
        assert rep["zero_locus_ok"] and rep["all_match_oracle"]
        for row in rep["table"]:
            assert (row["order"] == 0) == (row["k"] in (row["i"] - 1, row["i"]))
            assert row["reference"] == 2 * row["order"]

    def test_m2_reference_mismatch_flagged(self):
        rows = verify_discriminant_pullback(2)["table"]
        row = next(r for r in rows if r["i"] == 1 and r["k"] == 2)
        assert row["oracle"] == 1 and row["reference"] == 2 and not row["matches_reference"]

    @pytest.mark.parametrize("m", range(2, 6))
    def test_additivity(self, m):
        rep = verify_order_additivity(m)
        assert rep["checked"] == len(verify_syzygies(m)["quadratic_exponents"]) * (m + 1)

    def test_order_constant_in_k(self):
        table = order_table(4)
        assert set(table) == {(i, k) for i in range(1, 5) for k in range(5)}

    def test_theta_parametrization(self):
        cr = cycle_ring(3)
        subs = ThetaComponent(3, frozenset({1})).parametrization(cr)
        assert set(subs) == {"x1", "y2", "y3"}

    def test_pullback_range(self):
        with pytest.raises(RangeError):
            verify_discriminant_pullback(6)
