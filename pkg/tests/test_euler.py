from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nodalhilb.errors import RangeError
from nodalhilb.euler import (
    MODES,
    FamilyParams,
    TriplePointParams,
    alternating_binomial_identity,
    chain_euler,
    euler_all_modes,
    euler_blowup_model,
    euler_hilb,
    euler_sweep,
    euler_sym,
    euler_sym_series,
    gen_binomial,
    punctual_fiber_euler,
    triple_point_formula,
)

q = sympy.Symbol("q")


def series_coeff(eX, m):
    return int(sympy.series((1 - q) ** (-eX), q, 0, m + 1).removeO().coeff(q, m))


def closed_by_sympy(g, gB, sigma, m):
    b = sympy.binomial
    return int((-1) ** m * b(2 * g - 2, m) * (2 - 2 * gB) + sigma * b(m - 2 * g + 2, m - 1))


class TestBinomials:
    @pytest.mark.parametrize("a,k,val", [(-2, 2, 3), (5, 3, 10), (0, 4, 0), (7, 0, 1)])
    def test_examples(self, a, k, val):
        assert gen_binomial(a, k) == val

    @given(st.integers(-30, 30), st.integers(0, 12))
    def test_matches_sympy(self, a, k):
        assert gen_binomial(a, k) == int(sympy.binomial(a, k))

    def test_negative_k(self):
        with pytest.raises(RangeError):
            gen_binomial(3, -1)


class TestSymmetricPower:
    def test_examples(self):
        assert euler_sym(2, 2) == 3
        assert all(euler_sym(0, m) == 0 for m in range(1, 6))
        assert euler_sym(-2, 3) == 0

    @pytest.mark.parametrize("eX", range(-6, 7))
    def test_series(self, eX):
        for m in range(9):
            expected = series_coeff(eX, m)
            assert euler_sym(eX, m) == expected
            assert euler_sym_series(eX, m) == expected


class TestChains:
    @pytest.mark.parametrize("r", range(1, 11))
    def test_inclusion_exclusion(self, r):
        assert chain_euler(r) == 2 * r - (r - 1) == r + 1

    def test_punctual_fibres(self):
        assert [punctual_fiber_euler(i) for i in range(6)] == [1, 1, 2, 3, 4, 5]


class TestEulerHilb:
    def test_examples(self):
        for sigma in range(4):
            assert euler_hilb(FamilyParams(0, 0, sigma, 1)) == 4 + sigma
        for gB in range(3):
            for m in range(1, 6):
                assert euler_hilb(FamilyParams(1, gB, 3, m)) == 3 * m

    def test_genus_two_length_two(self):
        # binom(0, 1) = 0 kills the sigma term
        vals = euler_all_modes(FamilyParams(2, 0, 1, 2))
        assert vals == {"closed": 2, "stratified": 2, "oracle": 2}

    def test_sweep_all_modes_agree(self):
        rows = euler_sweep()
        assert len(rows) == 9 * 4 * 10 * 4
        for row in rows:
            assert row["agree"]
            assert row["closed"] == closed_by_sympy(row["g"], row["gB"], row["sigma"], row["m"])

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            euler_hilb(FamilyParams(0, 0, 0, 1), "guess")

    def test_modes(self):
        assert MODES == ("closed", "stratified", "oracle")

    def test_params_validated(self):
        with pytest.raises(RangeError):
            FamilyParams(0, 0, 0, 0)


class TestAlternatingIdentity:
    def test_examples(self):
        assert alternating_binomial_identity(5, 3) == (-4, -4)
        assert alternating_binomial_identity(-2, 2) == (6, 6)
        for b in range(6):
            lhs, rhs = alternating_binomial_identity(0, b)
            assert lhs == rhs == 1

    @given(st.integers(-20, 20), st.integers(0, 20))
    def test_identity(self, a, b):
        lhs, rhs = alternating_binomial_identity(a, b)
        assert lhs == rhs


class TestBlowupModel:
    def test_examples(self):
        assert euler_blowup_model(1, 0, 3) == 7
        assert euler_blowup_model(2, 0, 2) == 6 + 8
        assert euler_blowup_model(3, 1, 2) == 20

    def test_matches_genus_zero(self):
        for m in range(1, 11):
            for gB in range(4):
                for sigma in range(6):
                    assert euler_blowup_model(m, gB, sigma) == euler_hilb(FamilyParams(0, gB, sigma, m))
                    assert euler_blowup_model(m, gB, sigma) == (m + 1) * (2 - 2 * gB) + sigma * sum(
                        (k + 1) * (m - k) for k in range(m)
                    )


class TestTriplePoints:
    def test_examples(self):
        assert triple_point_formula(TriplePointParams(0, 0, 0, 0, 1, 0)) == 0
        assert triple_point_formula(TriplePointParams(1, 0, 0, 4, 0, 0)) == -1
        assert triple_point_formula(TriplePointParams(3, 2, 1, 6, 2, 1)) == 13

    def test_odd_degree_is_exact(self):
        val = triple_point_formula(TriplePointParams(0, 1, 0, 5, 0, 0))
        assert isinstance(val, Fraction) and val == Fraction(1, 2)
