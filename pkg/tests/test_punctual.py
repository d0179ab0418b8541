import random

import pytest

from nodalhilb.errors import RangeError
from nodalhilb.punctual import (
    NODE,
    boundary_ideal,
    chain_ideal,
    flat_limit,
    punctual_chain,
    universal_deformation,
)

from oracles import sympy_colength

x, y = NODE.gens()


class TestBoundaryIdeal:
    @pytest.mark.parametrize("m,i,gens,colength", [
        (2, 1, (x ** 2, y), 2),
        (3, 2, (x ** 2, y ** 2), 3),
        (1, 1, (x, y), 1),
    ])
    def test_examples(self, m, i, gens, colength):
        q = boundary_ideal(m, i)
        assert q.ideal.generators == gens
        assert q.colength == colength

    def test_range(self):
        with pytest.raises(RangeError):
            boundary_ideal(3, 4)
        with pytest.raises(RangeError):
            boundary_ideal(3, 0)

    @pytest.mark.parametrize("m", range(2, 7))
    def test_colength_all_i(self, m):
        for i in range(1, m + 1):
            assert boundary_ideal(m, i).colength == m


class TestChainIdeal:
    @pytest.mark.parametrize("m,i,a", [(2, 1, 1), (3, 1, 2), (4, 2, 1)])
    def test_examples(self, m, i, a):
        c = chain_ideal(m, i, a)
        assert c.ideal.generators == (a * x ** (m - i) + y ** i,)
        assert c.colength == m
        assert sympy_colength([c.ideal.generators[0], x * y], NODE) == m

    def test_zero_parameter_rejected(self):
        with pytest.raises(RangeError):
            chain_ideal(3, 1, 0)

    @pytest.mark.parametrize("m", range(2, 7))
    def test_seeded_colengths(self, m):
        rng = random.Random(m)
        for i in range(1, m):
            for _ in range(5):
                a = rng.choice([1, -1]) * rng.randint(1, 9)
                assert chain_ideal(m, i, a).colength == m


class TestFlatLimit:
    def test_examples(self):
        assert flat_limit(2, 1, "0").same_as(boundary_ideal(2, 1))
        assert flat_limit(2, 1, "inf").same_as(boundary_ideal(2, 2))
        assert flat_limit(3, 2, "inf").same_as(boundary_ideal(3, 3))

    @pytest.mark.parametrize("m", range(2, 7))
    def test_adjacency(self, m):
        for i in range(1, m - 1):
            assert flat_limit(m, i, "inf").same_as(flat_limit(m, i + 1, "0"))

    def test_limit_keeps_colength(self):
        for m in range(2, 5):
            for i in range(1, m):
                assert flat_limit(m, i, "0").colength == m

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            flat_limit(2, 1, "sideways")


class TestChain:
    def test_m2(self):
        chain = punctual_chain(2)
        assert len(chain.components) == 1
        nodes = chain.nodes()
        assert nodes[0].same_as(boundary_ideal(2, 1)) and nodes[1].same_as(boundary_ideal(2, 2))

    def test_m3_shared_node(self):
        chain = punctual_chain(3)
        assert len(chain.components) == 2
        assert chain.components[0].right.same_as(boundary_ideal(3, 2))
        assert chain.components[1].left.same_as(boundary_ideal(3, 2))

    def test_m1(self):
        chain = punctual_chain(1)
        assert chain.components == ()
        assert chain.nodes()[0].same_as(boundary_ideal(1, 1))


class TestUniversalDeformation:
    def test_m2_i1(self):
        p = universal_deformation(2, 1)
        r = p.ring
        assert p.f == r.parse("x^2 + a1*x + a0")
        assert p.g == r.parse("y + u*x + u*a1")
        assert [str(c) for c in p.constraints] == ["u*a0 - t"]

    def test_m3_i2(self):
        p = universal_deformation(3, 2)
        r = p.ring
        assert p.f == r.parse("x^2 + a2*x + a1 + v*y")
        assert p.g == r.parse("y^2 + d2*y + u*x + u*a2")
        assert set(p.constraints) == {r.parse("u*v - t"), r.parse("a1 - v*d2")}

    def test_m1(self):
        p = universal_deformation(1, 1)
        r = p.ring
        assert p.f == r.parse("x + a0") and p.g == r.parse("y + d0")
        assert p.constraints == (r.parse("d0*a0 - t"),)

    @pytest.mark.parametrize("m", range(1, 6))
    def test_free_count_and_residuals(self, m):
        for i in range(1, m + 1):
            p = universal_deformation(m, i)
            assert len(p.free) == m + 1
            assert all(res.is_zero() for res in p.flatness_residuals())
            r = p.ring
            assert r.parse(f"{p.u}*{p.v} - t") in p.constraints

    @pytest.mark.parametrize("m,i", [(2, 1), (3, 2), (4, 2), (4, 4), (5, 3)])
    def test_specializations_have_colength_m(self, m, i):
        p = universal_deformation(m, i)
        rng = random.Random(100 * m + i)
        for k in range(20):
            pt = p.sample_point(rng, force_t_zero=(k % 4 == 0))
            assert all(c.eval({**pt, "x": 0, "y": 0}) == 0 for c in p.constraints)
            assert p.specialized_colength(pt) == m
