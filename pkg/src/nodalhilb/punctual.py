"""Length-m ideals at the node xy = 0 and their universal flat deformation.

Ideals are modelled in Q[x, y] with the node relation xy adjoined; every
colength-m ideal handled here contains (x, y)^m, so staircases agree with
those of the complete local ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Poly, Ring, as_rat, random_rat
from .errors import ModelError, RangeError, RelationFailure
from .groebner import (
    GroebnerBasis,
    IdealBasis,
    MonomialOrder,
    QuotientBasis,
    buchberger,
    quotient_basis,
    saturate,
)

NODE = Ring(("x", "y"))


@dataclass(frozen=True)
class PunctualIdeal:
    kind: str  # "boundary" or "chain_point"
    m: int
    i: int
    ideal: IdealBasis
    a: Fraction | int | None = None

    def with_node(self) -> IdealBasis:
        x, y = NODE.gens()
        return IdealBasis(NODE, self.ideal.generators + (x * y,))

    def groebner(self) -> GroebnerBasis:
        return buchberger(self.with_node())

    def quotient(self) -> QuotientBasis:
        return quotient_basis(self.groebner())

    @property
    def colength(self):
        return self.quotient().colength

    def same_as(self, other: "PunctualIdeal") -> bool:
        """Equality of the two ideals in Q[x, y]/(xy)."""
        return self.groebner() == other.groebner()

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.ideal.generators) + ")"


def boundary_ideal(m: int, i: int) -> PunctualIdeal:
    """q^m_i = (x^(m+1-i), y^i)."""
    if not 1 <= i <= m:
        raise RangeError(f"boundary ideal needs 1 <= i <= m, got m={m}, i={i}")
    x, y = NODE.gens()
    return PunctualIdeal("boundary", m, i, IdealBasis(NODE, (x ** (m + 1 - i), y ** i)))


def chain_ideal(m: int, i: int, a) -> PunctualIdeal:
    """I^m_i(a) = (a x^(m-i) + y^i) for a != 0, a point in the interior of component i."""
    if not 1 <= i <= m - 1:
        raise RangeError(f"chain ideal needs 1 <= i <= m-1, got m={m}, i={i}")
    a = as_rat(a)
    if a == 0:
        raise RangeError("a = 0 is the limit point; use boundary_ideal")
    x, y = NODE.gens()
    return PunctualIdeal("chain_point", m, i, IdealBasis(NODE, (x ** (m - i) * a + y ** i,)), a)


def flat_limit(m: int, i: int, direction: str, budget=None) -> PunctualIdeal:
    """Limit of I^m_i(a) as a -> 0 (``"0"``) or a -> infinity (``"inf"``).

    The family is saturated with respect to its parameter, which is then set
    to zero.  For a -> infinity the parameter is b = 1/a.
    """
    if not 1 <= i <= m - 1:
        raise RangeError(f"flat limit needs 1 <= i <= m-1, got m={m}, i={i}")
    ring = Ring(("p", "x", "y"))
    p, x, y = ring.gens()
    if direction in ("0", "a->0", 0):
        family = p * x ** (m - i) + y ** i
        expected = i
    elif direction in ("inf", "a->inf", "a->∞"):
        family = x ** (m - i) + p * y ** i
        expected = i + 1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    sat = saturate(IdealBasis(ring, (family, x * y)), p, budget)
    gens = [g.specialize({"p": 0}).to_ring(NODE) for g in sat.generators]
    gens = [g for g in gens if not g.is_zero()]
    gb = buchberger(IdealBasis(NODE, tuple(gens) + (NODE.gen("x") * NODE.gen("y"),)))
    limit = PunctualIdeal("boundary", m, expected, IdealBasis(NODE, tuple(g for g in gb.elements if g != NODE.parse("x*y")) or gb.elements))
    if not limit.same_as(boundary_ideal(m, expected)):
        raise RelationFailure(f"limit of I^{m}_{i}(a) is {limit}, not q^{m}_{expected}")
    return limit


@dataclass(frozen=True)
class ChainComponent:
    index: int
    left: PunctualIdeal
    right: PunctualIdeal
    parameter: str = "a"


@dataclass(frozen=True)
class ChainDescriptor:
    m: int
    components: tuple[ChainComponent, ...]
    point: PunctualIdeal | None = None

    def nodes(self) -> list[PunctualIdeal]:
        if not self.components:
            return [self.point] if self.point else []
        return [self.components[0].left] + [c.right for c in self.components]


def punctual_chain(m: int, seed: int = 0, samples: int = 5, budget=None) -> ChainDescriptor:
    """The chain of m-1 rational curves, with colengths and both limits checked."""
    if m < 1:
        raise RangeError("m must be at least 1")
    if m == 1:
        point = boundary_ideal(1, 1)
        if point.colength != 1:
            raise RelationFailure("(x, y) should have colength 1")
        return ChainDescriptor(1, (), point)
    rng = random.Random(seed)
    for i in range(1, m + 1):
        if boundary_ideal(m, i).colength != m:
            raise RelationFailure(f"colength of q^{m}_{i} is not {m}")
    comps = []
    for i in range(1, m):
        for _ in range(samples):
            a = random_rat(rng, nonzero=True)
            if chain_ideal(m, i, a).colength != m:
                raise RelationFailure(f"colength of I^{m}_{i}({a}) is not {m}")
        left = flat_limit(m, i, "0", budget)
        right = flat_limit(m, i, "inf", budget)
        comps.append(ChainComponent(i, left, right))
    for c1, c2 in zip(comps, comps[1:]):
        if not c1.right.same_as(c2.left):
            raise RelationFailure(f"components {c1.index} and {c2.index} do not meet")
    return ChainDescriptor(m, tuple(comps))


# ---------------------------------------------------------------------------
# universal deformation of q^m_i


@dataclass
class DeformationPair:
    m: int
    i: int
    ring: Ring
    f: Poly
    g: Poly
    u: str
    v: str
    free: tuple[str, ...]
    determined: dict[str, Poly]
    constraints: tuple[Poly, ...]
    residuals: tuple[Poly, ...] = field(default=())

    def relation_basis(self) -> GroebnerBasis:
        r = self.ring
        x, y, t = r.gens("x", "y", "t")
        return buchberger(IdealBasis(r, (x * y - t,) + self.constraints), MonomialOrder.default(r))

    def flatness_residuals(self) -> tuple[Poly, Poly]:
        """Normal forms of y f - v g and x g - u f modulo xy - t and the constraints."""
        r = self.ring
        x, y, u, v = r.gens("x", "y", self.u, self.v)
        gb = self.relation_basis()
        return gb.normal_form(y * self.f - v * self.g), gb.normal_form(x * self.g - u * self.f)

    def sample_point(self, rng: random.Random, *, force_t_zero: bool = False) -> dict[str, object]:
        """Rational values for all parameters satisfying the constraints."""
        point = {name: random_rat(rng) for name in self.free}
        if force_t_zero:
            point[rng.choice((self.u, self.v))] = 0
        point["t"] = as_rat(point[self.u]) * as_rat(point[self.v])
        for name, expr in self.determined.items():
            point[name] = expr.eval(point)
        return point

    def specialized_colength(self, point) -> int:
        values = {k: v for k, v in point.items() if k not in ("x", "y")}
        f = self.f.specialize(values).to_ring(NODE)
        g = self.g.specialize(values).to_ring(NODE)
        x, y = NODE.gens()
        return quotient_basis(IdealBasis(NODE, (f, g, x * y - as_rat(point["t"])))).colength


def _deformation_ring(m: int, i: int):
    """Variable names of the (f, g) model for q^m_i, following the chart generators."""
    a_names = [f"a{k}" for k in range(i - 1, m)]  # f: coefficient of x^(k-i+1)
    d_names = [f"d{m - i + l}" for l in range(1, i)]  # g: coefficient of y^l
    r_names = [f"r{l}" for l in range(1, i - 1)]  # f: coefficient of y^l, l <= i-2
    s_names = [f"s{k}" for k in range(0, m - i)]  # g: coefficient of x^k, k <= m-i-1
    u = "d0" if i == m else "u"
    v = "a0" if i == 1 else "v"
    if i == m:
        s_names = []
    extra = [n for n in (u, v) if n not in a_names and n not in d_names]
    names = ["x", "y"] + extra + a_names + d_names + r_names + s_names + ["t"]
    return Ring(dict.fromkeys(names)), a_names, d_names, r_names, s_names, u, v


def deformation_template(m: int, i: int):
    """The generic (f, g) with every coefficient an independent unknown."""
    if not 1 <= i <= m:
        raise RangeError(f"deformation needs 1 <= i <= m, got m={m}, i={i}")
    ring, a_names, d_names, r_names, s_names, u, v = _deformation_ring(m, i)
    x, y = ring.gens("x", "y")
    U, V = ring.gen(u), ring.gen(v)
    f = x ** (m + 1 - i)
    for k in range(i - 1, m):
        f = f + ring.gen(f"a{k}") * x ** (k - i + 1)
    if i >= 2:
        f = f + V * y ** (i - 1)
        for l in range(1, i - 1):
            f = f + ring.gen(f"r{l}") * y ** l
    g = y ** i
    for l in range(1, i):
        g = g + ring.gen(f"d{m - i + l}") * y ** l
    if i <= m - 1:
        g = g + U * x ** (m - i)
        for k in range(0, m - i):
            g = g + ring.gen(f"s{k}") * x ** k
    else:
        g = g + U
    return ring, f, g, u, v, r_names + s_names, a_names + d_names


def universal_deformation(m: int, i: int, budget=None) -> DeformationPair:
    """Solve the flatness relations y f = v g, x g = u f modulo xy - t.

    Coefficients of the tails f^2, g^2 (and any coefficient forced by a
    unit-coefficient linear equation) are solved for; what remains must be
    generated by uv - t.
    """
    ring, f, g, u, v, tail_names, coeff_names = deformation_template(m, i)
    x, y, t = ring.gens("x", "y", "t")
    U, V = ring.gen(u), ring.gen(v)
    eqs = _coefficients_mod_node(y * f - V * g, ring) + _coefficients_mod_node(x * g - U * f, ring)
    determined: dict[str, Poly] = {}
    candidates = tail_names + [n for n in coeff_names if n not in (u, v)]
    progress = True
    while progress:
        progress = False
        for name in candidates:
            if name in determined:
                continue
            for eq in eqs:
                solved = _solve_unit(eq, name, ring)
                if solved is not None:
                    determined = {k: _subst(p, name, solved) for k, p in determined.items()}
                    determined[name] = solved
                    eqs = [_subst(e, name, solved) for e in eqs]
                    eqs = [e for e in eqs if not e.is_zero()]
                    progress = True
                    break
    left = [n for n in tail_names if n not in determined]
    if left:
        raise ModelError(f"tail coefficients {left} are not determined by the relations")
    rel = U * V - t
    rel_gb = buchberger(IdealBasis(ring, (rel,)), MonomialOrder.default(ring))
    residuals = tuple(dict.fromkeys(_primitive(e) for e in eqs))
    for e in residuals:
        if not rel_gb.contains(e):
            raise ModelError(f"residual relation {e} is not a consequence of {rel}")
    if not residuals or not buchberger(IdealBasis(ring, residuals), MonomialOrder.default(ring)).contains(rel):
        raise ModelError(f"{rel} does not follow from the flatness relations")
    # tails f^2, g^2 are substituted; solved f^1/g^1 coefficients stay symbolic
    for name in tail_names:
        f = _subst(f, name, determined[name])
        g = _subst(g, name, determined[name])
    keep = [n for n in coeff_names if n in determined]
    free = tuple(n for n in ring.names if n not in ("x", "y", "t") and n not in determined)
    constraints = (rel,) + tuple(ring.gen(n) - determined[n] for n in keep)
    return DeformationPair(
        m, i, ring, f, g, u, v, free, dict(determined), constraints, residuals,
    )


def _coefficients_mod_node(p: Poly, ring: Ring) -> list[Poly]:
    """Reduce p by xy -> t and split into coefficient polynomials of x^a y^b."""
    ix, iy, it = ring.index("x"), ring.index("y"), ring.index("t")
    groups: dict = {}
    for e, c in p.terms.items():
        e = list(e)
        k = min(e[ix], e[iy])
        e[ix] -= k
        e[iy] -= k
        e[it] += k
        key = (e[ix], e[iy])
        e[ix] = e[iy] = 0
        bucket = groups.setdefault(key, {})
        e = tuple(e)
        bucket[e] = bucket.get(e, 0) + c
    out = []
    for key in sorted(groups):
        q = Poly(ring, groups[key])
        if not q.is_zero():
            out.append(q)
    return out


def _solve_unit(eq: Poly, name: str, ring: Ring) -> Poly | None:
    """If eq = c*name + rest with c a nonzero rational and name absent from rest."""
    i = ring.index(name)
    if eq.degree_in(name) != 1:
        return None
    lin = {}
    rest = {}
    for e, c in eq.terms.items():
        if e[i]:
            lin[e] = c
        else:
            rest[e] = c
    if len(lin) != 1:
        return None
    (e, c), = lin.items()
    if sum(e) != 1:
        return None
    return Poly(ring, rest).scale(Fraction(-1) / c)


def _subst(p: Poly, name: str, value: Poly) -> Poly:
    i = p.ring.index(name)
    if p.degree_in(name) <= 0:
        return p
    out = p.ring.zero
    powers = [p.ring.one]
    for e, c in p.terms.items():
        k = e[i]
        while len(powers) <= k:
            powers.append(powers[-1] * value)
        e2 = list(e)
        e2[i] = 0
        out = out + powers[k].mul_mono(tuple(e2), c)
    return out


def _primitive(p: Poly) -> Poly:
    p = p.scale(1 / p.content())
    return p if p.leading_term()[1] > 0 else -p
