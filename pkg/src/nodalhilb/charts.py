"""The explicit model of the relative Hilbert scheme near a maximally singular cycle.

``build_chart_model(m)`` produces the chain curve relations, the scheme
relations in the coefficients a_k, d_k, the embedding monomials Z_i and the
ideal generators F_0..F_m.  The ``verify_*`` functions check the model on the
charts U_i = {Z_i != 0} and return JSON-friendly report dicts; they raise
:class:`RelationFailure` when an identity fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .arith import Poly, Ring, as_rat, random_rat, substitute
from .errors import ModelError, PreconditionError, RangeError, RelationFailure
from .groebner import (
    GroebnerBasis,
    IdealBasis,
    MonomialOrder,
    buchberger,
    jacobian_rank_at,
    quotient_basis,
)
from .punctual import NODE


@dataclass(frozen=True)
class ChartModel:
    m: int
    ring: Ring
    ctilde_relations: tuple[Poly, ...]
    htilde_relations: tuple[Poly, ...]
    z_monomials: tuple[Poly, ...]
    f_generators: tuple[Poly, ...]

    @property
    def relations(self) -> tuple[Poly, ...]:
        return self.ctilde_relations + self.htilde_relations

    def chart_normalization(self, i: int) -> dict[str, int]:
        """Coordinates set to 1 on U_i: u_1..u_{i-1} and v_i..v_{m-1}."""
        if not 1 <= i <= self.m:
            raise RangeError(f"chart index {i} outside 1..{self.m}")
        norm = {f"u{k}": 1 for k in range(1, i)}
        norm.update({f"v{k}": 1 for k in range(i, self.m)})
        return norm

    def chart_variables(self, i: int) -> list[str]:
        """The 3m affine coordinates of chart U_i (x, y excluded)."""
        norm = self.chart_normalization(i)
        return [n for n in self.ring.names if n not in ("x", "y") and n not in norm]

    def on_chart(self, p: Poly, i: int) -> Poly:
        return p.specialize(self.chart_normalization(i))

    def chart_relations(self, i: int, with_curve: bool = True) -> list[Poly]:
        rels = [self.on_chart(r, i) for r in self.relations]
        rels = [r for r in rels if not r.is_zero()]
        if with_curve:
            x, y, t = self.ring.gens("x", "y", "t")
            rels.append(x * y - t)
        return rels


@dataclass(frozen=True)
class ChartPoint:
    chart: int
    values: dict

    def __hash__(self):
        return hash((self.chart, tuple(sorted(self.values.items()))))


@dataclass(frozen=True)
class FiberClass:
    kind: str  # "point" or "chain"
    r: int = 0
    components: tuple[int, ...] = ()

    def __str__(self):
        return "point" if self.kind == "point" else f"chain({self.r})"


@lru_cache(maxsize=None)
def build_chart_model(m: int) -> ChartModel:
    if m < 1:
        raise RangeError("m must be at least 1")
    names = ["x", "y"]
    names += [f"u{k}" for k in range(1, m)] + [f"v{k}" for k in range(1, m)]
    names += [f"a{k}" for k in range(m)] + [f"d{k}" for k in range(m)] + ["t"]
    ring = Ring(names)
    g = ring.gen
    x, y, t = g("x"), g("y"), g("t")
    u = {k: g(f"u{k}") for k in range(1, m)}
    v = {k: g(f"v{k}") for k in range(1, m)}
    a = {k: g(f"a{k}") for k in range(m)}
    d = {k: g(f"d{k}") for k in range(m)}

    ctilde = tuple(v[k] * u[k + 1] - t * u[k] * v[k + 1] for k in range(1, m - 1))
    if m == 1:
        htilde = (a[0] * d[0] - t,)
    else:
        htilde = (
            (a[0] * u[1] - t * v[1],)
            + tuple(a[j] * u[j] - d[m - j] * v[j] for j in range(1, m))
            + (d[0] * v[m - 1] - t * u[m - 1],)
        )
    zs = []
    for i in range(1, m + 1):
        z = ring.one
        for k in range(1, i):
            z = z * u[k]
        for k in range(i, m):
            z = z * v[k]
        zs.append(z)

    gens = [x ** m + sum((a[k] * x ** k for k in range(m)), ring.zero)]
    for i in range(1, m):
        xpart = x ** (m - i) + sum((a[k] * x ** (k - i) for k in range(i, m)), ring.zero)
        ypart = y ** i + sum((d[m - i + l] * y ** l for l in range(1, i)), ring.zero)
        gens.append(u[i] * xpart + v[i] * ypart)
    gens.append(y ** m + sum((d[l] * y ** l for l in range(m)), ring.zero))
    return ChartModel(m, ring, ctilde, htilde, tuple(zs), tuple(gens))


# ---------------------------------------------------------------------------
# Z relations


def _ctilde_basis(model: ChartModel) -> GroebnerBasis:
    ring = model.ring
    sub = Ring([n for n in ring.names if n[0] in "uvt"])
    rels = [r.to_ring(sub) for r in model.ctilde_relations]
    return buchberger(IdealBasis(sub, tuple(rels)), MonomialOrder.default(sub))


def verify_z_relations(m: int, budget=None) -> dict:
    """Least e >= 1 with Z_i Z_j = t^e Z_{i+1} Z_{j-1} modulo the chain relations."""
    if m < 3:
        raise RangeError("the quadric relations need m >= 3")
    model = build_chart_model(m)
    gb = _ctilde_basis(model)
    sub = gb.ring
    z = [p.to_ring(sub) for p in model.z_monomials]
    t = sub.gen("t")
    table = {}
    for i in range(1, m + 1):
        for j in range(i + 2, m + 1):
            lhs = z[i - 1] * z[j - 1]
            rhs = z[i] * z[j - 2]
            for e in range(1, m + 1):
                if gb.contains(lhs - t ** e * rhs, budget):
                    table[(i, j)] = e
                    break
            else:
                raise RelationFailure(f"Z_{i} Z_{j} = t^e Z_{i+1} Z_{j-1} fails for every e <= {m}")
            if j == i + 2 and table[(i, j)] != 1:
                raise RelationFailure(f"adjacent relation ({i},{j}) needs exponent {table[(i, j)]}")
    return {
        "m": m,
        "exponents": {f"{i},{j}": e for (i, j), e in sorted(table.items())},
        "matches_j_minus_i_minus_1": all(e == j - i - 1 for (i, j), e in table.items()),
    }


# ---------------------------------------------------------------------------
# chart reduction and flatness


def chart_basis(model: ChartModel, i: int, budget=None) -> GroebnerBasis:
    ring = model.ring
    return buchberger(IdealBasis(ring, tuple(model.chart_relations(i))), MonomialOrder.default(ring), budget)


def _candidate_factors(ring: Ring, max_degree: int):
    x, y = ring.gens("x", "y")
    for deg in range(max_degree + 1):
        for a in range(deg, -1, -1):
            yield x ** a * y ** (deg - a)


def chart_reducer(model: ChartModel, i: int, method: str = "param", budget=None):
    """A function returning a normal form modulo the U_i relations and xy - t.

    ``param`` substitutes the chart parametrization and reduces by the single
    curve equation; ``gb`` computes a Groebner basis of all chart relations
    (slow beyond m = 3, kept as an independent check).
    """
    if method == "gb":
        gb = chart_basis(model, i, budget)
        return lambda p: gb.normal_form(model.on_chart(p, i), budget)
    if method != "param":
        raise ValueError(f"unknown reduction method {method!r}")
    ring = model.ring
    _, param = chart_parametrization(model.m, i)
    x, y = ring.gens("x", "y")
    order = MonomialOrder("block", blocks=(("x", "y"), tuple(n for n in ring.names if n not in ("x", "y"))))
    curve = buchberger(IdealBasis(ring, (x * y - param["t"],)), order, budget)
    return lambda p: curve.normal_form(substitute(p, param).as_poly(), budget)


def verify_chart_reduction(m: int, i: int, budget=None, method: str = "param") -> dict:
    """On U_i, find monomials mu_j with F_j = mu_j * F_{i-1} or mu_j * F_i.

    Such a factor also shows F_j lies in (F_{i-1}, F_i) modulo the relations.
    """
    model = build_chart_model(m)
    if not 1 <= i <= m:
        raise RangeError(f"chart index {i} outside 1..{m}")
    ring = model.ring
    reduce = chart_reducer(model, i, method, budget)
    F = [reduce(f) for f in model.f_generators]
    factors = {}
    for j in range(m + 1):
        if j in (i - 1, i):
            continue
        bases = (i - 1, i) if j < i - 1 else (i, i - 1)
        found = None
        for base in bases:
            for mu in _candidate_factors(ring, m):
                if reduce(F[j] - mu * F[base]).is_zero():
                    found = (str(mu), base)
                    break
            if found:
                break
        if found is None:
            raise RelationFailure(f"no monomial factor relates F_{j} to F_{i-1} or F_{i} on U_{i}")
        factors[j] = found
    return {
        "m": m,
        "chart": i,
        "factors": {f"F{j}": {"factor": mu, "base": f"F{b}"} for j, (mu, b) in sorted(factors.items())},
    }


def chart_parametrization(m: int, i: int) -> tuple[tuple[str, ...], dict[str, Poly]]:
    """Free coordinates of U_i and every other coordinate as a polynomial in them.

    Each scheme relation restricted to U_i solves one coordinate with a unit
    coefficient, so the chart is an affine space of dimension m + 1.
    """
    if not 1 <= i <= m:
        raise RangeError(f"chart index {i} outside 1..{m}")
    ring = build_chart_model(m).ring
    g = ring.gen
    if m == 1:
        a0, d0 = g("a0"), g("d0")
        return ("a0", "d0"), {"a0": a0, "d0": d0, "t": a0 * d0}
    val: dict[str, Poly] = {f"u{k}": ring.one for k in range(1, i)}
    val.update({f"v{k}": ring.one for k in range(i, m)})
    if i == 1:
        pair = ("u1", "a0")
    elif i == m:
        pair = (f"v{m - 1}", "d0")
    else:
        pair = (f"u{i}", f"v{i - 1}")
    free = list(pair)
    for name in pair:
        val[name] = g(name)
    t = val[pair[0]] * val[pair[1]]
    val["t"] = t
    for k in range(i + 1, m):
        val[f"u{k}"] = t * val[f"u{k - 1}"]
    for k in range(i - 2, 0, -1):
        val[f"v{k}"] = t * val[f"v{k + 1}"]
    for j in range(1, m):
        if j >= i:
            free.append(f"a{j}")
            val[f"a{j}"] = g(f"a{j}")
            val[f"d{m - j}"] = val[f"a{j}"] * val[f"u{j}"]
        else:
            free.append(f"d{m - j}")
            val[f"d{m - j}"] = g(f"d{m - j}")
            val[f"a{j}"] = val[f"d{m - j}"] * val[f"v{j}"]
    if i > 1:
        val["a0"] = t * val["v1"]
    if i < m:
        val["d0"] = t * val[f"u{m - 1}"]
    return tuple(free), val


def chart_point(m: int, i: int, rng: random.Random | None = None, *, force_t_zero: bool = False) -> ChartPoint:
    """A rational point of H~ on U_i; with no ``rng`` all free coordinates are 0."""
    free, param = chart_parametrization(m, i)
    choice = {name: (random_rat(rng) if rng is not None else 0) for name in free}
    if force_t_zero:
        choice[rng.choice(free[:2]) if rng is not None else free[0]] = 0
    val = {name: as_rat(p.eval(choice)) for name, p in param.items()}
    model = build_chart_model(m)
    for r in model.relations:
        if r.eval(val) != 0:
            raise ModelError(f"chart point violates {r}")
    return ChartPoint(i, val)


def boundary_point(m: int, i: int) -> ChartPoint:
    """The point of U_i over q^m_i: all a = d = t = 0 at the chain node."""
    return chart_point(m, i, None)


def expected_staircase(m: int, i: int) -> list[tuple[int, int]]:
    return sorted([(0, 0)] + [(k, 0) for k in range(1, m - i + 1)] + [(0, l) for l in range(1, i)], key=lambda e: (sum(e), e))


def specialized_pair(model: ChartModel, i: int, point: ChartPoint) -> tuple[Poly, Poly, Poly]:
    vals = {k: v for k, v in point.values.items()}
    F = model.f_generators
    f = F[i - 1].specialize(vals).to_ring(NODE)
    g = F[i].specialize(vals).to_ring(NODE)
    x, y = NODE.gens()
    return f, g, x * y - vals["t"]


def verify_flatness_chart(m: int, i: int, spec_count: int = 20, seed: int = 0, budget=None) -> dict:
    """Colength m and the expected staircase at seeded points of U_i (some with t = 0)."""
    model = build_chart_model(m)
    rng = random.Random(f"flat:{m}:{i}:{seed}")
    order = MonomialOrder("weighted", ("x", "y"), (i, m + 1 - i))
    expected = expected_staircase(m, i)
    points = [boundary_point(m, i)]
    for k in range(spec_count):
        points.append(chart_point(m, i, rng, force_t_zero=(k % 3 == 0)))
    zero_t = 0
    for pt in points:
        gens = specialized_pair(model, i, pt)
        qb = quotient_basis(IdealBasis(NODE, gens), order, budget)
        if qb.colength != m:
            raise RelationFailure(f"colength {qb.colength} != {m} on U_{i} at {pt.values}")
        if list(qb.standard_monomials) != expected:
            raise RelationFailure(f"staircase {qb.names()} on U_{i} differs from the expected basis")
        zero_t += pt.values["t"] == 0
    return {
        "m": m,
        "chart": i,
        "points": len(points),
        "t_zero_points": zero_t,
        "basis": [NODE.format_mono(e) for e in expected],
    }


# ---------------------------------------------------------------------------
# fibres over the coefficient space


def cycle_values(points, t) -> dict:
    """Coefficients a_k, d_k of prod(X - x_j), prod(Y - y_j) for a cycle on xy = t."""
    t = as_rat(t)
    xs = [as_rat(p[0]) for p in points]
    ys = [as_rat(p[1]) for p in points]
    for xv, yv in zip(xs, ys):
        if xv * yv != t:
            raise PreconditionError(f"({xv}, {yv}) is not on xy = {t}")
    vals = {"t": t}
    for prefix, roots in (("a", xs), ("d", ys)):
        coeffs = [Fraction(1)]
        for r in roots:
            coeffs = [Fraction(0)] + coeffs
            for k in range(len(coeffs) - 1):
                coeffs[k] -= r * coeffs[k + 1]
        for k in range(len(roots)):
            vals[f"{prefix}{k}"] = coeffs[k]
    return vals


def _proj(u, v) -> tuple:
    u, v = Fraction(u), Fraction(v)
    if u == 0 and v == 0:
        raise ModelError("[0:0] is not a projective point")
    return (Fraction(1), v / u) if u != 0 else (Fraction(0), Fraction(1))


def classify_fiber(m: int, values: dict) -> FiberClass:
    """Fibre of H~ over given a_*, d_*, t: a point or a chain of r lines."""
    if m < 2:
        raise RangeError("fibres are classified for m >= 2")
    model = build_chart_model(m)
    vals = {k: as_rat(v) for k, v in values.items()}
    t = vals["t"]
    rels = model.relations

    def check(coords) -> bool:
        pt = dict(vals)
        for k, (u, v) in enumerate(coords, start=1):
            pt[f"u{k}"], pt[f"v{k}"] = u, v
        return all(r.eval(pt) == 0 for r in rels)

    if t != 0:
        coords = [_proj(t, vals["a0"])]
        for _ in range(2, m):
            u, v = coords[-1]
            coords.append(_proj(t * u, v))
        if not check(coords):
            raise ModelError("empty fibre: values are not the image of a length-m cycle")
        return FiberClass("point")

    full = []
    isolated = set()
    for r in range(1, m):
        fixed = {}
        for k in range(1, m):
            if k < r:
                fixed[k] = (Fraction(1), Fraction(0))
            elif k > r:
                fixed[k] = (Fraction(0), Fraction(1))
        rows = []
        for lam, mu in ((0, 0), (1, 0), (0, 1)):
            coords = [fixed.get(k, (lam, mu)) for k in range(1, m)]
            pt = dict(vals)
            for k, (u, v) in enumerate(coords, start=1):
                pt[f"u{k}"], pt[f"v{k}"] = u, v
            rows.append([rel.eval(pt) for rel in rels])
        # each relation is affine in (u_r, v_r) along the component; a nonzero
        # constant part means the component misses the fibre entirely
        if any(c != 0 for c in rows[0]):
            continue
        forms = [(al, be) for al, be in zip(rows[1], rows[2]) if al != 0 or be != 0]
        if not forms:
            full.append(r)
            continue
        al, be = forms[0]
        cand = _proj(-be, al) if (al, be) != (0, 0) else None
        if all(a2 * cand[0] + b2 * cand[1] == 0 for a2, b2 in forms):
            coords = tuple(fixed.get(k, cand) for k in range(1, m))
            isolated.add(coords)
    if full:
        if full != list(range(full[0], full[-1] + 1)):
            raise ModelError(f"fibre components {full} are not a connected chain")
        for coords in isolated:
            if not any(_on_component(coords, r) for r in full):
                raise ModelError("fibre has a point off its chain")
        if len(full) > m - 1:
            raise ModelError("chain longer than m - 1")
        return FiberClass("chain", len(full), tuple(full))
    if len(isolated) == 1:
        return FiberClass("point")
    if not isolated:
        raise ModelError("empty fibre: values are not the image of a length-m cycle")
    raise ModelError(f"fibre has {len(isolated)} isolated points")


def _on_component(coords, r: int) -> bool:
    for k, c in enumerate(coords, start=1):
        if k < r and c != (1, 0):
            return False
        if k > r and c != (0, 1):
            return False
    return True


def node_cycle_values(m: int, at_node: int, rng: random.Random) -> dict:
    """Values for a t = 0 cycle with ``at_node`` points at the node, the rest on the axes."""
    pts = [(0, 0)] * at_node
    for _ in range(m - at_node):
        c = random_rat(rng, nonzero=True)
        pts.append((c, 0) if rng.random() < 0.5 else (0, c))
    return cycle_values(pts, 0)


def generic_cycle_values(m: int, rng: random.Random, t=None) -> dict:
    """Values for m random points on xy = t (t random nonzero unless given)."""
    if t is None:
        t = random_rat(rng, nonzero=True)
    t = as_rat(t)
    pts = []
    for _ in range(m):
        if t != 0:
            xv = random_rat(rng, nonzero=True)
            pts.append((xv, Fraction(t) / xv))
        else:
            c = random_rat(rng, nonzero=True)
            pts.append((c, 0) if rng.random() < 0.5 else (0, c))
    return cycle_values(pts, t)


def verify_fibers(m: int, seeds: int = 50, seed: int = 0) -> dict:
    """Generic cycles give points; r points at the node give chain(r - 1)."""
    rng = random.Random(f"fibers:{m}:{seed}")
    generic = [str(classify_fiber(m, generic_cycle_values(m, rng))) for _ in range(seeds)]
    if any(g != "point" for g in generic):
        raise RelationFailure("a generic cycle has a non-point fibre")
    realized = {}
    for r in range(1, m + 1):
        fc = classify_fiber(m, node_cycle_values(m, r, rng))
        expect = "point" if r <= 1 else f"chain({r - 1})"
        if str(fc) != expect:
            raise RelationFailure(f"{r} points at the node gave {fc}, expected {expect}")
        realized[r] = str(fc)
    return {"m": m, "generic_point_frequency": generic.count("point") / len(generic), "node_multiplicity": realized}


# ---------------------------------------------------------------------------
# smoothness and Z restrictions


def smoothness_check(m: int, points=None, *, seeds: int = 50, seed: int = 0) -> dict:
    """Jacobian rank 2m - 1 of the scheme relations at boundary and seeded points."""
    model = build_chart_model(m)
    if points is None:
        rng = random.Random(f"smooth:{m}:{seed}")
        points = [boundary_point(m, i) for i in range(1, m + 1)]
        points += [chart_point(m, 1 + k % m, rng, force_t_zero=(k % 4 == 0)) for k in range(seeds)]
    ranks = []
    for pt in points:
        variables = model.chart_variables(pt.chart)
        rank = jacobian_rank_at(list(model.relations), pt.values, variables)
        if rank != 2 * m - 1:
            raise RelationFailure(f"Jacobian rank {rank} != {2 * m - 1} on U_{pt.chart} at {pt.values}")
        ranks.append(rank)
    return {"m": m, "points": len(points), "rank": 2 * m - 1, "ambient_dimension": 3 * m}


def z_restriction_degrees(m: int) -> dict:
    """Z_j restricted to each chain component: v_i, u_i on j = i, i+1, else 0."""
    if m < 2:
        raise RangeError("m must be at least 2")
    model = build_chart_model(m)
    table = {}
    for i in range(1, m):
        vals = {}
        for k in range(1, m):
            if k < i:
                vals[f"u{k}"], vals[f"v{k}"] = 1, 0
            elif k > i:
                vals[f"u{k}"], vals[f"v{k}"] = 0, 1
        row = []
        for j, z in enumerate(model.z_monomials, start=1):
            r = z.specialize(vals)
            if j == i:
                ok = r == model.ring.gen(f"v{i}")
            elif j == i + 1:
                ok = r == model.ring.gen(f"u{i}")
            else:
                ok = r.is_zero()
            if not ok:
                raise RelationFailure(f"Z_{j} restricted to component {i} is {r}")
            row.append(str(r))
        table[i] = row
    return {"m": m, "restrictions": {f"C{i}": row for i, row in table.items()}, "degree": 1}
