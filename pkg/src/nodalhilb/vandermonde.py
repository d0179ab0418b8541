"""Mixed Van der Monde determinants on the ordered cycle model x_k y_k = t.

The determinants G_i (with a sign choice) satisfy linear syzygies against the
elementary symmetric functions and quadratic relations among themselves; their
vanishing orders along the components of the special fibre locate the
discriminant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .arith import Frac, Poly, Ring, TLaurent, determinant, elementary_symmetric, substitute
from .errors import ModelError, RangeError, RelationFailure
from .groebner import IdealBasis, MonomialOrder, buchberger


class CycleRing:
    """Q[x_1..x_m, y_1..y_m, t] modulo x_k y_k = t, with a rewriting normal form."""

    def __init__(self, m: int):
        if m < 1:
            raise RangeError("m must be at least 1")
        self.m = m
        self.ring = Ring([f"x{k}" for k in range(1, m + 1)] + [f"y{k}" for k in range(1, m + 1)] + ["t"])
        self._t = 2 * m

    def x(self, k: int) -> Poly:
        return self.ring.gen(f"x{k}")

    def y(self, k: int) -> Poly:
        return self.ring.gen(f"y{k}")

    @property
    def t(self) -> Poly:
        return self.ring.gen("t")

    def sigma_x(self, k: int) -> Poly:
        return elementary_symmetric([self.x(j) for j in range(1, self.m + 1)], k, self.ring)

    def sigma_y(self, k: int) -> Poly:
        return elementary_symmetric([self.y(j) for j in range(1, self.m + 1)], k, self.ring)

    def relations(self) -> list[Poly]:
        return [self.x(k) * self.y(k) - self.t for k in range(1, self.m + 1)]

    def normal_form(self, p: Poly) -> Poly:
        """Replace every x_k y_k by t until no term contains both."""
        m, ti = self.m, self._t
        out: dict = {}
        for e, c in p.terms.items():
            e2 = list(e)
            for k in range(m):
                q = min(e2[k], e2[m + k])
                if q:
                    e2[k] -= q
                    e2[m + k] -= q
                    e2[ti] += q
            key = tuple(e2)
            out[key] = out.get(key, 0) + c
        return Poly(self.ring, out)

    def congruent(self, lhs: Poly, rhs: Poly) -> bool:
        return self.normal_form(lhs - rhs).is_zero()

    def groebner_basis(self):
        """The relations already form a Groebner basis; computed here as an oracle."""
        return buchberger(IdealBasis(self.ring, tuple(self.relations())), MonomialOrder.default(self.ring))


@lru_cache(maxsize=None)
def cycle_ring(m: int) -> CycleRing:
    return CycleRing(m)


@dataclass(frozen=True)
class MixedVdM:
    m: int
    i: int
    matrix: tuple[tuple[Poly, ...], ...]
    det: Poly

    def row_labels(self) -> list[str]:
        return ["1"] + [f"x^{p}" for p in range(1, self.m - self.i + 1)] + [f"y^{p}" for p in range(1, self.i)]


@dataclass(frozen=True)
class ThetaComponent:
    """Component of the ordered special fibre where x_j = 0 for j outside I and y_j = 0 for j in I."""

    m: int
    subset: frozenset

    @property
    def k(self) -> int:
        return len(self.subset)

    def parametrization(self, cr: CycleRing) -> dict[str, Frac]:
        ring = cr.ring
        t = ring.gen("t")
        out = {}
        for j in range(1, self.m + 1):
            if j in self.subset:
                out[f"x{j}"] = Frac(t, ring.gen(f"y{j}"))
            else:
                out[f"y{j}"] = Frac(t, ring.gen(f"x{j}"))
        return out


@lru_cache(maxsize=None)
def mixed_vdm(m: int, i: int) -> MixedVdM:
    if not 1 <= i <= m:
        raise RangeError(f"i = {i} outside 1..{m}")
    cr = cycle_ring(m)
    rows = [[cr.ring.one for _ in range(m)]]
    rows += [[cr.x(k) ** p for k in range(1, m + 1)] for p in range(1, m - i + 1)]
    rows += [[cr.y(k) ** p for k in range(1, m + 1)] for p in range(1, i)]
    return MixedVdM(m, i, tuple(tuple(r) for r in rows), determinant(rows))


def signed_dets(m: int, signs) -> list[Poly]:
    """G~_1..G~_m as a list indexed from 0."""
    return [mixed_vdm(m, i).det * signs[i - 1] for i in range(1, m + 1)]


def _cleared(lhs: Poly, rhs: Poly, e: int, t: Poly) -> tuple[Poly, Poly]:
    """lhs = t^e rhs with a negative exponent moved to the other side."""
    if e >= 0:
        return lhs, t ** e * rhs
    return t ** (-e) * lhs, rhs


def linear_relations(m: int):
    """Yield (family, i, j, e) for both families of linear syzygies.

    ``up``: sigma^y_{m-j} G_i = t^{m-j-i} sigma^x_j G_{i+1} for 1 <= i < m.
    ``down``: sigma^x_{m-j} G_i = t^{i-1-j} sigma^y_j G_{i-1} for 1 < i <= m.
    """
    for i in range(1, m):
        for j in range(m + 1):
            yield "up", i, j, m - j - i
    for i in range(2, m + 1):
        for j in range(m + 1):
            yield "down", i, j, i - 1 - j


def _linear_holds(cr: CycleRing, G, family: str, i: int, j: int, e: int) -> bool:
    m = cr.m
    if family == "up":
        lhs, rhs = cr.sigma_y(m - j) * G[i - 1], cr.sigma_x(j) * G[i]
    else:
        lhs, rhs = cr.sigma_x(m - j) * G[i - 1], cr.sigma_y(j) * G[i - 2]
    lhs, rhs = _cleared(lhs, rhs, e, cr.t)
    return cr.congruent(lhs, rhs)


def find_sign_assignment(m: int) -> tuple[int, ...]:
    """Signs s with s(1) = +1 making every linear syzygy an exact identity."""
    if m < 2:
        raise RangeError("m must be at least 2")
    cr = cycle_ring(m)
    rels = list(linear_relations(m))
    for tail in product((1, -1), repeat=m - 1):
        signs = (1,) + tail
        G = signed_dets(m, signs)
        if all(_linear_holds(cr, G, *r) for r in rels):
            return signs
    raise RelationFailure(f"no sign assignment satisfies the linear syzygies for m = {m}")


def quadratic_exponent(m: int, i: int, j: int, signs, max_e: int | None = None) -> int | None:
    """Least e >= 0 with G~_i G~_j = t^e G~_{i+1} G~_{j-1}, or None."""
    cr = cycle_ring(m)
    G = signed_dets(m, signs)
    lhs = cr.normal_form(G[i - 1] * G[j - 1])
    rhs = cr.normal_form(G[i] * G[j - 2])
    for e in range(0, (max_e if max_e is not None else m * m) + 1):
        if cr.congruent(lhs, cr.t ** e * rhs):
            return e
    return None


def verify_syzygies(m: int, signs=None) -> dict:
    cr = cycle_ring(m)
    if signs is None:
        signs = find_sign_assignment(m)
    G = signed_dets(m, signs)
    linear = []
    for family, i, j, e in linear_relations(m):
        if not _linear_holds(cr, G, family, i, j, e):
            raise RelationFailure(f"linear syzygy ({family}, i={i}, j={j}, e={e}) fails")
        linear.append({"family": family, "i": i, "j": j, "exponent": e})
    quadratic = {}
    for i in range(1, m + 1):
        for j in range(i + 2, m + 1):
            e = quadratic_exponent(m, i, j, signs)
            if e is None:
                raise RelationFailure(f"G~_{i} G~_{j} is not a t-power multiple of G~_{i+1} G~_{j-1}")
            if j == i + 2 and e != 1:
                raise RelationFailure(f"adjacent quadratic relation ({i},{j}) has exponent {e}")
            quadratic[f"{i},{j}"] = e
    report = {"m": m, "signs": list(signs), "linear_checked": len(linear), "quadratic_exponents": quadratic}
    if m == 2:
        report["cone_equations"] = cone_equations_m2(signs)
    return report


def cone_equations_m2(signs=None) -> dict:
    """The three quadrics cutting out the m = 2 model in (sigma_2^x, sigma_2^y, G~_1, G~_2, t)."""
    cr = cycle_ring(2)
    if signs is None:
        signs = find_sign_assignment(2)
    g1, g2 = signed_dets(2, signs)
    sx, sy, t = cr.sigma_x(2), cr.sigma_y(2), cr.t
    checks = {
        "sigma2y*G1 = t*G2": cr.congruent(sy * g1, t * g2),
        "sigma2x*G2 = t*G1": cr.congruent(sx * g2, t * g1),
        "sigma2x*sigma2y = t^2": cr.congruent(sx * sy, t ** 2),
    }
    if not all(checks.values()):
        raise RelationFailure(f"m = 2 cone equations fail: {checks}")
    return checks


def transfer_exponent(m: int, i: int) -> int:
    return (i - 1) * (2 * m - i) // 2


def g1_transfer_identity(m: int, i: int, signs=None) -> dict:
    """t^{(i-1)(2m-i)/2} G~_i = +-(sigma^y_m)^{i-1} G~_1, recording the sign."""
    if not 2 <= i <= m:
        raise RangeError(f"i = {i} outside 2..{m}")
    cr = cycle_ring(m)
    if signs is None:
        signs = find_sign_assignment(m)
    G = signed_dets(m, signs)
    e = transfer_exponent(m, i)
    lhs = cr.t ** e * G[i - 1]
    rhs = cr.sigma_y(m) ** (i - 1) * G[0]
    for sign in (1, -1):
        if cr.congruent(lhs, rhs * sign):
            return {"m": m, "i": i, "exponent": e, "sign": sign}
    raise RelationFailure(f"transfer identity fails for m = {m}, i = {i} with either sign")


def vanishing_order(m: int, i: int, subset) -> int:
    """t-order of G_i at the generic point of the component for ``subset``."""
    if not 1 <= i <= m:
        raise RangeError(f"i = {i} outside 1..{m}")
    subset = frozenset(subset)
    if not subset <= set(range(1, m + 1)):
        raise RangeError(f"{sorted(subset)} is not a subset of 1..{m}")
    cr = cycle_ring(m)
    theta = ThetaComponent(m, subset)
    image = substitute(mixed_vdm(m, i).det, theta.parametrization(cr))
    series = TLaurent.from_frac(image, "t")
    if series.is_zero():
        raise ModelError(f"G_{i} vanishes identically on the component {sorted(subset)}")
    # the leading coefficient is a nonzero rational function in the free coordinates
    lead = series.leading_coefficient()
    if lead.is_zero() or lead.num.degree_in("t") > 0:
        raise ModelError("leading coefficient is not a t-free nonzero function")
    return series.order()


def oracle_order(i: int, k: int) -> int:
    """(k - i)(k - i + 1)/2: the order found on the ordered model."""
    return (k - i) * (k - i + 1) // 2


def reference_order(i: int, k: int) -> int:
    return (k - i) ** 2 + (k - i)


def order_table(m: int) -> dict[tuple[int, int], int]:
    """ord_i(k), raising if two subsets of the same size disagree."""
    table: dict[tuple[int, int], int] = {}
    for i in range(1, m + 1):
        for k in range(m + 1):
            for subset in combinations(range(1, m + 1), k):
                o = vanishing_order(m, i, subset)
                if table.setdefault((i, k), o) != o:
                    raise RelationFailure(f"order of G_{i} differs between subsets of size {k}")
    return table


def verify_discriminant_pullback(m: int) -> dict:
    if not 2 <= m <= 5:
        raise RangeError("m must lie in 2..5")
    table = order_table(m)
    rows = []
    for (i, k), o in sorted(table.items()):
        if (o == 0) != (k in (i - 1, i)):
            raise RelationFailure(f"G_{i} has order {o} at k = {k}; zero locus is wrong")
        rows.append({
            "i": i,
            "k": k,
            "order": o,
            "oracle": oracle_order(i, k),
            "reference": reference_order(i, k),
            "matches_oracle": o == oracle_order(i, k),
            "matches_reference": o == reference_order(i, k),
        })
    return {
        "m": m,
        "subsets_per_i": 2 ** m,
        "table": rows,
        "zero_locus_ok": True,
        "all_match_oracle": all(r["matches_oracle"] for r in rows),
    }


def verify_order_additivity(m: int, signs=None) -> dict:
    """ord_i + ord_j = e + ord_{i+1} + ord_{j-1} at every k for each quadratic relation."""
    if signs is None:
        signs = find_sign_assignment(m)
    table = order_table(m)
    checked = 0
    for i in range(1, m + 1):
        for j in range(i + 2, m + 1):
            e = quadratic_exponent(m, i, j, signs)
            for k in range(m + 1):
                lhs = table[(i, k)] + table[(j, k)]
                rhs = e + table[(i + 1, k)] + table[(j - 1, k)]
                if lhs != rhs:
                    raise RelationFailure(f"orders not additive for ({i},{j}) at k = {k}")
                checked += 1
    return {"m": m, "checked": checked}


def random_cycle_poly(cr: CycleRing, rng: random.Random, terms: int = 8, degree: int = 4) -> Poly:
    """A seeded polynomial in the cycle ring, used for confluence testing."""
    n = cr.ring.nvars
    out = {}
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = rng.randint(-9, 9)
    return Poly(cr.ring, out)

