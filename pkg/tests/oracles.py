"""Independent reference computations used by the tests (sympy and brute force)."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy

from nodalhilb.arith import Poly, Ring


def to_sympy(p: Poly):
    syms = sympy.symbols(p.ring.names)
    if len(p.ring.names) == 1:
        syms = (syms,)
    total = sympy.Integer(0)
    for e, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        total += term
    return sympy.expand(total)


def from_sympy(expr, ring: Ring) -> Poly:
    syms = sympy.symbols(ring.names)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for monom, coeff in poly.terms():
        terms[tuple(monom)] = Fraction(int(coeff.p), int(coeff.q))
    return Poly(ring, terms)


def sympy_groebner(polys, ring: Ring, order: str = "grevlex", gens=None):
    gens = gens or ring.names
    syms = sympy.symbols(gens)
    return sympy.groebner([to_sympy(p) for p in polys], *syms, order=order)


def sympy_colength(polys, ring: Ring) -> int | float:
    """Count standard monomials of a zero-dimensional ideal by brute force."""
    gb = sympy_groebner(polys, ring, "grevlex")
    syms = sympy.symbols(ring.names)
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in gb.exprs]
    bounds = []
    for i in range(len(syms)):
        pure = [lm[i] for lm in leads if lm[i] and all(v == 0 for j, v in enumerate(lm) if j != i)]
        if not pure:
            return float("inf")
        bounds.append(min(pure))
    count = 0
    for e in product(*(range(b) for b in bounds)):
        if not any(all(a >= b for a, b in zip(e, lm)) for lm in leads):
            count += 1
    return count


def sympy_det(mat) -> "sympy.Expr":
    return sympy.expand(sympy.Matrix([[to_sympy(x) for x in row] for row in mat]).det(method="berkowitz"))


def sympy_t_order(p: Poly, subs: dict[str, str], tname: str = "t") -> int:
    """t-adic valuation of p after substituting rational expressions given as text."""
    t = sympy.Symbol(tname)
    expr = to_sympy(p).subs({sympy.Symbol(k): sympy.sympify(v) for k, v in subs.items()}, simultaneous=True)
    num, den = sympy.fraction(sympy.together(sympy.expand(expr)))
    if sympy.expand(num) == 0:
        raise ValueError("expression vanishes identically")

    def low(e):
        return min(m[0] for m in sympy.Poly(sympy.expand(e), t).monoms())

    return low(num) - low(den)


def brute_rewrite(p: Poly, m: int) -> dict:
    """Reduce modulo x_k*y_k - t by repeatedly pulling out the smallest min(x_k, y_k) per term."""
    names = p.ring.names
    ix = {f"x{k}": names.index(f"x{k}") for k in range(1, m + 1)}
    iy = {f"y{k}": names.index(f"y{k}") for k in range(1, m + 1)}
    it = names.index("t")
    out: dict = {}
    for e, c in p.terms.items():
        e = list(e)
        for k in range(m, 0, -1):
            a, b = ix[f"x{k}"], iy[f"y{k}"]
            s = min(e[a], e[b])
            e[a] -= s
            e[b] -= s
            e[it] += s
        key = tuple(e)
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}
