"""Desk-scale Groebner bases over Q.

Buchberger's algorithm with the coprime and chain criteria and the normal
selection strategy, full reduction to normal form, staircase quotient bases,
Rabinowitsch saturation and Jacobian ranks at rational points.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .arith import Mono, Poly, Ring, as_rat
from .errors import BudgetError, ContextError, PreconditionError

DEFAULT_BUDGET = int(os.environ.get("NODALHILB_BUDGET", 10**6))


class Budget:
    """Counts reduction steps and raises :class:`BudgetError` past ``cap``."""

    __slots__ = ("cap", "used")

    def __init__(self, cap: int | None = None):
        self.cap = DEFAULT_BUDGET if cap is None else cap
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.cap:
            raise BudgetError(f"step budget of {self.cap} reductions exhausted")


def _as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order over a variable priority sequence.

    ``kind`` is one of ``lex``, ``grlex``, ``grevlex``, ``weighted`` (weight
    vector, ties broken by grevlex) or ``block`` (elimination order: grevlex
    inside each block, earlier blocks dominate).  Variables of the ring that
    are not named in ``priority`` follow the named ones in declaration order.
    """

    kind: str = "grevlex"
    priority: tuple[str, ...] = ()
    weights: tuple[int, ...] = ()
    blocks: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "weighted", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weighted" and any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")

    def sequence(self, ring: Ring) -> list[int]:
        if self.kind == "block":
            named = [n for block in self.blocks for n in block]
        else:
            named = list(self.priority)
        idx = [ring.index(n) for n in named]
        seen = set(idx)
        return idx + [i for i in range(ring.nvars) if i not in seen]

    def key(self, ring: Ring) -> Callable[[Mono], tuple]:
        seq = self.sequence(ring)
        rev = seq[::-1]
        if self.kind == "lex":
            return lambda e: tuple([e[i] for i in seq])
        if self.kind == "grlex":
            return lambda e: (sum(e), tuple([e[i] for i in seq]))
        if self.kind == "grevlex":
            return lambda e: (sum(e), tuple([-e[i] for i in rev]))
        if self.kind == "weighted":
            w = list(self.weights) + [1] * (len(seq) - len(self.weights))
            wmap = {i: w[k] for k, i in enumerate(seq)}
            return lambda e: (sum(wmap[i] * e[i] for i in seq), sum(e), tuple([-e[i] for i in rev]))
        blocks = []
        pos = 0
        for block in self.blocks:
            blocks.append(seq[pos : pos + len(block)])
            pos += len(block)
        if pos < len(seq):
            blocks.append(seq[pos:])

        def block_key(e):
            out = []
            for b in blocks:
                out.append(sum(e[i] for i in b))
                out.extend(-e[i] for i in reversed(b))
            return tuple(out)

        return block_key

    @classmethod
    def default(cls, ring: Ring, lowest: Sequence[str] = ("t",)) -> "MonomialOrder":
        """grevlex on the declared sequence with the listed variables given lowest priority."""
        low = [n for n in lowest if n in ring]
        return cls("grevlex", tuple(n for n in ring.names if n not in low) + tuple(low))


@dataclass(frozen=True)
class IdealBasis:
    ring: Ring
    generators: tuple[Poly, ...]

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        if not gens:
            raise PreconditionError("an ideal basis needs at least one nonzero generator")
        for g in gens:
            if g.ring != self.ring:
                raise ContextError(f"generator {g} is not in {self.ring!r}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, gens: Iterable[Poly]) -> "IdealBasis":
        gens = tuple(gens)
        if not gens:
            raise PreconditionError("empty generator list")
        return cls(gens[0].ring, gens)

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class QuotientBasis:
    ring: Ring
    standard_monomials: tuple[Mono, ...] | None
    colength: float | int

    @property
    def is_finite(self) -> bool:
        return self.colength != math.inf

    def names(self) -> list[str]:
        return [self.ring.format_mono(e) for e in self.standard_monomials or ()]


class GroebnerBasis:
    """A reduced, monic Groebner basis sorted by leading monomial (descending)."""

    def __init__(self, ring: Ring, order: MonomialOrder, elements: Sequence[Poly]):
        self.ring = ring
        self.order = order
        self._key = order.key(ring)
        key = self._key
        data = []
        for p in elements:
            lm = max(p.terms, key=key)
            data.append((lm, p))
        data.sort(key=lambda t: key(t[0]), reverse=True)
        self.elements: tuple[Poly, ...] = tuple(p for _, p in data)
        self._red = [(lm, p.terms) for lm, p in data]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and set(self.elements) == set(other.elements)
        )

    def __repr__(self):
        return "GroebnerBasis[" + ", ".join(str(p) for p in self.elements) + "]"

    def leading_monomials(self) -> list[Mono]:
        return [lm for lm, _ in self._red]

    def is_unit(self) -> bool:
        return any(not any(lm) for lm, _ in self._red)

    def normal_form(self, f: Poly, budget=None) -> Poly:
        if f.ring != self.ring:
            raise ContextError(f"{f.ring!r} is not {self.ring!r}")
        terms = _reduce(f.terms, self._red, self._key, _as_budget(budget))
        return Poly(self.ring, terms, _trusted=True)

    def contains(self, f: Poly, budget=None) -> bool:
        return self.normal_form(f, budget).is_zero()


# ---------------------------------------------------------------------------
# internals on raw term dicts


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce(p: Mapping[Mono, object], basis, key, budget: Budget) -> dict:
    """Full reduction of ``p`` by monic ``basis`` [(lm, terms)]."""
    p = dict(p)
    rem = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for glm, g in basis:
            if _divides(glm, lm):
                budget.tick()
                q = tuple([a - b for a, b in zip(lm, glm)])
                for e, gc in g.items():
                    e2 = tuple([a + b for a, b in zip(e, q)])
                    v = p.get(e2, 0) - c * gc
                    if v:
                        p[e2] = v
                    else:
                        p.pop(e2, None)
                break
        else:
            rem[lm] = p.pop(lm)
    return rem


def _monic(terms: dict, key) -> tuple[Mono, dict]:
    lm = max(terms, key=key)
    lc = terms[lm]
    if lc != 1:
        inv = Fraction(1) / lc
        terms = {e: _norm(c * inv) for e, c in terms.items()}
    return lm, terms


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _lcm(a: Mono, b: Mono) -> Mono:
    return tuple([max(x, y) for x, y in zip(a, b)])


def _spoly(f: tuple[Mono, dict], g: tuple[Mono, dict]) -> dict:
    (lf, tf), (lg, tg) = f, g
    l = _lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(l, lf))
    qg = tuple(a - b for a, b in zip(l, lg))
    out = {}
    for e, c in tf.items():
        out[tuple([a + b for a, b in zip(e, qf)])] = c
    for e, c in tg.items():
        e2 = tuple([a + b for a, b in zip(e, qg)])
        v = out.get(e2, 0) - c
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return out


def buchberger(ideal: IdealBasis | Sequence[Poly], order: MonomialOrder | None = None, budget=None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` with respect to ``order``."""
    if not isinstance(ideal, IdealBasis):
        ideal = IdealBasis.of(ideal)
    ring = ideal.ring
    order = order or MonomialOrder.default(ring)
    key = order.key(ring)
    budget = _as_budget(budget)

    basis: list[tuple[Mono, dict]] = []
    pairs: set[tuple[int, int]] = set()

    def add(terms: dict) -> None:
        new = _monic(terms, key)
        k = len(basis)
        basis.append(new)
        for i in range(k):
            pairs.add((i, k))

    for g in ideal.generators:
        r = _reduce(g.terms, basis, key, budget)
        if r:
            add(r)

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(basis[ij[0]][0], basis[ij[1]][0])), ij))
        pairs.discard((i, j))
        li, lj = basis[i][0], basis[j][0]
        l = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if _chain_skip(i, j, l, basis, pairs):
            continue
        budget.tick()
        r = _reduce(_spoly(basis[i], basis[j]), basis, key, budget)
        if r:
            add(r)
    return GroebnerBasis(ring, order, _interreduce(ring, basis, key, budget))


def _chain_skip(i, j, l, basis, pairs) -> bool:
    for k, (lk, _) in enumerate(basis):
        if k in (i, j) or not _divides(lk, l):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def _interreduce(ring: Ring, basis, key, budget) -> list[Poly]:
    lms = [lm for lm, _ in basis]
    keep = []
    for idx, (lm, terms) in enumerate(basis):
        redundant = any(
            _divides(other, lm) and (other != lm or jdx < idx)
            for jdx, other in enumerate(lms)
            if jdx != idx
        )
        if not redundant:
            keep.append((lm, terms))
    out = []
    for idx, (lm, terms) in enumerate(keep):
        others = [keep[k] for k in range(len(keep)) if k != idx]
        tail = {e: c for e, c in terms.items() if e != lm}
        red = _reduce(tail, others, key, budget)
        red[lm] = 1
        out.append(Poly(ring, red, _trusted=True))
    return out


def groebner(gens: Sequence[Poly], order: MonomialOrder | None = None, budget=None) -> GroebnerBasis:
    return buchberger(IdealBasis.of(gens), order, budget)


def normal_form(f: Poly, gb: GroebnerBasis, budget=None) -> Poly:
    return gb.normal_form(f, budget)


def quotient_basis(ideal: IdealBasis | Sequence[Poly] | GroebnerBasis, order: MonomialOrder | None = None, budget=None) -> QuotientBasis:
    """Standard monomials of the leading-term ideal, and their count."""
    gb = ideal if isinstance(ideal, GroebnerBasis) else buchberger(ideal, order, budget)
    return staircase(gb.ring, gb.leading_monomials())


def staircase(ring: Ring, leading: Sequence[Mono]) -> QuotientBasis:
    """Monomials outside the monomial ideal generated by ``leading``."""
    n = ring.nvars
    if any(not any(lm) for lm in leading):
        return QuotientBasis(ring, (), 0)
    bounds = []
    for i in range(n):
        pure = [lm[i] for lm in leading if lm[i] and all(k == 0 for j, k in enumerate(lm) if j != i)]
        if not pure:
            return QuotientBasis(ring, None, math.inf)
        bounds.append(min(pure))
    std = []
    for e in product(*(range(b) for b in bounds)):
        if not any(_divides(lm, e) for lm in leading):
            std.append(tuple(e))
    std.sort(key=lambda e: (sum(e), e))
    return QuotientBasis(ring, tuple(std), len(std))


def saturate(ideal: IdealBasis | Sequence[Poly], s: Poly, budget=None) -> IdealBasis:
    """I : s^infinity via a fresh variable w, 1 - w*s, and elimination of w."""
    if not isinstance(ideal, IdealBasis):
        ideal = IdealBasis.of(ideal)
    if s.is_zero():
        raise PreconditionError("cannot saturate by zero")
    ring = ideal.ring
    w = ring.fresh_name("w_sat")
    big = Ring((w,) + ring.names)
    gens = [g.to_ring(big) for g in ideal.generators]
    gens.append(big.one - big.gen(w) * s.to_ring(big))
    order = MonomialOrder("block", blocks=((w,), ring.names))
    gb = buchberger(IdealBasis(big, tuple(gens)), order, budget)
    kept = [p.to_ring(ring) for p in gb.elements if p.degree_in(w) <= 0]
    return IdealBasis(ring, tuple(kept))


def jacobian_matrix(gens: Sequence[Poly], variables: Sequence[str], point: Mapping[str, object]) -> list[list]:
    return [[g.diff(v).eval(point) for v in variables] for g in gens]


def rank_q(rows: Sequence[Sequence[object]]) -> int:
    """Rank over Q by exact Gaussian elimination."""
    m = [[Fraction(as_rat(x)) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][c]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def jacobian_rank_at(gens: Sequence[Poly], point: Mapping[str, object], variables: Sequence[str] | None = None) -> int:
    """Rank of the Jacobian of ``gens`` at a rational point of their zero set."""
    if not gens:
        return 0
    ring = gens[0].ring
    for g in gens:
        if g.eval(point) != 0:
            raise PreconditionError(f"point is not on the variety: {g} does not vanish")
    variables = list(variables) if variables is not None else list(ring.names)
    return rank_q(jacobian_matrix(gens, variables, point))
