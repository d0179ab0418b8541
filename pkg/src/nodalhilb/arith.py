"""Exact rational arithmetic: sparse multivariate polynomials, their fractions,
and Laurent expansions in a distinguished variable ``t``.

Every polynomial lives in an explicit :class:`Ring` (a declared, ordered
sequence of variable names).  Mixing rings is an error; use
:meth:`Poly.to_ring` to move a polynomial between contexts explicitly.

Coefficients are ``int`` or :class:`fractions.Fraction`; floats are refused.
Monomials are exponent tuples aligned with the ring's variable sequence.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ContextError, InvalidBinding, ParseError, PreconditionError, RangeError, ShapeError

Rat = Fraction
Mono = tuple  # exponent tuple aligned with Ring.names

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def as_rat(value) -> int | Fraction:
    """Coerce ``value`` to an exact rational, refusing floats and bools."""
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def _clean(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def random_rat(rng, bound: int = 9, *, nonzero: bool = False) -> int | Fraction:
    """Draw a small random rational p/q with |p| <= bound, 1 <= q <= bound."""
    while True:
        value = _clean(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
        if value or not nonzero:
            return value


class Ring:
    """A variable context: an ordered tuple of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise ContextError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ContextError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(("Ring",) + self.names)

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def __contains__(self, name):
        return name in self._index

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError(f"variable {name!r} not declared in {self!r}") from None

    def zero_mono(self) -> Mono:
        return (0,) * len(self.names)

    def mono(self, exponents: Mapping[str, int]) -> Mono:
        e = [0] * len(self.names)
        for name, k in exponents.items():
            if k < 0:
                raise RangeError(f"negative exponent for {name}")
            e[self.index(name)] += k
        return tuple(e)

    def gen(self, name: str) -> "Poly":
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1}, _trusted=True)

    def gens(self, *names: str) -> tuple["Poly", ...]:
        return tuple(self.gen(n) for n in (names or self.names))

    def const(self, value) -> "Poly":
        value = as_rat(value)
        if not value:
            return Poly(self, {}, _trusted=True)
        return Poly(self, {self.zero_mono(): value}, _trusted=True)

    @property
    def zero(self) -> "Poly":
        return Poly(self, {}, _trusted=True)

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def monomial(self, exponents: Mapping[str, int] | Mono, coeff=1) -> "Poly":
        e = exponents if isinstance(exponents, tuple) else self.mono(exponents)
        return Poly(self, {e: as_rat(coeff)})

    def __call__(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.ring != self:
                raise ContextError(f"{value.ring!r} is not {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def extend(self, *names: str) -> "Ring":
        return Ring(self.names + tuple(names))

    def fresh_name(self, base: str = "w") -> str:
        name, k = base, 0
        while name in self._index:
            k += 1
            name = f"{base}{k}"
        return name

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()

    def format_mono(self, e: Mono) -> str:
        parts = []
        for name, k in zip(self.names, e):
            if k == 1:
                parts.append(name)
            elif k:
                parts.append(f"{name}^{k}")
        return "*".join(parts) or "1"


def _grlex_key(e: Mono):
    return (sum(e), e)


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Mono, object] | None = None, *, _trusted: bool = False):
        self.ring = ring
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        n = ring.nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = as_rat(c)
            if len(e) != n or any(k < 0 for k in e):
                raise ContextError(f"monomial {e} does not fit {ring!r}")
            if c:
                clean[tuple(e)] = _clean(c)
        self.terms = clean

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ContextError(f"mixed contexts {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, Frac):
            return NotImplemented
        try:
            return self.ring.const(other)
        except TypeError:
            return NotImplemented

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out, _trusted=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                v = get(e, 0) + ca * cb
                out[e] = v
        return Poly(self.ring, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = as_rat(c)
        if not c:
            return self.ring.zero
        return Poly(self.ring, {e: _clean(v * c) for e, v in self.terms.items()}, _trusted=True)

    def mul_mono(self, e: Mono, c=1) -> "Poly":
        return Poly(
            self.ring,
            {tuple([x + y for x, y in zip(k, e)]): _clean(v * c) for k, v in self.terms.items()},
            _trusted=True,
        )

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise RangeError("polynomial powers need a nonnegative integer exponent")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (Poly, Frac)):
            return Frac(self) / other
        c = as_rat(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(Fraction(1) / c)

    def __rtruediv__(self, other):
        return Frac(self.ring(other)) / Frac(self)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, Frac):
            return other == self
        try:
            other = as_rat(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({self.ring.zero_mono(): other} if other else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self):
        if not self.is_constant():
            raise PreconditionError(f"{self} is not constant")
        return self.terms.get(self.ring.zero_mono(), 0)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(n for n, k in zip(self.ring.names, e) if k)
        return used

    def coeff(self, mono: Mono | Mapping[str, int]):
        if not isinstance(mono, tuple):
            mono = self.ring.mono(mono)
        return self.terms.get(mono, 0)

    def sorted_terms(self) -> list[tuple[Mono, object]]:
        """Terms in canonical order: graded lex on the declared sequence, descending."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Mono, object]:
        if not self.terms:
            raise PreconditionError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def monomial_content(self) -> Mono:
        if not self.terms:
            return self.ring.zero_mono()
        it = iter(self.terms)
        g = list(next(it))
        for e in it:
            g = [min(a, b) for a, b in zip(g, e)]
        return tuple(g)

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums, dens = 0, 1
        for c in self.terms.values():
            c = Fraction(c)
            nums = math.gcd(nums, c.numerator)
            dens = dens * c.denominator // math.gcd(dens, c.denominator)
        return Fraction(nums, dens)

    # -- transformations ----------------------------------------------------
    def eval(self, point: Mapping[str, object]):
        """Evaluate at a full rational point (every used variable bound)."""
        values = [None] * self.ring.nvars
        for name, v in point.items():
            if name in self.ring:
                values[self.ring.index(name)] = as_rat(v)
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if values[i] is None:
                        raise PreconditionError(f"no value for {self.ring.names[i]}")
                    term = term * values[i] ** k
            total += term
        return _clean(Fraction(total)) if isinstance(total, Fraction) else total

    def specialize(self, values: Mapping[str, object]) -> "Poly":
        """Substitute rational values for some variables; the ring is kept."""
        idx = {self.ring.index(n): as_rat(v) for n, v in values.items()}
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, v in idx.items():
                if e2[i]:
                    c = c * v ** e2[i]
                    e2[i] = 0
            if c:
                e2 = tuple(e2)
                out[e2] = out.get(e2, 0) + c
        return Poly(self.ring, {e: _clean(c) for e, c in out.items() if c}, _trusted=True)

    def diff(self, name: str) -> "Poly":
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(self.ring, out, _trusted=True)

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in another context, matching variables by name."""
        if ring == self.ring:
            return self
        used = [i for i, n in enumerate(self.ring.names) if any(e[i] for e in self.terms)]
        target = {i: ring.index(self.ring.names[i]) for i in used}
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * ring.nvars
            for i in used:
                e2[target[i]] = e[i]
            out[tuple(e2)] = c
        return Poly(ring, out, _trusted=True)

    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient self/other; raises ValueError if other does not divide."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lm_o, lc_o = other.leading_term()
        rem = dict(self.terms)
        quo = {}
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            q = tuple(a - b for a, b in zip(e, lm_o))
            if any(k < 0 for k in q):
                raise ValueError("polynomial division is not exact")
            qc = _clean(Fraction(c) / lc_o)
            quo[q] = qc
            for eo, co in other.terms.items():
                e2 = tuple(a + b for a, b in zip(eo, q))
                v = rem.get(e2, 0) - qc * co
                if v:
                    rem[e2] = v
                else:
                    rem.pop(e2, None)
        return Poly(self.ring, quo, _trusted=True)

    # -- printing -----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            mono = self.ring.format_mono(e)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


PolyLike = Union[Poly, int, Fraction]


class Frac:
    """Quotient num/den of polynomials in one ring.

    Normalized by removing the common monomial factor and the rational content
    of the denominator, with a positive leading denominator coefficient, and
    cancelling when one side divides the other exactly.  No multivariate gcd
    is attempted, so equality is tested by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, normalize: bool = True):
        if den is None:
            den = num.ring.one
        den = num._coerce(den)
        if den is NotImplemented:
            raise TypeError("denominator must be a polynomial in the same ring")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _normalize_frac(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def _coerce(self, other) -> "Frac":
        if isinstance(other, Frac):
            if other.ring != self.ring:
                raise ContextError(f"mixed contexts {self.ring!r} and {other.ring!r}")
            return other
        return Frac(self.ring(other))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        if self.den.is_monomial() and other.den.is_monomial():
            (e1, c1), (e2, c2) = self.den.leading_term(), other.den.leading_term()
            lcm = tuple(max(a, b) for a, b in zip(e1, e2))
            f1 = tuple(a - b for a, b in zip(lcm, e1))
            f2 = tuple(a - b for a, b in zip(lcm, e2))
            num = self.num.mul_mono(f1, Fraction(1) / c1) + other.num.mul_mono(f2, Fraction(1) / c2)
            return Frac(num, self.ring.monomial(lcm))
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Frac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return Frac(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return Frac(self.den ** (-k), self.num ** (-k))
        return Frac(self.num ** k, self.den ** k)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ContextError):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def as_poly(self) -> Poly:
        """The polynomial this fraction equals; raises if it is not one."""
        if self.den.is_constant():
            return self.num.scale(Fraction(1) / self.den.constant_value())
        return self.num.divexact(self.den)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"Frac({self})"


def _normalize_frac(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    ring = num.ring
    if num.is_zero():
        return num, ring.one
    g = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
    if any(g):
        neg = tuple(-k for k in g)
        num, den = num.mul_mono(neg), den.mul_mono(neg)
    lc = den.leading_term()[1]
    scale = den.content() * (1 if lc > 0 else -1)
    if scale != 1:
        num, den = num.scale(1 / scale), den.scale(1 / scale)
    if not den.is_constant():
        try:
            return num.divexact(den), ring.one
        except ValueError:
            pass
        if len(num) < len(den) and not num.is_monomial():
            try:
                q = den.divexact(num)
            except ValueError:
                pass
            else:
                if q.leading_term()[1] > 0:
                    return ring.one, q
                return -ring.one, -q
    return num, den


class TLaurent:
    """Laurent expansion in ``t`` with fraction coefficients free of ``t``.

    Only fractions whose denominator is ``t``-homogeneous (a single power of
    ``t`` times a ``t``-free polynomial) can be expanded exactly; that covers
    every substitution of the form x -> t/y used in this package.
    """

    __slots__ = ("ring", "t", "coeffs")

    def __init__(self, ring: Ring, t: str, coeffs: Mapping[int, Frac]):
        ring.index(t)
        self.ring = ring
        self.t = t
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    @classmethod
    def from_frac(cls, frac: Frac, t: str) -> "TLaurent":
        ring = frac.ring
        ti = ring.index(t)
        den_powers = {e[ti] for e in frac.den.terms}
        if len(den_powers) != 1:
            raise PreconditionError("denominator is not t-homogeneous; no exact Laurent expansion")
        shift = den_powers.pop()
        den0 = _drop_var(frac.den, ti)
        parts: dict[int, dict] = {}
        for e, c in frac.num.terms.items():
            e2 = list(e)
            k = e2[ti]
            e2[ti] = 0
            parts.setdefault(k - shift, {})[tuple(e2)] = c
        return cls(ring, t, {k: Frac(Poly(ring, d, _trusted=True), den0) for k, d in parts.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self):
        return min(self.coeffs, default=math.inf)

    def leading_coefficient(self) -> Frac:
        if not self.coeffs:
            raise PreconditionError("zero Laurent series has no leading coefficient")
        return self.coeffs[min(self.coeffs)]

    def __repr__(self):
        body = " + ".join(f"{self.t}^{k}*({v})" for k, v in sorted(self.coeffs.items()))
        return f"TLaurent({body or '0'})"


def _drop_var(p: Poly, i: int) -> Poly:
    out = {}
    for e, c in p.terms.items():
        e2 = list(e)
        e2[i] = 0
        out[tuple(e2)] = c
    return Poly(p.ring, out, _trusted=True)


# ---------------------------------------------------------------------------
# operations


def poly_arith(lhs: Poly, rhs: Poly, op: str) -> Poly:
    if lhs.ring != rhs.ring:
        raise ContextError(f"mixed contexts {lhs.ring!r} and {rhs.ring!r}")
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: Poly, bindings: Mapping[str, Frac | Poly | int | Fraction | tuple]) -> Frac:
    """Image of ``f`` under the ring map sending each bound variable to a fraction.

    A binding may be a :class:`Frac`, a polynomial or number, or a (num, den) pair.

    Unbound variables map to themselves.  The result is assembled over the
    common denominator prod(den_v ** deg_v(f)), so only polynomial products occur.
    """
    ring = f.ring
    bound = {}
    for name, value in bindings.items():
        idx = ring.index(name)
        if isinstance(value, tuple):
            num, den = (ring(v) for v in value)
            if den.is_zero():
                raise InvalidBinding(f"binding for {name} has zero denominator")
            value = Frac(num, den)
        if isinstance(value, Frac):
            if value.ring != ring:
                raise ContextError(f"binding for {name} lives in {value.ring!r}")
            frac = value
        else:
            try:
                frac = Frac(ring(value))
            except ZeroDivisionError:
                raise InvalidBinding(f"binding for {name} has zero denominator") from None
        if frac.den.is_zero():
            raise InvalidBinding(f"binding for {name} has zero denominator")
        bound[idx] = frac
    if not bound:
        return Frac(f)
    degs = {i: max((e[i] for e in f.terms), default=0) for i in bound}
    num_pows = {i: _powers(bound[i].num, degs[i]) for i in bound}
    den_pows = {i: _powers(bound[i].den, degs[i]) for i in bound}
    total: dict = {}
    cache: dict = {}
    for e, c in f.terms.items():
        key = tuple(e[i] for i in bound)
        factor = cache.get(key)
        if factor is None:
            factor = ring.one
            for i in bound:
                k = e[i]
                factor = factor * num_pows[i][k] * den_pows[i][degs[i] - k]
            cache[key] = factor
        rest = list(e)
        for i in bound:
            rest[i] = 0
        for e2, c2 in factor.terms.items():
            e3 = tuple([a + b for a, b in zip(e2, rest)])
            total[e3] = total.get(e3, 0) + c * c2
    num = Poly(ring, {e: _clean(c) for e, c in total.items() if c}, _trusted=True)
    den = ring.one
    for i in bound:
        den = den * den_pows[i][degs[i]]
    return Frac(num, den)


def _powers(p: Poly, n: int) -> list[Poly]:
    out = [p.ring.one]
    for _ in range(n):
        out.append(out[-1] * p)
    return out


def _matrix_ring(mat) -> Ring | None:
    for row in mat:
        for x in row:
            if isinstance(x, Poly):
                return x.ring
    return None


def determinant(mat: Sequence[Sequence[PolyLike]], method: str = "bareiss", ring: Ring | None = None) -> Poly:
    """Exact determinant by fraction-free (Bareiss) elimination or cofactor expansion."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ShapeError("determinant needs a square matrix")
    ring = ring or _matrix_ring(mat) or Ring(())
    rows = [[ring(x) for x in row] for row in mat]
    if n == 0:
        return ring.one
    if method == "bareiss":
        return _det_bareiss(rows, ring)
    if method == "cofactor":
        return _det_cofactor(rows, ring)
    raise ValueError(f"unknown determinant method {method!r}")


def _det_bareiss(a: list[list[Poly]], ring: Ring) -> Poly:
    n = len(a)
    a = [row[:] for row in a]
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = v if prev == 1 else v.divexact(prev)
        prev = pivot
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def _det_cofactor(a: list[list[Poly]], ring: Ring) -> Poly:
    n = len(a)
    memo: dict = {}

    def minor(r: int, cols: tuple[int, ...]) -> Poly:
        if r == n:
            return ring.one
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = ring.zero
        for pos, j in enumerate(cols):
            entry = a[r][j]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total - term if pos % 2 else total + term
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


def elementary_symmetric(variables: Sequence[Poly | str], k: int, ring: Ring | None = None) -> Poly:
    """The k-th elementary symmetric polynomial of the listed variables (sigma_0 = 1)."""
    items = []
    for v in variables:
        if isinstance(v, str):
            if ring is None:
                raise ContextError("a ring is needed to resolve variable names")
            v = ring.gen(v)
        items.append(v)
    if k < 0 or k > len(items):
        raise RangeError(f"sigma_{k} of {len(items)} variables")
    if ring is None:
        if not items:
            raise ContextError("a ring is needed for an empty variable list")
        ring = items[0].ring
    e = [ring.one] + [ring.zero] * k
    for v in items:
        for j in range(k, 0, -1):
            e[j] = e[j] + v * e[j - 1]
    return e[k]


def t_order(f: TLaurent):
    """Least t-exponent with a nonzero coefficient; ``math.inf`` for zero."""
    return f.order()


# ---------------------------------------------------------------------------
# textual format


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character at {pos} in {text!r}")
            num, ident, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif ident is not None:
                self.tokens.append(("var", ident))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            raise ParseError("empty polynomial text")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> Poly:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("only division by a nonzero constant is allowed")
                p = p.scale(Fraction(1) / d.constant_value())
            else:
                return p

    def factor(self) -> Poly:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, exp = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            return base ** exp
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "var":
            if val not in self.ring:
                raise ContextError(f"variable {val!r} not declared in {self.ring!r}")
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing closing parenthesis")
            return p
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")
