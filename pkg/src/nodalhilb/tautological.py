"""Formal calculus for the total Chern class of tautological bundles of a line bundle.

Everything lives in the free commutative algebra on symbols q_n[unit] and
q_n[ell].  Three expansions of the same class are provided: the exponential
formula, a sum over choice functions on m points (diagonal-divisor expansion),
and its regrouping over set partitions.  They agree exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from .errors import RangeError, RelationFailure

KINDS = ("unit", "ell")


@dataclass(frozen=True, order=True)
class CohSymbol:
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cohomology symbol {self.kind!r}")

    def __str__(self):
        return self.kind


UNIT = CohSymbol("unit")
ELL = CohSymbol("ell")


@dataclass(frozen=True, order=True)
class QMonomial:
    """A commutative product of q_n[c]; factors are kept sorted."""

    factors: tuple[tuple[int, str], ...] = ()

    @classmethod
    def of(cls, *factors: tuple[int, str]) -> "QMonomial":
        for n, c in factors:
            if n < 1 or c not in KINDS:
                raise ValueError(f"bad factor q_{n}[{c}]")
        return cls(tuple(sorted(factors)))

    def __mul__(self, other: "QMonomial") -> "QMonomial":
        return QMonomial(tuple(sorted(self.factors + other.factors)))

    @property
    def degree(self) -> int:
        return sum(n for n, _ in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        parts = []
        for (n, c), e in sorted(Counter(self.factors).items()):
            parts.append(f"q{n}[{c}]" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def to_json(self) -> list[list]:
        return [[n, c] for n, c in self.factors]


class FockPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = c
        self.terms: dict[QMonomial, Fraction] = clean

    @classmethod
    def constant(cls, c) -> "FockPolynomial":
        return cls({QMonomial(): c})

    @classmethod
    def q(cls, n: int, kind: str) -> "FockPolynomial":
        return cls({QMonomial.of((n, kind)): 1})

    @classmethod
    def q_line(cls, n: int) -> "FockPolynomial":
        """q_n applied to the total Chern class 1 + c_1(L)."""
        return cls.q(n, "unit") + cls.q(n, "ell")

    def __add__(self, other):
        out = dict(self.terms)
        for mono, c in _as_fock(other).terms.items():
            out[mono] = out.get(mono, 0) + c
        return FockPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return FockPolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_fock(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FockPolynomial({k: v * other for k, v in self.terms.items()})
        other = _as_fock(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = m1 * m2
                out[key] = out.get(key, 0) + c1 * c2
        return FockPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (Fraction(1) / Fraction(c))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FockPolynomial.constant(other)
        if not isinstance(other, FockPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, mono: QMonomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def graded_part(self, degree: int) -> "FockPolynomial":
        return FockPolynomial({k: v for k, v in self.terms.items() if k.degree == degree})

    def truncate(self, max_degree: int) -> "FockPolynomial":
        return FockPolynomial({k: v for k, v in self.terms.items() if k.degree <= max_degree})

    def degrees(self) -> set[int]:
        return {k.degree for k in self.terms}

    def sorted_terms(self) -> list[tuple[QMonomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (kv[0].degree, kv[0].factors))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for mono, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = str(mono) if a == 1 else (str(a) if not mono.factors else f"{a}*{mono}")
            out.append(f"{sign} {body}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"FockPolynomial({self})"

    def to_json(self) -> list[dict]:
        return [{"monomial": m.to_json(), "coeff": str(c)} for m, c in self.sorted_terms()]


def _as_fock(x) -> FockPolynomial:
    if isinstance(x, FockPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return FockPolynomial.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Fock polynomial")


def star_pad(p: FockPolynomial, n: int) -> FockPolynomial:
    """Multiply every term by q_1[unit]^n."""
    if n < 0:
        raise RangeError("padding must be nonnegative")
    return p * FockPolynomial({QMonomial(((1, "unit"),) * n): 1})


# ---------------------------------------------------------------------------
# the three expansions


def lehn_expansion(m: int) -> FockPolynomial:
    """Degree-m part of exp(sum_n (-1)^{n-1}/n q_n[1 + L])."""
    if m < 1:
        raise RangeError("m must be at least 1")
    exponent = FockPolynomial()
    for n in range(1, m + 1):
        exponent = exponent + FockPolynomial.q_line(n) * Fraction((-1) ** (n - 1), n)
    total = FockPolynomial.constant(1)
    power = FockPolynomial.constant(1)
    for r in range(1, m + 1):
        power = (power * exponent).truncate(m) / r
        total = total + power
    return total.graded_part(m)


@dataclass(frozen=True)
class ChoiceFunction:
    """For each point j: "one", "L", or the index i < j of a diagonal Delta_ij."""

    choices: tuple

    def components(self) -> list[tuple[int, list[int]]]:
        """(root, members) for each tree; the root is the point that chose "one" or "L"."""
        m = len(self.choices)
        root_of = {}
        for j in range(1, m + 1):
            c = self.choices[j - 1]
            root_of[j] = j if c in ("one", "L") else root_of[c]
        groups: dict[int, list[int]] = {}
        for j, r in root_of.items():
            groups.setdefault(r, []).append(j)
        return sorted(groups.items())


def choice_functions(m: int):
    options = [["one", "L"] + list(range(1, j)) for j in range(1, m + 1)]
    for combo in product(*options):
        yield ChoiceFunction(tuple(combo))


def geo_expansion(m: int) -> FockPolynomial:
    """Sum over choice functions of signed component symbols, divided by m!."""
    if not 1 <= m <= 8:
        raise RangeError("m must lie in 1..8")
    counts: Counter = Counter()
    seen = 0
    for cf in choice_functions(m):
        seen += 1
        factors = []
        sign = 1
        for root, members in cf.components():
            if root != min(members):
                raise RelationFailure(f"component {members} has terminal {root}, not its minimum")
            kind = "unit" if cf.choices[root - 1] == "one" else "ell"
            factors.append((len(members), kind))
            sign *= (-1) ** (len(members) - 1)
        counts[QMonomial.of(*factors)] += sign
    if seen != factorial(m + 1):
        raise RelationFailure(f"{seen} choice functions, expected {factorial(m + 1)}")
    return FockPolynomial({mono: Fraction(c, factorial(m)) for mono, c in counts.items()})


def integer_partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - k, k):
            yield (k,) + rest


def partition_formula(m: int) -> FockPolynomial:
    """(1/m!) sum over set partitions of prod (-1)^{|B|-1} (|B|-1)! q_{|B|}[1 + L]."""
    if m < 1:
        raise RangeError("m must be at least 1")
    total = FockPolynomial()
    for shape in integer_partitions(m):
        mult = Counter(shape)
        n_set_partitions = factorial(m)
        for b in shape:
            n_set_partitions //= factorial(b)
        for r in mult.values():
            n_set_partitions //= factorial(r)
        term = FockPolynomial.constant(n_set_partitions)
        for b in shape:
            term = term * FockPolynomial.q_line(b) * ((-1) ** (b - 1) * factorial(b - 1))
        total = total + term
    return total / factorial(m)


def count_trees(labels) -> int:
    """Parent choices on ``labels`` (terminal or a smaller label) giving a single tree."""
    labels = sorted(set(labels))
    if not labels:
        raise RangeError("need at least one label")
    options = [["end"]] + [["end"] + labels[:p] for p in range(1, len(labels))]
    count = 0
    for combo in product(*options):
        if sum(1 for c in combo if c == "end") == 1:
            count += 1
    return count


# ---------------------------------------------------------------------------
# comparison against an alternative closed form


@dataclass
class ComparisonReport:
    lhs: FockPolynomial
    rhs: FockPolynomial
    matched: list = field(default_factory=list)
    mismatched: list = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return not self.mismatched

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "matched": [str(m) for m in self.matched],
            "mismatched": [{"monomial": str(m), "lhs": str(a), "rhs": str(b)} for m, a, b in self.mismatched],
            "equal": self.equal,
        }


def compare(lhs: FockPolynomial, rhs: FockPolynomial) -> ComparisonReport:
    report = ComparisonReport(lhs, rhs)
    keys = sorted(set(lhs.terms) | set(rhs.terms), key=lambda k: (k.degree, k.factors))
    for k in keys:
        a, b = lhs.coeff(k), rhs.coeff(k)
        if a == b:
            report.matched.append(k)
        else:
            report.mismatched.append((k, a, b))
    return report


def increasing_sequences(m: int):
    """Strictly increasing positive sequences with sum at most m, the empty one included."""
    def rec(start, remaining):
        yield ()
        for i in range(start, remaining + 1):
            for rest in rec(i + 1, remaining - i):
                yield (i,) + rest
    yield from rec(1, m)


def theorem2_literal(m: int, convention: str = "literal") -> FockPolynomial:
    """sum_I (-1)^{|I|-k} prod (i_j - 1)! / (|I|! (m - |I|)!) q_{i_1}..q_{i_k}[1 + L]."""
    if convention not in ("literal", "padded"):
        raise ValueError(f"unknown convention {convention!r}")
    total = FockPolynomial()
    for seq in increasing_sequences(m):
        size, k = sum(seq), len(seq)
        coeff = Fraction((-1) ** (size - k))
        for i in seq:
            coeff *= factorial(i - 1)
        coeff /= factorial(size) * factorial(m - size)
        term = FockPolynomial.constant(coeff)
        for i in seq:
            term = term * FockPolynomial.q_line(i)
        if convention == "padded":
            term = star_pad(term, m - size)
        total = total + term
    return total


def theorem2_compare(m: int, convention: str = "literal") -> ComparisonReport:
    """Structured difference between the closed form and the exponential formula."""
    if m < 1:
        raise RangeError("m must be at least 1")
    return compare(theorem2_literal(m, convention), lehn_expansion(m))
