"""Euler numbers of relative Hilbert schemes of a family of nodal curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import RangeError

MODES = ("closed", "stratified", "oracle")


@dataclass(frozen=True)
class FamilyParams:
    """Fibre genus g, base genus gB, number of one-node fibres sigma, length m."""

    g: int
    gB: int
    sigma: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise RangeError("m must be at least 1")
        if min(self.g, self.gB, self.sigma) < 0:
            raise RangeError("g, gB and sigma must be nonnegative")


@dataclass(frozen=True)
class TriplePointParams:
    L2: int
    omegaL: int
    omega2: int
    d: int
    g: int
    sigma: int


def gen_binomial(a: int, k: int) -> int:
    """a(a-1)...(a-k+1)/k!, valid for negative a."""
    if k < 0:
        raise RangeError("k must be nonnegative")
    num = 1
    for j in range(k):
        num *= a - j
    return num // factorial(k)


def euler_sym(eX: int, m: int) -> int:
    """Euler number of the m-th symmetric power of a space with Euler number eX."""
    if m < 0:
        raise RangeError("m must be nonnegative")
    return (-1) ** m * gen_binomial(-eX, m)


def euler_sym_series(eX: int, m: int) -> int:
    """Coefficient of q^m in (1 - q)^(-eX), by repeated series multiplication."""
    coeffs = [1] + [0] * m
    for _ in range(abs(eX)):
        if eX > 0:
            for n in range(1, m + 1):
                coeffs[n] += coeffs[n - 1]
        else:
            for n in range(m, 0, -1):
                coeffs[n] -= coeffs[n - 1]
    return coeffs[m]


def chain_euler(r: int) -> int:
    """Euler number of a chain of r projective lines: 2r minus the r-1 shared points."""
    if r < 0:
        raise RangeError("r must be nonnegative")
    if r == 0:
        return 1
    return 2 * r - (r - 1)


def punctual_fiber_euler(i: int) -> int:
    """Euler number of the length-i punctual scheme at a node: a point, or a chain of i-1 lines."""
    return 1 if i <= 1 else chain_euler(i - 1)


def euler_hilb(p: FamilyParams, mode: str = "closed") -> int:
    g, gB, sigma, m = p.g, p.gB, p.sigma, p.m
    top = (-1) ** m * gen_binomial(2 * g - 2, m) * (2 - 2 * gB)
    if mode == "closed":
        return top + sigma * gen_binomial(m - 2 * g + 2, m - 1)
    if mode == "stratified":
        return top + sigma * sum((-1) ** k * (m - k) * gen_binomial(2 * g - 2, k) for k in range(m))
    if mode == "oracle":
        return _euler_oracle(p)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def _euler_oracle(p: FamilyParams) -> int:
    g, gB, sigma, m = p.g, p.gB, p.sigma, p.m
    smooth_fiber = 2 - 2 * g
    open_base = 2 - 2 * gB - sigma
    # singular fibre minus its node: normalization (genus g - 1) minus the two branch points
    punctured = (2 - 2 * (g - 1)) - 2
    total = open_base * euler_sym(smooth_fiber, m)
    per_fiber = sum(punctual_fiber_euler(i) * euler_sym(punctured, m - i) for i in range(m + 1))
    return total + sigma * per_fiber


def euler_all_modes(p: FamilyParams) -> dict[str, int]:
    return {mode: euler_hilb(p, mode) for mode in MODES}


def alternating_binomial_identity(a: int, b: int) -> tuple[int, int]:
    lhs = sum((-1) ** k * gen_binomial(a, k) for k in range(b + 1))
    return lhs, (-1) ** b * gen_binomial(a - 1, b)


def euler_blowup_model(m: int, gB: int, sigma: int) -> int:
    """Projective bundle over the base, then one blow-up of a P^k centre per k < m per singular fibre."""
    if m < 1:
        raise RangeError("m must be at least 1")
    bundle = (m + 1) * (2 - 2 * gB)
    increment = 0
    for k in range(m):
        codim = m + 1 - k
        # replacing the P^k centre by a P^{codim-1} bundle over it
        increment += _euler_projective(k) * (_euler_projective(codim - 1) - 1)
    return bundle + sigma * increment


def _euler_projective(n: int) -> int:
    return n + 1


def triple_point_formula(p: TriplePointParams) -> Fraction:
    d = Fraction(p.d)
    return ((d - 2) * (d - 4) / 2 + p.g - 1) * p.L2 + (3 - d / 2) * p.omegaL + 2 * p.omega2 - 4 * p.sigma


def euler_sweep(g_max: int = 8, gB_max: int = 3, m_max: int = 10, sigmas=(0, 1, 2, 5)) -> list[dict]:
    rows = []
    for g in range(g_max + 1):
        for gB in range(gB_max + 1):
            for m in range(1, m_max + 1):
                for sigma in sigmas:
                    vals = euler_all_modes(FamilyParams(g, gB, sigma, m))
                    rows.append({"g": g, "gB": gB, "m": m, "sigma": sigma, **vals, "agree": len(set(vals.values())) == 1})
    return rows
