"""Exact character sums over GF(3**r), valued in the Eisenstein integers.

The canonical additive character sends x to w**trace(x), where w is a
primitive cube root of unity. Every sum of character values is therefore
determined by three tallies (how often each exponent 0, 1, 2 occurs), so
all sums here are accumulated as :class:`ExponentCounts` and converted
to an exact element of Z[w] at the end. No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product

from .errors import InvariantError
from .gf import FieldCtx, FieldElement


@dataclass(frozen=True)
class Eisenstein:
    """a + b*w with w = exp(2*pi*i/3), so w**2 = -1 - w."""

    a: int
    b: int

    def __add__(self, other):
        other = _coerce(other)
        return Eisenstein(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Eisenstein(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __mul__(self, other):
        other = _coerce(other)
        return Eisenstein(
            self.a * other.a - self.b * other.b,
            self.a * other.b + self.b * other.a - self.b * other.b,
        )

    __rmul__ = __mul__

    @property
    def is_rational_integer(self) -> bool:
        return self.b == 0

    def to_int(self) -> int:
        if self.b != 0:
            raise InvariantError(f"{self} is not a rational integer")
        return self.a

    @staticmethod
    def omega_power(k: int) -> "Eisenstein":
        k %= 3
        if k == 0:
            return Eisenstein(1, 0)
        if k == 1:
            return Eisenstein(0, 1)
        return Eisenstein(-1, -1)


def _coerce(v) -> Eisenstein:
    if isinstance(v, Eisenstein):
        return v
    if isinstance(v, int):
        return Eisenstein(v, 0)
    return NotImplemented


@dataclass
class ExponentCounts:
    """Multiplicities of the character exponents 0, 1, 2 in a sum."""

    n0: int = 0
    n1: int = 0
    n2: int = 0

    def tally(self, exponent: int, count: int = 1) -> None:
        if exponent == 0:
            self.n0 += count
        elif exponent == 1:
            self.n1 += count
        else:
            self.n2 += count

    def __add__(self, other: "ExponentCounts") -> "ExponentCounts":
        return ExponentCounts(
            self.n0 + other.n0, self.n1 + other.n1, self.n2 + other.n2
        )

    def to_eisenstein(self) -> Eisenstein:
        return Eisenstein(self.n0 - self.n2, self.n1 - self.n2)


def lam(ctx: FieldCtx, x: FieldElement) -> Eisenstein:
    """Canonical additive character value at x."""
    return Eisenstein.omega_power(ctx.trace(x))


@lru_cache(maxsize=None)
def _inv_map(ctx: FieldCtx) -> dict:
    return {u: ctx.inv(u) for u in ctx.units()}


def kloosterman_counts(ctx: FieldCtx, a: FieldElement) -> ExponentCounts:
    """Exponent tallies of trace(x + a/x) over the units."""
    if a == ctx.zero:
        raise ValueError("Kloosterman sum argument must be nonzero")
    inv = _inv_map(ctx)
    counts = ExponentCounts()
    for alpha in ctx.units():
        counts.tally(ctx.trace(ctx.add(alpha, ctx.mul(a, inv[alpha]))))
    return counts


def kloosterman(ctx: FieldCtx, a: FieldElement) -> int:
    """K(a) = sum over units x of w**trace(x + a/x), a rational integer.

    The substitution x -> -x negates the trace, which forces the w and
    w**2 tallies to agree; that is asserted and the integer n0 - n1 is
    returned. The square-root bound |K| <= 2*sqrt(q) is also asserted.
    """
    counts = kloosterman_counts(ctx, a)
    if counts.n1 != counts.n2:
        raise InvariantError(
            f"Kloosterman tally not symmetric at a={a}: {counts} "
            "(field arithmetic bug)"
        )
    k = counts.n0 - counts.n1
    if k * k > 4 * ctx.q:
        raise InvariantError(f"square-root bound violated: K({a}) = {k}")
    return k


@lru_cache(maxsize=None)
def kloosterman_table(ctx: FieldCtx) -> dict:
    """K(a) for every unit a, in element order."""
    return {a: kloosterman(ctx, a) for a in ctx.units()}


def mk(ctx: FieldCtx, h: int) -> int:
    """h-th power moment of K over all units."""
    if h < 0:
        raise ValueError("moment exponent must be nonnegative")
    table = kloosterman_table(ctx)
    return sum(k**h for k in table.values())


def sk(ctx: FieldCtx, h: int) -> int:
    """h-th power moment of K over the nonzero squares.

    Computed two ways (restriction to squares, and averaging K(b**2)
    over all units, which hits every square twice) and asserted equal.
    """
    if h < 0:
        raise ValueError("moment exponent must be nonnegative")
    table = kloosterman_table(ctx)
    direct = sum(k**h for a, k in table.items() if ctx.is_square(a))
    doubled = sum(table[ctx.mul(b, b)] ** h for b in ctx.units())
    if doubled != 2 * direct:
        raise InvariantError(
            f"square-argument moment routes disagree at h={h}: "
            f"{direct} vs {doubled}/2"
        )
    return direct


@lru_cache(maxsize=None)
def _delta_dist(ctx: FieldCtx, m: int) -> dict:
    """Distribution of x1 + 1/x1 + ... + xm + 1/xm over unit m-tuples."""
    if m == 0:
        return {ctx.zero: 1}
    inv = _inv_map(ctx)
    d1: dict = {}
    for alpha in ctx.units():
        g = ctx.add(alpha, inv[alpha])
        d1[g] = d1.get(g, 0) + 1
    dist = d1
    for _ in range(m - 1):
        new: dict = {}
        for g1, c1 in d1.items():
            for g2, c2 in dist.items():
                s = ctx.add(g1, g2)
                new[s] = new.get(s, 0) + c1 * c2
        dist = new
    if m == 2:
        # independent double loop, cross-checking the convolution route
        direct: dict = {}
        for a1, a2 in product(ctx.units(), repeat=2):
            s = ctx.add(
                ctx.add(a1, inv[a1]),
                ctx.add(a2, inv[a2]),
            )
            direct[s] = direct.get(s, 0) + 1
        if direct != dist:
            raise InvariantError("pair-count convolution disagrees with brute force")
    return dist


def delta_count(ctx: FieldCtx, m: int, beta: FieldElement) -> int:
    """Number of unit m-tuples whose x + 1/x values sum to beta.

    For m = 0 this is the indicator of beta = 0.
    """
    if m < 0:
        raise ValueError("tuple length must be nonnegative")
    return _delta_dist(ctx, m).get(beta, 0)


def check_moment_identity(ctx: FieldCtx, m: int, beta: FieldElement) -> bool:
    """Verify sum over units a of w**trace(-a*beta) * K(a**2)**m.

    The left side is evaluated exactly in Z[w], asserted to be a rational
    integer, and compared with q * delta_count(m, beta) - (q-1)**m.
    """
    if m < 0:
        raise ValueError("moment exponent must be nonnegative")
    table = kloosterman_table(ctx)
    acc = Eisenstein(0, 0)
    for a in ctx.units():
        e = ctx.trace(ctx.neg(ctx.mul(a, beta)))
        acc = acc + Eisenstein.omega_power(e) * (table[ctx.mul(a, a)] ** m)
    lhs = acc.to_int()
    rhs = ctx.q * delta_count(ctx, m, beta) - (ctx.q - 1) ** m
    return lhs == rhs


def kgl_recursive(ctx: FieldCtx, t: int, a: FieldElement) -> int:
    """Kloosterman sum for GL(t, q), by the two-term recursion.

    Base cases: the empty group gives 1, and t = 1 is the ordinary
    Kloosterman sum.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if a == ctx.zero:
        raise ValueError("argument must be nonzero")
    q = ctx.q
    k1 = kloosterman(ctx, a)
    vals = [1, k1]
    for s in range(2, t + 1):
        vals.append(
            q ** (s - 1) * vals[s - 1] * k1
            + q ** (2 * s - 2) * (q ** (s - 1) - 1) * vals[s - 2]
        )
    return vals[t]


def kgl_closed(ctx: FieldCtx, t: int, a: FieldElement) -> int:
    """Kloosterman sum for GL(t, q), by the explicit double sum.

    The inner sum runs over weakly decreasing integer chains
    2l-1 <= j_{l-1} <= ... <= j_1 <= t+1 and is 1 when l = 1. The
    q-power prefactor can have a negative exponent, so the evaluation
    is exact-rational with an integrality assertion at the end.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if a == ctx.zero:
        raise ValueError("argument must be nonzero")
    q = ctx.q
    k1 = kloosterman(ctx, a)
    total = 0
    for el in range(1, (t + 2) // 2 + 1):
        if el == 1:
            inner = 1
        else:
            inner = 0
            for chain in combinations_with_replacement(
                range(2 * el - 1, t + 2), el - 1
            ):
                js = sorted(chain, reverse=True)
                term = 1
                for nu, j in enumerate(js, start=1):
                    term *= q ** (j - 2 * nu) - 1
                inner += term
        total += q**el * k1 ** (t + 2 - 2 * el) * inner
    value = Fraction(q) ** ((t - 2) * (t + 1) // 2) * total
    if value.denominator != 1:
        raise InvariantError(f"closed-form GL sum not integral at t={t}: {value}")
    return int(value)


def kgl_bruteforce(ctx: FieldCtx, t: int, a: FieldElement) -> int:
    """Exhaustive GL(t, q) character sum, supported for t <= 2.

    Sums w**trace(Tr(w) + a*Tr(w**-1)) over every invertible t x t
    matrix, inverting 2 x 2 matrices by the adjugate formula.
    """
    if a == ctx.zero:
        raise ValueError("argument must be nonzero")
    if t == 0:
        return 1
    counts = ExponentCounts()
    if t == 1:
        inv = _inv_map(ctx)
        for alpha in ctx.units():
            counts.tally(ctx.trace(ctx.add(alpha, ctx.mul(a, inv[alpha]))))
    elif t == 2:
        elems = ctx.elements()
        for p, qq, r, s in product(elems, repeat=4):
            det = ctx.sub(ctx.mul(p, s), ctx.mul(qq, r))
            if det == ctx.zero:
                continue
            di = ctx.inv(det)
            tr = ctx.add(p, s)
            tr_inv = ctx.mul(di, tr)
            counts.tally(ctx.trace(ctx.add(tr, ctx.mul(a, tr_inv))))
    else:
        raise ValueError("exhaustive GL sum only supported for t <= 2")
    if counts.n1 != counts.n2:
        raise InvariantError(f"GL({t}) tally not symmetric: {counts}")
    return counts.to_eisenstein().to_int()
