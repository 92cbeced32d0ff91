"""Recursive power moments of Kloosterman sums with square arguments.

Two recursions compute the moments from low-weight counts of the codes
built on the rank-1 and rank-2 symplectic groups: the rank-1 code gives
every moment, the rank-2 code the even ones. Everything is evaluated in
exact rationals, each moment is asserted to be an integer, and
:func:`moment_report` compares both recursions pointwise against the
brute-force sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from . import charsum
from .codes import stirling2, weight_counts_from_dist, WeightDistribution
from .errors import InvariantError
from .gf import FieldCtx
from .symp import SP2, SP4, order_sp, trace_dist_closed

MAX_H = 10


@dataclass
class MomentTable:
    q: int
    route: str  # "brute_force" | "recursive_sp2" | "recursive_sp4_even"
    entries: list = field(default_factory=list)  # (h, value) pairs

    def value(self, h: int):
        for hh, v in self.entries:
            if hh == h:
                return v
        return None


def _seed(q: int) -> int:
    # moment of exponent 0 counts the nonzero squares
    return (q - 1) // 2


def _counts_map(weights) -> dict:
    if isinstance(weights, WeightDistribution):
        return weights.counts
    return dict(weights)


def _correction(q: int, prefactor_exp: int, n: int, cmap: dict, h: int) -> Fraction:
    """The weight-count part of a recursion step, as an exact rational.

    Contains both negative powers of 2 and (via the prefactor) negative
    powers of q, so the value is only integral in combination with the
    rest of the step.
    """
    total = Fraction(0)
    for j in range(min(n, h) + 1):
        cj = cmap.get(j, 0)
        if not cj:
            continue
        inner = Fraction(0)
        for t in range(j, h + 1):
            inner += (
                factorial(t)
                * stirling2(h, t)
                * 3 ** (h - t)
                * Fraction(2) ** (t - h - j - 1)
                * comb(n - j, n - t)
            )
        total += (-1) ** (h + j) * cj * inner
    return Fraction(q) ** prefactor_exp * total


def sk_table_sp2(ctx: FieldCtx, hmax: int, weights) -> list:
    """Moments 0..hmax via the rank-1 recursion; all asserted integral."""
    if not 0 <= hmax <= MAX_H:
        raise ValueError(f"hmax must be in 0..{MAX_H}")
    q = ctx.q
    n1 = order_sp(1, q)
    cmap = _counts_map(weights)
    vals = [_seed(q)]
    for m in range(1, hmax + 1):
        first = sum(
            (-1) ** (m + j + 1) * comb(m, j) * (q**2 - 1) ** (m - j) * vals[j]
            for j in range(m)
        )
        step = first + _correction(q, 1 - m, n1, cmap, m)
        if step.denominator != 1:
            raise InvariantError(
                f"rank-1 recursion non-integral at h={m}: {step} "
                "(wrong weight counts?)"
            )
        vals.append(int(step))
    return vals


def sk_recursive_sp2(ctx: FieldCtx, h: int, weights) -> int:
    """h-th square-argument moment via the rank-1 code recursion."""
    if not 1 <= h <= MAX_H:
        raise ValueError(f"h must be in 1..{MAX_H}")
    return sk_table_sp2(ctx, h, weights)[h]


def sk_even_table_sp4(ctx: FieldCtx, steps: int, weights) -> list:
    """Even moments 0, 2, .., 2*steps via the rank-2 recursion."""
    if not 0 <= steps <= MAX_H // 2:
        raise ValueError(f"steps must be in 0..{MAX_H // 2}")
    q = ctx.q
    n2 = order_sp(2, q)
    base = q**6 - q**4 - q**3 - q**2 + q + 1
    cmap = _counts_map(weights)
    vals = [_seed(q)]  # vals[j] is the moment of exponent 2j
    for m in range(1, steps + 1):
        first = sum(
            (-1) ** (m + j + 1) * comb(m, j) * base ** (m - j) * vals[j]
            for j in range(m)
        )
        step = first + _correction(q, 1 - 4 * m, n2, cmap, m)
        if step.denominator != 1:
            raise InvariantError(
                f"rank-2 recursion non-integral at 2h={2 * m}: {step} "
                "(wrong weight counts?)"
            )
        vals.append(int(step))
    return vals


def sk_even_recursive_sp4(ctx: FieldCtx, h: int, weights) -> int:
    """2h-th square-argument moment via the rank-2 code recursion."""
    if not 1 <= h <= MAX_H // 2:
        raise ValueError(f"h must be in 1..{MAX_H // 2}")
    return sk_even_table_sp4(ctx, h, weights)[h]


@dataclass
class MomentReport:
    q: int
    brute_force: MomentTable
    recursive_sp2: MomentTable
    recursive_sp4_even: MomentTable
    verdict: bool
    mismatches: list


def moment_report(ctx: FieldCtx, hmax: int) -> MomentReport:
    """All three moment tables up to hmax, with a pointwise verdict."""
    if not 0 <= hmax <= MAX_H:
        raise ValueError(f"hmax must be in 0..{MAX_H}")
    q = ctx.q
    brute = MomentTable(q, "brute_force", [(h, charsum.sk(ctx, h)) for h in range(hmax + 1)])

    w1 = weight_counts_from_dist(ctx, trace_dist_closed(ctx, SP2), min(hmax, 12))
    rec1 = MomentTable(
        q, "recursive_sp2", list(enumerate(sk_table_sp2(ctx, hmax, w1)))
    )

    steps = hmax // 2
    w2 = weight_counts_from_dist(ctx, trace_dist_closed(ctx, SP4), min(steps, 12))
    rec2 = MomentTable(
        q,
        "recursive_sp4_even",
        [(2 * j, v) for j, v in enumerate(sk_even_table_sp4(ctx, steps, w2))],
    )

    mismatches = []
    for h, v in rec1.entries:
        if v != brute.value(h):
            mismatches.append(("recursive_sp2", h, v, brute.value(h)))
    for h, v in rec2.entries:
        if v != brute.value(h):
            mismatches.append(("recursive_sp4_even", h, v, brute.value(h)))
    return MomentReport(q, brute, rec1, rec2, not mismatches, mismatches)
