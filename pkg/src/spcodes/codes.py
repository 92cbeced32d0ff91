"""Ternary linear codes built from symplectic trace vectors.

For each supported group the code of length N = |G| consists of all
ternary words orthogonal to the vector of matrix traces of the group
elements (in canonical element order). Its dual is the q-word trace
image of the scalar multiples of that vector.

Low-weight frequencies of the big code are computed by three
independent routes so they can cross-check each other: a constrained
enumeration over the trace distribution, the dual-transform identity,
and (at small scales) direct enumeration of low-weight words. All
counts are exact arbitrary-precision integers; the few intermediate
rationals are asserted integral.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import comb, factorial

from .charsum import kloosterman
from .errors import InvariantError, UnsupportedScaleError
from .gf import FieldCtx, FieldElement
from .symp import enumerate_group, group_rank, order_sp, trace_dist_closed


@dataclass(frozen=True)
class TernaryWord:
    symbols: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass
class WeightDistribution:
    """Map from Hamming weight to codeword count, for a given length."""

    length: int
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        # counts go out as decimal strings: they routinely exceed 64 bits
        return {
            "length": self.length,
            "counts": [[w, str(c)] for w, c in sorted(self.counts.items())],
        }

    @classmethod
    def from_json_dict(cls, d) -> "WeightDistribution":
        return cls(
            length=int(d["length"]),
            counts={int(w): int(c) for w, c in d["counts"]},
        )


@dataclass(frozen=True)
class CodeSpec:
    """A concrete code instance: group selector, field, and trace vector."""

    which: str
    ctx: FieldCtx
    length: int
    trace_vector: tuple[FieldElement, ...]

    @classmethod
    def for_group(cls, ctx: FieldCtx, which: str) -> "CodeSpec":
        table = enumerate_group(ctx, which)
        n = order_sp(group_rank(which), ctx.q)
        if len(table) != n:
            raise InvariantError(f"group table size {len(table)} != order {n}")
        spec = cls(which=which, ctx=ctx, length=n, trace_vector=table.traces)
        if Counter(spec.trace_vector) != trace_dist_closed(ctx, which):
            raise InvariantError(
                "trace vector multiset disagrees with the closed distribution"
            )
        return spec


# -- combinatorial helpers -------------------------------------------------


def multinomial2(c: int, a: int, b: int) -> int:
    """c! / (a! b! (c-a-b)!), with the convention 0 when a + b > c."""
    if a < 0 or b < 0:
        raise ValueError("multiplicities must be nonnegative")
    if a + b > c:
        return 0
    return comb(c, a) * comb(c - a, b)


def stirling2(h: int, t: int) -> int:
    """Stirling number of the second kind, by the alternating sum."""
    if not 0 <= t <= h:
        raise ValueError("need 0 <= t <= h")
    acc = 0
    for j in range(t + 1):
        acc += (-1) ** (t - j) * comb(t, j) * j**h
    if acc % factorial(t):
        raise InvariantError(f"Stirling sum not divisible by {t}!")
    return acc // factorial(t)


# -- dual codewords and weights ---------------------------------------------


def dual_codeword(spec: CodeSpec, a: FieldElement) -> TernaryWord:
    """The word whose j-th symbol is trace(a * trace_vector[j])."""
    ctx = spec.ctx
    sym = {beta: ctx.trace(ctx.mul(a, beta)) for beta in ctx.elements()}
    return TernaryWord(tuple(sym[beta] for beta in spec.trace_vector))


def weight(word: TernaryWord) -> int:
    """Hamming weight: number of nonzero symbols."""
    return sum(1 for s in word.symbols if s)


def _formula_weight(ctx: FieldCtx, which: str, a: FieldElement) -> int:
    """Dual codeword weight expressed through the Kloosterman sum at a**2."""
    q = ctx.q
    k = kloosterman(ctx, ctx.mul(a, a))
    if group_rank(which) == 1:
        val = Fraction(2, 3) * q * (q**2 - 1 - k)
    else:
        val = Fraction(2, 3) * q**4 * ((q**2 - 1) * (q**4 - 1) - (k * k + q**3 - q))
    if val.denominator != 1:
        raise InvariantError(f"weight formula non-integral at a={a}: {val}")
    return int(val)


def _weights_from_hist(ctx: FieldCtx, hist: dict, a: FieldElement) -> int:
    n = sum(hist.values())
    zero_coords = sum(
        c for beta, c in hist.items() if ctx.trace(ctx.mul(a, beta)) == 0
    )
    return n - zero_coords


def dual_weight_report(spec: CodeSpec) -> list:
    """(a, direct weight, formula weight) for every nonzero a."""
    ctx = spec.ctx
    hist = Counter(spec.trace_vector)
    return [
        (a, _weights_from_hist(ctx, hist, a), _formula_weight(ctx, spec.which, a))
        for a in ctx.units()
    ]


def check_dual_weight_formula(spec: CodeSpec) -> bool:
    """Direct dual weights equal the Kloosterman weight formula, all a."""
    return all(direct == formula for _, direct, formula in dual_weight_report(spec))


def check_dual_weight_formula_closed(ctx: FieldCtx, which: str) -> bool:
    """Same check from the closed trace distribution; no enumeration needed."""
    hist = trace_dist_closed(ctx, which)
    return all(
        _weights_from_hist(ctx, hist, a) == _formula_weight(ctx, which, a)
        for a in ctx.units()
    )


def dual_weight_distribution(spec: CodeSpec) -> WeightDistribution:
    """Weights of all q dual codewords; distinctness is asserted."""
    ctx = spec.ctx
    words = [dual_codeword(spec, a) for a in ctx.elements()]
    if len(set(words)) != ctx.q:
        raise InvariantError("dual codewords are not pairwise distinct")
    counts: Counter = Counter(weight(w) for w in words)
    return WeightDistribution(length=spec.length, counts=dict(counts))


def dual_weight_distribution_closed(ctx: FieldCtx, which: str) -> WeightDistribution:
    """Dual weight multiset from the closed trace distribution."""
    hist = trace_dist_closed(ctx, which)
    counts: Counter = Counter()
    counts[0] += 1
    for a in ctx.units():
        counts[_weights_from_hist(ctx, hist, a)] += 1
    return WeightDistribution(
        length=order_sp(group_rank(which), ctx.q), counts=dict(counts)
    )


# -- low-weight counts of the big code, three routes ------------------------


def weight_counts_from_dist(ctx: FieldCtx, dist: dict, jmax: int) -> WeightDistribution:
    """Constrained enumeration of low-weight words over a trace histogram.

    A word of weight j picks, for each trace value beta, some coordinates
    to set to 1 (nu_beta many) and some to 2 (mu_beta many); it lies in
    the code iff sum(nu_beta * beta) = sum(mu_beta * beta) in the field.
    The walk over beta values keeps (weight used, running difference) as
    state, so the cost is polynomial in q and jmax instead of N**jmax.
    """
    n = sum(dist.values())
    dp = {(0, ctx.zero): 1}
    for beta in ctx.elements():
        nb = dist[beta]
        moves = []
        for s in range(1, jmax + 1):
            for nu in range(s + 1):
                mu = s - nu
                w = multinomial2(nb, nu, mu)
                if not w:
                    continue
                m3 = (nu - mu) % 3
                if m3 == 0:
                    shift = ctx.zero
                elif m3 == 1:
                    shift = beta
                else:
                    shift = ctx.neg(beta)
                moves.append((s, shift, w))
        if not moves:
            continue
        ndp = dict(dp)
        for (t, d), cnt in dp.items():
            for s, shift, w in moves:
                if t + s > jmax:
                    continue
                key = (t + s, ctx.add(d, shift))
                ndp[key] = ndp.get(key, 0) + cnt * w
        dp = ndp
    counts = {j: dp.get((j, ctx.zero), 0) for j in range(jmax + 1)}
    return WeightDistribution(length=n, counts=counts)


def small_weight_counts(spec: CodeSpec, jmax: int) -> WeightDistribution:
    """Counts of code words of weight <= jmax, by constrained enumeration."""
    if not 0 <= jmax <= 12:
        raise ValueError("jmax must be in 0..12")
    return weight_counts_from_dist(
        spec.ctx, trace_dist_closed(spec.ctx, spec.which), jmax
    )


def bruteforce_weight_counts(spec: CodeSpec, jmax: int) -> WeightDistribution:
    """Direct enumeration of all words of weight <= jmax orthogonal to v.

    Words are enumerated explicitly (split into two halves that are
    combined on the running inner product, so every low-weight word is
    still visited exactly once on its half). Feasible only at small
    length; guarded accordingly.
    """
    if jmax < 0:
        raise ValueError("jmax must be nonnegative")
    ctx = spec.ctx
    n = spec.length
    half = n // 2
    est = sum(comb(max(half, n - half), j) * 2**j for j in range(jmax + 1))
    if est > 5_000_000:
        raise UnsupportedScaleError(
            f"direct enumeration infeasible: ~{est} words per half"
        )

    def half_table(values):
        # (weight, inner product) -> word count over these coordinates
        table: Counter = Counter()
        table[(0, ctx.zero)] = 1
        contrib = [(v, ctx.add(v, v)) for v in values]
        for j in range(1, jmax + 1):
            for pos in combinations(range(len(values)), j):
                for syms in product((0, 1), repeat=j):
                    dot = reduce(
                        ctx.add, (contrib[p][s] for p, s in zip(pos, syms)), ctx.zero
                    )
                    table[(j, dot)] += 1
        return table

    left = half_table(spec.trace_vector[:half])
    right = half_table(spec.trace_vector[half:])
    counts = {}
    for j in range(jmax + 1):
        acc = 0
        for (j1, d1), c1 in left.items():
            if j1 > j:
                continue
            acc += c1 * right.get((j - j1, ctx.neg(d1)), 0)
        counts[j] = acc
    return WeightDistribution(length=n, counts=counts)


def macwilliams(
    dual: WeightDistribution, n: int, jmax: int | None = None
) -> WeightDistribution:
    """Weight distribution of the code from its dual's, over 3 symbols.

    Expands (x + 2y)**(n - w) * (x - y)**w per dual weight w, collects
    the y**j coefficient, and divides by the dual size; the division
    must be exact. With ``jmax`` set, only weights <= jmax are computed
    (cost independent of n); otherwise the full distribution is built
    and its total asserted equal to 3**n / |dual|.
    """
    size = dual.total()
    full = jmax is None
    if full:
        jmax = n
    counts = {}
    for j in range(jmax + 1):
        acc = 0
        for w, cw in dual.counts.items():
            term = 0
            for k in range(min(j, w) + 1):
                term += (-1) ** k * 2 ** (j - k) * comb(w, k) * comb(n - w, j - k)
            acc += cw * term
        if acc % size:
            raise InvariantError(
                f"dual transform not divisible by {size} at weight {j} "
                "(wrong dual distribution?)"
            )
        counts[j] = acc // size
    dist = WeightDistribution(length=n, counts=counts)
    if full:
        expected = 3**n // size
        if 3**n % size or dist.total() != expected:
            raise InvariantError(
                f"transformed total {dist.total()} != {expected}"
            )
    return dist


# -- power-moment identity ---------------------------------------------------


def _pless_rhs(n: int, r: int, h: int, cmap: dict) -> Fraction:
    rhs = Fraction(0)
    for j in range(min(n, h) + 1):
        cj = cmap.get(j, 0)
        if not cj:
            continue
        inner = Fraction(0)
        for t in range(j, h + 1):
            inner += (
                factorial(t)
                * stirling2(h, t)
                * Fraction(3) ** (r - t)
                * 2 ** (t - j)
                * comb(n - j, n - t)
            )
        rhs += (-1) ** j * cj * inner
    return rhs


def pless_sides(spec: CodeSpec, h: int, counts=None):
    """Both sides of the power-moment identity applied to the dual code.

    Left: sum of w**h over the dual weight multiset. Right: the
    Stirling-number expansion over low-weight counts of the big code
    (the dual is an [N, r] code over 3 symbols). Exact rationals.
    """
    if not 0 <= h <= 10:
        raise ValueError("h must be in 0..10")
    dual = dual_weight_distribution(spec)
    lhs = sum(c * w**h for w, c in dual.counts.items())
    if counts is None:
        counts = small_weight_counts(spec, min(spec.length, h))
    cmap = counts.counts if isinstance(counts, WeightDistribution) else counts
    return lhs, _pless_rhs(spec.length, spec.ctx.r, h, cmap)


def pless_verify(spec: CodeSpec, h: int, counts=None) -> bool:
    """True iff the power-moment identity holds exactly at exponent h."""
    lhs, rhs = pless_sides(spec, h, counts)
    return rhs == lhs


def pless_sides_closed(ctx: FieldCtx, which: str, h: int):
    """Identity sides from closed distributions only (no enumeration)."""
    if not 0 <= h <= 10:
        raise ValueError("h must be in 0..10")
    n = order_sp(group_rank(which), ctx.q)
    dual = dual_weight_distribution_closed(ctx, which)
    lhs = sum(c * w**h for w, c in dual.counts.items())
    counts = weight_counts_from_dist(ctx, trace_dist_closed(ctx, which), min(n, h))
    return lhs, _pless_rhs(n, ctx.r, h, counts.counts)
