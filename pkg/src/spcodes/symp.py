"""Symplectic groups over GF(3**r) as explicit matrix sets.

Provides membership testing, exhaustive enumeration at desk scale
(rank 1 for q <= 27, rank 2 for q = 3), closed-form order and
double-coset bookkeeping, the distribution of matrix traces over each
group, and the exact group character ("Gauss") sums, each cross-checked
against the Kloosterman-sum expressions they must equal.

Enumeration is vectorised with numpy but stays single-threaded. Element
order is always lexicographic on the row-major entry tuple, so code
coordinates built from these tables are reproducible across runs.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from .charsum import Eisenstein, ExponentCounts, delta_count, kloosterman
from .errors import InvariantError, UnsupportedScaleError
from .gf import FieldCtx, FieldElement

SP2 = "sp2"
SP4 = "sp4"

SP4_ORDER_Q3 = 51840  # rank-2 group order at q = 3


def group_rank(which: str) -> int:
    if which == SP2:
        return 1
    if which == SP4:
        return 2
    raise ValueError(f"unknown group selector {which!r} (expected 'sp2' or 'sp4')")


# -- matrices ------------------------------------------------------------


@dataclass(frozen=True)
class MatrixGF:
    """Square matrix over a field context; entries are coefficient tuples."""

    entries: tuple[tuple[FieldElement, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)


def matrix(ctx: FieldCtx, rows) -> MatrixGF:
    ents = tuple(tuple(ctx.element(e) for e in row) for row in rows)
    if any(len(row) != len(ents) for row in ents):
        raise ValueError("matrix must be square")
    return MatrixGF(ents)


def identity(ctx: FieldCtx, n: int) -> MatrixGF:
    return MatrixGF(
        tuple(
            tuple(ctx.one if i == j else ctx.zero for j in range(n))
            for i in range(n)
        )
    )


def mat_transpose(m: MatrixGF) -> MatrixGF:
    return MatrixGF(tuple(zip(*m.entries)))


def mat_mul(ctx: FieldCtx, x: MatrixGF, y: MatrixGF) -> MatrixGF:
    n = x.n
    yt = tuple(zip(*y.entries))
    rows = []
    for xr in x.entries:
        row = []
        for yc in yt:
            acc = ctx.zero
            for xe, ye in zip(xr, yc):
                acc = ctx.add(acc, ctx.mul(xe, ye))
            row.append(acc)
        rows.append(tuple(row))
    return MatrixGF(tuple(rows))


def mat_trace(ctx: FieldCtx, m: MatrixGF) -> FieldElement:
    acc = ctx.zero
    for i in range(m.n):
        acc = ctx.add(acc, m.entries[i][i])
    return acc


def standard_form(ctx: FieldCtx, n: int) -> MatrixGF:
    """The alternating block matrix [[0, I_n], [-I_n, 0]]."""
    rows = []
    for i in range(2 * n):
        row = [ctx.zero] * (2 * n)
        if i < n:
            row[n + i] = ctx.one
        else:
            row[i - n] = ctx.neg(ctx.one)
        rows.append(tuple(row))
    return MatrixGF(tuple(rows))


def bruhat_sigma(ctx: FieldCtx, n: int, r: int) -> MatrixGF:
    """Double-coset representative with an r x r antidiagonal flip block."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    rows = []
    for i in range(2 * n):
        row = [ctx.zero] * (2 * n)
        if i < r:
            row[n + i] = ctx.one
        elif i < n:
            row[i] = ctx.one
        elif i < n + r:
            row[i - n] = ctx.neg(ctx.one)
        else:
            row[i] = ctx.one
        rows.append(tuple(row))
    return MatrixGF(tuple(rows))


def is_symplectic(ctx: FieldCtx, w: MatrixGF) -> bool:
    """True iff transpose(w) * J * w == J for the standard form J."""
    if w.n % 2:
        raise ValueError("symplectic matrices have even dimension")
    j = standard_form(ctx, w.n // 2)
    return mat_mul(ctx, mat_mul(ctx, mat_transpose(w), j), w) == j


# -- enumeration ---------------------------------------------------------


class GroupTable:
    """An enumerated symplectic group: element list plus trace statistics.

    ``entry_indices`` holds one row-major matrix per group element, as
    indices into ``ctx.elements()``, in lexicographic element order.
    Immutable once built.
    """

    def __init__(self, ctx, n, entry_indices, traces, trace_hist):
        self.ctx = ctx
        self.n = n
        self.entry_indices = entry_indices
        self.traces = traces
        self.trace_hist = trace_hist

    def __len__(self) -> int:
        return self.entry_indices.shape[0]

    def matrix(self, i: int) -> MatrixGF:
        ctx = self.ctx
        return MatrixGF(
            tuple(
                tuple(ctx.element_at(int(v)) for v in row)
                for row in self.entry_indices[i]
            )
        )

    @cached_property
    def elements(self) -> tuple[MatrixGF, ...]:
        return tuple(self.matrix(i) for i in range(len(self)))

    @cached_property
    def _member_keys(self) -> frozenset:
        n = len(self)
        return frozenset(map(tuple, self.entry_indices.reshape(n, -1).tolist()))

    def __contains__(self, m: MatrixGF) -> bool:
        ctx = self.ctx
        key = tuple(ctx.index(e) for row in m.entries for e in row)
        return key in self._member_keys


@lru_cache(maxsize=None)
def _index_tables(ctx: FieldCtx):
    """Numpy add/mul/neg lookup tables over element indices (small q only)."""
    q = ctx.q
    elems = ctx.elements()
    add = np.empty((q, q), dtype=np.int32)
    mul = np.empty((q, q), dtype=np.int32)
    neg = np.empty(q, dtype=np.int32)
    for i, x in enumerate(elems):
        neg[i] = ctx.index(ctx.neg(x))
        for j, y in enumerate(elems):
            add[i, j] = ctx.index(ctx.add(x, y))
            mul[i, j] = ctx.index(ctx.mul(x, y))
    return add, mul, neg


def _hist_from_trace_indices(ctx: FieldCtx, trace_idx: np.ndarray):
    counts = np.bincount(trace_idx, minlength=ctx.q)
    traces = tuple(ctx.element_at(int(i)) for i in trace_idx)
    hist = {ctx.element_at(i): int(c) for i, c in enumerate(counts)}
    return traces, hist


@lru_cache(maxsize=None)
def enumerate_sp2(ctx: FieldCtx) -> GroupTable:
    """All 2 x 2 matrices of determinant 1, in lexicographic order.

    For 2 x 2 matrices the symplectic condition is equivalent to
    det = 1, which is what the scan checks; the equivalence itself is
    exercised in the test suite. The count is asserted against the
    closed-form order q(q**2 - 1).
    """
    q = ctx.q
    if q > 27:
        raise UnsupportedScaleError(
            f"rank-1 enumeration supported for q <= 27, got q = {q}"
        )
    add, mul, neg = _index_tables(ctx)
    idx = np.arange(q, dtype=np.int32)
    a = idx[:, None, None, None]
    b = idx[None, :, None, None]
    c = idx[None, None, :, None]
    d = idx[None, None, None, :]
    det = add[mul[a, d], neg[mul[b, c]]]
    sel = np.argwhere(det == ctx.index(ctx.one)).astype(np.int32)
    expected = order_sp(1, q)
    if sel.shape[0] != expected:
        raise InvariantError(
            f"rank-1 scan found {sel.shape[0]} matrices, expected {expected}"
        )
    trace_idx = add[sel[:, 0], sel[:, 3]]
    traces, hist = _hist_from_trace_indices(ctx, trace_idx)
    return GroupTable(ctx, 1, sel.reshape(-1, 2, 2), traces, hist)


def _sp4_columns():
    cols = np.array(list(itertools.product(range(3), repeat=4)), dtype=np.int64)
    j = np.array(
        [[0, 0, 1, 0], [0, 0, 0, 1], [2, 0, 0, 0], [0, 2, 0, 0]], dtype=np.int64
    )
    form = (cols @ j % 3) @ cols.T % 3
    return cols, form


def _sp4_table_from_entries(ctx: FieldCtx, entries: np.ndarray) -> GroupTable:
    n = entries.shape[0]
    powers = 3 ** np.arange(15, -1, -1, dtype=np.int64)
    keys = entries.reshape(n, 16) @ powers
    entries = entries[np.argsort(keys, kind="stable")]
    trace_idx = (
        entries[:, 0, 0] + entries[:, 1, 1] + entries[:, 2, 2] + entries[:, 3, 3]
    ) % 3
    traces, hist = _hist_from_trace_indices(ctx, trace_idx.astype(np.int64))
    return GroupTable(ctx, 2, entries.astype(np.int32), traces, hist)


@lru_cache(maxsize=None)
def enumerate_sp4(ctx: FieldCtx) -> GroupTable:
    """All 4 x 4 matrices preserving the standard alternating form, q = 3.

    The candidate space of 3**16 matrices is scanned column by column:
    a matrix is symplectic iff the pairwise form values of its columns
    reproduce the standard form, so the scan fixes the first two
    columns, prunes on their form value, and reads the compatible third
    and fourth columns off a precomputed 81 x 81 form table.
    """
    if ctx.q != 3:
        raise UnsupportedScaleError(
            "rank-2 enumeration is only feasible at q = 3; "
            "use the closed-form trace distribution instead"
        )
    cols, form = _sp4_columns()
    blocks = []
    for i1 in range(81):
        row1 = form[i1]
        base3 = row1 == 1
        base4 = row1 == 0
        for i2 in np.nonzero(row1 == 0)[0]:
            row2 = form[i2]
            s3 = np.nonzero(base3 & (row2 == 0))[0]
            s4 = np.nonzero(base4 & (row2 == 1))[0]
            if not len(s3) or not len(s4):
                continue
            p3, p4 = np.nonzero(form[np.ix_(s3, s4)] == 0)
            if len(p3):
                quad = np.empty((len(p3), 4), dtype=np.int64)
                quad[:, 0] = i1
                quad[:, 1] = i2
                quad[:, 2] = s3[p3]
                quad[:, 3] = s4[p4]
                blocks.append(quad)
    quads = np.concatenate(blocks)
    if quads.shape[0] != SP4_ORDER_Q3:
        raise InvariantError(
            f"rank-2 scan found {quads.shape[0]} matrices, expected {SP4_ORDER_Q3}"
        )
    entries = cols[quads].transpose(0, 2, 1)
    return _sp4_table_from_entries(ctx, entries)


def enumerate_group(ctx: FieldCtx, which: str) -> GroupTable:
    return enumerate_sp2(ctx) if group_rank(which) == 1 else enumerate_sp4(ctx)


# -- orders and double-coset counts ---------------------------------------


def order_sp(n: int, q: int) -> int:
    """Order of the rank-n symplectic group over a q-element field."""
    if n < 1:
        raise ValueError("rank must be positive")
    out = q ** (n * n)
    for j in range(1, n + 1):
        out *= q ** (2 * j) - 1
    return out


def gl_order(n: int, q: int) -> int:
    out = q ** (n * (n - 1) // 2)
    for j in range(1, n + 1):
        out *= q**j - 1
    return out


def qbinom(n: int, r: int, q: int) -> int:
    """Gaussian binomial coefficient, evaluated exactly."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    num = 1
    den = 1
    for j in range(r):
        num *= q ** (n - j) - 1
        den *= q ** (r - j) - 1
    if num % den:
        raise InvariantError(f"Gaussian binomial not integral: {n=} {r=} {q=}")
    return num // den


def alt_count(r: int, q: int) -> int:
    """Number of nonsingular r x r alternating matrices; 1 for r = 0."""
    if r < 0:
        raise ValueError("size must be nonnegative")
    if r == 0:
        return 1
    if r % 2:
        return 0
    half = r // 2
    out = q ** (half * (half - 1))
    for j in range(1, half + 1):
        out *= q ** (2 * j - 1) - 1
    return out


def bruhat_counts(n: int, q: int) -> dict:
    """Double-coset cell sizes for the rank-n group, all exact integers.

    Returns the parabolic subgroup order and, for each cell index r,
    the stabiliser order a_r, the right-coset count, and the cell size
    |P|**2 / a_r. The cell sizes are asserted to sum to the group order.
    """
    if n < 1:
        raise ValueError("rank must be positive")
    p_order = q ** (n * (n + 1) // 2) * gl_order(n, q)
    rows = []
    total = 0
    for r in range(n + 1):
        exp2 = n * (n + 1) + r * (2 * n - 3 * r - 1)
        if exp2 % 2 or exp2 < 0:
            raise InvariantError(f"bad stabiliser exponent at {n=} {r=}")
        a_r = gl_order(r, q) * gl_order(n - r, q) * q ** (exp2 // 2)
        cosets = q ** (r * (r + 1) // 2) * qbinom(n, r, q)
        tail = 1
        for j in range(1, n + 1):
            tail *= q**j - 1
        cell = q ** (n * n) * qbinom(n, r, q) * q ** (r * (r - 1) // 2) * q**r * tail
        if p_order**2 % a_r or p_order**2 // a_r != cell:
            raise InvariantError(f"cell size mismatch at {n=} {r=}")
        if p_order * cosets != cell:
            raise InvariantError(f"coset count mismatch at {n=} {r=}")
        rows.append({"r": r, "a_r": a_r, "cosets": cosets, "cell": cell})
        total += cell
    expected = order_sp(n, q)
    if total != expected:
        raise InvariantError(
            f"cell sizes sum to {total}, group order is {expected}"
        )
    return {"n": n, "q": q, "p_order": p_order, "rows": rows, "total": total}


# -- trace distributions and character sums -------------------------------


def trace_dist_closed(ctx: FieldCtx, which: str) -> dict:
    """Closed-form count of group elements with each matrix trace."""
    q = ctx.q
    out = {}
    if group_rank(which) == 1:
        for beta in ctx.elements():
            disc = ctx.sub(ctx.mul(beta, beta), ctx.one)
            if disc == ctx.zero:
                out[beta] = q * q
            elif ctx.is_square(disc):
                out[beta] = q * q + q
            else:
                out[beta] = q * q - q
    else:
        base0 = q**5 - q**2 - 3 * q + 3
        base = q**5 - q**3 - q**2 - 2 * q + 3
        for beta in ctx.elements():
            d2 = delta_count(ctx, 2, beta)
            out[beta] = q**4 * (d2 + (base0 if beta == ctx.zero else base))
    total = sum(out.values())
    expected = order_sp(group_rank(which), q)
    if total != expected:
        raise InvariantError(
            f"closed trace distribution sums to {total}, expected {expected}"
        )
    return out


def _gauss_from_hist(ctx: FieldCtx, hist: dict, a: FieldElement) -> Eisenstein:
    counts = ExponentCounts()
    for beta, c in hist.items():
        counts.tally(ctx.trace(ctx.mul(a, beta)), c)
    return counts.to_eisenstein()


def expected_gauss(ctx: FieldCtx, rank: int, a: FieldElement) -> Eisenstein:
    """Kloosterman-sum expression the group character sum must equal."""
    k = kloosterman(ctx, ctx.mul(a, a))
    q = ctx.q
    if rank == 1:
        return Eisenstein(q * k, 0)
    if rank == 2:
        return Eisenstein(q**4 * (k * k + q**3 - q), 0)
    raise ValueError("character sums implemented for ranks 1 and 2 only")


def gauss_sum(table: GroupTable, a: FieldElement) -> Eisenstein:
    """Sum of character values at a * trace(w) over the enumerated group.

    Asserted equal to the closed Kloosterman expression for the rank.
    """
    ctx = table.ctx
    if a == ctx.zero:
        raise ValueError("character sum twist must be nonzero")
    val = _gauss_from_hist(ctx, table.trace_hist, a)
    want = expected_gauss(ctx, table.n, a)
    if val != want:
        raise InvariantError(
            f"group character sum mismatch at a={a}: tallied {val}, "
            f"Kloosterman form gives {want}"
        )
    return val


def gauss_sum_closed(ctx: FieldCtx, which: str, a: FieldElement) -> Eisenstein:
    """Same check as :func:`gauss_sum` but from the closed distribution."""
    if a == ctx.zero:
        raise ValueError("character sum twist must be nonzero")
    val = _gauss_from_hist(ctx, trace_dist_closed(ctx, which), a)
    want = expected_gauss(ctx, group_rank(which), a)
    if val != want:
        raise InvariantError(
            f"closed-form character sum mismatch at a={a}: {val} vs {want}"
        )
    return val


def trace_dist_via_gauss(table: GroupTable) -> dict:
    """Recover the trace distribution by character-sum inversion.

    q * N(beta) = |G| + sum over nonzero a of w**trace(-a*beta) times
    the group character sum at a; evaluated exactly, with integrality
    and divisibility asserted.
    """
    ctx = table.ctx
    q = ctx.q
    gvals = {a: gauss_sum(table, a) for a in ctx.units()}
    order = len(table)
    out = {}
    for beta in ctx.elements():
        acc = Eisenstein(order, 0)
        for a, g in gvals.items():
            e = ctx.trace(ctx.neg(ctx.mul(a, beta)))
            acc = acc + Eisenstein.omega_power(e) * g
        v = acc.to_int()
        if v % q:
            raise InvariantError(f"inversion gave non-divisible count at {beta}: {v}")
        out[beta] = v // q
    return out


def closure_spot_check(table: GroupTable, pairs: int = 1000, seed: int = 0) -> bool:
    """Products of random element pairs stay inside the enumerated set."""
    rng = random.Random(seed)
    n = len(table)
    ctx = table.ctx
    for _ in range(pairs):
        x = table.matrix(rng.randrange(n))
        y = table.matrix(rng.randrange(n))
        if mat_mul(ctx, x, y) not in table:
            return False
    return True


# -- rank-2 element cache --------------------------------------------------

# Each matrix is one little-endian uint32: the 16 row-major entries as
# base-3 digits, first entry least significant.


def save_sp4_cache(table: GroupTable, path) -> None:
    if table.n != 2 or table.ctx.q != 3:
        raise ValueError("cache format is specific to the rank-2 group at q = 3")
    flat = table.entry_indices.reshape(len(table), 16).astype(np.uint64)
    powers = 3 ** np.arange(16, dtype=np.uint64)
    vals = (flat * powers).sum(axis=1).astype("<u4")
    Path(path).write_bytes(vals.tobytes())


def load_sp4_cache(ctx: FieldCtx, path) -> GroupTable:
    """Load a cached element list, re-validating count and trace histogram."""
    if ctx.q != 3:
        raise ValueError("cache format is specific to q = 3")
    raw = Path(path).read_bytes()
    if len(raw) % 4:
        raise ValueError(f"cache file {path} is truncated")
    vals = np.frombuffer(raw, dtype="<u4").astype(np.int64)
    if vals.size and int(vals.max()) >= 3**16:
        raise ValueError(f"cache file {path} holds out-of-range values")
    digits = np.empty((vals.size, 16), dtype=np.int64)
    rest = vals.copy()
    for k in range(16):
        digits[:, k] = rest % 3
        rest //= 3
    table = _sp4_table_from_entries(ctx, digits.reshape(-1, 4, 4))
    if len(table) != SP4_ORDER_Q3:
        raise ValueError(
            f"cache file {path} holds {len(table)} matrices, expected {SP4_ORDER_Q3}"
        )
    if table.trace_hist != trace_dist_closed(ctx, SP4):
        raise ValueError(f"cache file {path} failed the trace histogram check")
    return table
