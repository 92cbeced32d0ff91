"""Exact arithmetic in GF(3**r).

Field elements are length-r tuples of integers in {0, 1, 2}, holding the
coordinates of the element in the polynomial basis, constant term first.
A :class:`FieldCtx` fixes the extension degree and a monic irreducible
modulus; every operation is a pure function of its inputs, so a context
can be shared freely between threads.

The default modulus for each degree is found by deterministic search:
the lexicographically smallest monic irreducible polynomial, ordered on
the coefficient tuple (constant term first).
"""

from __future__ import annotations

import itertools
from functools import cached_property

from .errors import InvariantError

FieldElement = tuple[int, ...]

MAX_DEGREE = 8


class ReducibleModulusError(ValueError):
    """Proposed modulus has a nontrivial monic factor (stored in ``factor``)."""

    def __init__(self, modulus, factor):
        self.modulus = tuple(modulus)
        self.factor = tuple(factor)
        super().__init__(
            f"modulus {poly_csv(modulus)} is reducible: "
            f"divisible by {poly_csv(factor)}"
        )


def poly_csv(coeffs) -> str:
    """Render a coefficient vector as 'c0,c1,...' (constant term first)."""
    return ",".join(str(c) for c in coeffs)


def _poly_rem(num, den):
    """Remainder of num mod den over GF(3); den must have invertible lead."""
    num = list(num)
    d = len(den) - 1
    while len(den) > 1 and den[-1] == 0:
        raise ValueError("divisor has zero leading coefficient")
    inv_lead = 1 if den[-1] == 1 else 2  # 2*2 = 4 = 1 mod 3
    for k in range(len(num) - 1, d - 1, -1):
        c = num[k]
        if c:
            f = (c * inv_lead) % 3
            for i in range(d + 1):
                num[k - d + i] = (num[k - d + i] - f * den[i]) % 3
    rem = num[:d]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return rem


def _find_factor(poly):
    """Smallest monic factor of degree <= deg/2, or None if irreducible.

    Trial division; fine for the supported degrees (<= 8).
    """
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(3), repeat=d):
            cand = list(tail) + [1]
            if not any(_poly_rem(poly, cand)):
                return tuple(cand)
    return None


def _default_modulus(r):
    for tail in itertools.product(range(3), repeat=r):
        cand = tuple(tail) + (1,)
        if _find_factor(cand) is None:
            return cand
    raise AssertionError(f"no monic irreducible of degree {r}")  # unreachable


class FieldCtx:
    """The field GF(3**r) with a fixed monic irreducible modulus.

    ``modulus`` is the full coefficient vector of length r+1, constant
    term first, leading coefficient 1.
    """

    def __init__(self, r: int, modulus=None):
        if not isinstance(r, int) or r < 1 or r > MAX_DEGREE:
            raise ValueError(f"extension degree must be in 1..{MAX_DEGREE}, got {r}")
        if modulus is None:
            modulus = _default_modulus(r)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != r + 1:
                raise ValueError(
                    f"modulus must have degree {r} ({r + 1} coefficients), "
                    f"got {len(modulus)}"
                )
            if modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if any(c not in (0, 1, 2) for c in modulus):
                raise ValueError("modulus coefficients must lie in {0, 1, 2}")
            factor = _find_factor(modulus)
            if factor is not None:
                raise ReducibleModulusError(modulus, factor)
        self.r = r
        self.q = 3**r
        self.modulus = modulus
        # x**k mod modulus for k = r .. 2r-2, used during multiplication
        xpow = []
        cur = [(-modulus[i]) % 3 for i in range(r)]
        xpow.append(tuple(cur))
        for _ in range(r + 1, 2 * r - 1):
            new = [0] + cur[:-1]
            ov = cur[-1]
            if ov:
                for t in range(r):
                    new[t] = (new[t] + ov * xpow[0][t]) % 3
            cur = new
            xpow.append(tuple(cur))
        self._xpow = xpow

    def __repr__(self):
        return f"FieldCtx(r={self.r}, modulus={poly_csv(self.modulus)})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.r == other.r
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.r, self.modulus))

    # -- element plumbing ------------------------------------------------

    @cached_property
    def zero(self) -> FieldElement:
        return (0,) * self.r

    @cached_property
    def one(self) -> FieldElement:
        return (1,) + (0,) * (self.r - 1)

    def element(self, coeffs) -> FieldElement:
        """Validate and normalise a coefficient sequence."""
        x = tuple(int(c) for c in coeffs)
        if len(x) != self.r or any(c not in (0, 1, 2) for c in x):
            raise ValueError(f"not a valid element of GF(3**{self.r}): {coeffs}")
        return x

    def scalar(self, k: int) -> FieldElement:
        """The prime-field element k mod 3, embedded."""
        return (k % 3,) + (0,) * (self.r - 1)

    def index(self, x: FieldElement) -> int:
        """Position of x in the lexicographic element order."""
        i = 0
        for c in x:
            i = 3 * i + c
        return i

    def element_at(self, i: int) -> FieldElement:
        coeffs = []
        for k in range(self.r - 1, -1, -1):
            coeffs.append((i // 3**k) % 3)
        return tuple(coeffs)

    @cached_property
    def _elements(self) -> tuple[FieldElement, ...]:
        return tuple(itertools.product(range(3), repeat=self.r))

    def elements(self) -> tuple[FieldElement, ...]:
        """All q elements in lexicographic order on the coefficient tuple."""
        return self._elements

    def units(self) -> tuple[FieldElement, ...]:
        """All q-1 nonzero elements, in element order (zero sorts first)."""
        return self._elements[1:]

    # -- arithmetic ------------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return tuple((x + y) % 3 for x, y in zip(a, b))

    def neg(self, a: FieldElement) -> FieldElement:
        return tuple((-x) % 3 for x in a)

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return tuple((x - y) % 3 for x, y in zip(a, b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        r = self.r
        if r == 1:
            return ((a[0] * b[0]) % 3,)
        conv = [0] * (2 * r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        res = [c % 3 for c in conv[:r]]
        for k in range(r, 2 * r - 1):
            ck = conv[k] % 3
            if ck:
                red = self._xpow[k - r]
                for t in range(r):
                    res[t] = (res[t] + ck * red[t]) % 3
        return tuple(res)

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: FieldElement) -> FieldElement:
        if a == self.zero:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.pow(a, self.q - 2)

    def trace(self, x: FieldElement) -> int:
        """Absolute trace to GF(3): x + x**3 + ... + x**(3**(r-1))."""
        acc = x
        t = x
        for _ in range(self.r - 1):
            t = self.mul(self.mul(t, t), t)
            acc = self.add(acc, t)
        if any(acc[1:]):
            raise InvariantError(f"trace left the prime field: {acc}")
        return acc[0]

    def is_square(self, x: FieldElement) -> bool:
        """True iff x is a square in the field (0 counts as a square)."""
        if x == self.zero:
            return True
        return self.pow(x, (self.q - 1) // 2) == self.one


def field_new(r: int, modulus=None) -> FieldCtx:
    """Build a field context, searching for a default modulus if none given."""
    return FieldCtx(r, modulus)
