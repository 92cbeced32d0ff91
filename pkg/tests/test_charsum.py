from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spcodes import charsum
from spcodes.charsum import Eisenstein, ExponentCounts
from spcodes.errors import InvariantError

ints = st.integers(-10**6, 10**6)


class TestEisenstein:
    def test_omega_relations(self):
        w = Eisenstein.omega_power(1)
        assert w * w == Eisenstein.omega_power(2)
        assert w * w * w == Eisenstein(1, 0)
        assert Eisenstein(1, 0) + w + w * w == Eisenstein(0, 0)

    def test_integer_detection(self):
        assert Eisenstein(5, 0).to_int() == 5
        with pytest.raises(InvariantError):
            Eisenstein(1, 1).to_int()

    @given(ints, ints, ints, ints, ints, ints)
    def test_ring_laws(self, a, b, c, d, e, f):
        x, y, z = Eisenstein(a, b), Eisenstein(c, d), Eisenstein(e, f)
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z

    @given(ints, ints, st.integers(-50, 50))
    def test_int_coercion(self, a, b, n):
        assert Eisenstein(a, b) * n == Eisenstein(a * n, b * n)
        assert Eisenstein(a, b) + n == Eisenstein(a + n, b)

    def test_exponent_counts_value(self):
        c = ExponentCounts(3, 2, 2)
        assert c.to_eisenstein() == Eisenstein(1, 0)
        assert (c + ExponentCounts(0, 1, 0)).to_eisenstein() == Eisenstein(1, 1)


class TestKloosterman:
    def test_prime_field_values(self, f3):
        assert charsum.kloosterman(f3, (1,)) == -1
        assert charsum.kloosterman(f3, (2,)) == 2

    def test_zero_argument_rejected(self, f3):
        with pytest.raises(ValueError):
            charsum.kloosterman(f3, f3.zero)

    def test_tallies_symmetric(self, fq):
        """The w and w**2 exponents appear equally often, for every a."""
        for a in fq.units():
            counts = charsum.kloosterman_counts(fq, a)
            assert counts.n1 == counts.n2
            assert counts.n0 + counts.n1 + counts.n2 == fq.q - 1

    def test_weil_bound(self, fq):
        for a in fq.units():
            k = charsum.kloosterman(fq, a)
            assert k * k <= 4 * fq.q


class TestMoments:
    def test_mk_small(self, f3):
        assert [charsum.mk(f3, h) for h in range(3)] == [2, 1, 5]

    def test_mk_sum_rule(self, fq):
        assert charsum.mk(fq, 1) == 1

    def test_sk_small(self, f3):
        assert [charsum.sk(f3, h) for h in range(3)] == [1, -1, 1]

    def test_sk_prime_field_alternates(self, f3):
        # the only nonzero square is 1, and K(1) = -1
        for h in range(11):
            assert charsum.sk(f3, h) == (-1) ** h

    def test_sk_zeroth_counts_squares(self, fq):
        assert charsum.sk(fq, 0) == (fq.q - 1) // 2


class TestDeltaCounts:
    def test_zero_order_indicator(self, f3):
        assert charsum.delta_count(f3, 0, f3.zero) == 1
        assert charsum.delta_count(f3, 0, (1,)) == 0

    def test_prime_field_values(self, f3):
        assert [charsum.delta_count(f3, 1, b) for b in f3.elements()] == [0, 1, 1]
        assert [charsum.delta_count(f3, 2, b) for b in f3.elements()] == [2, 1, 1]

    def test_total_counts(self, f3, f9):
        for ctx in (f3, f9):
            for m in range(5):
                total = sum(charsum.delta_count(ctx, m, b) for b in ctx.elements())
                assert total == (ctx.q - 1) ** m

    def test_pair_count_matches_double_loop(self, f9):
        inv = {u: f9.inv(u) for u in f9.units()}
        direct = {}
        for a1, a2 in product(f9.units(), repeat=2):
            s = f9.add(f9.add(a1, inv[a1]), f9.add(a2, inv[a2]))
            direct[s] = direct.get(s, 0) + 1
        for b in f9.elements():
            assert charsum.delta_count(f9, 2, b) == direct.get(b, 0)


class TestMomentIdentity:
    def test_hand_cases(self, f3):
        assert charsum.check_moment_identity(f3, 0, f3.zero)
        assert charsum.check_moment_identity(f3, 1, f3.zero)

    @pytest.mark.parametrize("r", [1, 2])
    @pytest.mark.parametrize("m", range(5))
    def test_all_beta(self, r, m, f3, f9):
        ctx = f3 if r == 1 else f9
        assert all(
            charsum.check_moment_identity(ctx, m, beta) for beta in ctx.elements()
        )


class TestMatrixKloosterman:
    def test_base_cases(self, f3):
        assert charsum.kgl_recursive(f3, 0, (1,)) == 1
        assert charsum.kgl_recursive(f3, 1, (1,)) == charsum.kloosterman(f3, (1,))
        assert charsum.kgl_closed(f3, 1, (1,)) == -1

    def test_rank_two_value(self, f3):
        assert charsum.kgl_recursive(f3, 2, (1,)) == 21
        assert charsum.kgl_closed(f3, 2, (1,)) == 21

    def test_closed_matches_recursion(self, f3, f9):
        for ctx in (f3, f9):
            for t in range(1, 5):
                for a in ctx.units():
                    assert charsum.kgl_closed(ctx, t, a) == charsum.kgl_recursive(
                        ctx, t, a
                    )

    def test_exhaustive_group_sums(self, f3):
        """Recursion equals the literal sum over all invertible matrices."""
        for t in (1, 2):
            for a in f3.units():
                assert charsum.kgl_bruteforce(f3, t, a) == charsum.kgl_recursive(
                    f3, t, a
                )

    def test_zero_argument_rejected(self, f3):
        with pytest.raises(ValueError):
            charsum.kgl_recursive(f3, 2, f3.zero)
        with pytest.raises(ValueError):
            charsum.kgl_closed(f3, 2, f3.zero)
