from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spcodes import codes
from spcodes.charsum import kloosterman
from spcodes.errors import InvariantError, UnsupportedScaleError
from spcodes.codes import CodeSpec, WeightDistribution


@pytest.fixture(scope="module")
def spec2_q3(f3):
    return CodeSpec.for_group(f3, "sp2")


@pytest.fixture(scope="module")
def spec2_q9(f9):
    return CodeSpec.for_group(f9, "sp2")


@pytest.fixture(scope="module")
def spec4_q3(f3):
    return CodeSpec.for_group(f3, "sp4")


class TestCombinatorics:
    def test_multinomial_convention(self):
        # selections larger than the pool count zero
        assert codes.multinomial2(2, 2, 1) == 0
        assert codes.multinomial2(5, 2, 1) == 30
        assert codes.multinomial2(6, 1, 1) == 30

    @given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
    def test_multinomial_symmetry(self, c, a, b):
        assert codes.multinomial2(c, a, b) == codes.multinomial2(c, b, a)

    def test_stirling_values(self):
        assert codes.stirling2(3, 2) == 3
        assert codes.stirling2(1, 0) == 0
        assert codes.stirling2(0, 0) == 1
        for h in range(1, 11):
            assert codes.stirling2(h, h) == 1
            assert codes.stirling2(h, 1) == 1

    @given(st.integers(2, 20), st.integers(1, 19))
    def test_stirling_recurrence(self, h, t):
        if t > h:
            t = h
        assert codes.stirling2(h, t) == t * codes.stirling2(
            h - 1, t
        ) + codes.stirling2(h - 1, t - 1)


class TestDualCodewords:
    def test_zero_scalar_gives_zero_word(self, spec2_q3):
        assert codes.weight(codes.dual_codeword(spec2_q3, (0,))) == 0

    def test_weight_rank_one_q3(self, spec2_q3):
        word = codes.dual_codeword(spec2_q3, (1,))
        assert codes.weight(word) == 18
        assert sum(1 for s in word.symbols if s) == 18

    def test_weight_rank_two_q3(self, spec4_q3):
        assert codes.weight(codes.dual_codeword(spec4_q3, (1,))) == 33210

    def test_injectivity(self, spec2_q3, spec2_q9, spec4_q3):
        for spec in (spec2_q3, spec2_q9, spec4_q3):
            words = {codes.dual_codeword(spec, a) for a in spec.ctx.elements()}
            assert len(words) == spec.ctx.q

    def test_weight_formula(self, spec2_q3, spec2_q9, spec4_q3):
        for spec in (spec2_q3, spec2_q9, spec4_q3):
            assert codes.check_dual_weight_formula(spec)

    def test_weight_formula_rank_one_q27(self, f27):
        assert codes.check_dual_weight_formula(CodeSpec.for_group(f27, "sp2"))

    def test_weight_formula_closed_routes(self, f9, f27):
        assert codes.check_dual_weight_formula_closed(f9, "sp4")
        assert codes.check_dual_weight_formula_closed(f27, "sp4")

    def test_formula_integrality(self, fq):
        """q**2 - 1 - K(a**2) is divisible by 3 for every a."""
        for a in fq.units():
            assert (fq.q**2 - 1 - kloosterman(fq, fq.mul(a, a))) % 3 == 0


class TestDualDistribution:
    def test_rank_one_q3(self, spec2_q3):
        assert codes.dual_weight_distribution(spec2_q3).counts == {0: 1, 18: 2}

    def test_rank_two_q3(self, spec4_q3):
        assert codes.dual_weight_distribution(spec4_q3).counts == {0: 1, 33210: 2}

    def test_rank_one_q9(self, spec2_q9, f9):
        dist = codes.dual_weight_distribution(spec2_q9)
        assert dist.total() == 9
        for w, c in dist.counts.items():
            assert w % 6 == 0  # every weight is (2/3)*9*(80 - K)
        expected = {0: 1}
        for a in f9.units():
            w = 6 * (80 - kloosterman(f9, f9.mul(a, a)))
            expected[w] = expected.get(w, 0) + 1
        assert dist.counts == expected

    def test_closed_route_agrees(self, spec4_q3, f3):
        assert (
            codes.dual_weight_distribution_closed(f3, "sp4").counts
            == codes.dual_weight_distribution(spec4_q3).counts
        )

    def test_json_round_trip(self, spec4_q3):
        dist = codes.dual_weight_distribution(spec4_q3)
        blob = dist.to_json_dict()
        assert blob["counts"][0] == [0, "1"]
        assert WeightDistribution.from_json_dict(blob) == dist


class TestWeightCounts:
    def test_zeroth_and_first(self, spec2_q3):
        counts = codes.small_weight_counts(spec2_q3, 1)
        assert counts.counts[0] == 1
        assert counts.counts[1] == 12  # 2 * (elements of trace zero)

    def test_triple_route_agreement_q3(self, spec2_q3):
        dual = codes.dual_weight_distribution(spec2_q3)
        enum = codes.small_weight_counts(spec2_q3, 6)
        macw = codes.macwilliams(dual, spec2_q3.length, 6)
        brute = codes.bruteforce_weight_counts(spec2_q3, 6)
        assert enum.counts == macw.counts == brute.counts
        assert enum.counts[2] == 366

    def test_rank_two_routes_q3(self, spec4_q3, f3):
        enum = codes.small_weight_counts(spec4_q3, 4)
        dual = codes.dual_weight_distribution(spec4_q3)
        macw = codes.macwilliams(dual, spec4_q3.length, 4)
        assert enum.counts == macw.counts
        # single nonzero symbol must sit on a zero-trace coordinate
        assert enum.counts[1] == 2 * 18630
        direct_j1 = sum(
            2 for beta in spec4_q3.trace_vector if beta == f3.zero
        )
        assert enum.counts[1] == direct_j1

    def test_bruteforce_guard(self, spec4_q3):
        with pytest.raises(UnsupportedScaleError):
            codes.bruteforce_weight_counts(spec4_q3, 6)

    def test_jmax_guard(self, spec2_q3):
        with pytest.raises(ValueError):
            codes.small_weight_counts(spec2_q3, 13)


class TestMacWilliams:
    def test_trivial_dual(self):
        # dual {0}: the code is the whole space
        full = codes.macwilliams(WeightDistribution(2, {0: 1}), 2)
        assert full.counts == {0: 1, 1: 4, 2: 4}

    def test_full_transform_total_q3(self, spec2_q3):
        dual = codes.dual_weight_distribution(spec2_q3)
        full = codes.macwilliams(dual, spec2_q3.length)
        assert full.total() == 3 ** (spec2_q3.length - 1)

    def test_inexact_division_detected(self):
        with pytest.raises(InvariantError):
            codes.macwilliams(WeightDistribution(4, {0: 1, 1: 1, 2: 1}), 4)


class TestPless:
    def test_hand_checked_first_moment(self, spec2_q3):
        lhs, rhs = codes.pless_sides(spec2_q3, 1)
        assert lhs == 36
        assert rhs == Fraction(36)

    def test_zeroth_moment_counts_dual_words(self, spec2_q3):
        lhs, rhs = codes.pless_sides(spec2_q3, 0)
        assert lhs == 3 == rhs

    @pytest.mark.parametrize("h", range(7))
    def test_rank_one_q3(self, spec2_q3, h):
        assert codes.pless_verify(spec2_q3, h)

    @pytest.mark.parametrize("h", range(7))
    def test_rank_two_q3(self, spec4_q3, h):
        assert codes.pless_verify(spec4_q3, h)

    @pytest.mark.parametrize("h", range(7))
    def test_rank_one_q9(self, spec2_q9, h):
        assert codes.pless_verify(spec2_q9, h)

    def test_closed_route_rank_two_q9(self, f9):
        for h in range(3):
            lhs, rhs = codes.pless_sides_closed(f9, "sp4", h)
            assert lhs == rhs

    def test_h_guard(self, spec2_q3):
        with pytest.raises(ValueError):
            codes.pless_verify(spec2_q3, 11)


class TestCodeSpec:
    def test_lengths(self, spec2_q3, spec4_q3):
        assert spec2_q3.length == 24 == len(spec2_q3.trace_vector)
        assert spec4_q3.length == 51840 == len(spec4_q3.trace_vector)

    def test_trace_vector_multiset(self, spec2_q9, f9):
        from collections import Counter

        from spcodes.symp import trace_dist_closed

        assert Counter(spec2_q9.trace_vector) == trace_dist_closed(f9, "sp2")
