from itertools import product

import numpy as np
import pytest

from spcodes import symp
from spcodes.charsum import Eisenstein, kloosterman
from spcodes.errors import UnsupportedScaleError
from spcodes.gf import field_new


class TestMatrixPredicates:
    def test_identity_is_symplectic(self, f3):
        assert symp.is_symplectic(f3, symp.identity(f3, 2))

    def test_unit_determinant_diagonal_is_not(self, f3):
        m = symp.matrix(f3, [[(1,), (0,)], [(0,), (2,)]])
        assert not symp.is_symplectic(f3, m)

    def test_coset_representatives_are_symplectic(self, f3, f9):
        for ctx in (f3, f9):
            for n in (1, 2):
                for r in range(n + 1):
                    assert symp.is_symplectic(ctx, symp.bruhat_sigma(ctx, n, r))

    def test_odd_dimension_rejected(self, f3):
        with pytest.raises(ValueError):
            symp.is_symplectic(f3, symp.identity(f3, 3))

    def test_two_by_two_condition_is_det_one(self, f3):
        """Over all 81 matrices: symplectic iff determinant 1."""
        for a, b, c, d in product(f3.elements(), repeat=4):
            m = symp.MatrixGF(((a, b), (c, d)))
            det = f3.sub(f3.mul(a, d), f3.mul(b, c))
            assert symp.is_symplectic(f3, m) == (det == f3.one)


class TestEnumeration:
    @pytest.mark.parametrize("r,expected", [(1, 24), (2, 720), (3, 19656)])
    def test_rank_one_counts(self, r, expected):
        ctx = field_new(r)
        table = symp.enumerate_sp2(ctx)
        assert len(table) == expected == symp.order_sp(1, ctx.q)

    def test_rank_one_elements_all_symplectic_q3(self, f3):
        table = symp.enumerate_sp2(f3)
        assert all(symp.is_symplectic(f3, m) for m in table.elements)

    def test_rank_one_lexicographic_order(self, f9):
        keys = symp.enumerate_sp2(f9).entry_indices.reshape(-1, 4)
        assert sorted(map(tuple, keys.tolist())) == list(map(tuple, keys.tolist()))

    def test_rank_two_count(self, f3):
        assert len(symp.enumerate_sp4(f3)) == 51840

    def test_rank_two_hist(self, f3):
        hist = symp.enumerate_sp4(f3).trace_hist
        assert hist == {(0,): 18630, (1,): 16605, (2,): 16605}

    def test_rank_two_sample_symplectic(self, f3):
        table = symp.enumerate_sp4(f3)
        for i in range(0, len(table), 5000):
            assert symp.is_symplectic(f3, table.matrix(i))

    def test_rank_two_lexicographic_order(self, f3):
        keys = symp.enumerate_sp4(f3).entry_indices.reshape(-1, 16)
        first = np.lexsort(keys.T[::-1])
        assert (first == np.arange(len(keys))).all()

    def test_rank_two_unsupported_scale(self, f9):
        with pytest.raises(UnsupportedScaleError):
            symp.enumerate_sp4(f9)

    def test_closure_spot_check(self, fq):
        table = symp.enumerate_sp2(fq)
        assert symp.closure_spot_check(table, pairs=1000, seed=0)

    def test_closure_spot_check_rank_two(self, f3):
        assert symp.closure_spot_check(symp.enumerate_sp4(f3), pairs=1000, seed=0)


class TestOrders:
    @pytest.mark.parametrize(
        "n,q,expected",
        [(1, 3, 24), (2, 3, 51840), (2, 9, 9**4 * 80 * 6560)],
    )
    def test_closed_order(self, n, q, expected):
        assert symp.order_sp(n, q) == expected

    def test_qbinom_one_slot(self):
        for q in (3, 9, 27):
            assert symp.qbinom(2, 1, q) == q + 1

    @pytest.mark.parametrize("q", [3, 9, 27])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_cell_sizes_sum_to_order(self, n, q):
        table = symp.bruhat_counts(n, q)
        assert table["total"] == symp.order_sp(n, q)

    def test_cells_rank_one(self):
        rows = symp.bruhat_counts(1, 3)["rows"]
        assert [row["cell"] for row in rows] == [6, 18]

    def test_alt_count_values(self):
        assert symp.alt_count(1, 3) == 0
        assert symp.alt_count(2, 3) == 2
        assert symp.alt_count(0, 3) == 1

    def test_alt_count_brute_force(self, f3):
        """All 2x2 alternating matrices: zero diagonal, m01 = -m10."""
        found = 0
        for a, b, c, d in product(f3.elements(), repeat=4):
            if a != f3.zero or d != f3.zero or b != f3.neg(c):
                continue
            det = f3.sub(f3.mul(a, d), f3.mul(b, c))
            if det != f3.zero:
                found += 1
        assert found == symp.alt_count(2, 3)


class TestTraceDistributions:
    def test_rank_one_closed_values_q3(self, f3):
        dist = symp.trace_dist_closed(f3, symp.SP2)
        assert dist == {(0,): 6, (1,): 9, (2,): 9}

    def test_rank_one_matches_enumeration(self, fq):
        table = symp.enumerate_sp2(fq)
        assert table.trace_hist == symp.trace_dist_closed(fq, symp.SP2)

    def test_rank_two_matches_enumeration(self, f3):
        table = symp.enumerate_sp4(f3)
        assert table.trace_hist == symp.trace_dist_closed(f3, symp.SP4)

    def test_rank_two_closed_totals(self, f9, f27):
        for ctx in (f9, f27):
            dist = symp.trace_dist_closed(ctx, symp.SP4)
            assert sum(dist.values()) == symp.order_sp(2, ctx.q)

    def test_trace_surjective(self, fq):
        for which in (symp.SP2, symp.SP4):
            assert min(symp.trace_dist_closed(fq, which).values()) > 0


class TestGaussSums:
    def test_rank_one_value_q3(self, f3):
        table = symp.enumerate_sp2(f3)
        assert symp.gauss_sum(table, (1,)) == Eisenstein(-3, 0)
        assert symp.gauss_sum(table, (2,)) == Eisenstein(-3, 0)

    def test_rank_two_value_q3(self, f3):
        assert symp.gauss_sum(symp.enumerate_sp4(f3), (1,)) == Eisenstein(2025, 0)

    def test_rank_one_all_arguments(self, fq):
        table = symp.enumerate_sp2(fq)
        q = fq.q
        for a in fq.units():
            k = kloosterman(fq, fq.mul(a, a))
            assert symp.gauss_sum(table, a) == Eisenstein(q * k, 0)

    def test_closed_route_rank_two(self, f9):
        for a in f9.units():
            val = symp.gauss_sum_closed(f9, symp.SP4, a)
            assert val.is_rational_integer

    def test_zero_twist_rejected(self, f3):
        with pytest.raises(ValueError):
            symp.gauss_sum(symp.enumerate_sp2(f3), f3.zero)

    def test_inversion_recovers_histogram(self, fq):
        table = symp.enumerate_sp2(fq)
        assert symp.trace_dist_via_gauss(table) == table.trace_hist

    def test_inversion_recovers_histogram_rank_two(self, f3):
        table = symp.enumerate_sp4(f3)
        assert symp.trace_dist_via_gauss(table) == table.trace_hist


class TestCache:
    def test_round_trip(self, f3, tmp_path):
        table = symp.enumerate_sp4(f3)
        path = tmp_path / "sp4.u32"
        symp.save_sp4_cache(table, path)
        assert path.stat().st_size == 51840 * 4
        loaded = symp.load_sp4_cache(f3, path)
        assert (loaded.entry_indices == table.entry_indices).all()
        assert loaded.trace_hist == table.trace_hist

    def test_truncated_cache_rejected(self, f3, tmp_path):
        path = tmp_path / "bad.u32"
        path.write_bytes(b"\x01\x02\x03")
        with pytest.raises(ValueError):
            symp.load_sp4_cache(f3, path)

    def test_wrong_content_rejected(self, f3, tmp_path):
        path = tmp_path / "zeros.u32"
        path.write_bytes(bytes(4 * 51840))
        with pytest.raises(ValueError):
            symp.load_sp4_cache(f3, path)
