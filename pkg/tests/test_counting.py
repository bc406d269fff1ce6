import math
from fractions import Fraction

import numpy as np
import pytest

from shortcycles.counting import (
    SparsePMF,
    brute_force_count,
    brute_force_pmf,
    count_ratio_check,
    count_table,
    expected_count,
    first_element_cycle_length_pmf,
    joint_pmf,
    restricted_count_table,
    support_size,
)
from shortcycles.errors import ResourceLimitError
from shortcycles.permutations import CountsVector


class TestCountTable:
    def test_trivial_below_r(self):
        t = count_table(6, 6)
        assert all(t.fraction(m) == 1 for m in range(7))

    def test_identity_only(self):
        assert count_table(3, 1).fraction(3) == Fraction(1, 6)

    def test_s4_r2(self):
        assert count_table(4, 2).fraction(4) == Fraction(5, 12)

    @pytest.mark.parametrize("n,r", [(5, 2), (6, 3), (7, 4), (8, 5)])
    def test_against_brute_force(self, n, r):
        t = count_table(n, r)
        assert t.count(n) == brute_force_count(n, r)

    def test_counts_are_integers(self):
        t = count_table(8, 3)
        for m in range(9):
            value = t.fraction(m) * math.factorial(m)
            assert value.denominator == 1

    def test_double_matches_exact(self):
        exact = count_table(200, 17, "exact")
        double = count_table(200, 17, "double")
        for m in range(0, 201, 10):
            assert double.fraction(m) == pytest.approx(float(exact.fraction(m)), rel=1e-12)

    def test_monotone_in_m_and_r(self):
        tables = {r: count_table(12, r) for r in range(1, 13)}
        for r, t in tables.items():
            for m in range(12):
                assert t.fraction(m) >= t.fraction(m + 1)
        for r in range(1, 12):
            for m in range(13):
                assert tables[r].fraction(m) <= tables[r + 1].fraction(m)

    def test_csv_roundtrip(self, tmp_path):
        t = count_table(5, 2)
        path = tmp_path / "nu.csv"
        t.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "m,nu_exact_num,nu_exact_den"
        assert len(lines) == 7
        m, num, den = lines[-1].split(",")
        assert Fraction(int(num), int(den)) == t.fraction(5)

    def test_validation(self):
        with pytest.raises(ValueError):
            count_table(-1, 2)
        with pytest.raises(ValueError):
            count_table(5, 0)
        with pytest.raises(ValueError):
            count_table(5, 2).fraction(6)


class TestRestrictedTable:
    def test_d_zero_reproduces_full_table(self):
        mu = restricted_count_table(0, 3, 8)
        nu = count_table(8, 3)
        assert all(mu.fraction(m) == nu.fraction(m) for m in range(9))

    def test_zero_below_window(self):
        mu = restricted_count_table(2, 5, 8)
        assert mu.fraction(0) == 1
        assert mu.fraction(1) == 0 and mu.fraction(2) == 0

    def test_three_cycles_only(self):
        # window (2, 3]: exactly the two 3-cycles of S_3
        mu = restricted_count_table(2, 3, 4)
        assert mu.fraction(3) == Fraction(2, 6)

    def test_empty_window(self):
        mu = restricted_count_table(3, 3, 5)
        assert mu.fraction(0) == 1
        assert all(mu.fraction(m) == 0 for m in range(1, 6))

    def test_validation(self):
        with pytest.raises(ValueError):
            restricted_count_table(4, 3, 5)


class TestFirstElementLaw:
    def test_uniform_when_unrestricted(self):
        n = 9
        pmf = first_element_cycle_length_pmf(n, n, count_table(n, n))
        assert all(p == Fraction(1, n) for p in pmf)

    def test_n4_r2(self):
        t = count_table(4, 2)
        pmf = first_element_cycle_length_pmf(4, 2, t)
        assert pmf[0] == Fraction(2, 5)
        assert pmf[1] == Fraction(3, 5)
        assert sum(pmf) == 1

    @pytest.mark.parametrize("n,r", [(6, 3), (7, 2), (8, 8), (9, 4)])
    def test_sums_to_one_and_positive(self, n, r):
        pmf = first_element_cycle_length_pmf(n, r, count_table(n, r))
        assert sum(pmf) == 1
        assert all(p > 0 for p in pmf)

    def test_validation(self):
        with pytest.raises(ValueError):
            first_element_cycle_length_pmf(4, 5, count_table(5, 5))
        with pytest.raises(ValueError):
            first_element_cycle_length_pmf(9, 3, count_table(5, 3))


class TestJointLaw:
    def test_n4_r2_d1(self):
        pmf = joint_pmf(4, 2, 1)
        assert pmf.entries == {
            CountsVector((0,)): Fraction(3, 10),
            CountsVector((2,)): Fraction(6, 10),
            CountsVector((4,)): Fraction(1, 10),
        }

    def test_n3_full(self):
        pmf = joint_pmf(3, 3, 3)
        assert pmf.probability((3, 0, 0)) == Fraction(1, 6)
        assert pmf.probability((1, 1, 0)) == Fraction(3, 6)
        assert pmf.probability((0, 0, 1)) == Fraction(2, 6)

    @pytest.mark.parametrize("n,r,d", [(5, 3, 2), (6, 4, 3), (7, 3, 3), (6, 6, 6)])
    def test_matches_brute_force(self, n, r, d):
        assert joint_pmf(n, r, d).entries == brute_force_pmf(n, r, d).entries

    def test_total_mass_one(self):
        for n, r, d in [(9, 5, 2), (10, 10, 4)]:
            assert joint_pmf(n, r, d).total_mass == 1

    def test_support_cap(self):
        with pytest.raises(ResourceLimitError, match=r"\d+ vectors"):
            joint_pmf(30, 30, 5, cap=10)

    def test_support_size_matches_enumeration(self):
        pmf = joint_pmf(6, 6, 2)
        grid = {(c1, c2) for c1 in range(7) for c2 in range(4) if c1 + 2 * c2 <= 6}
        assert support_size(6, 2) == len(grid)

    def test_validation(self):
        with pytest.raises(ValueError):
            joint_pmf(4, 2, 3)


class TestBruteForce:
    def test_derangements(self):
        pmf = brute_force_pmf(4, 4, 1)
        assert pmf.probability((0,)) == Fraction(9, 24)

    def test_point_mass_n1(self):
        pmf = brute_force_pmf(1, 1, 1)
        assert pmf.entries == {CountsVector((1,)): Fraction(1)}

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("SHORTCYCLES_BRUTE_FORCE_CAP", "5")
        with pytest.raises(ResourceLimitError):
            brute_force_pmf(6, 3, 1)
        with pytest.raises(ResourceLimitError):
            brute_force_count(6, 3)


class TestExpectedCount:
    def test_unrestricted_is_reciprocal(self):
        t = count_table(12, 12)
        for k in range(1, 13):
            assert expected_count(12, 12, k, t) == Fraction(1, k)

    def test_n4_r2(self):
        assert expected_count(4, 2, 1) == Fraction(8, 5)
        pmf = joint_pmf(4, 2, 1)
        assert pmf.expectation(1) == Fraction(8, 5)

    @pytest.mark.parametrize("n,r,d", [(6, 3, 3), (7, 4, 2), (8, 5, 4)])
    def test_consistent_with_joint_law(self, n, r, d):
        t = count_table(n, r)
        pmf = joint_pmf(n, r, d)
        for k in range(1, d + 1):
            assert expected_count(n, r, k, t) == pmf.expectation(k)

    def test_zero_above_r(self):
        assert expected_count(6, 3, 5) == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            expected_count(5, 3, 6)
        with pytest.raises(ValueError):
            expected_count(5, 6, 1)


class TestSparsePMF:
    def test_from_samples(self):
        vectors = [CountsVector((1, 0)), CountsVector((1, 0)), CountsVector((0, 1))]
        pmf = SparsePMF.from_samples(vectors, 2)
        assert pmf.probability((1, 0)) == Fraction(2, 3)
        assert pmf.total_mass == 1

    def test_from_samples_rejects_empty(self):
        with pytest.raises(ValueError):
            SparsePMF.from_samples([], 1)

    def test_csv(self, tmp_path):
        pmf = joint_pmf(4, 2, 2)
        path = tmp_path / "pmf.csv"
        pmf.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "c_1,c_2,probability"
        assert len(lines) == len(pmf.entries) + 1


class TestRatioCheck:
    def test_unrestricted_gap_is_zero(self):
        report = count_ratio_check(50, 50, 3)
        assert report.exact_ratio == 1.0
        assert report.predicted == 1.0
        assert report.relative_gap == 0.0

    def test_k_zero(self):
        assert count_ratio_check(100, 80, 0).exact_ratio == 1.0

    def test_moderate_case_small_gap(self):
        n, r, k = 10000, 5000, 3
        report = count_ratio_check(n, r, k, count_table(n, r, "double"))
        u = n / r
        assert report.relative_gap <= 5 * u * math.log(u + 1) / r

    def test_warns_outside_regime(self):
        with pytest.warns(UserWarning):
            count_ratio_check(100, 5, 1, count_table(100, 5, "double"))
