import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shortcycles.permutations import (
    CountsVector,
    Permutation,
    Transposition,
    apply_transposition,
    cycle_counts,
    cycle_structure,
    longest_cycle,
    permutations_with_bounded_cycles,
)


def perms(max_n=24):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(list(range(n)))).map(Permutation)


class TestPermutation:
    def test_identity(self):
        assert Permutation.identity(4).mapping == (0, 1, 2, 3)

    @pytest.mark.parametrize("bad", [[], [0, 0], [1, 2], [0, 2], [-1, 0]])
    def test_rejects_non_bijections(self, bad):
        with pytest.raises(ValueError):
            Permutation(bad)

    def test_hashable_and_eq(self):
        assert Permutation((1, 0)) == Permutation([1, 0])
        assert len({Permutation((1, 0)), Permutation((1, 0))}) == 1


class TestTransposition:
    def test_unordered(self):
        assert Transposition(3, 1) == Transposition(1, 3)

    def test_rejects_equal(self):
        with pytest.raises(ValueError):
            Transposition(2, 2)


class TestCycleStructure:
    def test_identity_n4(self):
        s = cycle_structure(Permutation.identity(4))
        assert s.lengths == (1, 1, 1, 1)
        assert s.cycles == ((0,), (1,), (2,), (3,))

    def test_two_transpositions(self):
        s = cycle_structure(Permutation((1, 0, 3, 2)))
        assert s.lengths == (2, 2)

    def test_three_two_split(self):
        # orbit of 0: 0 -> 1 -> 2 -> 0; orbit of 3: 3 -> 4 -> 3
        s = cycle_structure(Permutation((1, 2, 0, 4, 3)))
        assert s.lengths == (2, 3)
        assert s.cycles == ((0, 1, 2), (3, 4))
        assert s.cycle_length[0] == 3 and s.cycle_length[4] == 2

    def test_cycles_sorted_by_minimum(self):
        s = cycle_structure(Permutation((2, 3, 0, 1, 4)))
        assert [c[0] for c in s.cycles] == sorted(c[0] for c in s.cycles)

    @given(perms())
    @settings(max_examples=60, deadline=None)
    def test_partition_property(self, p):
        s = cycle_structure(p)
        seen = sorted(x for cycle in s.cycles for x in cycle)
        assert seen == list(range(p.n))
        assert sum(s.lengths) == p.n


class TestCycleCounts:
    def test_identity(self):
        assert cycle_counts(Permutation.identity(5), 3).counts == (5, 0, 0)

    def test_double_transposition(self):
        assert cycle_counts(Permutation((1, 0, 3, 2)), 2).counts == (0, 2)

    def test_three_two(self):
        assert cycle_counts(Permutation((1, 2, 0, 4, 3)), 2).counts == (0, 1)

    def test_d_out_of_range(self):
        with pytest.raises(ValueError):
            cycle_counts(Permutation.identity(3), 4)
        with pytest.raises(ValueError):
            cycle_counts(Permutation.identity(3), 0)

    @given(perms())
    @settings(max_examples=60, deadline=None)
    def test_weighted_sum_is_n(self, p):
        assert cycle_counts(p, p.n).weighted_sum() == p.n

    def test_counts_vector_dimension(self):
        cv = CountsVector((2, 0, 1))
        assert cv.d == 3 and cv.weighted_sum() == 5


class TestApplyTransposition:
    def test_swap_on_identity(self):
        assert apply_transposition(Permutation.identity(3), Transposition(0, 1)).mapping == (1, 0, 2)

    def test_involution_example(self):
        p = Permutation((1, 0, 2))
        assert apply_transposition(p, Transposition(0, 1)) == Permutation.identity(3)

    @given(perms(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_involution(self, p, data):
        if p.n < 2:
            return
        a = data.draw(st.integers(0, p.n - 1))
        b = data.draw(st.integers(0, p.n - 1).filter(lambda x: x != a))
        t = Transposition(a, b)
        assert apply_transposition(apply_transposition(p, t), t) == p

    def test_split_and_merge_exhaustive_s4(self):
        # same cycle -> splits into two cycles whose lengths sum to the old one
        for mapping in itertools.permutations(range(4)):
            p = Permutation(mapping)
            s = cycle_structure(p)
            for a in range(4):
                for b in range(a + 1, 4):
                    q = apply_transposition(p, Transposition(a, b))
                    sq = cycle_structure(q)
                    if s.cycle_id[a] == s.cycle_id[b]:
                        assert len(sq.cycles) == len(s.cycles) + 1
                    else:
                        assert len(sq.cycles) == len(s.cycles) - 1
                        merged = sq.cycle_length[a]
                        assert merged == s.cycle_length[a] + s.cycle_length[b]

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_cycle_count_change_exhaustive(self, n):
        for mapping in itertools.permutations(range(n)):
            p = Permutation(mapping)
            s = cycle_structure(p)
            for a in range(n):
                for b in range(a + 1, n):
                    q = apply_transposition(p, Transposition(a, b))
                    delta = len(cycle_structure(q).cycles) - len(s.cycles)
                    assert delta == (1 if s.cycle_id[a] == s.cycle_id[b] else -1)


class TestLongestCycle:
    def test_identity(self):
        assert longest_cycle(Permutation.identity(7)) == 1

    def test_full_cycle(self):
        n = 6
        assert longest_cycle(Permutation(tuple(range(1, n)) + (0,))) == n

    def test_mixed(self):
        assert longest_cycle(Permutation((1, 2, 0, 4, 3))) == 3


class TestBoundedEnumeration:
    def test_sizes(self):
        assert len(list(permutations_with_bounded_cycles(4, 2))) == 10
        assert len(list(permutations_with_bounded_cycles(4, 4))) == 24
        assert len(list(permutations_with_bounded_cycles(5, 1))) == 1

    def test_members_satisfy_bound(self):
        for p in permutations_with_bounded_cycles(5, 2):
            assert longest_cycle(p) <= 2
