from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from shortcycles.counting import count_table
from shortcycles.errors import ResourceLimitError
from shortcycles.permutations import (
    Permutation,
    cycle_structure,
    longest_cycle,
    permutations_with_bounded_cycles,
)
from shortcycles.sampling import (
    SamplerConfig,
    acceptance_rate,
    draw,
    mcmc_step,
    sample_rejection,
    sample_sequential,
    stage_length_pmf,
    stationarity_matrix,
)


class TestConfig:
    def test_u(self):
        assert SamplerConfig(n=10, r=4).u == 2.5

    def test_validation(self):
        with pytest.raises(ValueError):
            SamplerConfig(n=4, r=5)
        with pytest.raises(ValueError):
            SamplerConfig(n=4, r=2, method="magic")


class TestRejection:
    def test_unrestricted_accepts_first_draw(self):
        cfg = SamplerConfig(n=8, r=8, method="rejection", seed=5)
        first = np.random.default_rng(123).permutation(8)
        got = sample_rejection(cfg, np.random.default_rng(123))
        assert got.mapping == tuple(int(x) for x in first)

    def test_r1_returns_identity(self):
        cfg = SamplerConfig(n=4, r=1, method="rejection")
        p = sample_rejection(cfg, np.random.default_rng(0))
        assert p == Permutation.identity(4)

    def test_retry_cap(self):
        cfg = SamplerConfig(n=9, r=1, method="rejection")
        with pytest.raises(ResourceLimitError):
            sample_rejection(cfg, np.random.default_rng(0), cap=10)

    def test_retry_cap_env_override(self, monkeypatch):
        monkeypatch.setenv("SHORTCYCLES_RETRY_CAP", "5")
        cfg = SamplerConfig(n=9, r=1, method="rejection")
        with pytest.raises(ResourceLimitError):
            sample_rejection(cfg, np.random.default_rng(0))

    def test_acceptance_rate_matches_nu(self):
        rate = acceptance_rate(6, 3, 10**5, np.random.default_rng(2024))
        p = float(count_table(6, 3).fraction(6))
        se = (p * (1 - p) / 10**5) ** 0.5
        assert abs(rate - p) <= 3 * se


class TestSequential:
    def test_stage_law_uniform_when_unrestricted(self):
        table = count_table(9, 9)
        probs = stage_length_pmf(9, 9, table)
        assert np.allclose(probs, np.full(9, 1 / 9))

    def test_stage_law_double_mode(self):
        table = count_table(300, 40, "double")
        probs = stage_length_pmf(250, 40, table)
        assert probs.shape == (40,)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)

    def test_support_constraint_n4_r2(self):
        cfg = SamplerConfig(n=4, r=2, method="sequential", seed=3)
        lengths = set()
        for p in draw(cfg, 400):
            lengths.add(cycle_structure(p).lengths)
        assert lengths <= {(1, 1, 1, 1), (1, 1, 2), (2, 2)}
        assert lengths == {(1, 1, 1, 1), (1, 1, 2), (2, 2)}

    def test_every_draw_in_bounds(self):
        cfg = SamplerConfig(n=30, r=7, method="sequential", seed=9)
        for p in draw(cfg, 50):
            assert longest_cycle(p) <= 7

    def test_large_n_double_mode(self):
        cfg = SamplerConfig(n=500, r=100, method="sequential", seed=11)
        p = draw(cfg, 1)[0]
        assert longest_cycle(p) <= 100

    def test_reproducible(self):
        cfg = SamplerConfig(n=12, r=5, method="sequential", seed=77)
        assert draw(cfg, 10) == draw(cfg, 10)


class TestMcmc:
    def test_unrestricted_always_moves(self):
        rng = np.random.default_rng(4)
        p = Permutation.identity(6)
        for _ in range(50):
            q = mcmc_step(p, 6, rng)
            assert q != p
            p = q

    def test_small_case_transition_counts(self):
        from shortcycles.permutations import Transposition, apply_transposition

        pairs = [(a, b) for a in range(3) for b in range(a + 1, 3)]
        # from the identity every proposal is accepted (results are 2-cycles)
        accepted_from_id = [
            longest_cycle(apply_transposition(Permutation.identity(3), Transposition(a, b))) <= 2
            for a, b in pairs
        ]
        assert accepted_from_id == [True, True, True]
        # from a 2-cycle only the inverse proposal is accepted; the other
        # two proposals would build a 3-cycle and get rejected
        p = Permutation((1, 0, 2))
        accepted = [
            longest_cycle(apply_transposition(p, Transposition(a, b))) <= 2 for a, b in pairs
        ]
        assert sum(accepted) == 1
        rng = np.random.default_rng(12)
        seen = {mcmc_step(p, 2, rng).mapping for _ in range(200)}
        assert seen == {(1, 0, 2), (0, 1, 2)}

    def test_step_stays_in_state_space(self):
        rng = np.random.default_rng(8)
        p = Permutation.identity(7)
        for _ in range(300):
            p = mcmc_step(p, 3, rng)
            assert longest_cycle(p) <= 3

    def test_rejects_bad_state(self):
        with pytest.raises(ValueError):
            mcmc_step(Permutation((1, 2, 0)), 2, np.random.default_rng(0))


class TestStationarityMatrix:
    def test_n4_r2(self):
        m = stationarity_matrix(4, 2)
        assert len(m.states) == 10
        assert m.is_symmetric()
        assert all(s == 1 for s in m.row_sums())
        assert m.uniform_is_stationary()

    def test_diagonal_only_when_rejections_exist(self):
        m = stationarity_matrix(4, 4)
        for i in range(len(m.states)):
            assert m.probability(i, i) == 0

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            stationarity_matrix(8, 3)


def chi_square_uniform_pvalue(samples, states):
    index = {p: i for i, p in enumerate(states)}
    counts = np.zeros(len(states))
    for p in samples:
        counts[index[p]] += 1
    return stats.chisquare(counts).pvalue


class TestUniformity:
    def test_sequential_chi_square_s5_r3(self):
        states = list(permutations_with_bounded_cycles(5, 3))
        cfg = SamplerConfig(n=5, r=3, method="sequential", seed=101)
        samples = draw(cfg, 20000)
        assert chi_square_uniform_pvalue(samples, states) >= 1e-3

    def test_rejection_chi_square_s5_r3(self):
        states = list(permutations_with_bounded_cycles(5, 3))
        cfg = SamplerConfig(n=5, r=3, method="rejection", seed=202)
        samples = draw(cfg, 20000)
        assert chi_square_uniform_pvalue(samples, states) >= 1e-3

    def test_mcmc_chi_square_s5_r3(self):
        states = list(permutations_with_bounded_cycles(5, 3))
        cfg = SamplerConfig(n=5, r=3, method="mcmc", seed=303, mcmc_burn_in=500, mcmc_thinning=20)
        samples = draw(cfg, 20000)
        assert chi_square_uniform_pvalue(samples, states) >= 1e-3
