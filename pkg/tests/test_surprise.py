"""Tests for surprise measures and the adaptation rate.

The key property is path equality: the adaptation rate computed from the
probability-ratio surprise and the one recovered from the difference in
Shannon surprise are the same number whenever both are fed consistent
predictive probabilities.
"""

import math

import numpy as np
import pytest
from scipy import stats

import bayeschange as bc
from bayeschange.surprise import make_record


class TestAdaptationRate:
    def test_zero_surprise(self):
        for m in (0.0, 0.1, 1.0, 100.0):
            assert bc.adaptation_rate(0.0, m) == 0.0

    def test_symmetry_point(self):
        assert bc.adaptation_rate(1.0, 1.0) == pytest.approx(0.5, rel=1e-15)

    def test_direct_arithmetic(self):
        assert bc.adaptation_rate(3.0, 1.0) == pytest.approx(0.75, rel=1e-15)

    def test_infinite_surprise_saturates(self):
        assert bc.adaptation_rate(math.inf, 0.01) == 1.0
        assert bc.adaptation_rate(math.inf, 0.0) == 0.0

    def test_bounded_and_monotone(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            s = rng.uniform(0, 50)
            m = rng.uniform(1e-4, 10)
            g = bc.adaptation_rate(s, m)
            assert 0.0 <= g <= 1.0
            assert bc.adaptation_rate(s + rng.uniform(0.01, 5), m) > g

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            bc.adaptation_rate(-0.1, 1.0)
        with pytest.raises(ValueError):
            bc.adaptation_rate(1.0, -1.0)


class TestShannonSurprise:
    def test_equal_probabilities_ignore_pc(self):
        for p in (0.01, 0.3, 0.9):
            for pc in (0.001, 0.25, 0.99):
                assert bc.shannon_surprise(p, p, pc) == pytest.approx(-math.log(p), rel=1e-14)

    def test_certain_event(self):
        assert bc.shannon_surprise(1.0, 1.0, 0.37) == pytest.approx(0.0, abs=1e-15)

    def test_weighted_marginal_value(self):
        # frozen from a 30-digit evaluation of -log(0.9*0.5642 + 0.1*0.2392)
        got = bc.shannon_surprise(0.5642, 0.2392, 0.1)
        assert got == pytest.approx(0.631675858471844, rel=1e-12)

    def test_both_zero_is_infinite(self):
        assert bc.shannon_surprise(0.0, 0.0, 0.1) == math.inf


class TestGammaFromShannon:
    def test_zero_difference_gives_pc(self):
        for pc in (0.001, 0.1, 0.5):
            assert bc.gamma_from_shannon(2.0, 2.0, pc) == pytest.approx(pc, rel=1e-15)

    def test_symmetry_point_both_paths(self):
        """p_c = 0.5 and unit surprise give gamma 0.5 on both routes."""
        model = bc.gaussian_model(1.0)
        prior = bc.prior_belief(model)
        y = 0.8
        p = bc.predictive(model, prior, y)
        s_sh_cur = bc.shannon_surprise(p, p, 0.5)
        s_sh_pri = bc.shannon_surprise(p, p, 0.5)
        assert bc.gamma_from_shannon(s_sh_cur, s_sh_pri, 0.5) == pytest.approx(0.5, rel=1e-14)
        assert bc.adaptation_rate(bc.surprise_bf(model, prior, y), 1.0) == pytest.approx(0.5, rel=1e-14)

    def test_consistency_with_ratio_path(self):
        """1000 random Gaussian (belief, y, p_c) triples, both routes agree."""
        rng = np.random.default_rng(41)
        model = bc.gaussian_model(0.5)
        prior = bc.prior_belief(model)
        for _ in range(1000):
            b = bc.gaussian_belief(model, rng.normal(0, 2), rng.uniform(0.05, 4))
            y = rng.normal(0, 3)
            pc = rng.uniform(0.001, 0.5)
            p_cur = bc.predictive(model, b, y)
            p_pri = bc.predictive(model, prior, y)
            g_ratio = bc.adaptation_rate(bc.surprise_bf(model, b, y), pc / (1 - pc))
            g_shannon = bc.gamma_from_shannon(bc.shannon_surprise(p_cur, p_pri, pc),
                                              bc.shannon_surprise(p_pri, p_pri, pc), pc)
            assert g_shannon == pytest.approx(g_ratio, rel=1e-12)


class TestConfidenceCorrected:
    def test_zero_when_belief_equals_scaled_likelihood(self):
        model = bc.gaussian_model(0.7)
        y = 1.3
        b = bc.gaussian_belief(model, y, model.sigma**2)
        assert bc.confidence_corrected(model, b, y) == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_mean_shift(self):
        """Belief N(0,1), sigma=1, y=1: KL[N(0,1) || N(1,1)] = 1/2."""
        model = bc.gaussian_model(1.0)
        b = bc.gaussian_belief(model, 0.0, 1.0)
        assert bc.confidence_corrected(model, b, 1.0) == pytest.approx(0.5, rel=1e-12)

    def test_categorical_against_monte_carlo(self):
        """KL[Dir(1) || Dir(1 + e_1)] via sampled log-density ratios."""
        model = bc.categorical_model(5, 1.0)
        b = bc.dirichlet_belief(np.ones(5))
        rng = np.random.default_rng(43)
        samples = rng.dirichlet(np.ones(5), size=400_000)
        target = np.array([2.0, 1, 1, 1, 1])
        logr = (stats.dirichlet.logpdf(samples.T, np.ones(5))
                - stats.dirichlet.logpdf(samples.T, target))
        mc, se = logr.mean(), logr.std(ddof=1) / math.sqrt(len(logr))
        got = bc.confidence_corrected(model, b, 1)
        assert abs(got - mc) < 4 * se + 1e-6

    def test_scaled_likelihood_forms(self):
        gm = bc.gaussian_model(0.5)
        sl = bc.scaled_likelihood_belief(gm, 2.0)
        mean, var = bc.gaussian_mean_var(gm, sl)
        assert mean == pytest.approx(2.0, rel=1e-14)
        assert var == pytest.approx(0.25, rel=1e-14)
        cm = bc.categorical_model(5, 1.0)
        np.testing.assert_array_equal(bc.scaled_likelihood_belief(cm, 3).chi,
                                      [1, 1, 2, 1, 1])


class TestMakeRecord:
    def test_gamma_matches_adaptation_rate(self):
        rng = np.random.default_rng(47)
        for _ in range(1000):
            lp_cur = rng.uniform(-50, 0)
            lp_pri = rng.uniform(-50, 0)
            m = 10.0 ** rng.uniform(-4, 2)
            rec = make_record(lp_cur, lp_pri, m)
            assert rec.gamma == pytest.approx(bc.adaptation_rate(rec.s_bf, m), rel=1e-12)
            assert rec.s_sh_prior == pytest.approx(-lp_pri, rel=1e-14)

    def test_gamma_matches_shannon_route(self):
        rng = np.random.default_rng(53)
        for _ in range(1000):
            lp_cur = rng.uniform(-300, 0)
            lp_pri = rng.uniform(-300, 0)
            m = 10.0 ** rng.uniform(-4, 2)
            rec = make_record(lp_cur, lp_pri, m)
            pc = m / (1 + m)
            g = bc.gamma_from_shannon(rec.s_sh_current, rec.s_sh_prior, pc)
            assert g == pytest.approx(rec.gamma, rel=1e-12)

    def test_impossible_observation_record(self):
        """Zero current probability saturates gamma at 1 on both routes."""
        rec = make_record(-math.inf, -2.0, 0.1)
        assert rec.s_bf == math.inf
        assert rec.gamma == 1.0
        g = bc.gamma_from_shannon(rec.s_sh_current, rec.s_sh_prior, 0.1 / 1.1)
        assert g == pytest.approx(1.0, rel=1e-12)

    def test_s_cc_only_when_provided(self):
        assert make_record(-1.0, -1.0, 1.0).s_cc is None
        assert make_record(-1.0, -1.0, 1.0, s_cc=0.25).s_cc == 0.25
