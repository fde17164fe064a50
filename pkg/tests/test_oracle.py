import math

import numpy as np
import pytest

from renyi_dp.accountant import DEFAULT_ORDERS
from renyi_dp.divergence import DiscreteDistribution, renyi_divergence
from renyi_dp.mechanisms import RandomizedResponse
from renyi_dp.oracle import (
    JointSupportTooLarge,
    PreservationViolation,
    direct_renyi_divergence,
    exhaustive_preservation_check,
    grid_optimize,
    product_compose,
    random_distribution,
    random_kernel,
    trial_rng,
)

B = DiscreteDistribution.bernoulli


def rr_outputs(p):
    """Output distributions of randomized response on true and false inputs."""
    return B(p), B(1 - p)


class TestProductCompose:
    def test_single_pair_unchanged(self):
        p, q = rr_outputs(0.6)
        jp, jq = product_compose([p], [q])
        assert np.array_equal(jp.masses, p.masses) and np.array_equal(jq.masses, q.masses)

    @pytest.mark.parametrize("alpha", (1.0,) + DEFAULT_ORDERS)
    def test_two_steps_double(self, alpha):
        p, q = rr_outputs(0.6)
        jp, jq = product_compose([p, p], [q, q])
        assert len(jp) == 4
        expected = 2 * renyi_divergence(p, q, alpha)
        assert renyi_divergence(jp, jq, alpha) == pytest.approx(expected, abs=1e-12)

    def test_three_steps_triple(self):
        p, q = rr_outputs(0.52)
        jp, jq = product_compose([p] * 3, [q] * 3)
        assert len(jp) == 8
        value = renyi_divergence(jp, jq, 2)
        assert value == pytest.approx(3 * RandomizedResponse(0.52).rdp_epsilon(2), abs=1e-12)

    def test_joint_masses(self):
        jp, _ = product_compose([B(0.25), B(0.5)], [B(0.5), B(0.5)])
        assert np.allclose(jp.masses, [0.375, 0.375, 0.125, 0.125])

    def test_size_cap(self):
        p = DiscreteDistribution(np.full(10, 0.1))
        with pytest.raises(JointSupportTooLarge):
            product_compose([p] * 7, [p] * 7)

    @pytest.mark.parametrize("ps,qs", [([], []), ([B(0.5)], [B(0.5), B(0.5)])])
    def test_rejects_mismatched_lists(self, ps, qs):
        with pytest.raises(ValueError):
            product_compose(ps, qs)


class TestExhaustivePreservation:
    def test_identical_distributions(self):
        p = DiscreteDistribution([0.2, 0.3, 0.5])
        report = exhaustive_preservation_check(p, p, 2.0)
        assert report.divergence == 0.0
        assert report.min_slack == pytest.approx(0.0, abs=1e-15)
        assert report.events_checked == 7

    def test_skewed_coins(self):
        report = exhaustive_preservation_check(B(0.9), B(0.1), 2.0)
        heads = 0.9
        assert heads <= math.sqrt(math.exp(report.divergence) * 0.1)
        assert report.min_slack >= 0

    def test_reports_violation(self, monkeypatch):
        import renyi_dp.oracle as oracle

        monkeypatch.setattr(oracle, "renyi_divergence", lambda p, q, a: 0.0)
        with pytest.raises(PreservationViolation) as info:
            exhaustive_preservation_check(B(0.9), B(0.1), 2.0)
        assert info.value.subset == (1,)

    def test_random_pairs(self):
        for trial in range(50):
            rng = trial_rng(trial)
            p, q = random_distribution(rng, 8), random_distribution(rng, 8)
            for alpha in DEFAULT_ORDERS[:-1]:
                exhaustive_preservation_check(p, q, alpha)

    @pytest.mark.parametrize("alpha", [1.0, math.inf])
    def test_needs_finite_order(self, alpha):
        with pytest.raises(ValueError):
            exhaustive_preservation_check(B(0.5), B(0.5), alpha)

    def test_support_limit(self):
        p = DiscreteDistribution(np.full(13, 1 / 13))
        with pytest.raises(ValueError):
            exhaustive_preservation_check(p, p, 2.0)


class TestGridOptimize:
    def test_constant_returns_lo(self):
        assert grid_optimize(lambda a: 1.0, 1.5, 10.0, 50) == (1.5, 1.0)

    def test_decreasing_returns_hi(self):
        alpha, _ = grid_optimize(lambda a: -a, 1.5, 10.0, 50)
        assert alpha == 10.0

    def test_gaussian_conversion_objective(self):
        alpha, value = grid_optimize(lambda a: a / 2 + math.log(1e5) / (a - 1), 1.01, 100.0, 10**5)
        assert alpha == pytest.approx(5.7985, abs=0.01)
        assert value == pytest.approx(5.2986, abs=1e-3)

    def test_not_above_endpoints_or_midpoint(self):
        f = lambda a: (math.log(a) - 1.2) ** 2
        alpha, value = grid_optimize(f, 1.1, 30.0, 1000)
        assert value <= min(f(1.1), f(30.0), f(math.sqrt(1.1 * 30.0)))

    def test_nan_objective(self):
        with pytest.raises(ValueError):
            grid_optimize(lambda a: math.nan, 1.5, 2.0, 10)

    @pytest.mark.parametrize("lo,hi,points", [(1.0, 2.0, 10), (2.0, 2.0, 10), (1.5, 2.0, 1)])
    def test_validation(self, lo, hi, points):
        with pytest.raises(ValueError):
            grid_optimize(lambda a: a, lo, hi, points)


class TestSampling:
    def test_trials_are_independent_of_order(self):
        a = random_distribution(trial_rng(3), 5).masses
        random_distribution(trial_rng(4), 5)
        b = random_distribution(trial_rng(3), 5).masses
        assert np.array_equal(a, b)

    def test_floor(self):
        d = random_distribution(trial_rng(0), 6, floor=0.05)
        assert d.masses.min() >= 0.05 - 1e-15

    def test_kernel_rows_sum_to_one(self):
        k = random_kernel(trial_rng(0), 4, 3)
        assert k.shape == (4, 3)
        assert np.allclose(k.sum(axis=1), 1.0)

    def test_direct_sum_handles_disjoint_support(self):
        assert direct_renyi_divergence(B(1.0), B(0.0), 2.0) == math.inf
