import math
import unittest

import numpy as np

from fdafnet.domain.control import FixedStepController, MASKED_VARIANTS, MaskedStepController
from fdafnet.domain.metrics import (
    ERLE_CAP_DB,
    NESD_FLOOR_DB,
    ErleState,
    Evaluator,
    MetricSeries,
    aggregate,
    aggregate_runs,
    erle_update,
    nesd_zero_padded,
    reconvergence_blocks,
    steady_state_level,
)
from fdafnet.domain.pipeline import StreamRunner
from fdafnet.domain.scenario import ScenarioBuilder, ScenarioConfig
from fdafnet.domain.shared import FilterDims, InvalidDimensionError, InvalidInputError
from fdafnet.infrastructure.random import NumpyRandomizer


class NesdZeroPaddedTests(unittest.TestCase):
    def test_matches_direct_evaluation(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            w = rng.standard_normal(64)
            w_hat = rng.standard_normal(16)
            padded = np.concatenate((w_hat, np.zeros(48)))
            expected = 10 * math.log10(np.sum((w - padded) ** 2) / np.sum(w**2))
            got = nesd_zero_padded(w, w_hat)
            self.assertLessEqual(abs(got - expected), 1e-10 * abs(expected) + 1e-12)

    def test_perfect_estimate_is_floored(self):
        w = np.arange(1.0, 5.0)
        self.assertEqual(nesd_zero_padded(w, w), NESD_FLOOR_DB)

    def test_undermodeling_limits_distance(self):
        w = np.concatenate((np.ones(4), np.ones(4)))
        self.assertAlmostEqual(nesd_zero_padded(w, np.ones(4)), 10 * math.log10(0.5))

    def test_invalid_inputs(self):
        with self.assertRaises(InvalidInputError):
            nesd_zero_padded(np.zeros(8), np.zeros(4))
        with self.assertRaises(InvalidDimensionError):
            nesd_zero_padded(np.ones(4), np.ones(8))


class ErleTests(unittest.TestCase):
    def test_matches_direct_recursion(self):
        rng = np.random.default_rng(1)
        lam = 0.9
        for _ in range(100):
            state = ErleState()
            num = den = 0.0
            for _ in range(5):
                d = rng.standard_normal(8)
                d_hat = d + 0.1 * rng.standard_normal(8)
                num = lam * num + (1 - lam) * np.sum(d**2)
                den = lam * den + (1 - lam) * np.sum((d - d_hat) ** 2)
                state, value = erle_update(state, d, d_hat, lam)
            expected = 10 * math.log10(num / (den + 1e-10))
            self.assertLessEqual(abs(value - expected), 1e-10 * abs(expected))

    def test_perfect_cancellation_is_capped(self):
        d = np.ones(4)
        _, value = erle_update(ErleState(), d, d)
        self.assertEqual(value, ERLE_CAP_DB)

    def test_shape_mismatch(self):
        with self.assertRaises(InvalidDimensionError):
            erle_update(ErleState(), np.ones(4), np.ones(3))


class SummaryTests(unittest.TestCase):
    def test_aggregate(self):
        np.testing.assert_allclose(aggregate([np.array([0.0, -10.0]), np.array([-10.0, -20.0])]), [-5.0, -15.0])
        with self.assertRaises(InvalidInputError):
            aggregate([np.zeros(3), np.zeros(4)])
        with self.assertRaises(InvalidInputError):
            aggregate([])

    def test_aggregate_runs(self):
        runs = [
            MetricSeries("a", 0.008, np.array([-1.0, -3.0]), np.array([1.0, 2.0])),
            MetricSeries("b", 0.008, np.array([-3.0, -5.0]), np.array([3.0, 4.0])),
        ]
        mean = aggregate_runs(runs, run_id="mean")
        np.testing.assert_allclose(mean.nesd_zp_db, [-2.0, -4.0])
        np.testing.assert_allclose(mean.times, [0.008, 0.016])
        self.assertEqual(len(mean), 2)

    def test_series_lengths_must_agree(self):
        with self.assertRaises(InvalidDimensionError):
            MetricSeries("a", 0.008, np.zeros(3), np.zeros(2))

    def test_steady_state_and_reconvergence(self):
        values = np.concatenate((np.full(10, -20.0), np.linspace(0.0, -30.0, 11)))
        self.assertEqual(steady_state_level(values, 10, 5), -20.0)
        self.assertEqual(reconvergence_blocks(values, 10, 5, 3.0), 6)
        self.assertIsNone(reconvergence_blocks(np.concatenate((np.full(10, -20.0), np.zeros(5))), 10, 5))
        with self.assertRaises(InvalidInputError):
            steady_state_level(values, 0, 5)


class EvaluatorTests(unittest.TestCase):
    def setUp(self):
        config = ScenarioConfig(
            fft_size=32,
            hop=16,
            air_length=64,
            duration=0.2,
            switch_window=(0.1, 0.12),
            t60_range=(0.002, 0.004),
            onset_delay=(0, 2),
            stationary_snr_db=(30.0, 30.0),
            speech_snr_db=None,
        )
        self.dims = FilterDims(32, 16)
        self.scenario = ScenarioBuilder(config, randomizer_factory=NumpyRandomizer.from_seed).build(0)

    def evaluate(self, controller):
        s = self.scenario
        return Evaluator(StreamRunner(controller, self.dims)).evaluate(
            "run0",
            x=s.x,
            y=s.y,
            d=s.d,
            air_pre=s.air_pre,
            air_post=s.air_post,
            switch_block=s.switch_block,
            sample_rate=s.sample_rate,
        )

    def test_series_per_block(self):
        run = self.evaluate(FixedStepController(self.dims, mu_fdaf=0.5, lambda_x=0.5))
        self.assertEqual(len(run.series), self.scenario.num_blocks)
        self.assertAlmostEqual(run.series.block_period_s, 0.001)
        self.assertIsNone(run.mask_means)
        self.assertEqual(run.rejected_updates, 0)
        self.assertLess(run.series.nesd_zp_db[self.scenario.switch_block - 1], run.series.nesd_zp_db[0])

    def test_masked_controller_reports_mask_means(self):
        run = self.evaluate(MaskedStepController(self.dims, MASKED_VARIANTS["ea_fdaf"], lambda_x=0.5))
        self.assertEqual(run.mask_means.shape, (self.scenario.num_blocks, 2))
        np.testing.assert_allclose(run.mask_means, 1.0)

    def test_track_length_mismatch(self):
        s = self.scenario
        with self.assertRaises(InvalidInputError):
            Evaluator(StreamRunner(FixedStepController(self.dims, mu_fdaf=0.5, lambda_x=0.5), self.dims)).evaluate(
                "bad",
                x=s.x,
                y=s.y[:-1],
                d=s.d,
                air_pre=s.air_pre,
                air_post=s.air_post,
                switch_block=s.switch_block,
                sample_rate=s.sample_rate,
            )


if __name__ == "__main__":
    unittest.main()
