import math
import unittest

import numpy as np
import torch

from fdafnet.domain.control import FixedStepController, KalmanController
from fdafnet.domain.filtering import FilterState, prior_error, update
from fdafnet.domain.metrics import nesd_zero_padded
from fdafnet.domain.pipeline import StreamRunner
from fdafnet.domain.shared import (
    FilterDims,
    InvalidDimensionError,
    InvalidInputError,
    TrainingDivergedError,
    UpdateRejectedError,
)
from fdafnet.domain.spectral import analyze, block_signal, frame_signal


def identification_run(controller, dims: FilterDims, *, blocks: int, snr_db: float | None, seed: int) -> list[float]:
    rng = np.random.default_rng(seed)
    taps = rng.standard_normal(dims.filter_length) * np.exp(-np.arange(dims.filter_length) / 30.0)
    taps /= np.linalg.norm(taps)
    x = rng.standard_normal(blocks * dims.hop)
    d = np.convolve(x, taps)[: len(x)]
    y = d
    if snr_db is not None:
        y = d + rng.standard_normal(len(d)) * math.sqrt(np.mean(d**2) * 10 ** (-snr_db / 10))
    runner = StreamRunner(controller, dims)
    values: list[float] = []

    def on_block(result):
        values.append(nesd_zero_padded(taps, result.state.filter.impulse_response(dims).numpy()))

    with torch.no_grad():
        runner.run(frame_signal(torch.from_numpy(x), dims), block_signal(torch.from_numpy(y), dims), on_block=on_block)
    return values


class FilterUpdateTests(unittest.TestCase):
    def setUp(self):
        self.dims = FilterDims(32, 16)

    def test_zero_state_predicts_silence(self):
        state = FilterState.zeros(self.dims)
        x_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        y = torch.randn(16, dtype=torch.float64)
        e_spec, d_hat = prior_error(state, x_spec, y, self.dims)
        torch.testing.assert_close(d_hat, torch.zeros(16, dtype=torch.float64))
        torch.testing.assert_close(torch.fft.ifft(e_spec).real[16:], y)

    def test_zero_step_keeps_estimate(self):
        state = FilterState(w_hat=torch.randn(32, dtype=torch.complex128))
        x_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        e_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        updated = update(state, torch.zeros(32, dtype=torch.float64), x_spec, e_spec, self.dims)
        torch.testing.assert_close(updated.w_hat, state.w_hat)
        self.assertEqual(updated.block_index, 1)

    def test_updated_filter_stays_fir(self):
        state = FilterState.zeros(self.dims)
        x_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        e_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        updated = update(state, torch.full((32,), 0.1, dtype=torch.float64), x_spec, e_spec, self.dims)
        taps = torch.fft.ifft(updated.w_hat)
        self.assertLess(float(taps[16:].abs().max()), 1e-12)
        self.assertEqual(tuple(updated.impulse_response(self.dims).shape), (16,))

    def test_non_finite_inputs_are_rejected_with_flagged_state(self):
        state = FilterState.zeros(self.dims)
        x_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        e_spec = x_spec.clone()
        e_spec[3] = complex(float("nan"), 0.0)
        with self.assertRaises(UpdateRejectedError) as ctx:
            update(state, torch.ones(32, dtype=torch.float64), x_spec, e_spec, self.dims)
        self.assertEqual(ctx.exception.state.rejected_updates, 1)
        torch.testing.assert_close(ctx.exception.state.w_hat, state.w_hat)

    def test_one_bad_batch_element_rejects_the_whole_batch(self):
        state = FilterState(w_hat=torch.randn(2, 32, dtype=torch.complex128))
        x_spec = analyze(torch.randn(2, 32, dtype=torch.float64), self.dims)
        e_spec = analyze(torch.randn(2, 32, dtype=torch.float64), self.dims)
        step = torch.full((2, 32), 0.1, dtype=torch.float64)
        step[1, 5] = float("nan")
        with self.assertRaises(UpdateRejectedError) as ctx:
            update(state, step, x_spec, e_spec, self.dims)
        self.assertEqual(ctx.exception.state.rejected_updates, 1)
        torch.testing.assert_close(ctx.exception.state.w_hat, state.w_hat)

    def test_negative_step_is_invalid(self):
        state = FilterState.zeros(self.dims)
        x_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        with self.assertRaises(InvalidInputError):
            update(state, -torch.ones(32, dtype=torch.float64), x_spec, x_spec, self.dims)

    def test_wrong_block_length(self):
        state = FilterState.zeros(self.dims)
        x_spec = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        with self.assertRaises(InvalidDimensionError):
            prior_error(state, x_spec, torch.zeros(15, dtype=torch.float64), self.dims)


class _NanStepController(FixedStepController):
    def __init__(self, dims, *, bad_block: int):
        super().__init__(dims, mu_fdaf=0.5, lambda_x=0.5)
        self._bad_block = bad_block
        self._calls = 0

    def compute(self, state, x_spec, e_spec):
        decision = super().compute(state, x_spec, e_spec)
        self._calls += 1
        if self._calls - 1 == self._bad_block:
            step = decision.step.clone()
            step[0] = float("nan")
            return type(decision)(step=step, state=decision.state)
        return decision


class StreamRunnerTests(unittest.TestCase):
    def setUp(self):
        self.dims = FilterDims(32, 16)
        x = torch.randn(16 * 6, dtype=torch.float64)
        self.frames = frame_signal(x, self.dims)
        self.blocks = block_signal(x * 0.5, self.dims)

    def test_rejected_update_keeps_estimate_in_streaming_mode(self):
        runner = StreamRunner(_NanStepController(self.dims, bad_block=3), self.dims)
        seen = []
        with self.assertLogs("fdafnet.domain.pipeline.runner", level="WARNING"):
            output = runner.run(self.frames, self.blocks, on_block=seen.append)
        self.assertTrue(seen[3].rejected)
        torch.testing.assert_close(seen[3].state.filter.w_hat, seen[2].state.filter.w_hat)
        self.assertEqual(output.state.filter.rejected_updates, 1)
        self.assertEqual(output.state.filter.block_index, 6)

    def test_strict_mode_turns_rejection_into_divergence(self):
        runner = StreamRunner(_NanStepController(self.dims, bad_block=2), self.dims, strict=True)
        with self.assertRaises(TrainingDivergedError) as ctx:
            runner.run(self.frames, self.blocks)
        self.assertEqual(ctx.exception.block_index, 2)

    def test_mismatched_axes(self):
        runner = StreamRunner(FixedStepController(self.dims, mu_fdaf=0.5, lambda_x=0.5), self.dims)
        with self.assertRaises(InvalidDimensionError):
            runner.run(self.frames, self.blocks[:-1])

    def test_output_shapes(self):
        runner = StreamRunner(FixedStepController(self.dims, mu_fdaf=0.5, lambda_x=0.5), self.dims)
        output = runner.run(self.frames, self.blocks)
        self.assertEqual(tuple(output.d_hat.shape), (6, 16))
        torch.testing.assert_close(output.error + output.d_hat, self.blocks)


class ConvergenceTests(unittest.TestCase):
    def test_noise_free_fdaf_identifies_system(self):
        dims = FilterDims(256, 128)
        controller = FixedStepController(dims, mu_fdaf=0.5, lambda_x=0.5)
        values = identification_run(controller, dims, blocks=200, snr_db=None, seed=5)
        self.assertLess(min(values), -30.0)
        self.assertLess(values[-1], values[20])

    def test_fdaf_baseline_under_noise(self):
        dims = FilterDims(256, 128)
        controller = FixedStepController(dims, mu_fdaf=0.5, lambda_x=0.5)
        values = identification_run(controller, dims, blocks=400, snr_db=30.0, seed=7)
        self.assertLessEqual(min(values), -20.0)

    def test_kalman_baseline_under_noise(self):
        dims = FilterDims(256, 128)
        controller = KalmanController(dims, a=0.999)
        values = identification_run(controller, dims, blocks=400, snr_db=30.0, seed=7)
        self.assertLessEqual(min(values), -25.0)


if __name__ == "__main__":
    unittest.main()
