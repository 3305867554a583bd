import unittest

import numpy as np
import torch

from fdafnet.domain.shared import FilterDims, InvalidConfigError, InvalidDimensionError
from fdafnet.domain.spectral import (
    FrameBuffer,
    analyze,
    block_signal,
    enforce_fir_constraint,
    frame_signal,
    mirror_to_full,
    overlap_save_convolve,
    power,
    select_nonredundant,
    synthesize,
    zero_pad_block,
)


def fir_response(taps: np.ndarray, dims: FilterDims) -> torch.Tensor:
    padded = np.zeros(dims.fft_size)
    padded[: len(taps)] = taps
    return torch.fft.fft(torch.from_numpy(padded))


class OverlapSaveTests(unittest.TestCase):
    def test_streamed_blocks_match_linear_convolution(self):
        dims = FilterDims(64, 32)
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(200):
            x = rng.standard_normal(dims.hop * 12)
            taps = rng.standard_normal(dims.filter_length)
            frames = frame_signal(torch.from_numpy(x), dims)
            out = overlap_save_convolve(analyze(frames, dims), fir_response(taps, dims), dims)
            expected = np.convolve(x, taps)[: len(x)]
            worst = max(worst, float(np.max(np.abs(out.reshape(-1).numpy() - expected))))
        self.assertLessEqual(worst, 1e-10)

    def test_frame_buffer_reproduces_framed_signal(self):
        dims = FilterDims(16, 4)
        x = torch.arange(40, dtype=torch.float64)
        frames = frame_signal(x, dims)
        buffer = FrameBuffer(dims)
        for t, block in enumerate(block_signal(x, dims)):
            torch.testing.assert_close(buffer.push(block), frames[t])
        torch.testing.assert_close(buffer.frame, frames[-1])

    def test_first_frame_is_zero_padded(self):
        dims = FilterDims(8, 2)
        frames = frame_signal(torch.ones(6, dtype=torch.float64), dims)
        self.assertEqual(tuple(frames.shape), (3, 8))
        self.assertEqual(frames[0].tolist(), [0.0] * 6 + [1.0, 1.0])

    def test_batch_axes_are_preserved(self):
        dims = FilterDims(16, 8)
        x = torch.randn(3, 2, 40, dtype=torch.float64)
        frames = frame_signal(x, dims)
        self.assertEqual(tuple(frames.shape), (3, 2, 5, 16))
        self.assertEqual(tuple(block_signal(x, dims).shape), (3, 2, 5, 8))

    def test_signal_shorter_than_block_is_rejected(self):
        with self.assertRaises(InvalidDimensionError):
            frame_signal(torch.zeros(3, dtype=torch.float64), FilterDims(8, 4))


class TransformTests(unittest.TestCase):
    def setUp(self):
        self.dims = FilterDims(32, 16)

    def test_analyze_then_synthesize_is_identity(self):
        frame = torch.randn(5, 32, dtype=torch.float64)
        torch.testing.assert_close(synthesize(analyze(frame, self.dims), self.dims), frame)

    def test_analyze_rejects_wrong_length(self):
        with self.assertRaises(InvalidDimensionError):
            analyze(torch.zeros(31, dtype=torch.float64), self.dims)

    def test_fir_constraint_zeroes_tail_and_is_idempotent(self):
        w = torch.randn(32, dtype=torch.complex128)
        constrained = enforce_fir_constraint(w, self.dims)
        taps = torch.fft.ifft(constrained)
        self.assertLess(float(taps[self.dims.filter_length :].abs().max()), 1e-12)
        torch.testing.assert_close(enforce_fir_constraint(constrained, self.dims), constrained)

    def test_zero_pad_block_places_samples_at_the_end(self):
        block = torch.arange(1, 17, dtype=torch.float64)
        time = torch.fft.ifft(zero_pad_block(block, self.dims)).real
        torch.testing.assert_close(time[:16], torch.zeros(16, dtype=torch.float64))
        torch.testing.assert_close(time[16:], block)

    def test_mirror_restores_spectrum_of_real_signal(self):
        spectrum = analyze(torch.randn(32, dtype=torch.float64), self.dims)
        half = select_nonredundant(spectrum, self.dims)
        self.assertEqual(half.shape[-1], self.dims.bins)
        torch.testing.assert_close(mirror_to_full(half, self.dims), spectrum)

    def test_mirror_of_real_mask_is_symmetric(self):
        mask = torch.rand(4, self.dims.bins, dtype=torch.float64)
        full = mirror_to_full(mask, self.dims)
        for m in range(1, 32):
            torch.testing.assert_close(full[:, m], full[:, 32 - m])

    def test_power_has_finite_gradient_at_zero(self):
        spectrum = torch.zeros(4, dtype=torch.complex128, requires_grad=True)
        power(spectrum).sum().backward()
        self.assertTrue(bool(torch.isfinite(torch.view_as_real(spectrum.grad)).all()))


class FilterDimsTests(unittest.TestCase):
    def test_derived_sizes(self):
        dims = FilterDims(3072, 1024)
        self.assertEqual(dims.filter_length, 2048)
        self.assertEqual(dims.bins, 1537)
        self.assertEqual(dims.feature_size, 3074)
        self.assertEqual(dims.m_over_r, 3.0)

    def test_invalid_geometry(self):
        for fft_size, hop in ((31, 16), (32, 32), (32, 0), (0, 1)):
            with self.subTest(fft_size=fft_size, hop=hop):
                with self.assertRaises(InvalidConfigError):
                    FilterDims(fft_size, hop)


if __name__ == "__main__":
    unittest.main()
