"""
Block pipeline checked against a dense implementation: DFT, zero padding,
tail selection and FIR projection are materialised as matrices.
"""
import unittest

import numpy as np
import torch

from fdafnet.domain.control import MASKED_VARIANTS, MaskedStepController
from fdafnet.domain.filtering import FilterState, update
from fdafnet.domain.pipeline import StreamRunner
from fdafnet.domain.shared import FilterDims, MaskPair
from fdafnet.domain.spectral import frame_signal

REG = 1e-10
LAMBDA_X = 0.5
TOL = dict(rtol=1e-9, atol=1e-9)


class DenseOperators:
    def __init__(self, fft_size: int, hop: int):
        length = fft_size - hop
        n = np.arange(fft_size)
        self.fft_size, self.hop = fft_size, hop
        self.bins = fft_size // 2 + 1
        self.dft = np.exp(-2j * np.pi * np.outer(n, n) / fft_size)
        self.idft = self.dft.conj() / fft_size
        self.pad_front = np.vstack((np.zeros((length, hop)), np.eye(hop)))
        fir_pad = np.vstack((np.eye(length), np.zeros((hop, length))))
        self.fir_projection = self.dft @ fir_pad @ fir_pad.T @ self.idft
        self.mirror = np.zeros((fft_size, self.bins))
        for k in range(fft_size):
            self.mirror[k, k if k < self.bins else fft_size - k] = 1.0


class ScriptedMasks:
    """Mask model replaying a fixed (T, bins) mask sequence."""

    def __init__(self, m_mu: np.ndarray, m_e: np.ndarray):
        self._m_mu = torch.from_numpy(m_mu)
        self._m_e = torch.from_numpy(m_e)

    def initial_state(self, batch_shape=()):
        return 0

    def estimate(self, e_spec, x_spec, state):
        return MaskPair(m_mu=self._m_mu[state], m_e=self._m_e[state]), state + 1


def dense_run(ops: DenseOperators, x, y, m_mu, m_e, *, lambda_p, mu_max):
    """Yields (x_spec, d_hat, e_spec, step, w_hat) per block."""
    w = np.zeros(ops.fft_size, dtype=complex)
    psi_xx = np.zeros(ops.fft_size)
    psi_pp = np.zeros(ops.fft_size)
    padded = np.concatenate((np.zeros(ops.fft_size - ops.hop), x))
    ratio = ops.fft_size / ops.hop
    for t in range(len(y) // ops.hop):
        frame = padded[t * ops.hop : t * ops.hop + ops.fft_size]
        x_spec = ops.dft @ frame
        d_hat = (ops.pad_front.T @ (ops.idft @ (x_spec * w))).real
        e_spec = ops.dft @ (ops.pad_front @ (y[t * ops.hop : (t + 1) * ops.hop] - d_hat))
        psi_xx = LAMBDA_X * psi_xx + (1 - LAMBDA_X) * np.abs(x_spec) ** 2
        masked = (ops.mirror @ m_e[t]) * e_spec
        psi_pp = lambda_p * psi_pp + (1 - lambda_p) * np.abs(masked) ** 2
        step = mu_max * (ops.mirror @ m_mu[t]) / (psi_xx + ratio * psi_pp + REG)
        w = w + ops.fir_projection @ (step * x_spec.conj() * e_spec)
        yield x_spec, d_hat, e_spec, step, w


class MatrixOracleTests(unittest.TestCase):
    def setUp(self):
        self.dims = FilterDims(32, 16)
        self.ops = DenseOperators(32, 16)
        self.blocks = 20
        rng = np.random.default_rng(2024)
        self.x = rng.standard_normal(self.blocks * 16)
        echo_path = rng.standard_normal(16) * np.exp(-np.arange(16) / 4.0)
        self.y = np.convolve(self.x, echo_path)[: self.x.size] + 0.01 * rng.standard_normal(self.x.size)
        self.random_mu = rng.uniform(0.0, 1.0, (self.blocks, self.ops.bins))
        self.random_e = rng.uniform(0.0, 1.0, (self.blocks, self.ops.bins))

    def check_controller(self, controller, m_mu, m_e, *, lambda_p, mu_max):
        runner = StreamRunner(controller, self.dims, strict=True)
        results = []
        frames = frame_signal(torch.from_numpy(self.x), self.dims)
        blocks = torch.from_numpy(self.y).reshape(self.blocks, 16)
        runner.run(frames, blocks, on_block=results.append)
        expected = dense_run(self.ops, self.x, self.y, m_mu, m_e, lambda_p=lambda_p, mu_max=mu_max)
        self.assertEqual(len(results), self.blocks)
        for result, (x_spec, d_hat, e_spec, step, w_hat) in zip(results, expected):
            with self.subTest(block=result.index):
                np.testing.assert_allclose(result.x_spec.numpy(), x_spec, **TOL)
                np.testing.assert_allclose(result.d_hat.numpy(), d_hat, **TOL)
                np.testing.assert_allclose(result.e_spec.numpy(), e_spec, **TOL)
                np.testing.assert_allclose(result.step.numpy(), step, **TOL)
                np.testing.assert_allclose(result.state.filter.w_hat.numpy(), w_hat, **TOL)

    def test_error_aware_fdaf(self):
        variant = MASKED_VARIANTS["ea_fdaf"]
        ones = np.ones((self.blocks, self.ops.bins))
        controller = MaskedStepController(self.dims, variant, lambda_x=LAMBDA_X, reg=REG)
        self.check_controller(controller, ones, ones, lambda_p=variant.lambda_p, mu_max=variant.mu_max)

    def test_masked_fdaf_with_random_masks(self):
        variant = MASKED_VARIANTS["dnn_fdaf"]
        controller = MaskedStepController(
            self.dims,
            variant,
            lambda_x=LAMBDA_X,
            lambda_p=0.3,
            reg=REG,
            mask_model=ScriptedMasks(self.random_mu, self.random_e),
        )
        self.check_controller(controller, self.random_mu, self.random_e, lambda_p=0.3, mu_max=variant.mu_max)


class ConstrainedUpdateTests(unittest.TestCase):
    def test_tiny_update_matches_explicit_matrices(self):
        dims = FilterDims(4, 2)
        ops = DenseOperators(4, 2)
        x_spec = ops.dft @ np.array([1.0, -2.0, 0.5, 3.0])
        e_spec = ops.dft @ (ops.pad_front @ np.array([0.25, -1.0]))
        step = np.array([0.5, 0.25, 0.125, 0.25])
        state = FilterState(w_hat=torch.from_numpy(ops.dft @ np.array([1.0, 0.5, 0.0, 0.0])))
        updated = update(state, torch.from_numpy(step), torch.from_numpy(x_spec), torch.from_numpy(e_spec), dims)
        expected = state.w_hat.numpy() + ops.fir_projection @ (step * x_spec.conj() * e_spec)
        np.testing.assert_allclose(updated.w_hat.numpy(), expected, rtol=1e-12, atol=1e-12)
        taps = np.fft.ifft(updated.w_hat.numpy())
        np.testing.assert_allclose(taps[2:], 0.0, atol=1e-12)
        self.assertEqual(updated.block_index, 1)


if __name__ == "__main__":
    unittest.main()
