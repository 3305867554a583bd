import struct
import tempfile
import unittest
from pathlib import Path

import numpy as np
import torch

from fdafnet.domain.neural import MaskNetwork, NormalizationStats, flat_parameters, parameter_count
from fdafnet.domain.shared import CheckpointFormatError, FilterDims
from fdafnet.domain.training import AdamSettings, OptimizerState
from fdafnet.infrastructure.checkpoint import (
    MAGIC,
    Checkpoint,
    decode_checkpoint,
    encode_checkpoint,
    read_checkpoint,
    write_checkpoint,
)
from fdafnet.infrastructure.mappers import (
    NU,
    checkpoint_from_training,
    checkpoint_summary,
    network_from_checkpoint,
    optimizer_state_from_checkpoint,
)


class FormatTests(unittest.TestCase):
    def setUp(self):
        self.checkpoint = Checkpoint(
            meta={"variant": "dnn_fdaf", "note": "проверка"},
            tensors={
                "a": np.arange(6, dtype=np.float32).reshape(2, 3),
                "b": np.array([1.5, -2.5]),
                "scalar": np.array(3.0, dtype=np.float32),
            },
        )

    def test_encode_decode(self):
        payload = encode_checkpoint(self.checkpoint)
        self.assertTrue(payload.startswith(MAGIC))
        decoded = decode_checkpoint(payload)
        self.assertEqual(decoded.meta, self.checkpoint.meta)
        self.assertEqual(list(decoded.tensors), ["a", "b", "scalar"])
        self.assertEqual(decoded.tensors["a"].dtype, np.float32)
        self.assertEqual(decoded.tensors["b"].dtype, np.float64)
        np.testing.assert_array_equal(decoded.tensors["a"], self.checkpoint.tensors["a"])
        self.assertEqual(decoded.tensors["scalar"].shape, ())

    def test_corrupt_payloads(self):
        payload = encode_checkpoint(self.checkpoint)
        cases = {
            "magic": b"XXXX" + payload[4:],
            "version": payload[:4] + struct.pack("<I", 99) + payload[8:],
            "truncated": payload[:-3],
            "trailing": payload + b"\x00",
        }
        for name, broken in cases.items():
            with self.subTest(case=name):
                with self.assertRaises(CheckpointFormatError):
                    decode_checkpoint(broken)

    def test_unsupported_dtype(self):
        with self.assertRaises(CheckpointFormatError):
            encode_checkpoint(Checkpoint(meta={}, tensors={"i": np.arange(3)}))

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_checkpoint(Path(tmp) / "sub" / "model.fdnc", self.checkpoint)
            self.assertFalse(path.with_name(path.name + ".tmp").exists())
            np.testing.assert_array_equal(read_checkpoint(path).tensors["b"], self.checkpoint.tensors["b"])
            with self.assertRaises(CheckpointFormatError):
                read_checkpoint(Path(tmp) / "missing.fdnc")


class MapperTests(unittest.TestCase):
    def setUp(self):
        self.dims = FilterDims(32, 16)
        torch.manual_seed(0)
        self.network = MaskNetwork.for_dims(self.dims, 4).double()
        self.stats = NormalizationStats(
            nu=torch.linspace(-1, 1, self.dims.feature_size, dtype=torch.float64),
            sigma=torch.linspace(1, 2, self.dims.feature_size, dtype=torch.float64),
        )

    def test_network_round_trip_is_float32_exact(self):
        checkpoint = checkpoint_from_training(self.network, self.stats, self.dims, variant="dnn_fdaf", epoch=3)
        restored, stats = network_from_checkpoint(decode_checkpoint(encode_checkpoint(checkpoint)), dims=self.dims)
        expected = flat_parameters(self.network).to(torch.float32).to(torch.float64)
        torch.testing.assert_close(flat_parameters(restored), expected, rtol=0, atol=0)
        torch.testing.assert_close(stats.sigma, self.stats.sigma.to(torch.float32).to(torch.float64))
        self.assertEqual(checkpoint.meta["epoch"], 3)
        self.assertEqual(checkpoint_summary(checkpoint)["parameters"], parameter_count(self.network))

    def test_optimizer_state(self):
        settings = AdamSettings(learning_rate=1e-3)
        state = OptimizerState.initial(parameter_count(self.network), settings)
        checkpoint = checkpoint_from_training(self.network, self.stats, self.dims, variant="dnn_fdaf")
        self.assertIsNone(optimizer_state_from_checkpoint(checkpoint, settings))
        checkpoint = checkpoint_from_training(self.network, self.stats, self.dims, variant="dnn_fdaf", optimizer=state)
        restored = optimizer_state_from_checkpoint(checkpoint, settings)
        self.assertEqual(restored.step, 0)
        self.assertEqual(tuple(restored.exp_avg.shape), (parameter_count(self.network),))
        self.assertEqual(checkpoint.meta["adam"]["learning_rate"], 1e-3)

    def test_mismatched_dimensions(self):
        checkpoint = checkpoint_from_training(self.network, self.stats, self.dims, variant="dnn_fdaf")
        with self.assertRaises(CheckpointFormatError):
            network_from_checkpoint(checkpoint, dims=FilterDims(64, 32))

    def test_missing_or_malformed_tensors(self):
        checkpoint = checkpoint_from_training(self.network, self.stats, self.dims, variant="dnn_fdaf")
        without_nu = Checkpoint(meta=checkpoint.meta, tensors={k: v for k, v in checkpoint.tensors.items() if k != NU})
        with self.assertRaises(CheckpointFormatError):
            network_from_checkpoint(without_nu)
        reshaped = dict(checkpoint.tensors)
        key = next(k for k in reshaped if k.startswith("network."))
        reshaped[key] = reshaped[key].reshape(-1)[:-1]
        with self.assertRaises(CheckpointFormatError):
            network_from_checkpoint(Checkpoint(meta=checkpoint.meta, tensors=reshaped))
        with self.assertRaises(CheckpointFormatError):
            network_from_checkpoint(Checkpoint(meta={"fft_size": 32}, tensors=checkpoint.tensors))


if __name__ == "__main__":
    unittest.main()
