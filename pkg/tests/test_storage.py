import csv
import tempfile
import unittest
from pathlib import Path

import numpy as np
import soundfile as sf

from fdafnet.domain.metrics import MetricSeries
from fdafnet.domain.scenario import ScenarioBuilder, ScenarioConfig, SyntheticSignals
from fdafnet.domain.shared import FilterDims, InvalidConfigError, InvalidInputError
from fdafnet.domain.training import EpochReport
from fdafnet.infrastructure.audio import read_mono, write_mono
from fdafnet.infrastructure.random import NumpyRandomizer
from fdafnet.infrastructure.storage import (
    ScenarioDirectory,
    TrainingLogCsv,
    WavCorpusSignals,
    crop_or_tile,
    read_f64,
    write_mask_means,
    write_metric_series,
)


class FirstRandomizer:
    """Always picks the first option."""

    def integers(self, low, high):
        return low

    def choice(self, seq):
        return seq[0]


def small_scenario():
    config = ScenarioConfig(
        fft_size=32,
        hop=16,
        air_length=64,
        duration=0.1,
        switch_window=(0.04, 0.06),
        t60_range=(0.005, 0.01),
        onset_delay=(0, 2),
    )
    return ScenarioBuilder(config, randomizer_factory=NumpyRandomizer.from_seed).build(7)


class ScenarioDirectoryTests(unittest.TestCase):
    def test_save_and_load(self):
        scenario = small_scenario()
        with tempfile.TemporaryDirectory() as tmp:
            store = ScenarioDirectory(tmp)
            path = store.save(scenario, filter_length=16)
            self.assertEqual(path.name, "scenario_0007")
            self.assertEqual([p.name for p in store.list()], ["scenario_0007"])
            loaded = store.load_all()[0]
        np.testing.assert_array_equal(loaded.air_pre, scenario.air_pre)
        np.testing.assert_array_equal(loaded.air_post, scenario.air_post)
        np.testing.assert_allclose(loaded.x, scenario.x, atol=1e-7)
        np.testing.assert_allclose(loaded.y, scenario.y, atol=1e-7)
        self.assertEqual(loaded.switch_block, scenario.switch_block)
        self.assertEqual(loaded.draws, scenario.draws)
        self.assertEqual((loaded.index, loaded.split, loaded.hop), (7, scenario.split, 16))

    def test_geometry_must_match_the_run(self):
        scenario = small_scenario()
        with tempfile.TemporaryDirectory() as tmp:
            path = ScenarioDirectory(tmp).save(scenario, filter_length=16)
            matching = ScenarioDirectory(tmp, dims=FilterDims(32, 16), sample_rate=16000).load(path)
            self.assertEqual(matching.hop, 16)
            with self.assertRaises(InvalidConfigError):
                ScenarioDirectory(tmp, dims=FilterDims(32, 8)).load(path)
            with self.assertRaises(InvalidConfigError):
                ScenarioDirectory(tmp, dims=FilterDims(48, 16)).load(path)
            with self.assertRaises(InvalidConfigError):
                ScenarioDirectory(tmp, sample_rate=8000).load_all()

    def test_missing_directory_and_meta(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(InvalidInputError):
                ScenarioDirectory(Path(tmp) / "absent").list()
            with self.assertRaises(InvalidInputError):
                ScenarioDirectory(tmp).load_all()
            broken = Path(tmp) / "scenario_0000"
            broken.mkdir()
            with self.assertRaises(InvalidInputError):
                ScenarioDirectory(tmp).load(broken)

    def test_f64_vectors(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "v.f64"
            path.write_bytes(np.array([1.0, -2.0], dtype="<f8").tobytes() + b"\x00")
            with self.assertRaises(InvalidInputError):
                read_f64(path)


class CsvTableTests(unittest.TestCase):
    def test_metric_series_columns(self):
        series = MetricSeries("run_0001", 0.064, np.array([-1.25, -7.5]), np.array([3.0, 9.125]))
        with tempfile.TemporaryDirectory() as tmp:
            path = write_metric_series(Path(tmp) / "fdaf" / "run_0001.csv", series)
            header = path.read_text(encoding="utf-8").splitlines()[0]
            with path.open(encoding="utf-8", newline="") as f:
                rows = list(csv.DictReader(f))
        self.assertEqual(header, "block_index,time_s,nesd_zp_db,erle_db")
        self.assertEqual([r["block_index"] for r in rows], ["0", "1"])
        np.testing.assert_allclose([float(r["time_s"]) for r in rows], series.times)
        np.testing.assert_allclose([float(r["nesd_zp_db"]) for r in rows], series.nesd_zp_db)
        np.testing.assert_allclose([float(r["erle_db"]) for r in rows], series.erle_db)

    def test_mask_means(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_mask_means(Path(tmp) / "m.csv", np.array([[0.5, 1.0], [0.25, 0.75]]), 0.5)
            lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "block_index,time_s,mean_m_mu,mean_m_e")
        self.assertEqual(lines[2], "1,1.000000,0.250000,0.750000")

    def test_training_log_appends(self):
        with tempfile.TemporaryDirectory() as tmp:
            log = TrainingLogCsv(Path(tmp) / "logs" / "train.csv")
            log.append(EpochReport(epoch=1, mean_loss=-3.5, grad_norm=0.25, wall_time_s=1.0, optimizer_steps=2))
            log.append(EpochReport(epoch=2, mean_loss=-4.5, grad_norm=0.125, wall_time_s=1.0, optimizer_steps=4))
            with log.path.open(encoding="utf-8", newline="") as f:
                rows = list(csv.DictReader(f))
        self.assertEqual([r["epoch"] for r in rows], ["1", "2"])
        self.assertEqual(float(rows[1]["mean_loss_db"]), -4.5)


class CorpusTests(unittest.TestCase):
    def test_crop_or_tile(self):
        samples = np.array([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(crop_or_tile(samples, 7, FirstRandomizer()), [1, 2, 3, 1, 2, 3, 1])
        np.testing.assert_array_equal(crop_or_tile(samples, 2, FirstRandomizer()), [1, 2])
        with self.assertRaises(InvalidInputError):
            crop_or_tile(np.zeros(0), 4, FirstRandomizer())

    def test_wav_sources_with_synthetic_fallback(self):
        fallback = SyntheticSignals(sample_rate=8000, source_kind="white", interferer_kind="white", onset_range=(0, 0))
        with tempfile.TemporaryDirectory() as tmp:
            write_mono(Path(tmp) / "src" / "a.wav", np.full(100, 0.25), 8000)
            write_mono(Path(tmp) / "air" / "h.wav", np.array([0.0, 3.0, 4.0]), 8000)
            signals = WavCorpusSignals(
                sample_rate=8000, fallback=fallback, source_dir=str(Path(tmp) / "src"), air_dir=str(Path(tmp) / "air")
            )
            randomizer = NumpyRandomizer.from_seed(0)
            np.testing.assert_allclose(signals.source(250, randomizer), np.full(250, 0.25))
            np.testing.assert_allclose(signals.air(5, 0.1, 0, randomizer), [0.0, 0.6, 0.8, 0.0, 0.0], atol=1e-7)
            self.assertEqual(signals.interferer(40, randomizer).shape, (40,))
            with self.assertRaises(InvalidInputError):
                WavCorpusSignals(sample_rate=16000, fallback=fallback, source_dir=str(Path(tmp) / "src")).source(
                    10, randomizer
                )
            with self.assertRaises(InvalidInputError):
                WavCorpusSignals(sample_rate=8000, fallback=fallback, interferer_dir=str(Path(tmp) / "none"))

    def test_read_mono_rejects_stereo(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "stereo.wav"
            write_mono(path, np.zeros(10), 8000)
            samples, rate = read_mono(path)
            self.assertEqual((samples.shape, rate), ((10,), 8000))
            sf.write(str(path), np.zeros((10, 2)), 8000)
            with self.assertRaises(InvalidInputError):
                read_mono(path)


if __name__ == "__main__":
    unittest.main()
