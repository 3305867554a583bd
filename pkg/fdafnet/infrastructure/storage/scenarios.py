from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import yaml

from ...domain.scenario import Scenario, SegmentDraw
from ...domain.shared import FilterDims, InvalidConfigError, InvalidInputError
from ..audio import read_mono, write_mono

logger = logging.getLogger(__name__)

SCENARIO_PREFIX = "scenario_"


def scenario_dir_name(index: int) -> str:
    return f"{SCENARIO_PREFIX}{index:04d}"


def _write_f64(path: Path, values: np.ndarray) -> None:
    path.write_bytes(np.ascontiguousarray(values, dtype="<f8").tobytes())


def read_f64(path: str | Path) -> np.ndarray:
    p = Path(path)
    if not p.exists():
        raise InvalidInputError(f"binary vector not found: {path}")
    payload = p.read_bytes()
    if len(payload) % 8:
        raise InvalidInputError(f"{path}: size {len(payload)} is not a multiple of 8 bytes")
    return np.frombuffer(payload, dtype="<f8").astype(np.float64)


def _draw_meta(draw: SegmentDraw) -> dict:
    return {
        "t60": draw.t60,
        "onset": draw.onset,
        "speech_snr_db": draw.speech_snr_db,
        "stationary_snr_db": draw.stationary_snr_db,
    }


class ScenarioDirectory:
    """Scenario export: x/y/n WAV tracks, AIRs as float64 vectors, meta.yaml."""

    def __init__(self, root: str | Path, *, dims: FilterDims | None = None, sample_rate: int | None = None):
        self.root = Path(root)
        self._dims = dims
        self._sample_rate = sample_rate

    def _check_geometry(self, meta_path: Path, *, rate: int, hop: int, filter_length) -> None:
        mismatches = []
        if self._sample_rate is not None and rate != self._sample_rate:
            mismatches.append(f"sample_rate {rate} != {self._sample_rate}")
        if self._dims is not None:
            if hop != self._dims.hop:
                mismatches.append(f"hop {hop} != {self._dims.hop}")
            if filter_length is not None and int(filter_length) != self._dims.filter_length:
                mismatches.append(f"filter_length {filter_length} != {self._dims.filter_length}")
        if mismatches:
            raise InvalidConfigError(f"{meta_path}: scenario geometry differs from the run config (" + ", ".join(mismatches) + ")")

    def save(self, scenario: Scenario, *, filter_length: int) -> Path:
        target = self.root / scenario_dir_name(scenario.index)
        target.mkdir(parents=True, exist_ok=True)
        write_mono(target / "x.wav", scenario.x, scenario.sample_rate)
        write_mono(target / "y.wav", scenario.y, scenario.sample_rate)
        write_mono(target / "n.wav", scenario.n, scenario.sample_rate)
        _write_f64(target / "air_pre.f64", scenario.air_pre)
        _write_f64(target / "air_post.f64", scenario.air_post)
        meta = {
            "seed": scenario.seed,
            "split": scenario.split,
            "index": scenario.index,
            "switch_block": scenario.switch_block,
            "sample_rate": scenario.sample_rate,
            "hop": scenario.hop,
            "filter_length": filter_length,
            "air_length": scenario.air_length,
            "segments": [_draw_meta(d) for d in scenario.draws],
        }
        with (target / "meta.yaml").open("w", encoding="utf-8") as f:
            yaml.safe_dump(meta, f, sort_keys=False)
        return target

    def list(self) -> list[Path]:
        if not self.root.is_dir():
            raise InvalidInputError(f"scenario directory not found: {self.root}")
        return sorted(p for p in self.root.iterdir() if p.is_dir() and p.name.startswith(SCENARIO_PREFIX))

    def load(self, path: str | Path) -> Scenario:
        p = Path(path)
        meta_path = p / "meta.yaml"
        if not meta_path.exists():
            raise InvalidInputError(f"{p}: meta.yaml missing")
        with meta_path.open("r", encoding="utf-8") as f:
            meta = yaml.safe_load(f) or {}
        try:
            rate = int(meta["sample_rate"])
            hop = int(meta["hop"])
            switch_block = int(meta["switch_block"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"{meta_path}: incomplete metadata") from exc
        self._check_geometry(meta_path, rate=rate, hop=hop, filter_length=meta.get("filter_length"))
        x, _ = read_mono(p / "x.wav", sample_rate=rate)
        y, _ = read_mono(p / "y.wav", sample_rate=rate)
        n, _ = read_mono(p / "n.wav", sample_rate=rate)
        if not (len(x) == len(y) == len(n)):
            raise InvalidInputError(f"{p}: track lengths differ ({len(x)}, {len(y)}, {len(n)})")
        draws = tuple(
            SegmentDraw(
                t60=float(s["t60"]),
                onset=int(s["onset"]),
                speech_snr_db=s.get("speech_snr_db"),
                stationary_snr_db=s.get("stationary_snr_db"),
            )
            for s in meta.get("segments", [])
        )
        return Scenario(
            x=x,
            d=y - n,
            n=n,
            air_pre=read_f64(p / "air_pre.f64"),
            air_post=read_f64(p / "air_post.f64"),
            switch_block=switch_block,
            hop=hop,
            sample_rate=rate,
            seed=int(meta.get("seed", 0)),
            split=int(meta.get("split", 0)),
            index=int(meta.get("index", 0)),
            draws=draws,
        )

    def load_all(self) -> list[Scenario]:
        paths = self.list()
        if not paths:
            raise InvalidInputError(f"no scenarios under {self.root}")
        logger.info("Loading %s scenarios from %s", len(paths), self.root)
        return [self.load(path) for path in paths]
