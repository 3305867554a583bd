from __future__ import annotations

import copy
import dataclasses
import typing
from pathlib import Path
from typing import Any, Iterable, Mapping

import yaml

from ..application.config import (
    ControllerSection,
    EvalSection,
    FilterSection,
    MetricsSection,
    NetworkSection,
    RunConfig,
    ScenarioSection,
    TrainingSection,
)
from ..domain.shared import InvalidConfigError, InvalidDimensionError

SECTIONS: dict[str, type] = {
    "filter": FilterSection,
    "controller": ControllerSection,
    "network": NetworkSection,
    "training": TrainingSection,
    "scenario": ScenarioSection,
    "metrics": MetricsSection,
    "eval": EvalSection,
}


def _coerce(value: Any, hint: Any, where: str) -> Any:
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    if origin is typing.Union:
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(value, inner[0], where)
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise InvalidConfigError(f"{where}: expected a list, got {value!r}")
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_coerce(v, args[0], where) for v in value)
        if len(value) != len(args):
            raise InvalidConfigError(f"{where}: expected {len(args)} values, got {len(value)}")
        return tuple(_coerce(v, a, where) for v, a in zip(value, args))
    if origin is dict:
        if not isinstance(value, Mapping):
            raise InvalidConfigError(f"{where}: expected a mapping, got {value!r}")
        return {str(k): _coerce(v, args[1], f"{where}.{k}") for k, v in value.items()}
    if dataclasses.is_dataclass(hint):
        return _build(hint, value, where)
    if value is None:
        raise InvalidConfigError(f"{where}: value must not be null")
    try:
        if hint is bool:
            if not isinstance(value, bool):
                raise ValueError(value)
            return value
        if hint is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(value)
            return int(value)
        if hint is float:
            if isinstance(value, bool):
                raise ValueError(value)
            return float(value)
        if hint is str:
            return str(value)
    except (TypeError, ValueError) as exc:
        raise InvalidConfigError(f"{where}: cannot read {value!r} as {hint.__name__}") from exc
    return value


def _build(cls: type, data: Any, where: str):
    if data is None:
        data = {}
    if not isinstance(data, Mapping):
        raise InvalidConfigError(f"{where}: expected a mapping, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise InvalidConfigError(f"{where}: unknown keys {', '.join(sorted(map(str, unknown)))}")
    kwargs = {key: _coerce(value, hints[key], f"{where}.{key}") for key, value in data.items()}
    try:
        return cls(**kwargs)
    except InvalidDimensionError as exc:
        raise InvalidConfigError(f"{where}: {exc}") from exc


def parse_run_config(data: Mapping[str, Any] | None) -> RunConfig:
    data = data or {}
    if not isinstance(data, Mapping):
        raise InvalidConfigError("config root must be a mapping of sections")
    unknown = set(data) - set(SECTIONS)
    if unknown:
        raise InvalidConfigError(f"unknown config sections: {', '.join(sorted(map(str, unknown)))}")
    sections = {name: _build(cls, data.get(name), name) for name, cls in SECTIONS.items()}
    try:
        return RunConfig(**sections)
    except InvalidDimensionError as exc:
        raise InvalidConfigError(str(exc)) from exc


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, list):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def dump_run_config(config: RunConfig) -> dict[str, Any]:
    return {name: _plain(dataclasses.asdict(getattr(config, name))) for name in SECTIONS}


def dumps_run_config(config: RunConfig) -> str:
    return yaml.safe_dump(dump_run_config(config), sort_keys=False, allow_unicode=True)


def apply_overrides(data: Mapping[str, Any] | None, overrides: Iterable[str]) -> dict[str, Any]:
    """Applies `section.key=value` (value parsed as YAML) and nested `section.key.sub=value`."""
    merged: dict[str, Any] = copy.deepcopy(dict(data or {}))
    for item in overrides:
        path, sep, raw = item.partition("=")
        parts = [p for p in path.strip().split(".") if p]
        if not sep or len(parts) < 2:
            raise InvalidConfigError(f"override must look like section.key=value, got {item!r}")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise InvalidConfigError(f"override {item!r}: {exc}") from exc
        node = merged
        for part in parts[:-1]:
            child = node.get(part)
            if not isinstance(child, dict):
                child = dict(child) if isinstance(child, Mapping) else {}
                node[part] = child
            node = child
        node[parts[-1]] = value
    return merged


def read_config_mapping(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise InvalidConfigError(f"config file not found: {path}")
    try:
        with p.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        raise InvalidConfigError(f"invalid YAML in {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidConfigError(f"{path}: config root must be a mapping of sections")
    return data


def load_run_config(path: str | Path | None = None, overrides: Iterable[str] = ()) -> RunConfig:
    data = read_config_mapping(path) if path else {}
    return parse_run_config(apply_overrides(data, overrides))


def save_run_config(config: RunConfig, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps_run_config(config), encoding="utf-8")


__all__ = [
    "apply_overrides",
    "dump_run_config",
    "dumps_run_config",
    "load_run_config",
    "parse_run_config",
    "read_config_mapping",
    "save_run_config",
]
