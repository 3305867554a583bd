from __future__ import annotations

import hashlib
import json
import platform
import sys
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Sequence

from .. import __version__
from ..application.config import RunConfig
from .config_loader import dumps_run_config

TRACKED_PACKAGES = ("numpy", "scipy", "torch", "soundfile", "PyYAML", "python-dotenv")


def config_hash(config: RunConfig) -> str:
    return hashlib.sha256(dumps_run_config(config).encode("utf-8")).hexdigest()


def package_versions() -> dict[str, str]:
    versions = {"fdafnet": __version__, "python": platform.python_version()}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "missing"
    return versions


def build_manifest(
    config: RunConfig,
    *,
    command: str,
    argv: Sequence[str] | None = None,
    seeds: dict[str, Any] | None = None,
    extra: dict[str, Any] | None = None,
) -> dict[str, Any]:
    manifest = {
        "command": command,
        "argv": list(argv if argv is not None else sys.argv),
        "created": datetime.now(timezone.utc).isoformat(),
        "config_sha256": config_hash(config),
        "config": dumps_run_config(config),
        "seeds": seeds or {},
        "versions": package_versions(),
    }
    if extra:
        manifest.update(extra)
    return manifest


def write_manifest(path: str | Path, manifest: dict[str, Any]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(manifest, indent=2, ensure_ascii=False), encoding="utf-8")
    return target
