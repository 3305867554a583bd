from .config_loader import (
    apply_overrides,
    dump_run_config,
    dumps_run_config,
    load_run_config,
    parse_run_config,
    save_run_config,
)

__all__ = [
    "apply_overrides",
    "dump_run_config",
    "dumps_run_config",
    "load_run_config",
    "parse_run_config",
    "save_run_config",
]
