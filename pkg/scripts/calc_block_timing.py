#!/usr/bin/env python3
from __future__ import annotations

import argparse
import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict


@dataclass
class Stat:
    total: int = 0
    within_budget: int = 0
    errors: int = 0
    total_ms: float = 0.0
    min_ms: float | None = None
    max_ms: float | None = None

    def share_within_budget(self) -> float:
        if self.total == 0:
            return 0.0
        return self.within_budget / self.total

    def avg_ms(self) -> float:
        if self.total == 0:
            return 0.0
        return self.total_ms / self.total


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Aggregate timing spans per action and check per-block time against the real-time budget."
    )
    parser.add_argument(
        "--log",
        type=Path,
        default=Path("data/metrics/actions.log"),
        help="Path to JSONL log or directory with rotated logs (default: data/metrics/actions.log)",
    )
    parser.add_argument("--hop", type=int, default=1024, help="Block shift R in samples (default: 1024)")
    parser.add_argument("--sample-rate", type=int, default=16000, help="Sampling rate in Hz (default: 16000)")
    parser.add_argument(
        "--output",
        type=Path,
        default=Path("block_timing_report.md"),
        help="Where to write Markdown report (default: ./block_timing_report.md)",
    )
    return parser.parse_args()


def budget_ms(hop: int, sample_rate: int) -> float:
    return hop / sample_rate * 1000.0


def iter_logs(path: Path):
    if path.is_file():
        yield path
    elif path.is_dir():
        for entry in sorted(path.glob("*.log*")):
            if entry.is_file():
                yield entry
    else:
        raise FileNotFoundError(f"No such log file or directory: {path}")


def collect_stats(log_path: Path, budget: float) -> dict[str, Stat]:
    stats: dict[str, Stat] = defaultdict(Stat)
    found_files = False
    try:
        for file in iter_logs(log_path):
            found_files = True
            with file.open("r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        payload = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    action = payload.get("action")
                    if not action:
                        continue
                    duration = float(payload.get("duration_ms", 0))
                    stat = stats[aggregate_key(action, payload)]
                    stat.total += 1
                    stat.total_ms += duration
                    stat.min_ms = duration if stat.min_ms is None else min(stat.min_ms, duration)
                    stat.max_ms = duration if stat.max_ms is None else max(stat.max_ms, duration)
                    if not bool(payload.get("success", False)):
                        stat.errors += 1
                    if duration <= budget:
                        stat.within_budget += 1
    except FileNotFoundError:
        print(f"[WARN] Log path '{log_path}' not found, skipping.")
        return {}
    if not found_files:
        print(f"[WARN] No log files discovered under '{log_path}'.")
    return stats


def aggregate_key(action: str, payload: Dict[str, Any]) -> str:
    source = payload.get("source")
    if action in {"process:block", "eval:run"} and source:
        return f"{action} [{source}]"
    return action


def render_markdown(stats: dict[str, Stat], output: Path, budget: float) -> None:
    output.parent.mkdir(parents=True, exist_ok=True)
    lines: list[str] = [
        "# Block timing report",
        "",
        f"- Real-time budget per block: `{budget:.2f} ms`",
        "- `Within budget` only matters for `process:block` rows",
        "",
        "| Action | Calls | Avg ms | Min ms | Max ms | Within budget | Errors |",
        "| --- | ---: | ---: | ---: | ---: | ---: | ---: |",
    ]
    for action in sorted(stats):
        stat = stats[action]
        lines.append(
            f"| `{action}` | {stat.total} | {stat.avg_ms():.3f} | {(stat.min_ms or 0):.3f} | "
            f"{(stat.max_ms or 0):.3f} | {stat.share_within_budget() * 100:.1f}% | {stat.errors} |"
        )
    output.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> None:
    args = parse_args()
    budget = budget_ms(args.hop, args.sample_rate)
    stats = collect_stats(args.log, budget)
    if not stats:
        print("No actions found. Did you point to the correct log?")
        return
    render_markdown(stats, args.output, budget)
    print(f"Wrote report to {args.output}")


if __name__ == "__main__":
    main()
