from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence


@dataclass(frozen=True)
class ControllerSummary:
    controller: str
    runs: int
    steady_state_db: float
    final_db: float
    mean_erle_db: float
    reconvergence_blocks: Optional[float]
    not_reconverged: int
    rejected_updates: int = 0


@dataclass(frozen=True)
class ProcessReport:
    blocks: int
    mean_block_ms: float
    max_block_ms: float
    budget_ms: float
    rejected_updates: int
    outputs: tuple[str, ...]
    final_nesd_db: Optional[float] = None


def _fmt(value: Optional[float], digits: int = 2) -> str:
    if value is None:
        return "n/a"
    return f"{value:.{digits}f}"


class ReportPresenter:
    def summary_markdown(
        self,
        rows: Sequence[ControllerSummary],
        *,
        block_period_s: float,
        steady_state_window: int,
        tolerance_db: float,
    ) -> str:
        lines = [
            "# Evaluation summary",
            "",
            f"- Block period: `{block_period_s * 1000:.1f} ms`",
            f"- Steady state: mean NESD_ZP over the `{steady_state_window}` blocks before the switch",
            f"- Reconvergence: blocks after the switch until NESD_ZP is within `{tolerance_db:g} dB` of that level",
            "",
            "| Controller | Runs | Steady NESD_ZP dB | Final NESD_ZP dB | Mean ERLE dB | Reconv. blocks (median) | Not reconverged | Rejected updates |",
            "| --- | ---: | ---: | ---: | ---: | ---: | ---: | ---: |",
        ]
        for row in sorted(rows, key=lambda r: r.steady_state_db):
            lines.append(
                f"| `{row.controller}` | {row.runs} | {_fmt(row.steady_state_db)} | {_fmt(row.final_db)} | "
                f"{_fmt(row.mean_erle_db)} | {_fmt(row.reconvergence_blocks, 1)} | {row.not_reconverged} | {row.rejected_updates} |"
            )
        lines.append("")
        return "\n".join(lines)

    def gnuplot_script(self, aggregates: dict[str, Path], *, output: str = "curves.png") -> str:
        def plot(column: int, title: str) -> str:
            curves = ", \\\n     ".join(
                f"'{path.as_posix()}' every ::1 using 2:{column} with lines title '{name}'" for name, path in aggregates.items()
            )
            return f"set ylabel '{title}'\nplot {curves}\n"

        return "\n".join(
            [
                "set datafile separator ','",
                "set terminal pngcairo size 1200,900",
                f"set output '{output}'",
                "set multiplot layout 2,1",
                "set xlabel 'time / s'",
                "set grid",
                plot(3, "NESD_ZP / dB"),
                plot(4, "ERLE / dB"),
                "unset multiplot",
                "",
            ]
        )

    def checkpoint_text(self, summary: dict[str, Any]) -> str:
        meta = summary["meta"]
        lines = [
            f"format version: {summary['version']}",
            f"variant: {meta.get('variant')}",
            f"fft_size M={meta.get('fft_size')}, hop R={meta.get('hop')}, hidden P={meta.get('hidden_size')}",
            f"epoch: {meta.get('epoch')}, optimizer step: {meta.get('optimizer_step')}, seed: {meta.get('seed')}",
            f"network parameters: {summary['parameters']:,}",
            "tensors:",
        ]
        width = max((len(name) for name in summary["tensors"]), default=0)
        for name, shape in summary["tensors"].items():
            lines.append(f"  {name.ljust(width)}  {tuple(shape)}")
        extra = {k: v for k, v in meta.items() if k not in {"variant", "fft_size", "hop", "hidden_size", "epoch", "optimizer_step", "seed"}}
        if extra:
            lines.append("meta: " + json.dumps(extra, sort_keys=True))
        return "\n".join(lines)

    def process_text(self, report: ProcessReport) -> str:
        share = report.mean_block_ms / report.budget_ms * 100 if report.budget_ms else 0.0
        lines = [
            f"blocks processed: {report.blocks}",
            f"per-block time: mean {report.mean_block_ms:.3f} ms, max {report.max_block_ms:.3f} ms "
            f"({share:.1f}% of the {report.budget_ms:.1f} ms block)",
            f"rejected updates: {report.rejected_updates}",
        ]
        if report.final_nesd_db is not None:
            lines.append(f"final NESD_ZP: {report.final_nesd_db:.2f} dB")
        lines.extend(f"wrote {path}" for path in report.outputs)
        return "\n".join(lines)
