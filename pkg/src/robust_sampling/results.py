"""Serialising Monte Carlo summaries and game transcripts."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

from .game import GameConfig, Summary

CSV_COLUMNS = (
    "sampler", "param", "n", "N", "eps", "delta", "adversary", "trials",
    "valid", "failures", "delta_hat", "ci_lo", "ci_hi", "aborts", "seed",
)  # fmt: skip


def summary_row(summary: Summary, cfg: GameConfig, master_seed: int, delta=None) -> dict[str, str]:
    """Flat record of a summary; big integers and rationals as decimal strings."""
    return {
        "sampler": cfg.sampler.kind.value,
        "param": str(cfg.sampler.param),
        "n": str(cfg.n),
        "N": str(cfg.system.universe_size),
        "eps": str(cfg.eps),
        "delta": "" if delta is None else str(delta),
        "adversary": cfg.adversary,
        "trials": str(summary.trials),
        "valid": str(summary.valid_trials),
        "failures": str(summary.failures),
        "delta_hat": str(summary.delta_hat),
        "ci_lo": repr(summary.wilson_interval[0]),
        "ci_hi": repr(summary.wilson_interval[1]),
        "aborts": str(summary.aborts),
        "seed": str(master_seed),
    }


def render(row: dict[str, str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerow(row)
        return buf.getvalue()
    if fmt in ("json", "jsonl"):
        return json.dumps(row, sort_keys=True) + "\n"
    raise ValueError(f"format: unknown output format {fmt!r}")


def emit_results(summary: Summary, fmt: str, path: str | Path | None, cfg: GameConfig, master_seed: int, delta=None) -> None:
    write_text(render(summary_row(summary, cfg, master_seed, delta), fmt), path)


def write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)
