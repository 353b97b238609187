"""Fixed-schema CSV reports for verification sweeps.

Columns: trial, m, n, delta, msw, sw, bound, slack, regret_p1..regret_pn,
strategy_source. Numbers are exact decimals at the configured scale;
anything that does not terminate at that scale is written as the reduced
``p/q`` rational, never rounded. Output is RFC 4180 (CRLF line endings) and a
pure function of the report, so equal sweeps produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path

from .money import DEFAULT_SCALE, format_money
from .verify import SweepReport


def sweep_csv_text(report: SweepReport, scale: int = DEFAULT_SCALE) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    header = ["trial", "m", "n", "delta", "msw", "sw", "bound", "slack"]
    header += [f"regret_p{i + 1}" for i in range(report.n)]
    header += ["strategy_source"]
    writer.writerow(header)
    for row in report.rows:
        cells = [
            str(row.trial), str(row.m), str(row.n),
            format_money(row.delta, scale),
            format_money(row.msw, scale),
            format_money(row.sw, scale),
            format_money(row.bound, scale),
            format_money(row.slack, scale),
        ]
        cells += [format_money(r, scale) for r in row.regrets]
        cells += [row.strategy_source]
        writer.writerow(cells)
    return buf.getvalue()


def write_sweep_csv(report: SweepReport, path, scale: int = DEFAULT_SCALE) -> None:
    Path(path).write_text(sweep_csv_text(report, scale), encoding="utf-8", newline="")
