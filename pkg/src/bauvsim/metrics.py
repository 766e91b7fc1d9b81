"""Cross-track-error statistics and sweep aggregation.

RMSE and MAE are taken over the cross-track errors of the logged steps
(time-uniform sampling). An optional warm-up exclusion is available for
sensitivity studies but is off by default.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from .simcore import TrialResult


class MetricsError(ValueError):
    """Raised for statistics over an empty error series."""


def rmse(series: Sequence[float]) -> float:
    """Root mean square of the series."""
    if len(series) == 0:
        raise MetricsError("rmse of an empty error series")
    return math.sqrt(math.fsum(e * e for e in series) / len(series))


def mae(series: Sequence[float]) -> float:
    """Mean absolute value of the series."""
    if len(series) == 0:
        raise MetricsError("mae of an empty error series")
    return math.fsum(abs(e) for e in series) / len(series)


def error_series(result: "TrialResult", warmup_exclude_s: float = 0.0) -> list[float]:
    """Cross-track errors of the logged steps, optionally dropping a warm-up window."""
    return [row[8] for row in result.log.rows if row[0] >= warmup_exclude_s]


@dataclass(frozen=True)
class SweepKey:
    """Identifies one cell of the guidance/amplitude/look-ahead sweep."""

    guidance_mode: str
    amplitude_mode: str
    delta_multiple: float


@dataclass(frozen=True)
class MetricsRow:
    """One aggregated comparison-table row."""

    key: SweepKey
    rmse_m: float
    mae_m: float
    completed: bool
    sim_seconds: float
    wall_seconds: Optional[float] = None

    def sort_key(self) -> tuple:
        return (self.key.delta_multiple, self.key.guidance_mode, self.key.amplitude_mode)


def aggregate(results: Sequence[tuple[SweepKey, "TrialResult"]]) -> list[MetricsRow]:
    """Comparison table keyed by (guidance mode, amplitude mode, delta multiple)."""
    if len(results) == 0:
        raise MetricsError("aggregate needs at least one trial result")
    rows = []
    for key, res in results:
        sim_seconds = res.log.rows[-1][0] if res.log.rows else 0.0
        rows.append(
            MetricsRow(
                key=key,
                rmse_m=res.rmse,
                mae_m=res.mae,
                completed=res.completed,
                sim_seconds=sim_seconds,
                wall_seconds=res.wall_time,
            )
        )
    rows.sort(key=MetricsRow.sort_key)
    return rows


METRICS_CSV_COLUMNS = (
    "guidance_mode",
    "amplitude_mode",
    "delta_multiple",
    "rmse_m",
    "mae_m",
    "completed",
    "sim_seconds",
    "wall_seconds",
)


def write_metrics_csv(rows: Sequence[MetricsRow], stream: IO[str]) -> None:
    """Write the comparison table as CSV.

    The wall_seconds column is left blank: every sweep artifact is required
    to be a pure function of the sweep spec, and wall-clock measurements are
    not. Measured times are reported on stdout instead.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(METRICS_CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.key.guidance_mode,
                row.key.amplitude_mode,
                f"{row.key.delta_multiple:.9g}",
                f"{row.rmse_m:.9g}",
                f"{row.mae_m:.9g}",
                str(row.completed).lower(),
                f"{row.sim_seconds:.9g}",
                "",
            ]
        )


def render_table(rows: Sequence[MetricsRow], include_wall: bool = True) -> str:
    """Aligned plain-text comparison table."""
    headers = ["guidance", "amplitude", "delta_mult", "rmse_m", "mae_m", "completed", "sim_s"]
    if include_wall:
        headers.append("wall_s")
    table = [headers]
    for row in rows:
        cells = [
            row.key.guidance_mode,
            row.key.amplitude_mode,
            f"{row.key.delta_multiple:.2f}",
            f"{row.rmse_m:.4f}",
            f"{row.mae_m:.4f}",
            str(row.completed).lower(),
            f"{row.sim_seconds:.2f}",
        ]
        if include_wall:
            cells.append("" if row.wall_seconds is None else f"{row.wall_seconds:.2f}")
        table.append(cells)
    widths = [max(len(r[c]) for r in table) for c in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
    return "\n".join(lines)
