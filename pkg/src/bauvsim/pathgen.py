"""Sinusoidal waypoint generation anchored at the vehicle's start pose.

Waypoints are laid out chord-uniformly: point i sits at along-chord distance
i * L / (n - 1) from the origin, offset laterally by A * sin(2 pi N i / (n - 1)),
then the whole pattern is rotated by the base heading. The first point is the
origin exactly, and for integer N the last point is the chord end.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO

from .errors import ConfigError
from .guidance import WaypointPath


@dataclass(frozen=True)
class SinusoidSpec:
    """Parameters of the sinusoidal reference path."""

    amplitude: float = 0.5  # A [m]
    periods: float = 3.0  # N, sinusoidal period count
    length: float = 10.0  # L, total chord length [m]
    heading: float = 0.0  # theta, base heading [rad]
    n_points: int = 61
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.length <= 0.0:
            raise ConfigError(f"path length must be > 0, got {self.length}")
        if self.n_points < 2:
            raise ConfigError(f"path needs n_points >= 2, got {self.n_points}")
        if self.amplitude < 0.0:
            raise ConfigError(f"path amplitude must be >= 0, got {self.amplitude}")


def generate(spec: SinusoidSpec) -> WaypointPath:
    """Waypoint list for the sinusoid; raises ConfigError on a degenerate spec."""
    ct = math.cos(spec.heading)
    st = math.sin(spec.heading)
    x0, y0 = spec.origin
    denom = spec.n_points - 1
    pts = []
    for i in range(spec.n_points):
        s = spec.length * i / denom
        lat = spec.amplitude * math.sin(2.0 * math.pi * spec.periods * i / denom)
        pts.append((x0 + s * ct - lat * st, y0 + s * st + lat * ct))
    return WaypointPath(tuple(pts))


def write_waypoints_csv(path: WaypointPath, stream: IO[str]) -> None:
    """Emit waypoints as CSV with columns index, x_m, y_m."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["index", "x_m", "y_m"])
    for i, (x, y) in enumerate(path.points):
        writer.writerow([i, f"{x:.9g}", f"{y:.9g}"])
