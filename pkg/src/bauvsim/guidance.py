"""Waypoint-path geometry and the LOS/ALOS heading laws.

Cross-track error is computed in the path-tangential frame of the active
segment. The production path uses the closed-form rotation, which is defined
for every segment orientation; the literal path-frame linear system is kept
as a reference implementation (it is singular for north-south segments where
tan(pi_p) blows up) and is cross-validated against the rotation in tests.

Sign convention: y_e > 0 when the vehicle lies on the side pointed to by the
segment tangent rotated +90 degrees in the (north, east) parameter plane,
i.e. cross(t_hat, p - a) > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigError
from .vehicle import wrap_angle

GUIDANCE_MODES = ("traditional", "adaptive")

_MIN_SEGMENT = 1e-9  # m, below this consecutive waypoints count as coincident


class Segment(NamedTuple):
    """One path segment with cached tangential angle and length."""

    ax: float
    ay: float
    bx: float
    by: float
    angle: float  # path-tangential angle pi_p [rad]
    length: float  # [m]


def path_tangential_angle(a: Sequence[float], b: Sequence[float]) -> float:
    """Heading of the segment a -> b in the NED frame, range (-pi, pi]."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    if math.hypot(dx, dy) <= _MIN_SEGMENT:
        raise ConfigError(f"degenerate segment: waypoints {tuple(a)} and {tuple(b)} coincide")
    return math.atan2(dy, dx)


@dataclass(frozen=True)
class WaypointPath:
    """Ordered 2-D waypoints with per-segment tangential angle and length."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ConfigError(f"path needs at least 2 waypoints, got {len(self.points)}")
        for i in range(len(self.points) - 1):
            a, b = self.points[i], self.points[i + 1]
            if math.hypot(b[0] - a[0], b[1] - a[1]) <= _MIN_SEGMENT:
                raise ConfigError(f"consecutive waypoints {i} and {i + 1} coincide: {a}")

    @classmethod
    def from_points(cls, pts: Sequence[Sequence[float]]) -> "WaypointPath":
        return cls(tuple((float(p[0]), float(p[1])) for p in pts))

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1

    @cached_property
    def segments(self) -> tuple[Segment, ...]:
        segs = []
        for i in range(self.n_segments):
            (ax, ay), (bx, by) = self.points[i], self.points[i + 1]
            segs.append(
                Segment(ax, ay, bx, by, math.atan2(by - ay, bx - ax), math.hypot(bx - ax, by - ay))
            )
        return tuple(segs)

    def segment(self, index: int) -> Segment:
        return self.segments[index]


@dataclass(frozen=True)
class GuidanceParams:
    """Look-ahead law configuration."""

    delta: float  # look-ahead distance [m]
    gamma: float = 0.05  # sideslip adaptation gain [1/s]
    mode: str = "adaptive"  # "traditional" (LOS) or "adaptive" (ALOS)
    switch_radius: float = 0.758  # waypoint acceptance distance [m]

    def __post_init__(self) -> None:
        if self.mode not in GUIDANCE_MODES:
            raise ConfigError(f"guidance mode must be one of {GUIDANCE_MODES}, got {self.mode!r}")
        if self.delta <= 0.0:
            raise ConfigError(f"look-ahead delta must be > 0, got {self.delta}")
        if self.switch_radius <= 0.0:
            raise ConfigError(f"switch_radius must be > 0, got {self.switch_radius}")
        if self.gamma < 0.0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.mode == "adaptive" and self.gamma <= 0.0:
            raise ConfigError("adaptive mode requires gamma > 0")


@dataclass(frozen=True)
class GuidanceState:
    """Per-trial guidance memory: active segment, sideslip estimate, last error."""

    active_segment: int = 0
    beta_hat: float = 0.0  # estimated sideslip [rad]; stays 0 in traditional mode
    cross_track: float = 0.0  # last y_e [m]
    path_complete: bool = False


def cross_track_solve(
    p: Sequence[float], seg: Segment
) -> tuple[float, float, float]:
    """Foot of the path-tangential frame and signed cross-track error.

    Closed-form rotation; total for every segment orientation.
    """
    c = math.cos(seg.angle)
    s = math.sin(seg.angle)
    dx = p[0] - seg.ax
    dy = p[1] - seg.ay
    along = dx * c + dy * s
    y_e = -dx * s + dy * c
    return (seg.ax + along * c, seg.ay + along * s, y_e)


def cross_track_solve_linear(
    p: Sequence[float], seg: Segment
) -> tuple[float, float, float]:
    """Reference path-frame linear system for the cross-track computation.

    Solves A x = b for x = [x_p, y_p, y_e]. The third row involves
    tan(pi_p), so near-vertical segments are rejected; production code uses
    cross_track_solve, which has no singularity.
    """
    c = math.cos(seg.angle)
    s = math.sin(seg.angle)
    if abs(c) < 1e-6:
        raise ValueError(f"segment angle {seg.angle} is too close to +-pi/2 for the linear form")
    t = s / c
    a_mat = np.array([[c, s, 0.0], [-s, c, 1.0], [t, -1.0, 0.0]])
    b_vec = np.array(
        [c * p[0] + s * p[1], -s * p[0] + c * p[1], t * seg.bx - seg.by]
    )
    x_p, y_p, y_e = np.linalg.solve(a_mat, b_vec)
    return (float(x_p), float(y_p), float(y_e))


def los_heading(pi_p: float, y_e: float, delta: float) -> float:
    """Traditional LOS heading command, wrapped to (-pi, pi]."""
    return alos_heading(pi_p, y_e, 0.0, delta)


def alos_heading(pi_p: float, y_e: float, beta_hat: float, delta: float) -> float:
    """Adaptive LOS heading command; reduces to LOS exactly at beta_hat = 0."""
    if delta <= 0.0:
        raise ConfigError(f"look-ahead delta must be > 0, got {delta}")
    return wrap_angle(pi_p - beta_hat - math.atan(y_e / delta))


def sideslip_update(
    beta_hat: float, y_e: float, delta: float, gamma: float, dt: float
) -> float:
    """One explicit-Euler step of the sideslip adaptation law.

    The rate gamma * delta / sqrt(delta^2 + y_e^2) * y_e is bounded by
    gamma * delta in magnitude for all y_e.
    """
    rate = gamma * delta / math.sqrt(delta * delta + y_e * y_e) * y_e
    return beta_hat + dt * rate


def update_waypoint(
    state: GuidanceState,
    p: Sequence[float],
    path: WaypointPath,
    params: GuidanceParams,
) -> GuidanceState:
    """Advance the active segment; never retreats.

    Switches when the along-track coordinate passes within switch_radius of
    the segment end, or the vehicle enters the acceptance circle of the
    target waypoint. On the final segment the index clamps and the
    path-complete flag is raised instead.
    """
    seg = path.segment(state.active_segment)
    c = math.cos(seg.angle)
    s = math.sin(seg.angle)
    along = (p[0] - seg.ax) * c + (p[1] - seg.ay) * s
    dist_target = math.hypot(p[0] - seg.bx, p[1] - seg.by)
    if along <= seg.length - params.switch_radius and dist_target >= params.switch_radius:
        return state
    if state.active_segment >= path.n_segments - 1:
        if state.path_complete:
            return state
        return replace(state, path_complete=True)
    return replace(state, active_segment=state.active_segment + 1)
