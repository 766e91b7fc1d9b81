"""Planar vehicle model: 3-DOF rigid body plus a per-link propulsion surrogate.

The hull is a chain of seven links tiling the body from nose to fluke, each
actuated by one joint (axis sequence yaw, pitch, yaw, yaw, pitch, pitch,
pitch). Yaw links bend in the horizontal plane and act as distributed rudder
surfaces; pitch links flap in the vertical plane and are reduced to a
rectified surge-thrust term so the rigid-body model stays planar (surge,
sway, yaw only; pitch/roll/heave are not modelled).

Frames: NED north-east horizontal plane, heading psi measured from north
toward east, body x forward, body y to starboard, z down. Positive yaw-joint
angle is the convention that deflects the chain aft of the joint toward
starboard, which makes a positive joint bias produce a positive (starboard)
yaw moment under forward motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigError

WATER_DENSITY = 1000.0  # kg/m^3
TOTAL_LENGTH = 0.758  # m, nose to fluke tip
BODY_WIDTH = 0.132  # m
BODY_HEIGHT = 0.136  # m

N_JOINTS = 7
JOINT_AXES = ("yaw", "pitch", "yaw", "yaw", "pitch", "pitch", "pitch")

_TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(angle, _TWO_PI)
    if a > math.pi:
        a -= _TWO_PI
    elif a <= -math.pi:
        a += _TWO_PI
    return a


@dataclass
class VehicleState:
    """Earth-fixed pose [x_n, y_n, psi] and body-fixed velocity [u, v, r]."""

    x_n: float = 0.0  # north position [m]
    y_n: float = 0.0  # east position [m]
    psi: float = 0.0  # heading [rad], wrapped to (-pi, pi]
    u: float = 0.0  # surge velocity [m/s]
    v: float = 0.0  # sway velocity [m/s]
    r: float = 0.0  # yaw rate [rad/s]

    def pose(self) -> tuple[float, float, float]:
        return (self.x_n, self.y_n, self.psi)

    def velocity(self) -> tuple[float, float, float]:
        return (self.u, self.v, self.r)


@dataclass(frozen=True)
class HydroParams:
    """Rigid-body and hydrodynamic derivatives of the diagonal 3-DOF model.

    Added-mass derivatives (Xu_dot, Yv_dot, Nr_dot) are negative in the usual
    sign convention, so effective masses m - Xu_dot etc. exceed the dry
    values. Linear drag derivatives (Xu, Yv, Nr) must be <= 0 so the drag
    matrix is dissipative. Violations are rejected here, at construction,
    never at step time.
    """

    mass: float = 6.0  # kg
    I_zz: float = 0.30  # kg m^2
    Xu_dot: float = -0.6  # kg
    Yv_dot: float = -4.8  # kg
    Nr_dot: float = -0.15  # kg m^2
    Xu: float = -0.6  # kg/s
    Yv: float = -25.0  # kg/s
    Nr: float = -0.20  # kg m^2 / s

    def __post_init__(self) -> None:
        if self.mass <= 0.0:
            raise ConfigError(f"mass must be > 0, got {self.mass}")
        if self.I_zz <= 0.0:
            raise ConfigError(f"I_zz must be > 0, got {self.I_zz}")
        for name, eff in (
            ("mass - Xu_dot", self.m_surge),
            ("mass - Yv_dot", self.m_sway),
            ("I_zz - Nr_dot", self.m_yaw),
        ):
            if eff <= 0.0:
                raise ConfigError(f"effective inertia {name} must be > 0, got {eff}")
        for name in ("Xu", "Yv", "Nr"):
            val = getattr(self, name)
            if val > 0.0:
                raise ConfigError(f"drag derivative {name} must be <= 0, got {val}")

    @property
    def m_surge(self) -> float:
        return self.mass - self.Xu_dot

    @property
    def m_sway(self) -> float:
        return self.mass - self.Yv_dot

    @property
    def m_yaw(self) -> float:
        return self.I_zz - self.Nr_dot


@dataclass(frozen=True)
class LinkGeometry:
    """Per-link geometry of the seven-joint chain, nose to fluke.

    lengths must tile the full body, areas are the projected lateral area
    each link presents to cross flow, and drag_scale is a global multiplier
    standing in for the simulator-level damping knobs of the original rig.
    """

    lengths: tuple[float, ...]
    areas: tuple[float, ...]
    drag_coeffs: tuple[float, ...]
    axes: tuple[str, ...] = JOINT_AXES
    total_length: float = TOTAL_LENGTH
    drag_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("lengths", "areas", "drag_coeffs", "axes"):
            seq = getattr(self, name)
            if len(seq) != N_JOINTS:
                raise ConfigError(f"links.{name} must have {N_JOINTS} entries, got {len(seq)}")
        if self.axes != JOINT_AXES:
            raise ConfigError(
                f"joint axis sequence must be {JOINT_AXES}, got {self.axes}"
            )
        if any(l <= 0.0 for l in self.lengths):
            raise ConfigError("link lengths must all be > 0")
        if any(a < 0.0 for a in self.areas):
            raise ConfigError("link areas must all be >= 0")
        if any(c < 0.0 for c in self.drag_coeffs):
            raise ConfigError("link drag coefficients must all be >= 0")
        if self.drag_scale < 0.0:
            raise ConfigError("drag_scale must be >= 0")
        total = math.fsum(self.lengths)
        if abs(total - self.total_length) > 1e-9:
            raise ConfigError(
                f"link lengths sum to {total!r}, expected total_length {self.total_length!r}"
            )


_LENGTH_FRACTIONS = (0.20, 0.09, 0.10, 0.10, 0.15, 0.17, 0.19)
_FLUKE_AREA = 0.016  # m^2, tail-fin plate, larger than its body slice


def default_links(total_length: float = TOTAL_LENGTH, drag_scale: float = 1.0) -> LinkGeometry:
    """Default chain: link slices of the hull, fluke with its own plate area.

    Yaw links present their side profile (length x height) to cross flow,
    pitch links their top profile (length x width). Drag coefficients are
    surrogate values, not identified ones; the fluke gets a flat-plate-like
    coefficient.
    """
    lengths = tuple(f * total_length for f in _LENGTH_FRACTIONS)
    areas = []
    for i, (length, axis) in enumerate(zip(lengths, JOINT_AXES)):
        if i == N_JOINTS - 1:
            areas.append(_FLUKE_AREA)
        elif axis == "yaw":
            areas.append(length * BODY_HEIGHT)
        else:
            areas.append(length * BODY_WIDTH)
    drag_coeffs = (1.2, 1.5, 1.2, 1.2, 1.5, 1.5, 2.2)
    return LinkGeometry(
        lengths=lengths,
        areas=tuple(areas),
        drag_coeffs=drag_coeffs,
        total_length=total_length,
        drag_scale=drag_scale,
    )


class GeneralizedForce(NamedTuple):
    """Body-frame propulsive force and moment."""

    X: float  # surge force [N]
    Y: float  # sway force [N]
    N: float  # yaw moment [N m]


def rotation_matrix(psi: float) -> np.ndarray:
    """Body-to-NED transform: planar rotation block plus identity yaw row."""
    c, s = math.cos(psi), math.sin(psi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def kinematics(state: VehicleState) -> tuple[float, float, float]:
    """Pose rate [x_n_dot, y_n_dot, psi_dot] from body velocity."""
    c, s = math.cos(state.psi), math.sin(state.psi)
    return (c * state.u - s * state.v, s * state.u + c * state.v, state.r)


def dynamics_rate(
    state: VehicleState, tau: GeneralizedForce, hp: HydroParams
) -> tuple[float, float, float]:
    """Velocity rate [u_dot, v_dot, r_dot].

    Diagonal mass matrix, linear drag, Coriolis neglected (small mass and
    speed), so the solve is three scalar divisions.
    """
    return (
        (tau.X + hp.Xu * state.u) / hp.m_surge,
        (tau.Y + hp.Yv * state.v) / hp.m_sway,
        (tau.N + hp.Nr * state.r) / hp.m_yaw,
    )


class LinkChain:
    """Precomputed chain geometry with the quasi-steady per-link force law.

    Each link feels a resistive force -0.5 rho Cd A |v_n| v_n along its local
    normal, from the flow component normal to the link. Yaw links are
    evaluated in the horizontal plane (accumulating body motion and upstream
    yaw-joint rotation) and contribute X, Y and the moment about the nose.
    Pitch links are evaluated in the vertical plane with arc-length lever
    arms and contribute surge force only, via projection of the rectified
    normal force onto the body x axis. Zero motion yields exactly zero force.
    """

    __slots__ = ("n", "lengths", "half", "coeff", "is_yaw", "pitch_levers")

    def __init__(self, links: LinkGeometry):
        n = len(links.lengths)
        self.n = n
        self.lengths = list(links.lengths)
        self.half = [0.5 * L for L in links.lengths]
        self.coeff = [
            0.5 * WATER_DENSITY * links.drag_scale * cd * a
            for cd, a in zip(links.drag_coeffs, links.areas)
        ]
        self.is_yaw = [ax == "yaw" for ax in links.axes]
        # arc distance from the nose to each joint
        s = [0.0]
        for L in links.lengths:
            s.append(s[-1] + L)
        # for each pitch link: (upstream pitch joint index, lever arm to midpoint)
        levers: list[tuple[tuple[int, float], ...]] = []
        for i in range(n):
            if self.is_yaw[i]:
                levers.append(())
            else:
                mid = s[i] + 0.5 * links.lengths[i]
                levers.append(
                    tuple((j, mid - s[j]) for j in range(i + 1) if not self.is_yaw[j])
                )
        self.pitch_levers = levers

    def tau(
        self,
        angles: Sequence[float],
        rates: Sequence[float],
        u: float,
        v: float,
        r: float,
    ) -> tuple[float, float, float]:
        X = 0.0
        Y = 0.0
        N = 0.0
        qx = 0.0  # current joint position in body frame
        qy = 0.0
        bend = 0.0  # accumulated in-plane rotation (starboard-positive joints)
        incl = 0.0  # accumulated vertical inclination of pitch links
        yaw_src: list[tuple[float, float, float]] = []
        for i in range(self.n):
            if self.is_yaw[i]:
                bend -= angles[i]
                yaw_src.append((qx, qy, -rates[i]))
            else:
                incl += angles[i]
            ca = math.cos(bend)
            sa = math.sin(bend)
            dx = -ca  # link direction, undeformed chain points aft (-x)
            dy = -sa
            hi = self.half[i]
            mx = qx + hi * dx
            my = qy + hi * dy
            if self.is_yaw[i]:
                # midpoint velocity: body motion plus upstream joint rotation
                vx = u - r * my
                vy = v + r * mx
                for jx, jy, w in yaw_src:
                    vx -= w * (my - jy)
                    vy += w * (mx - jx)
                nx = sa  # link normal
                ny = -ca
                vn = vx * nx + vy * ny
                f = -self.coeff[i] * abs(vn) * vn
                fx = f * nx
                fy = f * ny
                X += fx
                Y += fy
                N += mx * fy - my * fx
            else:
                # heave velocity of the midpoint; positive joint angle swings
                # the chain aft of the joint to -z, so the rate enters negated
                w = 0.0
                for j, arm in self.pitch_levers[i]:
                    w -= rates[j] * arm
                ss = math.sin(incl)
                vn = w * math.cos(incl) - u * ss
                # normal force projected onto surge; lateral components cancel
                # by left-right symmetry and are dropped
                X += self.coeff[i] * abs(vn) * vn * ss
            qx += self.lengths[i] * dx
            qy += self.lengths[i] * dy
        return X, Y, N


@lru_cache(maxsize=16)
def _chain_for(links: LinkGeometry) -> LinkChain:
    return LinkChain(links)


def compute_tau(
    joint_angles: Sequence[float],
    joint_rates: Sequence[float],
    state: VehicleState,
    links: LinkGeometry,
) -> GeneralizedForce:
    """Aggregate per-link propulsion forces into the body-frame force vector."""
    if len(joint_angles) != N_JOINTS or len(joint_rates) != N_JOINTS:
        raise ConfigError(
            f"expected {N_JOINTS} joint angles and rates, got "
            f"{len(joint_angles)} and {len(joint_rates)}"
        )
    values = list(joint_angles) + list(joint_rates)
    if not all(math.isfinite(x) for x in values):
        raise ConfigError("joint angles and rates must be finite")
    X, Y, N = _chain_for(links).tau(joint_angles, joint_rates, state.u, state.v, state.r)
    return GeneralizedForce(X, Y, N)
