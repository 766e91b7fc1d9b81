"""Fixed-step closed-loop engine: guidance -> CPG -> propulsion -> dynamics.

Each control period runs in a pinned order: waypoint update, cross-track
solve, sideslip adaptation (adaptive mode), heading command, wrapped heading
error, command mapping, then one joint RK4 step of the combined vehicle+CPG
state. Guidance outputs logged at step k are computed from the pose at step
k. Everything is deterministic: no wall clock in the loop, no unseeded
randomness anywhere.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, replace
from typing import IO, Optional, Sequence

from . import metrics
from .cpg import CpgParams, CpgState, MappingParams, derivatives_flat, guidance_targets, prepare
from .errors import ConfigError
from .guidance import (
    GuidanceParams,
    GuidanceState,
    WaypointPath,
    alos_heading,
    cross_track_solve,
    sideslip_update,
    update_waypoint,
)
from .integrate import rk4
from .pathgen import SinusoidSpec, generate
from .vehicle import HydroParams, LinkChain, LinkGeometry, VehicleState, wrap_angle

MAX_SIM_DT = 0.02  # s
DIVERGENCE_LIMIT = 1e3  # any state component beyond this aborts the trial

LOG_COLUMNS = (
    "t",
    "x",
    "y",
    "psi",
    "u",
    "v",
    "r",
    "chi_d",
    "y_e",
    "beta_hat",
    "segment",
    "th1",
    "th2",
    "th3",
    "th4",
    "th5",
    "th6",
    "th7",
    "tau_x",
    "tau_y",
    "tau_n",
)

_VEHICLE_FIELDS = ("x", "y", "psi", "u", "v", "r")


@dataclass(frozen=True)
class SimConfig:
    """Immutable full description of one trial."""

    hydro: HydroParams
    links: LinkGeometry
    guidance: GuidanceParams
    cpg: CpgParams
    mapping: MappingParams
    path_spec: SinusoidSpec
    dt: float = 0.01  # s
    t_max: float = 120.0  # s
    initial_pose: tuple[float, float, float] = (0.0, 0.0, 0.0)
    initial_velocity: tuple[float, float, float] = (0.0, 0.0, 0.0)
    current: tuple[float, float] = (0.0, 0.025)  # ambient water drift, NED [m/s]
    rng_seed: int = 0  # reserved for optional disturbance injection
    log_decimation: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.dt <= MAX_SIM_DT:
            raise ConfigError(f"sim dt must satisfy 0 < dt <= {MAX_SIM_DT}, got {self.dt}")
        if self.t_max < 0.0:
            raise ConfigError(f"t_max must be >= 0, got {self.t_max}")
        if self.log_decimation < 1:
            raise ConfigError(f"log_decimation must be >= 1, got {self.log_decimation}")


@dataclass
class TrialLog:
    """Time series of the logged control periods, one tuple per row."""

    rows: list[tuple]

    def column(self, name: str) -> list:
        i = LOG_COLUMNS.index(name)
        return [row[i] for row in self.rows]

    def write_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(LOG_COLUMNS)
        for row in self.rows:
            writer.writerow(
                [f"{v:.9g}" if isinstance(v, float) else str(v) for v in row]
            )


@dataclass
class TrialResult:
    """Outcome of one trial: log, completion flag and cross-track statistics."""

    log: TrialLog
    completed: bool
    rmse: float
    mae: float
    wall_time: float


class TrialDiverged(RuntimeError):
    """A step produced a non-finite or runaway state component."""

    def __init__(self, step_index: int, field_name: str, value: float):
        super().__init__(
            f"trial diverged at step {step_index}: {field_name} = {value!r}"
        )
        self.step_index = step_index
        self.field_name = field_name
        self.value = value
        self.partial_log: Optional[TrialLog] = None


@dataclass
class SimState:
    """World-state bundle passed through the public step operation."""

    t: float
    k: int
    vehicle: VehicleState
    cpg: CpgState
    guidance: GuidanceState
    completed: bool = False


class Engine:
    """Prepared closed-loop machinery for one SimConfig."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.chain = LinkChain(config.links)
        self.path: WaypointPath = generate(config.path_spec)
        self.segments = self.path.segments
        self.prep = prepare(config.cpg)
        self.n_osc = config.cpg.n
        hp = config.hydro
        self.Xu, self.Yv, self.Nr = hp.Xu, hp.Yv, hp.Nr
        self.inv_m = (1.0 / hp.m_surge, 1.0 / hp.m_sway, 1.0 / hp.m_yaw)
        self.current = config.current  # drag and link forces see water-relative flow
        self.adaptive = config.guidance.mode == "adaptive"
        self.field_names = _VEHICLE_FIELDS + tuple(
            f"{group}{i + 1}"
            for group in ("phi", "r", "rdot", "chi", "chidot")
            for i in range(self.n_osc)
        )

    # -- state layout: [x, y, psi, u, v, r] + flat CPG state ----------------

    def initial_flat(self) -> list[float]:
        pose = self.config.initial_pose
        vel = self.config.initial_velocity
        return [pose[0], pose[1], wrap_angle(pose[2]), vel[0], vel[1], vel[2]] + CpgState.zeros(
            self.n_osc
        ).to_flat()

    def control(
        self, y: Sequence[float], gstate: GuidanceState
    ) -> tuple[GuidanceState, float, float, tuple[float, ...], tuple[float, ...]]:
        """Guidance and mapping for the current pose; returns the new guidance
        state, chi_d, y_e and the CPG (amp, bias) targets."""
        cfg = self.config
        p = (y[0], y[1])
        gstate = update_waypoint(gstate, p, self.path, cfg.guidance)
        seg = self.segments[gstate.active_segment]
        _, _, y_e = cross_track_solve(p, seg)
        if self.adaptive:
            beta = sideslip_update(
                gstate.beta_hat, y_e, cfg.guidance.delta, cfg.guidance.gamma, cfg.dt
            )
        else:
            beta = 0.0
        chi_d = alos_heading(seg.angle, y_e, beta, cfg.guidance.delta)
        err = wrap_angle(chi_d - y[2])
        amp_t, bias_t = guidance_targets(err, cfg.mapping, self.n_osc)
        gstate = replace(gstate, beta_hat=beta, cross_track=y_e)
        return gstate, chi_d, y_e, amp_t, bias_t

    def joint_outputs(
        self, y: Sequence[float], amp_t: Sequence[float], bias_t: Sequence[float]
    ) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """Joint angles and rates implied by the current CPG state."""
        n = self.n_osc
        o = 6
        dy = derivatives_flat(y[o:], self.prep, amp_t, bias_t)
        theta = []
        theta_dot = []
        for i in range(n):
            phi = y[o + i]
            r_i = y[o + n + i]
            rd_i = y[o + 2 * n + i]
            chi = y[o + 3 * n + i]
            cd_i = y[o + 4 * n + i]
            sp = math.sin(phi)
            theta.append(chi + r_i * sp)
            theta_dot.append(cd_i + rd_i * sp + r_i * math.cos(phi) * dy[i])
        return tuple(theta), tuple(theta_dot)

    def rate(
        self, y: Sequence[float], amp_t: Sequence[float], bias_t: Sequence[float]
    ) -> list[float]:
        """Joint time derivative of the combined vehicle + CPG state."""
        n = self.n_osc
        o = 6
        psi, u, v, r = y[2], y[3], y[4], y[5]
        out = [0.0] * (o + 5 * n)
        cpg_rate = derivatives_flat(y[o:], self.prep, amp_t, bias_t)
        theta = [0.0] * n
        theta_dot = [0.0] * n
        for i in range(n):
            phi = y[o + i]
            r_i = y[o + n + i]
            sp = math.sin(phi)
            theta[i] = y[o + 3 * n + i] + r_i * sp
            theta_dot[i] = (
                y[o + 4 * n + i] + y[o + 2 * n + i] * sp + r_i * math.cos(phi) * cpg_rate[i]
            )
            out[o + i] = cpg_rate[i]
            out[o + n + i] = cpg_rate[n + i]
            out[o + 2 * n + i] = cpg_rate[2 * n + i]
            out[o + 3 * n + i] = cpg_rate[3 * n + i]
            out[o + 4 * n + i] = cpg_rate[4 * n + i]
        cp = math.cos(psi)
        sp = math.sin(psi)
        # hydrodynamic forces act on the water-relative velocity
        cur_u = cp * self.current[0] + sp * self.current[1]
        cur_v = -sp * self.current[0] + cp * self.current[1]
        ur = u - cur_u
        vr = v - cur_v
        X, Y, N = self.chain.tau(theta, theta_dot, ur, vr, r)
        out[0] = cp * u - sp * v
        out[1] = sp * u + cp * v
        out[2] = r
        out[3] = (X + self.Xu * ur) * self.inv_m[0]
        out[4] = (Y + self.Yv * vr) * self.inv_m[1]
        out[5] = (N + self.Nr * r) * self.inv_m[2]
        return out

    def advance(
        self,
        y: Sequence[float],
        amp_t: tuple[float, ...],
        bias_t: tuple[float, ...],
        step_index: int,
    ) -> list[float]:
        """One RK4 step of the combined state; wraps heading, checks divergence."""
        y_new = rk4(y, lambda s: self.rate(s, amp_t, bias_t), self.config.dt)
        y_new[2] = wrap_angle(y_new[2])
        # a single pass catches NaN too: comparisons with NaN are False
        if not all(-DIVERGENCE_LIMIT <= c <= DIVERGENCE_LIMIT for c in y_new):
            for name, value in zip(self.field_names, y_new):
                if not (-DIVERGENCE_LIMIT <= value <= DIVERGENCE_LIMIT):
                    raise TrialDiverged(step_index, name, value)
        return y_new

    def make_row(
        self,
        t: float,
        y: Sequence[float],
        gstate: GuidanceState,
        chi_d: float,
        y_e: float,
        amp_t: tuple[float, ...],
        bias_t: tuple[float, ...],
    ) -> tuple:
        theta, theta_dot = self.joint_outputs(y, amp_t, bias_t)
        cp = math.cos(y[2])
        sp = math.sin(y[2])
        ur = y[3] - (cp * self.current[0] + sp * self.current[1])
        vr = y[4] - (-sp * self.current[0] + cp * self.current[1])
        tau = self.chain.tau(theta, theta_dot, ur, vr, y[5])
        return (
            t,
            y[0],
            y[1],
            y[2],
            y[3],
            y[4],
            y[5],
            chi_d,
            y_e,
            gstate.beta_hat,
            gstate.active_segment,
            *theta,
            *tau,
        )


def step(state: SimState, config: SimConfig) -> tuple[SimState, tuple]:
    """One control period of the closed loop; returns the next bundle and the
    log row for the period start. Convenience wrapper over run_trial's engine;
    for long runs prefer run_trial, which prepares the engine once."""
    eng = Engine(config)
    y = (
        [
            state.vehicle.x_n,
            state.vehicle.y_n,
            state.vehicle.psi,
            state.vehicle.u,
            state.vehicle.v,
            state.vehicle.r,
        ]
        + state.cpg.to_flat()
    )
    gstate, chi_d, y_e, amp_t, bias_t = eng.control(y, state.guidance)
    row = eng.make_row(state.t, y, gstate, chi_d, y_e, amp_t, bias_t)
    if gstate.path_complete:
        return (
            SimState(state.t, state.k, state.vehicle, state.cpg, gstate, True),
            row,
        )
    y_new = eng.advance(y, amp_t, bias_t, state.k)
    vehicle = VehicleState(*y_new[:6])
    cpg_state = CpgState.from_flat(y_new[6:], eng.n_osc)
    return (
        SimState(state.t + config.dt, state.k + 1, vehicle, cpg_state, gstate),
        row,
    )


def initial_state(config: SimConfig) -> SimState:
    pose = config.initial_pose
    vel = config.initial_velocity
    return SimState(
        t=0.0,
        k=0,
        vehicle=VehicleState(pose[0], pose[1], wrap_angle(pose[2]), *vel),
        cpg=CpgState.zeros(config.cpg.n),
        guidance=GuidanceState(),
    )


def run_trial(config: SimConfig) -> TrialResult:
    """Run to t_max or path completion. Deterministic: identical configs yield
    bit-identical logs. Divergence aborts with the partial log attached."""
    wall_start = time.perf_counter()
    eng = Engine(config)
    y = eng.initial_flat()
    gstate = GuidanceState()
    steps = int(round(config.t_max / config.dt))
    decim = config.log_decimation
    rows: list[tuple] = []
    completed = False
    k = 0
    try:
        while True:
            gstate, chi_d, y_e, amp_t, bias_t = eng.control(y, gstate)
            if k % decim == 0:
                rows.append(eng.make_row(k * config.dt, y, gstate, chi_d, y_e, amp_t, bias_t))
            if gstate.path_complete:
                completed = True
                break
            if k >= steps:
                break
            y = eng.advance(y, amp_t, bias_t, k)
            k += 1
    except TrialDiverged as err:
        err.partial_log = TrialLog(rows)
        raise
    log = TrialLog(rows)
    series = [row[8] for row in rows]
    return TrialResult(
        log=log,
        completed=completed,
        rmse=metrics.rmse(series),
        mae=metrics.mae(series),
        wall_time=time.perf_counter() - wall_start,
    )
