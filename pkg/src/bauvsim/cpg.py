"""Seven-oscillator CPG network and the heading-command mapping functions.

Each oscillator carries a phase, a critically-damped second-order amplitude
and a critically-damped second-order bias; the joint angle is
theta_i = chi_i + r_i * sin(phi_i). Heading commands enter through two
mappings evaluated on the wrapped heading error: a tanh map sets the bias
targets of the yaw joints (1, 3, 4) and a Gaussian map attenuates the
amplitude targets of the fluke pitch joints (5, 6, 7) when amplitude control
is enabled.

Joints are numbered 1..7 nose to fluke in the public API; arrays are
0-indexed internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import ConfigError
from .integrate import rk4
from .vehicle import N_JOINTS

YAW_JOINTS = (1, 3, 4)
FLUKE_JOINTS = (5, 6, 7)
AMPLITUDE_MODES = ("max", "controlled")

MAX_CPG_DT = 0.05  # s, stability guard for the explicit integrator


@dataclass(frozen=True)
class CouplingEdge:
    """Directed phase-coupling term: oscillator `target` listens to `source`.

    In steady phase lock, phi[source] - phi[target] converges to phase_lag.
    """

    target: int
    source: int
    weight: float  # [1/s]
    phase_lag: float  # [rad]


def chain_coupling(
    weight: float = 4.0,
    tail_phase_lag: float = 2.0 * math.pi / 3.0,
    n: int = N_JOINTS,
) -> tuple[CouplingEdge, ...]:
    """Nearest-neighbour bidirectional chain over joints 1..n.

    Consecutive fluke joints carry a travelling-wave lag (tail lags head);
    all other neighbour pairs are locked in phase.
    """
    edges = []
    for i in range(n - 1):
        lag = 0.0
        if (i + 1) in FLUKE_JOINTS and (i + 2) in FLUKE_JOINTS:
            lag = -tail_phase_lag
        edges.append(CouplingEdge(target=i, source=i + 1, weight=weight, phase_lag=lag))
        edges.append(CouplingEdge(target=i + 1, source=i, weight=weight, phase_lag=-lag))
    return tuple(edges)


@dataclass(frozen=True)
class CpgParams:
    """Oscillator network configuration: intrinsic rates, gains, targets, coupling."""

    freq_hz: tuple[float, ...]
    amp_gain: tuple[float, ...]  # a_i [1/s]
    bias_gain: tuple[float, ...]  # b_i [1/s]
    amp_target: tuple[float, ...]  # R_bar_i [rad]
    bias_target: tuple[float, ...]  # X_bar_i [rad]
    coupling: tuple[CouplingEdge, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.freq_hz)
        for name in ("amp_gain", "bias_gain", "amp_target", "bias_target"):
            if len(getattr(self, name)) != n:
                raise ConfigError(f"cpg.{name} must have {n} entries")
        if any(f < 0.0 for f in self.freq_hz):
            raise ConfigError("oscillator frequencies must be >= 0")
        if any(a <= 0.0 for a in self.amp_gain) or any(b <= 0.0 for b in self.bias_gain):
            raise ConfigError("convergence gains a_i, b_i must be > 0")
        lags: dict[tuple[int, int], float] = {}
        for e in self.coupling:
            if not (0 <= e.target < n and 0 <= e.source < n) or e.target == e.source:
                raise ConfigError(f"coupling edge {e} has invalid oscillator indices")
            if e.weight < 0.0:
                raise ConfigError(f"coupling weight must be >= 0: {e}")
            lags[(e.target, e.source)] = e.phase_lag
        for (i, j), lag in lags.items():
            rev = lags.get((j, i))
            if rev is not None and abs(rev + lag) > 1e-12:
                raise ConfigError(
                    f"phase lags on symmetric edge ({i},{j}) must be antisymmetric: "
                    f"{lag} vs {rev}"
                )

    @property
    def n(self) -> int:
        return len(self.freq_hz)


@dataclass(frozen=True)
class CpgState:
    """Per-oscillator phase (unwrapped), amplitude and bias with their rates."""

    phi: tuple[float, ...]
    r: tuple[float, ...]
    r_dot: tuple[float, ...]
    chi: tuple[float, ...]
    chi_dot: tuple[float, ...]

    @classmethod
    def zeros(cls, n: int = N_JOINTS) -> "CpgState":
        z = (0.0,) * n
        return cls(z, z, z, z, z)

    @property
    def n(self) -> int:
        return len(self.phi)

    def to_flat(self) -> list[float]:
        return list(self.phi) + list(self.r) + list(self.r_dot) + list(self.chi) + list(self.chi_dot)

    @classmethod
    def from_flat(cls, y: Sequence[float], n: int) -> "CpgState":
        return cls(
            tuple(y[0:n]),
            tuple(y[n : 2 * n]),
            tuple(y[2 * n : 3 * n]),
            tuple(y[3 * n : 4 * n]),
            tuple(y[4 * n : 5 * n]),
        )


def prepare(params: CpgParams) -> tuple:
    """Precompute the flat-vector derivative inputs for the hot loop."""
    omega0 = tuple(2.0 * math.pi * f for f in params.freq_hz)
    adj: list[tuple[tuple[int, float, float], ...]] = [() for _ in range(params.n)]
    grouped: list[list[tuple[int, float, float]]] = [[] for _ in range(params.n)]
    for e in params.coupling:
        grouped[e.target].append((e.source, e.weight, e.phase_lag))
    for i, g in enumerate(grouped):
        adj[i] = tuple(g)
    return (omega0, tuple(adj), params.amp_gain, params.bias_gain)


def derivatives_flat(
    y: Sequence[float],
    prep: tuple,
    amp_target: Sequence[float],
    bias_target: Sequence[float],
) -> list[float]:
    """Time derivative of the flat CPG state [phi, r, r_dot, chi, chi_dot]."""
    omega0, adj, amp_gain, bias_gain = prep
    n = len(omega0)
    out = [0.0] * (5 * n)
    for i in range(n):
        phi_i = y[i]
        dphi = omega0[i]
        for j, w, lag in adj[i]:
            dphi += w * math.sin(y[j] - phi_i - lag)
        out[i] = dphi
        r_i = y[n + i]
        rd_i = y[2 * n + i]
        a = amp_gain[i]
        out[n + i] = rd_i
        out[2 * n + i] = a * (0.25 * a * (amp_target[i] - r_i) - rd_i)
        chi_i = y[3 * n + i]
        cd_i = y[4 * n + i]
        b = bias_gain[i]
        out[3 * n + i] = cd_i
        out[4 * n + i] = b * (0.25 * b * (bias_target[i] - chi_i) - cd_i)
    return out


def cpg_step(state: CpgState, params: CpgParams, dt: float) -> CpgState:
    """Advance the oscillator network one step with the shared RK4 integrator."""
    if not 0.0 < dt <= MAX_CPG_DT:
        raise ConfigError(f"cpg step requires 0 < dt <= {MAX_CPG_DT}, got {dt}")
    prep = prepare(params)
    rate = lambda y: derivatives_flat(y, prep, params.amp_target, params.bias_target)
    return CpgState.from_flat(rk4(state.to_flat(), rate, dt), params.n)


def output_angle(state: CpgState, joint: int) -> float:
    """Joint angle theta = chi + r * sin(phi) for joint 1..7."""
    if not 1 <= joint <= state.n:
        raise ConfigError(f"joint must be in 1..{state.n}, got {joint}")
    i = joint - 1
    return state.chi[i] + state.r[i] * math.sin(state.phi[i])


def output_angles(state: CpgState) -> tuple[float, ...]:
    return tuple(
        c + r * math.sin(p) for c, r, p in zip(state.chi, state.r, state.phi)
    )


@dataclass(frozen=True)
class MappingParams:
    """Heading-command mapping.

    Tuple fields are ordered by the joints they act on: max_yaw_offset for
    joints (1, 3, 4); gaussian width/center and max_amplitude for joints
    (5, 6, 7). amplitude_mode "max" pins the fluke amplitudes at their
    maxima; "controlled" attenuates them by the Gaussian of the heading
    error.
    """

    k: float = 1.0  # tanh gradient [1/rad]
    max_yaw_offset: tuple[float, float, float] = (
        math.radians(30.0),
    ) * 3
    max_amplitude: tuple[float, float, float] = (
        math.radians(20.0),
        math.radians(40.0),
        math.radians(60.0),
    )
    gaussian_width: tuple[float, float, float] = (1.0, 1.0, 1.0)  # [rad]
    gaussian_center: tuple[float, float, float] = (0.0, 0.0, 0.0)  # [rad]
    amplitude_mode: str = "controlled"

    def __post_init__(self) -> None:
        if self.k <= 0.0:
            raise ConfigError(f"mapping gradient k must be > 0, got {self.k}")
        if any(b <= 0.0 for b in self.gaussian_width):
            raise ConfigError("gaussian widths must be > 0")
        if any(x <= 0.0 for x in self.max_amplitude):
            raise ConfigError("max amplitudes must be > 0")
        if self.amplitude_mode not in AMPLITUDE_MODES:
            raise ConfigError(
                f"amplitude_mode must be one of {AMPLITUDE_MODES}, got {self.amplitude_mode!r}"
            )


def _joint_index(joint: int, valid: tuple[int, ...]) -> int:
    if joint not in valid:
        raise ConfigError(f"joint must be one of {valid}, got {joint}")
    return valid.index(joint)


def map_yaw_offset(chi_err: float, mp: MappingParams, joint: int) -> float:
    """Bias target for a yaw joint: odd, saturating at +-max offset."""
    i = _joint_index(joint, YAW_JOINTS)
    return math.tanh(mp.k * chi_err) * mp.max_yaw_offset[i]


def map_amplitude(chi_err: float, mp: MappingParams, joint: int) -> float:
    """Amplitude target for a fluke joint: Gaussian attenuation or the maximum."""
    i = _joint_index(joint, FLUKE_JOINTS)
    if mp.amplitude_mode == "max":
        return mp.max_amplitude[i]
    z = (chi_err - mp.gaussian_center[i]) / mp.gaussian_width[i]
    return math.exp(-0.5 * z * z) * mp.max_amplitude[i]


def guidance_targets(
    chi_err: float, mp: MappingParams, n: int = N_JOINTS
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """(amp_target, bias_target) 7-tuples for a wrapped heading error.

    Joints not addressed by either mapping (joint 2) keep zero targets.
    """
    amp = [0.0] * n
    bias = [0.0] * n
    t = math.tanh(mp.k * chi_err)
    for i, joint in enumerate(YAW_JOINTS):
        bias[joint - 1] = t * mp.max_yaw_offset[i]
    for i, joint in enumerate(FLUKE_JOINTS):
        if mp.amplitude_mode == "max":
            amp[joint - 1] = mp.max_amplitude[i]
        else:
            z = (chi_err - mp.gaussian_center[i]) / mp.gaussian_width[i]
            amp[joint - 1] = math.exp(-0.5 * z * z) * mp.max_amplitude[i]
    return tuple(amp), tuple(bias)


def apply_guidance(chi_err: float, params: CpgParams, mp: MappingParams) -> CpgParams:
    """New CpgParams with amplitude/bias targets set from the heading error."""
    amp, bias = guidance_targets(chi_err, mp, params.n)
    return replace(params, amp_target=amp, bias_target=bias)
