"""Configuration defaults, YAML loading and serialization.

The config file is nested YAML. Every default is overridable; unknown keys
are a hard error so typos cannot silently fall back to defaults. Angle-valued
entries accept plain numbers (radians) or strings with an explicit unit
suffix ("30 deg", "0.5 rad") and are stored internally in radians.

The look-ahead distance and switch radius are usually given as multiples of
the body length (delta_multiple, switch_radius_multiple); the absolute forms
(delta_m, switch_radius_m) are accepted too and are what serialize() emits,
so a dump/load round trip is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import yaml

from .cpg import (
    AMPLITUDE_MODES,
    CpgParams,
    MappingParams,
    chain_coupling,
    guidance_targets,
)
from .errors import ConfigError
from .guidance import GUIDANCE_MODES, GuidanceParams
from .pathgen import SinusoidSpec
from .simcore import SimConfig
from .vehicle import N_JOINTS, HydroParams, LinkGeometry, default_links

DEFAULT_DELTA_MULTIPLE = 1.75
DEFAULT_SWITCH_RADIUS_MULTIPLE = 1.0
DEFAULT_GAMMA = 0.05  # picked by the coarse sweep in scripts/tune_gamma.py
DEFAULT_FREQUENCY_HZ = 0.6
DEFAULT_CONVERGENCE_GAIN = 20.0
DEFAULT_COUPLING_WEIGHT = 4.0
# pi/2 rather than the 2*pi/3 typical of undulatory chains: the resistive
# surrogate tops out near the body-wave speed, and 2*pi/3 over these link
# spacings caps cruise speed below the 0.2 m/s design band
DEFAULT_TAIL_PHASE_LAG = math.pi / 2.0


@dataclass(frozen=True)
class SweepSpec:
    """The full experiment protocol: axes of the sweep plus the base trial."""

    base: SimConfig
    delta_multiples: tuple[float, ...] = (1.5, 1.75, 2.0)
    guidance_modes: tuple[str, ...] = ("traditional", "adaptive")
    amplitude_modes: tuple[str, ...] = ("max", "controlled")
    out_dir: str = "results"

    def __post_init__(self) -> None:
        if not self.delta_multiples:
            raise ConfigError("sweep.delta_multiples must be non-empty")
        if any(m <= 0.0 for m in self.delta_multiples):
            raise ConfigError("sweep.delta_multiples must all be > 0")
        for mode in self.guidance_modes:
            if mode not in GUIDANCE_MODES:
                raise ConfigError(f"sweep guidance mode {mode!r} not in {GUIDANCE_MODES}")
        for mode in self.amplitude_modes:
            if mode not in AMPLITUDE_MODES:
                raise ConfigError(f"sweep amplitude mode {mode!r} not in {AMPLITUDE_MODES}")
        if not self.guidance_modes or not self.amplitude_modes:
            raise ConfigError("sweep mode lists must be non-empty")


def default_cpg_params(mapping: Optional[MappingParams] = None) -> CpgParams:
    """Network defaults: shared gait frequency, fast target convergence, and a
    travelling wave along the fluke joints. Initial targets match a zero
    heading error."""
    mp = mapping if mapping is not None else MappingParams()
    amp0, bias0 = guidance_targets(0.0, mp)
    return CpgParams(
        freq_hz=(DEFAULT_FREQUENCY_HZ,) * N_JOINTS,
        amp_gain=(DEFAULT_CONVERGENCE_GAIN,) * N_JOINTS,
        bias_gain=(DEFAULT_CONVERGENCE_GAIN,) * N_JOINTS,
        amp_target=amp0,
        bias_target=bias0,
        coupling=chain_coupling(DEFAULT_COUPLING_WEIGHT, DEFAULT_TAIL_PHASE_LAG),
    )


def default_sim_config() -> SimConfig:
    links = default_links()
    mapping = MappingParams()
    return SimConfig(
        hydro=HydroParams(),
        links=links,
        guidance=GuidanceParams(
            delta=DEFAULT_DELTA_MULTIPLE * links.total_length,
            gamma=DEFAULT_GAMMA,
            mode="adaptive",
            switch_radius=DEFAULT_SWITCH_RADIUS_MULTIPLE * links.total_length,
        ),
        cpg=default_cpg_params(mapping),
        mapping=mapping,
        path_spec=SinusoidSpec(),
    )


def default_spec() -> SweepSpec:
    return SweepSpec(base=default_sim_config())


# --------------------------------------------------------------------------
# value parsers


def _float(v: Any) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}")
    return float(v)


def _int(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}")
    return v


def _str(v: Any) -> str:
    if not isinstance(v, str):
        raise ConfigError(f"expected a string, got {v!r}")
    return v


def _angle(v: Any) -> float:
    """Radians from a number, or from a '<value> deg' / '<value> rad' string."""
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if isinstance(v, str):
        parts = v.strip().split()
        if len(parts) == 2:
            try:
                mag = float(parts[0])
            except ValueError:
                raise ConfigError(f"bad angle value {v!r}") from None
            unit = parts[1].lower()
            if unit in ("deg", "degree", "degrees"):
                return math.radians(mag)
            if unit in ("rad", "radian", "radians"):
                return mag
        raise ConfigError(
            f"bad angle {v!r}: use a plain number (radians) or '<value> deg'"
        )
    raise ConfigError(f"expected an angle, got {v!r}")


def _seq(parse: Callable, n: Optional[int] = None) -> Callable:
    def inner(v: Any) -> tuple:
        if not isinstance(v, (list, tuple)):
            raise ConfigError(f"expected a list, got {v!r}")
        if n is not None and len(v) != n:
            raise ConfigError(f"expected {n} entries, got {len(v)}")
        return tuple(parse(item) for item in v)

    return inner


class _Section:
    """Tracks consumed keys of one config section; leftovers are typos."""

    def __init__(self, name: str, raw: Any):
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ConfigError(f"section '{name}' must be a mapping")
        self.name = name
        self.raw = dict(raw)

    def take(self, key: str, default: Any, parse: Optional[Callable] = None) -> Any:
        if key not in self.raw:
            return default
        value = self.raw.pop(key)
        if parse is None:
            return value
        try:
            return parse(value)
        except ConfigError as err:
            raise ConfigError(f"{self.name}.{key}: {err}") from None

    def finish(self) -> None:
        if self.raw:
            raise ConfigError(f"unknown key '{self.name}.{next(iter(self.raw))}'")


# --------------------------------------------------------------------------
# loading


def load_config(path: str | Path) -> SweepSpec:
    """Parse a config file into a SweepSpec over defaults."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return loads(p.read_text())


def loads(text: str) -> SweepSpec:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"config parse error{where}: {err}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return from_dict(data)


def from_dict(data: dict) -> SweepSpec:
    data = dict(data)
    known = ("vehicle", "links", "guidance", "cpg", "mapping", "path", "sim", "sweep")
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown key '{key}'")

    links_defaults = default_links()
    links_sec = _Section("links", data.get("links"))
    total_length = links_sec.take("total_length", links_defaults.total_length, _float)
    drag_scale = links_sec.take("drag_scale", links_defaults.drag_scale, _float)
    base_links = default_links(total_length=total_length, drag_scale=drag_scale)
    links = LinkGeometry(
        lengths=links_sec.take("lengths", base_links.lengths, _seq(_float, N_JOINTS)),
        areas=links_sec.take("areas", base_links.areas, _seq(_float, N_JOINTS)),
        drag_coeffs=links_sec.take(
            "drag_coeffs", base_links.drag_coeffs, _seq(_float, N_JOINTS)
        ),
        total_length=total_length,
        drag_scale=drag_scale,
    )
    links_sec.finish()

    hp_default = HydroParams()
    veh = _Section("vehicle", data.get("vehicle"))
    hydro = HydroParams(
        mass=veh.take("mass", hp_default.mass, _float),
        I_zz=veh.take("I_zz", hp_default.I_zz, _float),
        Xu_dot=veh.take("Xu_dot", hp_default.Xu_dot, _float),
        Yv_dot=veh.take("Yv_dot", hp_default.Yv_dot, _float),
        Nr_dot=veh.take("Nr_dot", hp_default.Nr_dot, _float),
        Xu=veh.take("Xu", hp_default.Xu, _float),
        Yv=veh.take("Yv", hp_default.Yv, _float),
        Nr=veh.take("Nr", hp_default.Nr, _float),
    )
    veh.finish()

    gd = _Section("guidance", data.get("guidance"))
    delta_multiple = gd.take("delta_multiple", None, _float)
    delta_m = gd.take("delta_m", None, _float)
    if delta_multiple is not None and delta_m is not None:
        raise ConfigError("guidance: give delta_multiple or delta_m, not both")
    if delta_m is None:
        mult = DEFAULT_DELTA_MULTIPLE if delta_multiple is None else delta_multiple
        delta_m = mult * links.total_length
    radius_multiple = gd.take("switch_radius_multiple", None, _float)
    radius_m = gd.take("switch_radius_m", None, _float)
    if radius_multiple is not None and radius_m is not None:
        raise ConfigError("guidance: give switch_radius_multiple or switch_radius_m, not both")
    if radius_m is None:
        mult = DEFAULT_SWITCH_RADIUS_MULTIPLE if radius_multiple is None else radius_multiple
        radius_m = mult * links.total_length
    guidance = GuidanceParams(
        delta=delta_m,
        gamma=gd.take("gamma", DEFAULT_GAMMA, _float),
        mode=gd.take("mode", "adaptive", _str),
        switch_radius=radius_m,
    )
    gd.finish()

    mp_default = MappingParams()
    mp_sec = _Section("mapping", data.get("mapping"))
    mapping = MappingParams(
        k=mp_sec.take("k", mp_default.k, _float),
        max_yaw_offset=mp_sec.take(
            "max_yaw_offsets", mp_default.max_yaw_offset, _seq(_angle, 3)
        ),
        max_amplitude=mp_sec.take(
            "max_amplitudes", mp_default.max_amplitude, _seq(_angle, 3)
        ),
        gaussian_width=mp_sec.take(
            "gaussian_widths", mp_default.gaussian_width, _seq(_angle, 3)
        ),
        gaussian_center=mp_sec.take(
            "gaussian_centers", mp_default.gaussian_center, _seq(_angle, 3)
        ),
        amplitude_mode=mp_sec.take("amplitude_mode", mp_default.amplitude_mode, _str),
    )
    mp_sec.finish()

    cpg_sec = _Section("cpg", data.get("cpg"))
    freq = cpg_sec.take("frequency_hz", DEFAULT_FREQUENCY_HZ, _float)
    amp_gain = cpg_sec.take("amp_gain", DEFAULT_CONVERGENCE_GAIN, _float)
    bias_gain = cpg_sec.take("bias_gain", DEFAULT_CONVERGENCE_GAIN, _float)
    weight = cpg_sec.take("coupling_weight", DEFAULT_COUPLING_WEIGHT, _float)
    lag = cpg_sec.take("tail_phase_lag", DEFAULT_TAIL_PHASE_LAG, _angle)
    cpg_sec.finish()
    amp0, bias0 = guidance_targets(0.0, mapping)
    cpg = CpgParams(
        freq_hz=(freq,) * N_JOINTS,
        amp_gain=(amp_gain,) * N_JOINTS,
        bias_gain=(bias_gain,) * N_JOINTS,
        amp_target=amp0,
        bias_target=bias0,
        coupling=chain_coupling(weight, lag),
    )

    path_default = SinusoidSpec()
    path_sec = _Section("path", data.get("path"))
    path_spec = SinusoidSpec(
        amplitude=path_sec.take("amplitude", path_default.amplitude, _float),
        periods=path_sec.take("periods", path_default.periods, _float),
        length=path_sec.take("length", path_default.length, _float),
        heading=path_sec.take("heading", path_default.heading, _angle),
        n_points=path_sec.take("n_points", path_default.n_points, _int),
        origin=path_sec.take("origin", path_default.origin, _seq(_float, 2)),
    )
    path_sec.finish()

    sim_sec = _Section("sim", data.get("sim"))
    pose_raw = sim_sec.take("initial_pose", (0.0, 0.0, 0.0), _seq(lambda v: v, 3))
    initial_pose = (_float(pose_raw[0]), _float(pose_raw[1]), _angle(pose_raw[2]))
    base = SimConfig(
        hydro=hydro,
        links=links,
        guidance=guidance,
        cpg=cpg,
        mapping=mapping,
        path_spec=path_spec,
        dt=sim_sec.take("dt", 0.01, _float),
        t_max=sim_sec.take("t_max", 120.0, _float),
        initial_pose=initial_pose,
        initial_velocity=sim_sec.take("initial_velocity", (0.0, 0.0, 0.0), _seq(_float, 3)),
        current=sim_sec.take("current", SimConfig.__dataclass_fields__["current"].default, _seq(_float, 2)),
        rng_seed=sim_sec.take("rng_seed", 0, _int),
        log_decimation=sim_sec.take("log_decimation", 1, _int),
    )
    sim_sec.finish()

    sweep_sec = _Section("sweep", data.get("sweep"))
    spec = SweepSpec(
        base=base,
        delta_multiples=sweep_sec.take("delta_multiples", (1.5, 1.75, 2.0), _seq(_float)),
        guidance_modes=sweep_sec.take(
            "guidance_modes", ("traditional", "adaptive"), _seq(_str)
        ),
        amplitude_modes=sweep_sec.take("amplitude_modes", ("max", "controlled"), _seq(_str)),
        out_dir=sweep_sec.take("out_dir", "results", _str),
    )
    sweep_sec.finish()
    return spec


# --------------------------------------------------------------------------
# serialization


def to_dict(spec: SweepSpec) -> dict:
    """Full nested dict of the spec; load(from this) reproduces it exactly."""
    base = spec.base
    hp = base.hydro
    links = base.links
    g = base.guidance
    mp = base.mapping
    ps = base.path_spec
    cpg = base.cpg
    coupling_weight = cpg.coupling[0].weight if cpg.coupling else 0.0
    tail_lag = max((abs(e.phase_lag) for e in cpg.coupling), default=0.0)
    return {
        "vehicle": {
            "mass": hp.mass,
            "I_zz": hp.I_zz,
            "Xu_dot": hp.Xu_dot,
            "Yv_dot": hp.Yv_dot,
            "Nr_dot": hp.Nr_dot,
            "Xu": hp.Xu,
            "Yv": hp.Yv,
            "Nr": hp.Nr,
        },
        "links": {
            "total_length": links.total_length,
            "lengths": list(links.lengths),
            "areas": list(links.areas),
            "drag_coeffs": list(links.drag_coeffs),
            "drag_scale": links.drag_scale,
        },
        "guidance": {
            "delta_m": g.delta,
            "gamma": g.gamma,
            "mode": g.mode,
            "switch_radius_m": g.switch_radius,
        },
        "cpg": {
            "frequency_hz": cpg.freq_hz[0],
            "amp_gain": cpg.amp_gain[0],
            "bias_gain": cpg.bias_gain[0],
            "coupling_weight": coupling_weight,
            "tail_phase_lag": tail_lag,
        },
        "mapping": {
            "k": mp.k,
            "max_yaw_offsets": list(mp.max_yaw_offset),
            "max_amplitudes": list(mp.max_amplitude),
            "gaussian_widths": list(mp.gaussian_width),
            "gaussian_centers": list(mp.gaussian_center),
            "amplitude_mode": mp.amplitude_mode,
        },
        "path": {
            "amplitude": ps.amplitude,
            "periods": ps.periods,
            "length": ps.length,
            "heading": ps.heading,
            "n_points": ps.n_points,
            "origin": list(ps.origin),
        },
        "sim": {
            "dt": base.dt,
            "t_max": base.t_max,
            "initial_pose": list(base.initial_pose),
            "initial_velocity": list(base.initial_velocity),
            "current": list(base.current),
            "rng_seed": base.rng_seed,
            "log_decimation": base.log_decimation,
        },
        "sweep": {
            "delta_multiples": list(spec.delta_multiples),
            "guidance_modes": list(spec.guidance_modes),
            "amplitude_modes": list(spec.amplitude_modes),
            "out_dir": spec.out_dir,
        },
    }


def serialize(spec: SweepSpec) -> str:
    return yaml.safe_dump(to_dict(spec), sort_keys=False)
