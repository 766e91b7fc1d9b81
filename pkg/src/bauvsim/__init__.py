"""bauvsim: planar path-following simulation for a multi-link swimming robot.

Closed-loop toolkit combining LOS/ALOS waypoint guidance, a coupled-oscillator
joint controller with heading-command mappings, 3-DOF rigid-body dynamics with
a per-link propulsion surrogate, and a batch sweep harness with RMSE/MAE
reporting.
"""

from .config import SweepSpec, default_sim_config, default_spec, load_config, serialize
from .cpg import (
    CouplingEdge,
    CpgParams,
    CpgState,
    MappingParams,
    apply_guidance,
    cpg_step,
    map_amplitude,
    map_yaw_offset,
    output_angle,
    output_angles,
)
from .errors import ConfigError
from .guidance import (
    GuidanceParams,
    GuidanceState,
    WaypointPath,
    alos_heading,
    cross_track_solve,
    los_heading,
    path_tangential_angle,
    sideslip_update,
    update_waypoint,
)
from .integrate import rk4
from .metrics import MetricsRow, SweepKey, aggregate, error_series, mae, rmse
from .pathgen import SinusoidSpec, generate
from .simcore import (
    SimConfig,
    TrialDiverged,
    TrialLog,
    TrialResult,
    run_trial,
    step,
)
from .sweep import run_sweep
from .svgplot import emit_plot
from .vehicle import (
    GeneralizedForce,
    HydroParams,
    LinkGeometry,
    VehicleState,
    compute_tau,
    default_links,
    dynamics_rate,
    kinematics,
    rotation_matrix,
    wrap_angle,
)

__version__ = "0.1.0"
