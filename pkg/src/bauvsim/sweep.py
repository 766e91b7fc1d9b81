"""Experiment sweep: the cross product of look-ahead multiples, guidance
modes and amplitude modes, with deterministic artifact emission.

Trials may run in parallel; all file writes happen from a single collector
after the results are sorted, so the emitted files are a pure function of the
sweep spec. Wall-clock timings are therefore reported on stdout only, never
in the files.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from . import metrics
from .config import SweepSpec
from .cpg import guidance_targets
from .metrics import MetricsRow, SweepKey
from .pathgen import generate
from .simcore import SimConfig, TrialDiverged, TrialLog, TrialResult, run_trial
from .svgplot import emit_plot

__all__ = ["SweepOutcome", "cell_config", "run_sweep", "emit_plot"]


@dataclass
class SweepOutcome:
    """Everything a sweep produced, already in deterministic order."""

    rows: list[MetricsRow]
    results: list[tuple[SweepKey, Optional[TrialResult]]]
    failures: list[tuple[SweepKey, str]]
    files: list[Path]

    @property
    def table_text(self) -> str:
        return metrics.render_table(self.rows)


def sweep_keys(spec: SweepSpec) -> list[SweepKey]:
    return [
        SweepKey(guidance_mode=g, amplitude_mode=a, delta_multiple=d)
        for d in spec.delta_multiples
        for g in spec.guidance_modes
        for a in spec.amplitude_modes
    ]


def cell_config(base: SimConfig, key: SweepKey) -> SimConfig:
    """Specialize the base trial for one sweep cell."""
    guidance = replace(
        base.guidance,
        mode=key.guidance_mode,
        delta=key.delta_multiple * base.links.total_length,
    )
    mapping = replace(base.mapping, amplitude_mode=key.amplitude_mode)
    amp0, bias0 = guidance_targets(0.0, mapping, base.cpg.n)
    cpg = replace(base.cpg, amp_target=amp0, bias_target=bias0)
    return replace(base, guidance=guidance, mapping=mapping, cpg=cpg)


def _run_cell(config: SimConfig) -> tuple[str, object]:
    """Worker-safe trial runner; exceptions are flattened for pickling."""
    try:
        return ("ok", run_trial(config))
    except TrialDiverged as err:
        rows = err.partial_log.rows if err.partial_log is not None else []
        return ("diverged", (err.step_index, err.field_name, err.value, rows))


def _result_from_partial(rows: list) -> TrialResult:
    series = [row[8] for row in rows]
    has = len(series) > 0
    return TrialResult(
        log=TrialLog(rows),
        completed=False,
        rmse=metrics.rmse(series) if has else float("nan"),
        mae=metrics.mae(series) if has else float("nan"),
        wall_time=0.0,
    )


def run_sweep(
    spec: SweepSpec, out_dir: Optional[str | Path] = None, jobs: int = 1
) -> SweepOutcome:
    """Run every sweep cell, then write one trajectory CSV per trial, the
    aggregate metrics CSV and one overlay plot per look-ahead multiple.

    Individual trial divergences are recorded per cell without aborting the
    sweep. Identical specs produce byte-identical files at any parallelism.
    """
    out = Path(out_dir) if out_dir is not None else Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    keys = sweep_keys(spec)
    configs = [cell_config(spec.base, key) for key in keys]

    raw: list[tuple[str, object]]
    if jobs <= 1:
        raw = [_run_cell(cfg) for cfg in configs]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_run_cell, configs))

    results: list[tuple[SweepKey, Optional[TrialResult]]] = []
    failures: list[tuple[SweepKey, str]] = []
    table_inputs: list[tuple[SweepKey, TrialResult]] = []
    for key, (status, payload) in zip(keys, raw):
        if status == "ok":
            result = payload  # type: ignore[assignment]
        else:
            step_index, field_name, value, rows = payload  # type: ignore[misc]
            failures.append(
                (key, f"diverged at step {step_index}: {field_name} = {value!r}")
            )
            result = _result_from_partial(rows)
        results.append((key, result))
        table_inputs.append((key, result))

    rows = metrics.aggregate(table_inputs)
    files: list[Path] = []

    for key, result in sorted(results, key=lambda kr: _key_order(kr[0])):
        trial_path = out / trial_filename(key)
        with trial_path.open("w") as stream:
            result.log.write_csv(stream)
        files.append(trial_path)

    metrics_path = out / "metrics.csv"
    with metrics_path.open("w") as stream:
        metrics.write_metrics_csv(rows, stream)
    files.append(metrics_path)

    path = generate(spec.base.path_spec)
    for mult in spec.delta_multiples:
        overlay = [
            (
                f"{key.guidance_mode} / {key.amplitude_mode}",
                [(row[1], row[2]) for row in result.log.rows],
            )
            for key, result in sorted(results, key=lambda kr: _key_order(kr[0]))
            if key.delta_multiple == mult and result.log.rows
        ]
        plot_path = out / plot_filename(mult)
        emit_plot(overlay, path, plot_path)
        files.append(plot_path)

    return SweepOutcome(rows=rows, results=results, failures=failures, files=files)


def _key_order(key: SweepKey) -> tuple:
    return (key.delta_multiple, key.guidance_mode, key.amplitude_mode)


def trial_filename(key: SweepKey) -> str:
    return f"trial_{key.guidance_mode}_{key.amplitude_mode}_d{key.delta_multiple:.2f}.csv"


def plot_filename(delta_multiple: float) -> str:
    return f"trajectories_d{delta_multiple:.2f}.svg"
