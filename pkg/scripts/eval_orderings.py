#!/usr/bin/env python3
"""Development helper: evaluate criterion orderings for candidate defaults.

Runs the 12-cell sweep in-process for a given parameter combo and reports
the Table-II-style mode ordering at 1.75L plus the look-ahead ordering.
"""

import argparse
import math
import sys
from dataclasses import replace

from bauvsim.config import default_sim_config, default_spec
from bauvsim.metrics import SweepKey
from bauvsim.sweep import cell_config
from bauvsim.simcore import run_trial


def evaluate(base, verbose=True):
    keys = [
        SweepKey(g, a, d)
        for d in (1.5, 1.75, 2.0)
        for g in ("traditional", "adaptive")
        for a in ("max", "controlled")
    ]
    out = {}
    for key in keys:
        res = run_trial(cell_config(base, key))
        out[(key.guidance_mode, key.amplitude_mode, key.delta_multiple)] = res
        if verbose:
            print(
                f"  d={key.delta_multiple:4.2f} {key.guidance_mode:11s} {key.amplitude_mode:10s} "
                f"rmse={res.rmse:.4f} mae={res.mae:.4f} done={str(res.completed)[0]} "
                f"t={res.log.rows[-1][0]:5.1f}"
            )
    r = {k: v.rmse for k, v in out.items()}
    m = {k: v.mae for k, v in out.items()}
    d = 1.75
    checks = {
        "LOS+amp < LOS": r[("traditional", "controlled", d)] < r[("traditional", "max", d)],
        "ALOS+amp < ALOS": r[("adaptive", "controlled", d)] < r[("adaptive", "max", d)],
        "ALOS+amp min rmse": r[("adaptive", "controlled", d)]
        == min(r[(g, a, d)] for g in ("traditional", "adaptive") for a in ("max", "controlled")),
        "ALOS+amp min mae": m[("adaptive", "controlled", d)]
        == min(m[(g, a, d)] for g in ("traditional", "adaptive") for a in ("max", "controlled")),
    }
    delta_best = {}
    for g in ("traditional", "adaptive"):
        for a in ("max", "controlled"):
            series = {dd: r[(g, a, dd)] for dd in (1.5, 1.75, 2.0)}
            delta_best[(g, a)] = series[1.75] < series[1.5] and series[1.75] < series[2.0]
    checks["some mode has 1.75 best"] = any(delta_best.values())
    for name, ok in checks.items():
        print(f"  {'PASS' if ok else 'FAIL'}  {name}")
    print(f"  delta-ordering per mode: {delta_best}")
    return checks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=float, default=None)
    ap.add_argument("--gamma", type=float, default=None)
    ap.add_argument("--switch-mult", type=float, default=None)
    ap.add_argument("--gauss-width", type=float, default=None)
    ap.add_argument("--nr", type=float, default=None)
    args = ap.parse_args()
    base = default_sim_config()
    if args.switch_mult is not None:
        base = replace(
            base, guidance=replace(base.guidance, switch_radius=args.switch_mult * 0.758)
        )
    if args.gamma is not None:
        base = replace(base, guidance=replace(base.guidance, gamma=args.gamma))
    if args.k is not None:
        base = replace(base, mapping=replace(base.mapping, k=args.k))
    if args.gauss_width is not None:
        base = replace(
            base, mapping=replace(base.mapping, gaussian_width=(args.gauss_width,) * 3)
        )
    if args.nr is not None:
        base = replace(base, hydro=replace(base.hydro, Nr=args.nr))
    evaluate(base)


if __name__ == "__main__":
    sys.exit(main())
