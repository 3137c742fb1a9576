"""Grid sweeps that produce the data behind the standard figures.

Each figure kind maps a swept variable and a set of curves to flat row dicts.
Rows come back curve-major, then in ascending order of the swept variable.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Sequence

import numpy as np

from .logistics import fleet_qldpc, fleet_surface
from .pipeline_qldpc import Scenario, evaluate
from .pipeline_surface import SurfaceScenario, evaluate_sc
from .qec_models import HgpConfig, SurfaceConfig
from .solvers import max_transport_time, min_hgp_patch, min_surface_patch

FIGURES = {
    # name: (swept variable, curve variable, default range, default curves)
    "rtot-vs-nm": ("n_m", "T_3", (20_000, 100_000, 81), (3600.0, 5400.0, 10800.0)),
    "t3-vs-nm": ("n_m", "target", (20_000, 200_000, 91), (0.05, 0.1, 0.2)),
    "trucks-vs-target": ("target", "T_3", (0.03, 0.3, 28), (5400.0,)),
    "qldpc-vs-surface": ("target", "code", (0.03, 0.3, 28), ("qldpc", "surface")),
}
ALIASES = {"fig3": "rtot-vs-nm", "fig4": "t3-vs-nm", "fig5": "trucks-vs-target", "fig6": "qldpc-vs-surface"}


def grid(start: float, stop: float, num: int) -> list[float]:
    if num < 2:
        raise ValueError("a sweep needs at least 2 points")
    if not (math.isfinite(start) and math.isfinite(stop)) or start == stop:
        raise ValueError(f"empty sweep range [{start!r}, {stop!r}]")
    lo, hi = sorted((start, stop))
    return [float(x) for x in np.linspace(lo, hi, int(num))]


def _rtot_point(x: float, curve: float, qldpc: Scenario) -> dict:
    bd = evaluate(qldpc.replace(code=HgpConfig(x), T_3=curve,
                                truck_capacity_qubits=max(qldpc.truck_capacity_qubits, x)))
    return {"n_m": x, "T_3": curve, "R_tot": bd.R_tot, "F_final": bd.F_final, "feasible": bd.feasible}


def _t3_point(x: float, curve: float, qldpc: Scenario) -> dict:
    res = max_transport_time(HgpConfig(x), qldpc.params, curve, scenario=qldpc)
    return {"n_m": x, "target": curve, "T_3": res.value, "feasible": res.feasible}


def _trucks_point(x: float, curve: float, qldpc: Scenario) -> dict:
    row = {"target": x, "T_3": curve, "n_m": None, "R_tot": None,
           "trucks_unrounded": None, "N_truck_tot": None, "C_o": None, "feasible": False}
    res = min_hgp_patch(curve, qldpc.params, x, scenario=qldpc)
    if not res.feasible or res.value > qldpc.truck_capacity_qubits:
        return row
    sc = qldpc.replace(code=HgpConfig(res.value), T_3=curve)
    bd = evaluate(sc)
    fleet = fleet_qldpc(sc, bd)
    row.update(n_m=res.value, R_tot=bd.R_tot, trucks_unrounded=fleet.trucks_unrounded,
               N_truck_tot=fleet.N_truck_tot, C_o=fleet.C_o, feasible=True)
    return row


def _compare_point(x: float, curve: str, qldpc: Scenario, surface: SurfaceScenario) -> dict:
    row = {"target": x, "code": curve, "patch_qubits": None, "trucks_unrounded": None,
           "N_truck_tot": None, "C_o": None, "feasible": False}
    if curve == "qldpc":
        res = min_hgp_patch(qldpc.T_3, qldpc.params, x, scenario=qldpc)
        if not res.feasible or res.value > qldpc.truck_capacity_qubits:
            return row
        sc = qldpc.replace(code=HgpConfig(res.value))
        fleet = fleet_qldpc(sc, evaluate(sc))
    else:
        res = min_surface_patch(surface.T_3s, surface.params, x, scenario=surface)
        n_ms = math.ceil(res.value)
        if not res.feasible or n_ms > min(surface.truck_capacity_qubits, surface.device_qubits):
            return row
        ss = surface.replace(code=SurfaceConfig(n_ms))
        fleet = fleet_surface(ss, evaluate_sc(ss))
    row.update(patch_qubits=fleet.patch_qubits, trucks_unrounded=fleet.trucks_unrounded,
               N_truck_tot=fleet.N_truck_tot, C_o=fleet.C_o, feasible=True)
    return row


def _point(job: tuple, figure: str, qldpc: Scenario, surface: SurfaceScenario) -> dict:
    curve, x = job
    if figure == "rtot-vs-nm":
        return _rtot_point(x, curve, qldpc)
    if figure == "t3-vs-nm":
        return _t3_point(x, curve, qldpc)
    if figure == "trucks-vs-target":
        return _trucks_point(x, curve, qldpc)
    return _compare_point(x, curve, qldpc, surface)


def run_sweep(
    figure: str,
    values: Sequence[float],
    curves: Sequence,
    qldpc: Scenario | None = None,
    surface: SurfaceScenario | None = None,
    jobs: int = 1,
) -> list[dict]:
    figure = ALIASES.get(figure, figure)
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; choose from {sorted(FIGURES)}")
    if not curves:
        raise ValueError("at least one curve is required")
    qldpc = qldpc or Scenario()
    surface = surface or SurfaceScenario()
    work = [(curve, x) for curve in curves for x in sorted(values)]
    fn = partial(_point, figure=figure, qldpc=qldpc, surface=surface)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, work, chunksize=max(1, len(work) // (4 * jobs))))
    return [fn(job) for job in work]
