"""Inverting the failure-rate models.

Total failure is exactly affine in the transport time, so the tolerable
transport time has a closed form.  Patch size enters non-linearly and is
found by bisection on a continuous qubit count.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np

from .pipeline_qldpc import Scenario, evaluate, patch_rates
from .pipeline_surface import SurfaceScenario, evaluate_sc
from .qec_models import HgpConfig, PAPER_DEFAULTS, PhysicalParams, SurfaceConfig

RESIDUAL_RTOL = 1e-9
MAX_ITERATIONS = 200
HGP_BRACKET = (5_000.0, 500_000.0)
SURFACE_BRACKET = (1.0, 1_000_000.0)
_PRECHECK_POINTS = 65


@dataclasses.dataclass(frozen=True)
class SolveResult:
    """Outcome of an inversion.

    ``residual`` is the forward-evaluated failure rate minus the target.  A
    feasible result may undershoot the target when the whole search domain
    already satisfies it (the lower bound is then returned).
    """

    value: float
    feasible: bool
    residual: float
    iterations: int
    message: str = ""

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _check_target(target: float) -> None:
    if not 0 < target < 1:
        raise ValueError(f"target failure rate must lie in (0, 1), got {target!r}")


def transport_slope(code: HgpConfig, params: PhysicalParams = PAPER_DEFAULTS) -> float:
    """d R_tot / d T_3: two transported cycles-worth from R_3 plus two stored drives."""
    rates = patch_rates(code, params)
    return 4 * rates.memory / rates.t_cyc_memory


def max_transport_time(
    code: HgpConfig,
    params: PhysicalParams = PAPER_DEFAULTS,
    target_R_tot: float = 0.1,
    scenario: Scenario | None = None,
) -> SolveResult:
    """Longest one-way transport time (seconds) keeping R_tot at ``target_R_tot``.

    Infeasible targets return ``value=0`` with ``feasible=False``; a negative
    time is never reported.
    """
    _check_target(target_R_tot)
    base = scenario or Scenario()
    base = base.replace(
        code=code, params=params, T_3=0.0,
        truck_capacity_qubits=max(base.truck_capacity_qubits, code.n_m),
    )
    intercept = evaluate(base).R_tot
    slope = transport_slope(code, params)
    if intercept > target_R_tot:
        return SolveResult(
            value=0.0,
            feasible=False,
            residual=intercept - target_R_tot,
            iterations=0,
            message=f"R_tot at zero transport time is {intercept:.6g}, above target {target_R_tot:.6g}",
        )
    if slope == 0:
        return SolveResult(math.inf, True, intercept - target_R_tot, 0, "R_tot does not depend on T_3")
    T_3 = (target_R_tot - intercept) / slope
    residual = evaluate(base.replace(T_3=T_3)).R_tot - target_R_tot
    feasible = abs(residual) <= RESIDUAL_RTOL * target_R_tot
    message = "" if feasible else f"closed-form residual {residual:.3g} exceeds tolerance"
    return SolveResult(T_3, feasible, residual, 1, message)


def _bisect_decreasing(
    f: Callable[[float], float], lo: float, hi: float, target: float
) -> tuple[float, float, int]:
    """Smallest x in [lo, hi] with f(x) <= target for decreasing f, f(lo) > target >= f(hi)."""
    x, r = hi, f(hi) - target
    for it in range(1, MAX_ITERATIONS + 1):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            return x, r, it
        r_mid = f(mid) - target
        if r_mid <= 0:
            hi, x, r = mid, mid, r_mid
        else:
            lo = mid
        if abs(r) <= RESIDUAL_RTOL * target:
            return x, r, it
    return x, r, MAX_ITERATIONS


def min_patch(
    f: Callable[[float], float], target: float, bracket: tuple[float, float]
) -> SolveResult:
    """Smallest size in ``bracket`` whose failure rate ``f(size)`` meets ``target``."""
    _check_target(target)
    lo, hi = bracket
    if not 0 < lo < hi:
        raise ValueError(f"invalid bracket {bracket!r}")
    r_lo = f(lo) - target
    if r_lo <= 0:
        return SolveResult(lo, True, r_lo, 0, "target met across the whole bracket")
    r_hi = f(hi) - target
    if r_hi > 0:
        return SolveResult(
            hi, False, r_hi, 0,
            f"target {target:.6g} not reached within bracket; R at upper bound is {r_hi + target:.6g}",
        )

    grid = np.geomspace(lo, hi, _PRECHECK_POINTS)
    values = np.array([f(x) for x in grid])
    if not np.all(np.diff(values) < 0):
        # non-monotone bracket: narrow to the first grid cell that crosses the target
        first = int(np.argmax(values <= target))
        lo, hi = grid[first - 1], grid[first]
    value, residual, iterations = _bisect_decreasing(f, float(lo), float(hi), target)
    feasible = abs(residual) <= RESIDUAL_RTOL * target
    message = "" if feasible else f"bisection stopped with residual {residual:.3g}"
    return SolveResult(value, feasible, residual, iterations, message)


def min_hgp_patch(
    T_3: float,
    params: PhysicalParams = PAPER_DEFAULTS,
    target_R_tot: float = 0.1,
    bracket: tuple[float, float] = HGP_BRACKET,
    scenario: Scenario | None = None,
) -> SolveResult:
    """Smallest memory size (physical qubits) with R_tot <= target at transport time ``T_3``."""
    base = (scenario or Scenario()).replace(params=params, T_3=T_3)
    lo, hi = bracket
    base = base.replace(truck_capacity_qubits=max(base.truck_capacity_qubits, hi))

    def r_tot(n_m: float) -> float:
        return evaluate(base.replace(code=HgpConfig(n_m))).R_tot

    return min_patch(r_tot, target_R_tot, bracket)


def min_surface_patch(
    T_3s: float,
    params: PhysicalParams = PAPER_DEFAULTS,
    target_R_tots: float = 0.08,
    bracket: tuple[float, float] = SURFACE_BRACKET,
    scenario: SurfaceScenario | None = None,
) -> SolveResult:
    """Smallest surface patch (physical qubits) with R_tots <= target at ``T_3s``."""
    base = (scenario or SurfaceScenario()).replace(params=params, T_3s=T_3s)
    hi = bracket[1]
    base = base.replace(
        truck_capacity_qubits=max(base.truck_capacity_qubits, hi),
        device_qubits=max(base.device_qubits, hi),
    )

    def r_tots(n_ms: float) -> float:
        return evaluate_sc(base.replace(code=SurfaceConfig(n_ms))).R_tots

    return min_patch(r_tots, target_R_tots, bracket)
