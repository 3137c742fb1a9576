"""Surface-code-only baseline: the same network with no HGP memories.

Bell pairs are created, shipped, stored and measured directly in surface-code
patches.  The surface-code clock is gate limited, one cycle lasting
``6 * t_g``.
"""

from __future__ import annotations

import dataclasses

from .pipeline_qldpc import APPROXIMATION_LIMIT, _validate_network
from .qec_models import (
    SURFACE_DEPTH,
    PAPER_DEFAULTS,
    PhysicalParams,
    SurfaceConfig,
    surface_lfr_per_cycle,
    threshold_messages,
)


@dataclasses.dataclass(frozen=True)
class SurfaceScenario:
    """Surface-code network instance.

    ``device_qubits`` is the size of one quantum memory device for cost
    accounting; it is kept equal to the HGP memory size so both code families
    are priced per identical hardware unit.
    """

    code: SurfaceConfig = SurfaceConfig(257)
    params: PhysicalParams = PAPER_DEFAULTS
    T_3s: float = 5400.0
    device_qubits: float = 60_000
    S: int = 5
    truck_capacity_qubits: float = 1_000_000
    r_e: float = 2300.0
    R_h: float = 150.0
    C_m: float = 2_000_000.0

    def __post_init__(self):
        _validate_network(self.T_3s, self.S, self.truck_capacity_qubits, self.r_e, self.R_h, self.C_m)
        if self.device_qubits < self.code.n_ms:
            raise ValueError("device_qubits must be at least one surface patch")
        if self.truck_capacity_qubits < self.code.n_ms:
            raise ValueError("truck capacity cannot hold one surface patch")

    def replace(self, **changes) -> "SurfaceScenario":
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class SurfaceBreakdown:
    R_ss: float
    R_1s: float
    R_3s: float
    R_nets: float
    R_stores: float
    R_BMs: float
    R_tots: float
    T_1s: float
    T_3s: float
    T_tots: float
    F_final_s: float
    feasible: bool
    warnings: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def surface_cycle_time(params: PhysicalParams) -> float:
    return SURFACE_DEPTH * params.t_g


def evaluate_sc(scenario: SurfaceScenario) -> SurfaceBreakdown:
    params = scenario.params
    n_ms = scenario.code.n_ms
    d = scenario.code.d_sc
    p_g = params.gate_error(n_ms)
    t_cyc = surface_cycle_time(params)

    R_ss = surface_lfr_per_cycle(d, p_g)
    R_1s = 2 * d * R_ss
    T_1s = t_cyc * d
    R_3s = scenario.T_3s / t_cyc * R_ss
    R_nets = R_1s + R_3s + R_ss
    T_tots = T_1s + scenario.T_3s + t_cyc
    R_stores = 2 * T_tots / t_cyc * R_ss
    R_BMs = 4 * d * R_ss
    R_tots = R_BMs + R_stores + 2 * R_nets

    notes = threshold_messages(p_g)
    notes += [
        f"{name}={value:.6g} exceeds {APPROXIMATION_LIMIT}; additive propagation is inaccurate"
        for name, value in (("R_1s", R_1s), ("R_3s", R_3s), ("R_stores", R_stores), ("R_BMs", R_BMs))
        if value > APPROXIMATION_LIMIT
    ]
    feasible = 0 <= R_tots < 1
    if not feasible:
        notes.append(f"R_tots={R_tots:.6g} >= 1; no usable correlation")

    return SurfaceBreakdown(
        R_ss=R_ss, R_1s=R_1s, R_3s=R_3s, R_nets=R_nets, R_stores=R_stores, R_BMs=R_BMs,
        R_tots=R_tots, T_1s=T_1s, T_3s=scenario.T_3s, T_tots=T_tots,
        F_final_s=1 - R_tots, feasible=feasible, warnings=tuple(notes),
    )


def stage_spec_sc(scenario: SurfaceScenario) -> list[tuple[float, float]]:
    """(cycles, per-cycle rate) terms of R_tots; see :func:`pipeline_qldpc.stage_spec`."""
    bd = evaluate_sc(scenario)
    d = scenario.code.d_sc
    t_cyc = surface_cycle_time(scenario.params)
    net = [(2 * d, bd.R_ss), (scenario.T_3s / t_cyc, bd.R_ss), (1, bd.R_ss)]
    return [(4 * d, bd.R_ss), (2 * bd.T_tots / t_cyc, bd.R_ss)] + net * 2

