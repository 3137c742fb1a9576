"""Failure-rate and duration accounting for the qLDPC delayed-choice protocol.

Stages, in order: patch initialization (R_0), surface-code Bell pair
creation (R_1), loading both halves into HGP memories (R_2, T_2), transport
(R_3, T_3), unload and measure at the qATM (R_4, T_4), storage at the hub
(R_store), unload at the hub (R_unload) and the final Bell measurement (R_BM).
Failure probabilities are accumulated additively.
"""

from __future__ import annotations

import dataclasses
import math
from typing import NamedTuple

from .qec_models import (
    HGP_RATE,
    SURFACE_DEPTH,
    HgpConfig,
    PhysicalParams,
    PAPER_DEFAULTS,
    cycle_time,
    hgp_lfr_per_cycle,
    surface_lfr_per_cycle,
    threshold_messages,
)

APPROXIMATION_LIMIT = 0.1


@dataclasses.dataclass(frozen=True)
class Scenario:
    """One network instance built on HGP memories.

    ``truck_capacity_qubits`` is the number of physical qubits one vehicle
    carries; ``r_e`` the target delivered bit rate per destination in bits/s.
    """

    code: HgpConfig = HgpConfig(60_000)
    params: PhysicalParams = PAPER_DEFAULTS
    T_3: float = 5400.0
    S: int = 5
    truck_capacity_qubits: float = 1_000_000
    r_e: float = 2300.0
    R_h: float = 150.0
    C_m: float = 2_000_000.0

    def __post_init__(self):
        _validate_network(self.T_3, self.S, self.truck_capacity_qubits, self.r_e, self.R_h, self.C_m)
        if self.truck_capacity_qubits < self.code.n_m:
            raise ValueError(
                f"truck capacity {self.truck_capacity_qubits!r} cannot hold one "
                f"{self.code.n_m!r}-qubit memory"
            )

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)


def _validate_network(T_3, S, capacity, r_e, R_h, C_m) -> None:
    if not (math.isfinite(T_3) and T_3 >= 0):
        raise ValueError(f"transport time must be >= 0 seconds, got {T_3!r}")
    if S < 1 or int(S) != S:
        raise ValueError(f"S must be a positive integer, got {S!r}")
    if not (math.isfinite(capacity) and capacity > 0):
        raise ValueError(f"truck capacity must be positive, got {capacity!r}")
    if not (math.isfinite(r_e) and r_e > 0):
        raise ValueError(f"r_e must be positive, got {r_e!r}")
    if not R_h >= 0:
        raise ValueError(f"R_h must be >= 0, got {R_h!r}")
    if not C_m >= 0:
        raise ValueError(f"C_m must be >= 0, got {C_m!r}")


class PatchRates(NamedTuple):
    """Per-cycle failure rates and cycle times of the three patch kinds in play."""

    memory: float
    ancilla: float
    surface: float
    t_cyc_memory: float
    t_cyc_ancilla: float


class LoadingStages(NamedTuple):
    R_0: float
    R_1: float
    R_2: float
    R_3: float
    R_4: float
    T_2: float
    T_4: float


class SwapStages(NamedTuple):
    R_store: float
    R_unload: float
    R_BM: float


@dataclasses.dataclass(frozen=True)
class StageBreakdown:
    R_0: float
    R_1: float
    R_2: float
    R_3: float
    R_4: float
    R_net: float
    R_store: float
    R_unload: float
    R_BM: float
    R_tot: float
    T_2: float
    T_3: float
    T_4: float
    T_tot: float
    M_t: float
    M_tot_c: float
    F_final: float
    feasible: bool
    warnings: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def patch_rates(code: HgpConfig, params: PhysicalParams) -> PatchRates:
    n_m, n_a = code.n_m, code.n_a
    # the computational surface code shares the memory distance, so it has d**2 = n_m/25 qubits
    surface_size = code.d**2
    return PatchRates(
        memory=hgp_lfr_per_cycle(n_m, params.gate_error(n_m)),
        ancilla=hgp_lfr_per_cycle(n_a, params.gate_error(n_a)),
        surface=surface_lfr_per_cycle(code.d, params.gate_error(surface_size)),
        t_cyc_memory=cycle_time(n_m, params),
        t_cyc_ancilla=cycle_time(n_a, params),
    )


def _teleport_in(code: HgpConfig, rates: PatchRates) -> float:
    """One surface -> ancilla -> memory teleportation, including the queueing factor."""
    d = code.d
    return (
        math.sqrt(code.n_a) * rates.ancilla
        + d * (rates.surface + rates.ancilla)
        + d * (rates.ancilla + code.n_m / HGP_RATE * rates.memory)
    )


def stage_lfrs(scenario: Scenario, rates: PatchRates | None = None) -> LoadingStages:
    """Stages up to the qATM measurement: R_0..R_4 with load and unload durations."""
    code, params = scenario.code, scenario.params
    if rates is None:
        rates = patch_rates(code, params)
    d = code.d
    blocks = code.n_m / HGP_RATE
    sqrt_na = math.sqrt(code.n_a)

    R_0 = 2 * d * rates.memory
    R_1 = 2 * d * rates.surface
    R_2 = 2 * _teleport_in(code, rates)
    R_3 = scenario.T_3 / rates.t_cyc_memory * rates.memory
    R_4 = d * rates.surface + _teleport_in(code, rates) + rates.surface

    teleport_time = sqrt_na * rates.t_cyc_ancilla + d * rates.t_cyc_ancilla + d * rates.t_cyc_memory
    T_2 = blocks * teleport_time
    T_4 = blocks * (
        SURFACE_DEPTH * d * params.t_g
        + teleport_time
        + SURFACE_DEPTH * params.t_g
    )
    return LoadingStages(R_0, R_1, R_2, R_3, R_4, T_2, T_4)


def storage_and_swap_lfrs(scenario: Scenario, T_tot: float, rates: PatchRates | None = None) -> SwapStages:
    """Hub-side storage for ``T_tot`` seconds, unload of both drives and Bell measurement."""
    if not (math.isfinite(T_tot) and T_tot >= 0):
        raise ValueError(f"T_tot must be >= 0 seconds, got {T_tot!r}")
    code = scenario.code
    if rates is None:
        rates = patch_rates(code, scenario.params)
    d = code.d
    R_store = 2 * T_tot / rates.t_cyc_memory * rates.memory
    R_unload = 2 * (
        d * rates.surface
        + math.sqrt(code.n_a) * rates.ancilla
        + d * (rates.ancilla + code.n_m / HGP_RATE * rates.memory)
        + d * (rates.ancilla + rates.surface)
    )
    R_BM = 4 * d * rates.surface
    return SwapStages(R_store, R_unload, R_BM)


def evaluate(scenario: Scenario) -> StageBreakdown:
    rates = patch_rates(scenario.code, scenario.params)
    load = stage_lfrs(scenario, rates)
    R_net = load.R_0 + load.R_1 + load.R_2 + load.R_3 + load.R_4
    T_tot = load.T_2 + scenario.T_3 + load.T_4
    swap = storage_and_swap_lfrs(scenario, T_tot, rates)
    R_tot = swap.R_BM + swap.R_unload + swap.R_store + 2 * R_net

    stage_rates = {
        "R_0": load.R_0, "R_1": load.R_1, "R_2": load.R_2, "R_3": load.R_3, "R_4": load.R_4,
        "R_store": swap.R_store, "R_unload": swap.R_unload, "R_BM": swap.R_BM,
    }
    notes = _gate_error_notes(scenario)
    notes += [
        f"{name}={value:.6g} exceeds {APPROXIMATION_LIMIT}; additive propagation is inaccurate"
        for name, value in stage_rates.items()
        if value > APPROXIMATION_LIMIT
    ]
    feasible = 0 <= R_tot < 1
    if not feasible:
        notes.append(f"R_tot={R_tot:.6g} >= 1; no usable correlation")

    return StageBreakdown(
        **stage_rates,
        R_net=R_net,
        R_tot=R_tot,
        T_2=load.T_2,
        T_3=scenario.T_3,
        T_4=load.T_4,
        T_tot=T_tot,
        M_t=scenario.T_3 / rates.t_cyc_memory,
        M_tot_c=T_tot / rates.t_cyc_memory,
        F_final=1 - R_tot,
        feasible=feasible,
        warnings=tuple(notes),
    )


def _gate_error_notes(scenario: Scenario) -> list[str]:
    code, params = scenario.code, scenario.params
    seen = []
    for n in (code.n_m, code.n_a, code.d**2):
        p = params.gate_error(n)
        if p not in seen:
            seen.append(p)
    notes = []
    for p in seen:
        for note in threshold_messages(p):
            if note not in notes:
                notes.append(note)
    return notes


def stage_spec(scenario: Scenario) -> list[tuple[float, float]]:
    """Every (cycles, per-cycle rate) term that enters R_tot, in accumulation order.

    Summing ``cycles * rate`` over the list gives R_tot up to rounding; the
    list feeds the exact-product and Monte-Carlo checks in :mod:`validation`.
    """
    code = scenario.code
    rates = patch_rates(code, scenario.params)
    bd = evaluate(scenario)
    d = code.d
    sqrt_na = math.sqrt(code.n_a)
    queued = d * code.n_m / HGP_RATE
    teleport = [
        (sqrt_na, rates.ancilla),
        (d, rates.surface),
        (d, rates.ancilla),
        (d, rates.ancilla),
        (queued, rates.memory),
    ]
    net = (
        [(2 * d, rates.memory), (2 * d, rates.surface)]
        + teleport * 2
        + [(scenario.T_3 / rates.t_cyc_memory, rates.memory)]
        + [(d, rates.surface)] + teleport + [(1, rates.surface)]
    )
    spec = [(4 * d, rates.surface)]
    spec += [(d, rates.surface), (sqrt_na, rates.ancilla), (d, rates.ancilla),
             (queued, rates.memory), (d, rates.ancilla), (d, rates.surface)] * 2
    spec += [(2 * bd.T_tot / rates.t_cyc_memory, rates.memory)]
    spec += net * 2
    return spec
