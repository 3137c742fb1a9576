"""Bandwidth, fleet sizing and cost per delivered bit."""

from __future__ import annotations

import dataclasses
import enum
import math
from decimal import ROUND_HALF_UP, Decimal

from .pipeline_qldpc import Scenario, StageBreakdown
from .pipeline_surface import SurfaceBreakdown, SurfaceScenario, surface_cycle_time
from .qec_models import HGP_RATE

SECONDS_PER_DAY = 86_400
SECONDS_PER_YEAR = SECONDS_PER_DAY * 365
MEMORY_SETS = 2  # every Bell pair occupies a hub-side and a transported memory


class CodeFamily(str, enum.Enum):
    QLDPC = "qldpc"
    SURFACE = "surface"


@dataclasses.dataclass(frozen=True)
class UsageProfile:
    messages_per_day: float = 85
    bits_per_message: float = 16_000
    wait_seconds: float = 600

    def __post_init__(self):
        for name in ("messages_per_day", "bits_per_message", "wait_seconds"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")


@dataclasses.dataclass(frozen=True)
class FleetReport:
    """Fleet size and unit economics for one network.

    Vehicles are dispatched in batches of ``trucks_per_cycle`` every
    ``dispatch_interval`` seconds (one unload period ``T_4`` for HGP memories,
    one second for surface patches, which are measured in parallel) and each
    stays in service for ``lifecycle`` seconds.  ``N_blocks`` is the number of
    memory blocks drained in parallel per destination, each yielding ``r_L``
    bits/s.
    """

    code_family: CodeFamily
    patch_qubits: float
    r_L: float
    N_blocks: float
    B: float
    trucks_per_cycle: float
    dispatch_interval: float
    lifecycle: float
    trucks_unrounded: float
    N_truck_tot: int
    C_t: float
    C_q: float
    C_o: float

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["code_family"] = self.code_family.value
        return out


def bandwidth_from_usage(profile: UsageProfile) -> tuple[float, float]:
    """Required bit rate (bits/s) and the number of daily user slots at one qATM."""
    r_e = profile.messages_per_day * profile.bits_per_message / profile.wait_seconds
    return r_e, SECONDS_PER_DAY / profile.wait_seconds


def cost_per_bit(
    N_truck_tot: float,
    R_h: float,
    C_m: float,
    r_e: float,
    S: int,
    truck_capacity_qubits: float,
    device_qubits: float,
) -> tuple[float, float, float]:
    """Transport, quantum-hardware and total cost per delivered bit, in dollars.

    Hardware cost counts ``truck_capacity_qubits / device_qubits`` devices per
    vehicle, doubled for the hub-side memories, each costing ``C_m`` per year.
    """
    if not r_e > 0:
        raise ValueError(f"r_e must be positive, got {r_e!r}")
    if not S >= 1:
        raise ValueError(f"S must be >= 1, got {S!r}")
    if not device_qubits > 0:
        raise ValueError(f"device_qubits must be positive, got {device_qubits!r}")
    bits_per_hour = 3600 * r_e * S
    C_t = R_h * N_truck_tot / bits_per_hour
    devices = MEMORY_SETS * (truck_capacity_qubits / device_qubits) * N_truck_tot
    C_q = devices * C_m / (r_e * S * SECONDS_PER_YEAR)
    return C_t, C_q, C_t + C_q


def fleet_qldpc(scenario: Scenario, breakdown: StageBreakdown) -> FleetReport:
    n_m = scenario.code.n_m
    if scenario.truck_capacity_qubits < n_m:
        raise ValueError("truck capacity is smaller than one memory block")
    r_L = n_m / HGP_RATE / breakdown.T_4
    N_blocks = scenario.r_e / r_L
    B = scenario.truck_capacity_qubits / n_m
    trucks_per_cycle = scenario.S * N_blocks / B
    lifecycle = breakdown.T_2 + 2 * scenario.T_3 + breakdown.T_4
    total = trucks_per_cycle * lifecycle / breakdown.T_4
    N = math.ceil(total)
    C_t, C_q, C_o = cost_per_bit(
        N, scenario.R_h, scenario.C_m, scenario.r_e, scenario.S,
        scenario.truck_capacity_qubits, n_m,
    )
    return FleetReport(
        code_family=CodeFamily.QLDPC, patch_qubits=n_m, r_L=r_L, N_blocks=N_blocks, B=B,
        trucks_per_cycle=trucks_per_cycle, dispatch_interval=breakdown.T_4, lifecycle=lifecycle,
        trucks_unrounded=total, N_truck_tot=N, C_t=C_t, C_q=C_q, C_o=C_o,
    )


def fleet_surface(scenario: SurfaceScenario, breakdown: SurfaceBreakdown) -> FleetReport:
    n_ms = scenario.code.n_ms
    if scenario.truck_capacity_qubits < n_ms:
        raise ValueError("truck capacity is smaller than one surface patch")
    t_cyc = surface_cycle_time(scenario.params)
    r_L = 1 / t_cyc
    N_blocks = scenario.r_e / r_L
    B = scenario.truck_capacity_qubits / n_ms
    trucks_per_second = scenario.S * scenario.r_e / B
    lifecycle = breakdown.T_tots + scenario.T_3s
    total = trucks_per_second * lifecycle
    N = math.ceil(total)
    C_t, C_q, C_o = cost_per_bit(
        N, scenario.R_h, scenario.C_m, scenario.r_e, scenario.S,
        scenario.truck_capacity_qubits, scenario.device_qubits,
    )
    return FleetReport(
        code_family=CodeFamily.SURFACE, patch_qubits=n_ms, r_L=r_L, N_blocks=N_blocks, B=B,
        trucks_per_cycle=trucks_per_second, dispatch_interval=1.0, lifecycle=lifecycle,
        trucks_unrounded=total, N_truck_tot=N, C_t=C_t, C_q=C_q, C_o=C_o,
    )


def dollars(amount: float) -> str:
    """Round half-up to the cent for display."""
    return str(Decimal(repr(amount)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
