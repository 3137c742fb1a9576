"""Timing and per-cycle logical failure rate models for neutral-atom code patches.

Hardware constants follow the neutral-atom conventions used throughout the
package: trap transfer time in microseconds, acceleration in um/us^2, atom
spacing in um.  Every function returns times in seconds.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import warnings

HGP_RATE = 25  # physical qubits per logical qubit in the [[n, n/25, sqrt(n)/5]] family
HGP_THRESHOLD = 0.006
SURFACE_THRESHOLD = 1 / 70
SURFACE_DEPTH = 6  # gate layers in one surface-code syndrome extraction
REARRANGEMENTS_PER_CYCLE = 8

_US = 1e-6


class ThresholdWarning(UserWarning):
    """A fitted failure-rate model is being evaluated at or above its threshold."""


class IdlingMode(str, enum.Enum):
    FIXED = "fixed"
    PER_PATCH = "per-patch"


@dataclasses.dataclass(frozen=True)
class PhysicalParams:
    """Neutral-atom hardware constants.

    ``tau_t`` is in microseconds, ``a_p`` in um/us^2 and ``d_p`` in um, matching
    how the rearrangement model is usually quoted.  ``t_g`` and ``T_c`` are in
    seconds.  ``p_g_base`` is the two-qubit gate error before any idling
    adjustment; in ``FIXED`` mode it is used as-is for every patch.
    """

    tau_t: float = 50.0
    a_p: float = 0.02
    d_p: float = 5.0
    t_g: float = 2e-6
    T_c: float = 10.0
    p_g_base: float = 0.001
    idling_mode: IdlingMode = IdlingMode.FIXED

    def __post_init__(self):
        object.__setattr__(self, "idling_mode", IdlingMode(self.idling_mode))
        for name in ("tau_t", "a_p", "d_p", "t_g", "T_c"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if not 0 < self.p_g_base < 1:
            raise ValueError(f"p_g_base must lie in (0, 1), got {self.p_g_base!r}")

    def replace(self, **changes) -> "PhysicalParams":
        return dataclasses.replace(self, **changes)

    def gate_error(self, n: float) -> float:
        """Effective two-qubit gate error for a patch of ``n`` physical qubits."""
        if self.idling_mode is IdlingMode.FIXED:
            return self.p_g_base
        return idling_adjusted_pg(self.p_g_base, n, self)


PAPER_DEFAULTS = PhysicalParams()

# Per-patch idling adjustment applied to the 0.0008 near-term gate error.
PAPER_IDLING = PhysicalParams(p_g_base=0.0008, idling_mode=IdlingMode.PER_PATCH)

PARAMETER_SETS = {
    "paper-defaults": PAPER_DEFAULTS,
    "paper-idling": PAPER_IDLING,
}


@dataclasses.dataclass(frozen=True)
class HgpConfig:
    """Hypergraph-product memory patch of ``n_m`` physical qubits.

    Derived quantities are kept as reals so patch size can be swept
    continuously; use :func:`snap_hgp` for a realizable size.
    """

    n_m: float

    def __post_init__(self):
        if not (math.isfinite(self.n_m) and self.n_m > 0):
            raise ValueError(f"n_m must be a positive finite number, got {self.n_m!r}")

    @property
    def k(self) -> float:
        return self.n_m / HGP_RATE

    @property
    def d(self) -> float:
        return math.sqrt(self.n_m) / 5

    @property
    def n_a(self) -> float:
        """Size of the teleportation ancilla patch, chosen so its distance equals ``d``."""
        return self.n_m / HGP_RATE


@dataclasses.dataclass(frozen=True)
class SurfaceConfig:
    n_ms: float

    def __post_init__(self):
        if not (math.isfinite(self.n_ms) and self.n_ms > 0):
            raise ValueError(f"n_ms must be a positive finite number, got {self.n_ms!r}")

    @property
    def d_sc(self) -> float:
        return math.sqrt(self.n_ms)


def snap_hgp(n_m: float) -> int:
    """Nearest realizable patch size ``25 * d**2`` with integer distance ``d >= 1``."""
    if not n_m > 0:
        raise ValueError(f"n_m must be positive, got {n_m!r}")
    d = max(1, round(math.sqrt(n_m) / 5))
    return 25 * d * d


def _check_size(n: float) -> None:
    if not (math.isfinite(n) and n >= 1):
        raise ValueError(f"patch size must be >= 1 physical qubit, got {n!r}")


def _check_probability(p: float, name: str = "p_g") -> None:
    if not 0 < p < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {p!r}")


def rearrangement_time(n: float, params: PhysicalParams = PAPER_DEFAULTS) -> float:
    """Time in seconds for one atom rearrangement across a line of ``sqrt(n)`` atoms.

    The transfer term uses the natural logarithm.
    """
    _check_size(n)
    line = math.sqrt(n)
    transfer = 2 * params.tau_t * math.log(line)
    travel = (3 + 2 * math.sqrt(2)) * math.sqrt(6 * line * params.d_p / params.a_p)
    return (transfer + travel) * _US


def cycle_time(n: float, params: PhysicalParams = PAPER_DEFAULTS) -> float:
    """Duration of one syndrome-extraction cycle on an ``n``-qubit HGP patch."""
    return REARRANGEMENTS_PER_CYCLE * rearrangement_time(n, params)


def hgp_lfr_per_cycle(n: float, p_g: float) -> float:
    _check_size(n)
    _check_probability(p_g)
    if p_g >= HGP_THRESHOLD:
        warnings.warn(
            f"p_g={p_g:g} is at or above the HGP threshold {HGP_THRESHOLD}; "
            "the fitted failure rate no longer falls with patch size",
            ThresholdWarning,
            stacklevel=2,
        )
    return 0.07 * (p_g / HGP_THRESHOLD) ** (0.47 * n**0.27)


def surface_lfr_per_cycle(d_sc: float, p_g: float) -> float:
    if not (math.isfinite(d_sc) and d_sc >= 1):
        raise ValueError(f"surface code distance must be >= 1, got {d_sc!r}")
    _check_probability(p_g)
    if 70 * p_g >= 1:
        warnings.warn(
            f"p_g={p_g:g} is at or above the surface-code threshold 1/70",
            ThresholdWarning,
            stacklevel=2,
        )
    return 0.3 * (70 * p_g) ** ((d_sc + 1) / 2)


def idling_factor(n: float, params: PhysicalParams = PAPER_DEFAULTS) -> float:
    """Multiplicative inflation of the gate error from idling during rearrangement."""
    return 1 + 3 * rearrangement_time(n, params) / (0.005 * params.T_c)


def idling_adjusted_pg(p_g_base: float, n: float, params: PhysicalParams = PAPER_DEFAULTS) -> float:
    _check_probability(p_g_base, "p_g_base")
    return p_g_base * idling_factor(n, params)


def threshold_messages(p_g: float) -> list[str]:
    """Human-readable notes for a gate error at or above either code threshold."""
    notes = []
    if p_g >= HGP_THRESHOLD:
        notes.append(f"p_g={p_g:.6g} at or above HGP threshold {HGP_THRESHOLD}")
    if 70 * p_g >= 1:
        notes.append(f"p_g={p_g:.6g} at or above surface-code threshold 1/70")
    return notes
