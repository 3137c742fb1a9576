"""Checks on additive propagation of small failure probabilities.

A stage spec is a list of ``(cycles, per_cycle_rate)`` pairs.  The exact
failure probability of independent cycles is ``1 - prod (1 - p)**n``; the
additive approximation is ``sum n * p``.  Monte-Carlo sampling gives an
independent empirical estimate.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

CHUNK = 1 << 16

StageSpec = Sequence[tuple[float, float]]


def _validated(spec: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    out = []
    for cycles, rate in spec:
        if not (math.isfinite(cycles) and cycles >= 0):
            raise ValueError(f"cycle count must be >= 0, got {cycles!r}")
        if not 0 <= rate <= 1:
            raise ValueError(f"per-cycle rate must lie in [0, 1], got {rate!r}")
        out.append((float(cycles), float(rate)))
    return out


def stage_failure_probs(spec: StageSpec) -> np.ndarray:
    """Probability that each stage fails at least once, ``1 - (1 - p)**n``."""
    spec = _validated(spec)
    if not spec:
        return np.zeros(0)
    cycles, rates = np.array(spec).T
    with np.errstate(divide="ignore"):
        log_survive = cycles * np.log1p(-rates)
    # 0 cycles of a certain failure survives
    log_survive = np.where(cycles == 0, 0.0, log_survive)
    return -np.expm1(log_survive)


def exact_failure_prob(spec: StageSpec) -> float:
    spec = _validated(spec)
    log_survive = 0.0
    for cycles, rate in spec:
        if cycles == 0:
            continue
        if rate == 1:
            return 1.0
        log_survive += cycles * math.log1p(-rate)
    return -math.expm1(log_survive)


def approx_failure_prob(spec: StageSpec) -> float:
    total = math.fsum(n * p for n, p in _validated(spec))
    if total > 1:
        warnings.warn(f"additive failure estimate {total:.6g} exceeds 1", RuntimeWarning, stacklevel=2)
    return total


def _count_failures(stage_probs: np.ndarray, seed: int, chunk: int, size: int) -> int:
    # each chunk owns a disjoint Philox counter block, so results do not depend on scheduling
    bitgen = np.random.Philox(key=seed, counter=[0, 0, chunk, 0])
    u = np.random.Generator(bitgen).random((size, stage_probs.size))
    return int(np.count_nonzero((u < stage_probs).any(axis=1)))


def monte_carlo_failure(
    spec: StageSpec, trials: int, seed: int = 0, workers: int = 1
) -> tuple[float, float]:
    """Sampled failure probability and its standard error.

    Each trial draws one Bernoulli per stage with the stage's aggregate
    failure probability.  Output depends only on ``(spec, trials, seed)``.
    """
    if trials < 1 or int(trials) != trials:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed!r}")
    trials = int(trials)
    probs = stage_failure_probs(spec)
    if probs.size == 0:
        return 0.0, 0.0
    sizes = [min(CHUNK, trials - start) for start in range(0, trials, CHUNK)]
    jobs = [(probs, seed, i, size) for i, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            failures = sum(pool.map(lambda job: _count_failures(*job), jobs))
    else:
        failures = sum(_count_failures(*job) for job in jobs)
    estimate = failures / trials
    return estimate, math.sqrt(estimate * (1 - estimate) / trials)
