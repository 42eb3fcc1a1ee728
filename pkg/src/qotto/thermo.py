"""Thermal equilibrium states on a q-deformed spectrum.

The canonical sum Z = sum_n exp(-E_n / T) is truncated with a certified tail
bound rather than a fixed depth.  Gaps are non-decreasing in n for q <= 1, so
beyond any level n the weights are dominated by a geometric series with ratio
exp(-(E_{n+1} - E_n) / T); truncation stops once both that bound and an
energy-weighted analogue fall below tail_tol times the respective partial
sums.  All Boltzmann weights are formed from shifted energies E_n - E_0 so
that nothing underflows at low temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError
from .spectrum import LADDER_HARD_CAP, OscillatorParams, energy_ladder

DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class ThermalState:
    """Equilibrium state at a given temperature on a truncated ladder.

    populations[n] is the occupation of level n, normalized over the
    truncation; log_partition is ln Z of the same truncated sum; entropy is
    the Shannon entropy -sum P ln P (dimensionless, k_B = 1); internal_energy
    is sum P_n E_n.
    """

    temperature: float
    params: OscillatorParams
    n_max: int
    populations: np.ndarray
    energies: np.ndarray
    log_partition: float
    entropy: float
    internal_energy: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.temperature) and self.temperature > 0.0):
            raise DomainError(f"temperature must be positive, got {self.temperature!r}")
        if len(self.populations) != self.n_max + 1:
            raise DomainError("populations must cover levels 0 .. n_max")
        total = float(np.sum(self.populations))
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"populations must be normalized, sum = {total!r}")
        if np.any(self.populations < 0.0) or np.any(np.diff(self.populations) > 0.0):
            raise DomainError("populations must be non-negative and non-increasing")


def _validate_state_inputs(temperature: float, tail_tol: float) -> None:
    if not (math.isfinite(temperature) and temperature > 0.0):
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    if not (0.0 < tail_tol < 1.0):
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")


def _shifted_weights(energies: np.ndarray, temperature: float) -> np.ndarray:
    # Deep extensions can hold energies near or beyond the float range; the
    # corresponding weights are exact zeros either way.
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(-(energies - energies[0]) / temperature)


def _certified_stop(
    params: OscillatorParams,
    energies: np.ndarray,
    weights: np.ndarray,
    temperature: float,
    tail_tol: float,
) -> int | None:
    """First depth at which the tail bounds are met, or None within this block."""
    if len(energies) < 2:
        return None
    gaps = np.diff(energies)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ratio = np.exp(-gaps / temperature)
        weight_tail = weights[:-1] * ratio / (1.0 - ratio)
        if params.is_harmonic:
            # E_{n+k} = E_n + omega k gives an exact geometric-series tail.
            energy_tail = weights[:-1] * (
                energies[:-1] * ratio / (1.0 - ratio)
                + params.omega * ratio / (1.0 - ratio) ** 2
            )
        else:
            # E_{n+k} <= C_n e^{s k} with C_n = E_n / (1 - e^{-2 a_n}).
            s = -params.log_q
            a = s * (np.arange(len(energies) - 1, dtype=np.float64) + 0.5)
            cap = energies[:-1] / (-np.expm1(-2.0 * a))
            gamma = math.exp(s) * ratio
            energy_tail = np.where(
                gamma < 1.0, weights[:-1] * cap * gamma / (1.0 - gamma), np.inf
            )
        partial = np.cumsum(weights)
        partial_energy = np.cumsum(np.where(weights > 0.0, weights * energies, 0.0))
        ok = (weight_tail <= tail_tol * partial[:-1]) & (
            energy_tail <= tail_tol * partial_energy[:-1]
        )
    if not ok.any():
        return None
    return int(np.argmax(ok))


def _truncated_weights(
    params: OscillatorParams, temperature: float, tail_tol: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Energies and shifted weights out to a certified depth."""
    size = 64
    while True:
        energies = energy_ladder(params, min(size, LADDER_HARD_CAP))
        weights = _shifted_weights(energies, temperature)
        stop = _certified_stop(params, energies, weights, temperature, tail_tol)
        if stop is not None:
            return energies[: stop + 1], weights[: stop + 1], stop
        if size >= LADDER_HARD_CAP:
            raise NonConvergenceError(
                f"Boltzmann sum not converged at depth {LADDER_HARD_CAP} "
                f"(q={params.q}, omega={params.omega}, T={temperature})"
            )
        size *= 2


def partition_function(
    params: OscillatorParams, temperature: float, tail_tol: float = DEFAULT_TAIL_TOL
) -> tuple[float, int]:
    """ln Z of the truncated canonical sum and the certified depth used.

    The maximum Boltzmann weight (the ground-state term) is factored out, so
    ln Z = -E_0 / T + ln sum_n exp(-(E_n - E_0) / T) stays finite at any
    temperature.
    """
    _validate_state_inputs(temperature, tail_tol)
    energies, weights, n_max = _truncated_weights(params, temperature, tail_tol)
    log_z = math.log(float(np.sum(weights))) - energies[0] / temperature
    return log_z, n_max


def thermal_state(
    params: OscillatorParams,
    temperature: float,
    tail_tol: float = DEFAULT_TAIL_TOL,
    n_max: int | None = None,
) -> ThermalState:
    """Build the equilibrium state at the given temperature.

    When n_max is None the truncation depth is chosen by the certified tail
    bound; passing n_max forces a fixed depth (used for convergence checks
    and for aligning two states on a common ladder).
    """
    _validate_state_inputs(temperature, tail_tol)
    if n_max is None:
        energies, weights, depth = _truncated_weights(params, temperature, tail_tol)
    else:
        energies = energy_ladder(params, n_max)
        weights = _shifted_weights(energies, temperature)
        depth = n_max
    total = float(np.sum(weights))
    populations = weights / total
    log_z = math.log(total) - energies[0] / temperature

    occupied = populations > 0.0
    occ = populations[occupied]
    entropy = float(-np.sum(occ * np.log(occ)))
    internal = float(np.sum(occ * energies[occupied]))

    populations.setflags(write=False)
    energies.setflags(write=False)
    return ThermalState(
        temperature=temperature,
        params=params,
        n_max=depth,
        populations=populations,
        energies=energies,
        log_partition=log_z,
        entropy=entropy,
        internal_energy=internal,
    )


def entropy_temperature_curve(
    params: OscillatorParams,
    temperatures,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> np.ndarray:
    """Entropy against temperature, returned as an (N, 2) array of (T, S)."""
    temps = np.asarray(temperatures, dtype=np.float64)
    if temps.ndim != 1 or len(temps) == 0:
        raise DomainError("temperature grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(temps) & (temps > 0.0)):
        raise DomainError("all temperatures must be positive and finite")
    rows = [
        (float(t), thermal_state(params, float(t), tail_tol).entropy) for t in temps
    ]
    return np.array(rows, dtype=np.float64)
