"""Four-stroke quantum Otto cycle: two isochores and two quantum adiabats.

Cycle bookkeeping, with points labelled A, B, C, D:

  A -> B  isochoric heating on the hot-side spectrum (params_hot, bath t_hot)
  B -> C  quantum adiabat, populations frozen, spectrum -> params_cold
  C -> D  isochoric cooling on the cold-side spectrum (bath t_cold)
  D -> A  quantum adiabat back, populations frozen again

So the populations at B (= C) are thermal at t_hot on the hot-side ladder and
the populations at D (= A) are thermal at t_cold on the cold-side ladder.
Heat flows only on the isochores:

  heat_in  = sum_n E_hot[n]  (P_B[n] - P_A[n])
  heat_out = sum_n E_cold[n] (P_A[n] - P_B[n])
  work     = heat_in + heat_out

computed over a common truncation (the deeper of the two states, with the
shallower state's populations re-evaluated there, not zero-padded).  Writing
work as the sum of the two heats makes first-law closure a float identity.

For strongly deformed spectra paired with slowly decaying populations the
cross sums can diverge; the truncated evaluation then saturates cleanly to
work = -inf (the sign of the mathematical limit), the positive-work flag is
false and the efficiency is undefined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputeError, CyclePointError, DomainError
from .spectrum import OscillatorParams, energy_ladder
from .thermo import DEFAULT_TAIL_TOL, _shifted_weights, thermal_state


@dataclass(frozen=True)
class OttoCycleSpec:
    """Bath temperatures and the two working-substance configurations."""

    t_hot: float
    t_cold: float
    params_hot: OscillatorParams
    params_cold: OscillatorParams
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self) -> None:
        if not (
            math.isfinite(self.t_hot)
            and math.isfinite(self.t_cold)
            and self.t_hot > self.t_cold > 0.0
        ):
            raise DomainError(
                f"need t_hot > t_cold > 0, got t_hot={self.t_hot!r}, t_cold={self.t_cold!r}"
            )
        if not (0.0 < self.tail_tol < 1.0):
            raise DomainError(f"tail_tol must lie in (0, 1), got {self.tail_tol!r}")

    @property
    def carnot(self) -> float:
        return 1.0 - self.t_cold / self.t_hot


@dataclass(frozen=True)
class CycleResult:
    """Energetics of one cycle evaluation.

    efficiency is None whenever the positive work condition fails; heat_out
    carries its sign (negative when heat is rejected to the cold bath).
    """

    work: float
    heat_in: float
    heat_out: float
    efficiency: float | None
    carnot: float
    positive_work: bool
    n_max_used: int

    def __post_init__(self) -> None:
        finite = all(map(math.isfinite, (self.work, self.heat_in, self.heat_out)))
        if finite and abs(self.work - (self.heat_in + self.heat_out)) > 1e-10:
            raise ComputeError("first-law closure violated in cycle assembly")
        if self.positive_work:
            if self.efficiency is None or not (
                0.0 < self.efficiency <= self.carnot + 1e-9
            ):
                raise ComputeError(
                    f"efficiency {self.efficiency!r} outside (0, carnot] "
                    f"with carnot={self.carnot!r}"
                )
        elif self.efficiency is not None:
            raise ComputeError("efficiency must be undefined without positive work")


@dataclass(frozen=True)
class LevelDiagnostics:
    """Per-level contributions to the cycle sums.

    work_terms[n] = delta_energies[n] * delta_populations[n]; the population
    arrays are the frozen-adiabat sets (hot: points B and C, cold: D and A).
    """

    levels: np.ndarray
    delta_populations: np.ndarray
    delta_energies: np.ndarray
    work_terms: np.ndarray
    populations_hot: np.ndarray
    populations_cold: np.ndarray


def _populations_at_depth(
    params: OscillatorParams, temperature: float, depth: int
) -> tuple[np.ndarray, np.ndarray]:
    energies = energy_ladder(params, depth)
    weights = _shifted_weights(energies, temperature)
    return energies, weights / float(np.sum(weights))


def _cycle_arrays(
    spec: OttoCycleSpec, min_levels: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    try:
        hot = thermal_state(spec.params_hot, spec.t_hot, spec.tail_tol)
    except ComputeError as exc:
        raise CyclePointError("hot isochore endpoint B", str(exc)) from exc
    try:
        cold = thermal_state(spec.params_cold, spec.t_cold, spec.tail_tol)
    except ComputeError as exc:
        raise CyclePointError("cold isochore endpoint D", str(exc)) from exc

    depth = max(hot.n_max, cold.n_max)
    if min_levels is not None:
        depth = max(depth, min_levels - 1)
    if hot.n_max == depth:
        e_hot, p_hot = hot.energies, hot.populations
    else:
        e_hot, p_hot = _populations_at_depth(spec.params_hot, spec.t_hot, depth)
    if cold.n_max == depth:
        e_cold, p_cold = cold.energies, cold.populations
    else:
        e_cold, p_cold = _populations_at_depth(spec.params_cold, spec.t_cold, depth)
    return e_hot, e_cold, p_hot, p_cold, depth


def evaluate_cycle(spec: OttoCycleSpec) -> CycleResult:
    """Work, heats and efficiency of the cycle defined by spec."""
    e_hot, e_cold, p_hot, p_cold, depth = _cycle_arrays(spec)
    delta_p = p_hot - p_cold
    active = delta_p != 0.0
    with np.errstate(invalid="ignore"):
        heat_in = float(np.sum(e_hot[active] * delta_p[active]))
        heat_out = -float(np.sum(e_cold[active] * delta_p[active]))
    work = heat_in + heat_out
    # heat_in > 0 whenever work > 0 in exact arithmetic; requiring both keeps
    # rounding-noise points near work = 0 out of the positive-work domain.
    positive = bool(work > 0.0 and heat_in > 0.0)
    efficiency = work / heat_in if positive else None
    return CycleResult(
        work=work,
        heat_in=heat_in,
        heat_out=heat_out,
        efficiency=efficiency,
        carnot=spec.carnot,
        positive_work=positive,
        n_max_used=depth,
    )


def per_level_diagnostics(
    spec: OttoCycleSpec, min_levels: int | None = None
) -> LevelDiagnostics:
    """Per-level population differences, gap variations and work terms.

    min_levels, when given, forces the table to cover at least that many
    levels even when the certified truncations stop earlier.
    """
    e_hot, e_cold, p_hot, p_cold, depth = _cycle_arrays(spec, min_levels)
    delta_p = p_hot - p_cold
    delta_e = e_hot - e_cold
    with np.errstate(invalid="ignore"):
        work_terms = np.where(delta_p != 0.0, delta_e * delta_p, 0.0)
    return LevelDiagnostics(
        levels=np.arange(depth + 1),
        delta_populations=delta_p,
        delta_energies=delta_e,
        work_terms=work_terms,
        populations_hot=p_hot,
        populations_cold=p_cold,
    )
