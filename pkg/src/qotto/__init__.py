"""Quantum Otto cycles with a q-deformed oscillator working substance.

The package computes deformed oscillator spectra, certified-truncation
thermal states, four-stroke Otto cycle energetics, and parameter sweeps /
optimizations over the deformation, with a CSV-emitting CLI front end.
"""

from .analysis import (
    OptimumReport,
    SweepRow,
    SweepTable,
    efficiency_curve,
    make_grid,
    optimize_q,
    positive_work_boundary,
    sweep_omega,
    sweep_qa,
)
from .cycle import (
    CycleResult,
    LevelDiagnostics,
    OttoCycleSpec,
    evaluate_cycle,
    per_level_diagnostics,
)
from .errors import (
    ComputeError,
    CyclePointError,
    DomainError,
    EmptyDomainError,
    NonConvergenceError,
    NoSignChangeError,
    ResourceLimitError,
)
from .spectrum import (
    LADDER_HARD_CAP,
    OscillatorParams,
    energy,
    energy_ladder,
    q_number,
)
from .thermo import (
    DEFAULT_TAIL_TOL,
    ThermalState,
    entropy_temperature_curve,
    partition_function,
    thermal_state,
)

__version__ = "0.1.0"

__all__ = [
    "ComputeError",
    "CycleResult",
    "CyclePointError",
    "DEFAULT_TAIL_TOL",
    "DomainError",
    "EmptyDomainError",
    "LADDER_HARD_CAP",
    "LevelDiagnostics",
    "NonConvergenceError",
    "NoSignChangeError",
    "OptimumReport",
    "OscillatorParams",
    "OttoCycleSpec",
    "ResourceLimitError",
    "SweepRow",
    "SweepTable",
    "ThermalState",
    "efficiency_curve",
    "energy",
    "energy_ladder",
    "entropy_temperature_curve",
    "evaluate_cycle",
    "make_grid",
    "optimize_q",
    "partition_function",
    "per_level_diagnostics",
    "positive_work_boundary",
    "q_number",
    "sweep_omega",
    "sweep_qa",
    "thermal_state",
    "__version__",
]
