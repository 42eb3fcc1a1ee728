"""Parameter sweeps, positive-work boundary location and scalar optimization.

Grid points are independent work items; sweeps may fan out to a process pool
and are assembled in grid order regardless of worker count, so results are
deterministic.  Failed grid points are recorded with an error marker rather
than dropped or interpolated.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cycle import CycleResult, OttoCycleSpec, evaluate_cycle
from .errors import ComputeError, DomainError, EmptyDomainError, NoSignChangeError
from .spectrum import OscillatorParams
from .thermo import DEFAULT_TAIL_TOL

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepRow:
    """One grid point: swept values plus either a result or an error marker."""

    values: tuple[float, ...]
    result: CycleResult | None
    error: str | None = None


@dataclass(frozen=True)
class SweepTable:
    """Ordered sweep records; the first swept parameter strictly increases."""

    swept_names: tuple[str, ...]
    rows: tuple[SweepRow, ...]

    def __post_init__(self) -> None:
        first = [row.values[0] for row in self.rows]
        if any(b <= a for a, b in zip(first, first[1:])):
            raise DomainError("sweep grid must be strictly increasing")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, extract) -> list:
        """Apply extract to each row's result (None for failed rows)."""
        return [None if r.result is None else extract(r.result) for r in self.rows]


@dataclass(frozen=True)
class OptimumReport:
    """Refined scalar optimum: location, value and the final bracket."""

    argmax: float
    max_value: float
    objective: str
    bracket: tuple[float, float]
    refinement_tol: float


def make_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid, rounded to 12 decimals for stable reprs."""
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise DomainError("grid bounds and step must be finite")
    if step <= 0.0 or stop < start:
        raise DomainError(f"need stop >= start and step > 0, got [{start}, {stop}] @ {step}")
    count = int(math.floor((stop - start) / step + 1e-9))
    grid = np.round(start + step * np.arange(count + 1), 12)
    return grid[grid <= stop + 1e-12]


def _validate_q_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or len(grid) == 0:
        raise DomainError("grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("grid must be strictly increasing")
    if grid[0] <= 0.0 or grid[-1] > 1.0:
        raise DomainError("q grid must lie inside (0, 1]")
    return grid


def _evaluate_one(spec: OttoCycleSpec) -> tuple[CycleResult | None, str | None]:
    try:
        return evaluate_cycle(spec), None
    except ComputeError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _evaluate_specs(
    specs: list[OttoCycleSpec], jobs: int
) -> list[tuple[CycleResult | None, str | None]]:
    if jobs <= 1 or len(specs) < 2:
        return [_evaluate_one(s) for s in specs]
    chunk = max(1, len(specs) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_one, specs, chunksize=chunk))


def _assemble(
    names: tuple[str, ...],
    values: list[tuple[float, ...]],
    outcomes: list[tuple[CycleResult | None, str | None]],
) -> SweepTable:
    rows = tuple(
        SweepRow(values=v, result=res, error=err)
        for v, (res, err) in zip(values, outcomes)
    )
    return SweepTable(swept_names=names, rows=rows)


def sweep_qa(
    q_cold: float,
    t_hot: float,
    t_cold: float,
    omega: float,
    grid,
    tail_tol: float = DEFAULT_TAIL_TOL,
    jobs: int = 1,
) -> SweepTable:
    """Cycle results over a grid of hot-side deformations at fixed q_cold."""
    grid = _validate_q_grid(grid)
    cold = OscillatorParams(omega, q_cold)
    specs = [
        OttoCycleSpec(t_hot, t_cold, OscillatorParams(omega, float(qa)), cold, tail_tol)
        for qa in grid
    ]
    outcomes = _evaluate_specs(specs, jobs)
    return _assemble(("q_a",), [(float(qa),) for qa in grid], outcomes)


def sweep_omega(
    q_hot: float,
    q_cold: float,
    t_hot: float,
    t_cold: float,
    omega_grid,
    omega_cold: float | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
    jobs: int = 1,
) -> SweepTable:
    """Cycle results over a frequency grid.

    Two modes: with omega_cold None the grid value is the common frequency of
    both isochores (deformations q_hot / q_cold differ); with omega_cold set
    the grid value is the hot-side frequency only, the cold side staying at
    omega_cold (intended for equal deformations on both sides).
    """
    grid = np.asarray(omega_grid, dtype=np.float64)
    if grid.ndim != 1 or len(grid) == 0:
        raise DomainError("omega grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0.0) or grid[0] <= 0.0:
        raise DomainError("omega grid must be positive and strictly increasing")
    specs = []
    for w in grid:
        w = float(w)
        cold_omega = w if omega_cold is None else omega_cold
        specs.append(
            OttoCycleSpec(
                t_hot,
                t_cold,
                OscillatorParams(w, q_hot),
                OscillatorParams(cold_omega, q_cold),
                tail_tol,
            )
        )
    name = "omega" if omega_cold is None else "omega_a"
    outcomes = _evaluate_specs(specs, jobs)
    return _assemble((name,), [(float(w),) for w in grid], outcomes)


def efficiency_curve(
    q_cold: float,
    t_hot: float,
    t_cold: float,
    omega: float,
    grid,
    tail_tol: float = DEFAULT_TAIL_TOL,
    jobs: int = 1,
) -> SweepTable:
    """sweep_qa restricted to rows satisfying the positive work condition."""
    table = sweep_qa(q_cold, t_hot, t_cold, omega, grid, tail_tol, jobs)
    kept = tuple(r for r in table.rows if r.result is not None and r.result.positive_work)
    return SweepTable(swept_names=table.swept_names, rows=kept)


def positive_work_boundary(
    q_cold: float,
    t_hot: float,
    t_cold: float,
    omega: float,
    tol: float = 1e-6,
    scan_start: float = 0.01,
    scan_stop: float = 1.0,
    scan_step: float = 1e-3,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """Lowest q_a at which the work changes sign from negative to positive.

    A coarse upward scan brackets the first sign change, then bisection
    narrows the bracket to width tol.  Raises NoSignChangeError when no
    negative-to-positive crossing exists on the scanned interval.
    """
    if not (0.0 < tol < 1.0):
        raise DomainError(f"tol must lie in (0, 1), got {tol!r}")
    cold = OscillatorParams(omega, q_cold)

    def work_at(qa: float) -> float:
        spec = OttoCycleSpec(t_hot, t_cold, OscillatorParams(omega, qa), cold, tail_tol)
        return evaluate_cycle(spec).work

    grid = make_grid(scan_start, scan_stop, scan_step)
    works = [work_at(float(qa)) for qa in grid]
    bracket = None
    for k in range(len(grid) - 1):
        if works[k] < 0.0 < works[k + 1]:
            bracket = (float(grid[k]), float(grid[k + 1]))
            break
    if bracket is None:
        raise NoSignChangeError(
            f"work does not cross zero upward on ({scan_start}, {scan_stop}) "
            f"for q_c={q_cold}, t_hot={t_hot}, t_cold={t_cold}, omega={omega}"
        )
    lo, hi = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if work_at(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _golden_max(f, lo: float, hi: float, tol: float):
    """Golden-section maximization on [lo, hi]; returns (x, f(x), bracket)."""
    best_x, best_f = None, -math.inf

    def probe(x: float) -> float:
        nonlocal best_x, best_f
        fx = f(x)
        if fx > best_f:
            best_x, best_f = x, fx
        return fx

    a, b = lo, hi
    if b - a <= tol:
        x = 0.5 * (a + b)
        probe(x)
        return best_x, best_f, (a, b)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = probe(c), probe(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = probe(d)
    return best_x, best_f, (a, b)


def optimize_q(
    objective: str,
    free: str,
    t_hot: float,
    t_cold: float,
    omega: float,
    q_fixed: float,
    grid_step: float = 1e-3,
    refine_tol: float = 1e-6,
    grid_start: float | None = None,
    grid_stop: float = 1.0,
    tail_tol: float = DEFAULT_TAIL_TOL,
    jobs: int = 1,
) -> OptimumReport:
    """Maximize work or efficiency over one deformation parameter.

    The free parameter (the hot-side or cold-side q) is scanned on a coarse
    grid, then the bracket around the best grid point is refined by
    golden-section search.  No unimodality is assumed beyond that bracket.
    The efficiency objective is restricted to the positive-work domain and
    raises EmptyDomainError when no grid point satisfies it.
    """
    if objective not in ("work", "efficiency"):
        raise DomainError(f"objective must be 'work' or 'efficiency', got {objective!r}")
    if free not in ("q_hot", "q_cold"):
        raise DomainError(f"free must be 'q_hot' or 'q_cold', got {free!r}")
    if not (1e-4 < grid_step < 0.1):
        raise DomainError(f"grid_step must lie in (1e-4, 0.1), got {grid_step!r}")
    if not (0.0 < refine_tol < 1.0):
        raise DomainError(f"refine_tol must lie in (0, 1), got {refine_tol!r}")

    def build_spec(q_free: float) -> OttoCycleSpec:
        q_hot = q_free if free == "q_hot" else q_fixed
        q_cold = q_free if free == "q_cold" else q_fixed
        return OttoCycleSpec(
            t_hot,
            t_cold,
            OscillatorParams(omega, q_hot),
            OscillatorParams(omega, q_cold),
            tail_tol,
        )

    def score(result: CycleResult | None) -> float:
        if result is None:
            return -math.inf
        if objective == "work":
            return result.work if math.isfinite(result.work) else -math.inf
        return result.efficiency if result.positive_work else -math.inf

    start = grid_start if grid_start is not None else max(0.01, grid_step)
    grid = make_grid(start, grid_stop, grid_step)
    grid = grid[(grid > 0.0) & (grid <= 1.0)]
    if len(grid) == 0:
        raise DomainError("optimization grid is empty")

    outcomes = _evaluate_specs([build_spec(float(q)) for q in grid], jobs)
    values = np.array([score(res) for res, _err in outcomes])
    if objective == "efficiency" and not np.any(values > -math.inf):
        raise EmptyDomainError(
            "no grid point satisfies the positive work condition"
        )
    k = int(np.argmax(values))

    if len(grid) == 1:
        x = float(grid[0])
        return OptimumReport(x, float(values[0]), objective, (x, x), refine_tol)

    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, len(grid) - 1)])

    def objective_at(q_free: float) -> float:
        res, _err = _evaluate_one(build_spec(q_free))
        return score(res)

    x_best, f_best, bracket = _golden_max(objective_at, lo, hi, refine_tol)
    if values[k] > f_best:
        x_best, f_best = float(grid[k]), float(values[k])
    if not (bracket[0] <= x_best <= bracket[1]):
        half = 0.5 * refine_tol
        bracket = (x_best - half, min(x_best + half, grid_stop))
    return OptimumReport(x_best, f_best, objective, bracket, refine_tol)
