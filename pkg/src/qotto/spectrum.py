"""Energy spectrum of a q-deformed quantum oscillator.

The oscillator algebra is deformed by a real parameter q in (0, 1]; q = 1 is
the ordinary harmonic oscillator.  Level n carries energy

    E_n = (omega / 2) * ([n] + [n+1]),      [n] = (q^n - q^-n) / (q - q^-1),

which collapses to the closed form (omega / 2) * sinh(s (n + 1/2)) / sinh(s / 2)
with s = |ln q|.  For q < 1 the gaps grow exponentially with n, so the ladder
is strongly anharmonic.  Units: hbar = k_B = 1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceLimitError

# Ladder depths above this abort instead of allocating.
LADDER_HARD_CAP = 100_000

# |ln q| below this is treated as the q -> 1 harmonic limit; the sinh form is
# 0/0 there and loses all digits to cancellation well before that point.
HARMONIC_SWITCH = 1e-9


@dataclass(frozen=True)
class OscillatorParams:
    """Working-substance configuration: frequency omega and deformation q."""

    omega: float
    q: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise DomainError(f"omega must be positive and finite, got {self.omega!r}")
        if not (math.isfinite(self.q) and 0.0 < self.q <= 1.0):
            raise DomainError(f"q must lie in (0, 1], got {self.q!r}")

    @property
    def log_q(self) -> float:
        """ln q, the deformation rate (0 in the harmonic case)."""
        return math.log(self.q)

    @property
    def is_harmonic(self) -> bool:
        """True when q is close enough to 1 to use the harmonic formulas."""
        return abs(math.log(self.q)) < HARMONIC_SWITCH


def _q_number_formula(n: int, q: float) -> float:
    # Raw evaluation, no domain clamp.  Kept separate so the q <-> 1/q
    # symmetry can be exercised outside the public (0, 1] domain.
    return (q**n - q ** (-n)) / (q - q ** (-1))


def q_number(n: int, q: float) -> float:
    """Deformed integer [n]; tends to n as q -> 1.

    Raises DomainError for q outside (0, 1] or negative n.
    """
    if n < 0:
        raise DomainError(f"level index must be non-negative, got {n}")
    if not (isinstance(q, (int, float)) and math.isfinite(q) and 0.0 < q <= 1.0):
        raise DomainError(f"q must lie in (0, 1], got {q!r}")
    if abs(math.log(q)) < HARMONIC_SWITCH:
        return float(n)
    return _q_number_formula(n, q)


def energy(n: int, params: OscillatorParams) -> float:
    """Eigenenergy E_n = (omega / 2) ([n] + [n+1]).

    Evaluated through the sinh closed form with the dominant exponential
    factored out, so large n * |ln q| cannot overflow an intermediate before
    the ratio is formed.  Returns inf once the true value exceeds the float
    range (near n * |ln q| ~ 710).
    """
    if n < 0:
        raise DomainError(f"level index must be non-negative, got {n}")
    if params.is_harmonic:
        return params.omega * (n + 0.5)
    s = -params.log_q
    a = s * (n + 0.5)
    b = 0.5 * s
    try:
        grow = math.exp(a - b)
    except OverflowError:
        return math.inf
    return 0.5 * params.omega * grow * math.expm1(-2.0 * a) / math.expm1(-2.0 * b)


def energy_ladder(params: OscillatorParams, n_max: int) -> np.ndarray:
    """Energies E_0 .. E_{n_max} as a float array (strictly increasing).

    Raises ResourceLimitError when n_max exceeds the hard cap.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    if n_max > LADDER_HARD_CAP:
        raise ResourceLimitError(
            f"requested ladder depth {n_max} exceeds the cap {LADDER_HARD_CAP}"
        )
    n = np.arange(n_max + 1, dtype=np.float64)
    if params.is_harmonic:
        return params.omega * (n + 0.5)
    s = -params.log_q
    a = s * (n + 0.5)
    b = 0.5 * s
    with np.errstate(over="ignore"):
        grow = np.exp(a - b)
        out = 0.5 * params.omega * grow * np.expm1(-2.0 * a) / np.expm1(-2.0 * b)
    return out


